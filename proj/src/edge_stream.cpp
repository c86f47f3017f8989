#include "cyclegap/edge_stream.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cyclegap {

void EdgeStream::validate(std::int64_t max_weight) const {
    for (const auto& it : items) {
        if (it.u >= n_vertices || it.v >= n_vertices) {
            throw std::invalid_argument("EdgeStream: endpoint out of range");
        }
        if (weighted && (it.w < 1 || (max_weight > 0 && it.w > max_weight))) {
            throw std::invalid_argument("EdgeStream: weight outside [1, W]");
        }
        if (!weighted && it.w != 1) throw std::invalid_argument("EdgeStream: unweighted item with weight");
    }
    if (alice_items > items.size()) throw std::invalid_argument("EdgeStream: bad Alice/Bob split");
}

void write_edge_list(std::ostream& out, const EdgeStream& s) {
    out << s.n_vertices << ' ' << s.items.size() << ' ' << (s.directed ? 1 : 0) << ' '
        << (s.weighted ? 1 : 0) << '\n';
    for (const auto& it : s.items) {
        out << it.u << ' ' << it.v;
        if (s.weighted) out << ' ' << it.w;
        out << '\n';
    }
}

std::string to_edge_list(const EdgeStream& s) {
    std::ostringstream os;
    write_edge_list(os, s);
    return os.str();
}

EdgeStream read_edge_list(std::istream& in) {
    EdgeStream s;
    std::size_t m = 0;
    int directed = 0, weighted = 0;
    if (!(in >> s.n_vertices >> m >> directed >> weighted) || directed < 0 || directed > 1 ||
        weighted < 0 || weighted > 1) {
        throw std::invalid_argument("edge list: expected header 'n m directed weighted'");
    }
    s.directed = directed == 1;
    s.weighted = weighted == 1;
    s.items.resize(m);
    for (auto& it : s.items) {
        if (!(in >> it.u >> it.v)) throw std::invalid_argument("edge list: truncated");
        if (s.weighted && !(in >> it.w)) throw std::invalid_argument("edge list: missing weight");
    }
    s.alice_items = m;
    s.validate();
    return s;
}

EdgeStream parse_edge_list(const std::string& text) {
    std::istringstream is(text);
    return read_edge_list(is);
}

} // namespace cyclegap
