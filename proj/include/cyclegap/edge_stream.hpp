#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cyclegap {

struct StreamItem {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    std::int64_t w = 1;
    bool operator==(const StreamItem&) const = default;
};

/// Ordered edge stream. Alice's items come first; `alice_items` records where
/// Bob's part starts.
struct EdgeStream {
    std::uint32_t n_vertices = 0;
    bool directed = false;
    bool weighted = false;
    std::vector<StreamItem> items;
    std::size_t alice_items = 0;

    void validate(std::int64_t max_weight = 0) const;
    bool operator==(const EdgeStream&) const = default;
};

/// Edge-list text: "n m directed weighted" then "u v [w]" per line.
void write_edge_list(std::ostream& out, const EdgeStream& s);
std::string to_edge_list(const EdgeStream& s);
EdgeStream read_edge_list(std::istream& in);
EdgeStream parse_edge_list(const std::string& text);

} // namespace cyclegap
