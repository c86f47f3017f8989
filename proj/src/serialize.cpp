#include "cyclegap/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace cyclegap {

namespace {

Json pairs_json(const PartialMatching& m) {
    Json out = Json::array();
    for (auto [l, r] : m.pairs()) out.push_back({l, r});
    return out;
}

PartialMatching pairs_from_json(const Json& j, Index left, Index right) {
    std::vector<std::pair<Index, Index>> pairs;
    for (const auto& e : j) pairs.emplace_back(e.at(0).get<Index>(), e.at(1).get<Index>());
    return PartialMatching::from_pairs(left, right, pairs);
}

std::string kind_name(AnalyticOptimum::Kind k) {
    switch (k) {
    case AnalyticOptimum::Kind::exact: return "exact";
    case AnalyticOptimum::Kind::interval: return "interval";
    case AnalyticOptimum::Kind::real: return "real";
    }
    return "?";
}

AnalyticOptimum::Kind parse_kind(const std::string& s) {
    if (s == "exact") return AnalyticOptimum::Kind::exact;
    if (s == "interval") return AnalyticOptimum::Kind::interval;
    if (s == "real") return AnalyticOptimum::Kind::real;
    throw std::invalid_argument("unknown optimum kind '" + s + "'");
}

Json metadata_json(const std::map<std::string, std::string>& md) {
    Json out = Json::object();
    for (const auto& [k, v] : md) out[k] = v;
    return out;
}

std::map<std::string, std::string> metadata_from_json(const Json& j) {
    std::map<std::string, std::string> out;
    if (j.is_null()) return out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value().get<std::string>();
    return out;
}

} // namespace

Json to_json(const Provenance& p) {
    return Json{{"seed", p.seed}, {"stream", p.stream}, {"tool_version", kToolVersion},
                {"construction", p.construction}};
}

Json profile_json(const std::vector<std::size_t>& sorted_lengths) {
    std::map<std::size_t, std::size_t> counts;
    for (auto l : sorted_lengths) ++counts[l];
    Json out = Json::object();
    for (auto [len, cnt] : counts) out[std::to_string(len)] = cnt;
    return out;
}

Json to_json(const OmcInstance& inst, const Provenance& p) {
    Json j;
    j["problem"] = "omc";
    j["n"] = inst.n;
    j["k"] = inst.k;
    j["label"] = to_string(inst.label);
    j["provenance"] = to_json(p);
    Json alice = Json::array(), bob = Json::array();
    for (const auto& e : inst.edges()) (e.owner == Owner::alice ? alice : bob).push_back({e.u, e.v});
    j["alice_edges"] = std::move(alice);
    j["bob_edges"] = std::move(bob);
    j["expected_profile"] = inst.expected_profile;
    j["cycle_profile"] = profile_json(omc_profile(inst));
    j["metadata"] = metadata_json(inst.metadata);
    return j;
}

OmcInstance omc_from_json(const Json& j) {
    if (j.at("problem").get<std::string>() != "omc") throw std::invalid_argument("not an OMC instance");
    OmcInstance inst;
    inst.n = j.at("n").get<std::uint32_t>();
    inst.k = j.at("k").get<std::uint32_t>();
    inst.label = parse_label(j.at("label").get<std::string>());
    const Index h = inst.n / 2;
    auto side = [&](const Json& edges) {
        std::vector<std::pair<Index, Index>> pairs;
        for (const auto& e : edges) {
            auto u = e.at(0).get<Index>(), v = e.at(1).get<Index>();
            if (u >= h || v < h || v >= inst.n) throw std::invalid_argument("edge does not cross the bipartition");
            pairs.emplace_back(u, v - h);
        }
        return PartialMatching::from_pairs(h, h, pairs);
    };
    inst.alice = side(j.at("alice_edges"));
    inst.bob = side(j.at("bob_edges"));
    inst.expected_profile = j.at("expected_profile").get<std::vector<std::size_t>>();
    inst.metadata = metadata_from_json(j.value("metadata", Json()));
    return inst;
}

Json to_json(const FmtInstance& inst, const Provenance& p) {
    Json j;
    j["problem"] = "fmt";
    j["m"] = inst.m;
    j["c"] = inst.c;
    j["r"] = inst.r;
    j["label"] = to_string(inst.label);
    j["provenance"] = to_json(p);
    j["layers"] = inst.graph.seq().values();
    Json gaps = Json::array();
    for (const auto& g : inst.graph.matchings()) gaps.push_back(pairs_json(g));
    j["gaps"] = std::move(gaps);
    j["y"] = pairs_json(inst.y_perm);
    j["n"] = pairs_json(inst.n_perm);
    j["final_matching"] = pairs_json(compose(inst.graph, 0, inst.graph.gaps()));
    return j;
}

FmtInstance fmt_from_json(const Json& j) {
    if (j.at("problem").get<std::string>() != "fmt") throw std::invalid_argument("not an FMT instance");
    FmtInstance inst;
    inst.m = j.at("m").get<std::uint32_t>();
    inst.c = j.at("c").get<std::size_t>();
    inst.r = j.at("r").get<std::uint32_t>();
    inst.label = parse_label(j.at("label").get<std::string>());
    LayerSequence seq(j.at("layers").get<std::vector<std::uint32_t>>());
    const auto& gaps = j.at("gaps");
    if (gaps.size() != seq.gaps()) throw std::invalid_argument("gap count does not match layers");
    std::vector<PartialMatching> ms;
    for (std::size_t i = 0; i < gaps.size(); ++i) ms.push_back(pairs_from_json(gaps[i], seq[i], seq[i + 1]));
    inst.graph = LayeredGraph(seq, std::move(ms));
    inst.y_perm = pairs_from_json(j.at("y"), seq.front(), seq.back());
    inst.n_perm = pairs_from_json(j.at("n"), seq.front(), seq.back());
    return inst;
}

Json to_json(const EdgeStream& s) {
    Json items = Json::array();
    for (const auto& it : s.items) {
        if (s.weighted) items.push_back({it.u, it.v, it.w});
        else items.push_back({it.u, it.v});
    }
    return Json{{"n_vertices", s.n_vertices}, {"directed", s.directed}, {"weighted", s.weighted},
                {"alice_items", s.alice_items}, {"items", std::move(items)}};
}

EdgeStream stream_from_json(const Json& j) {
    EdgeStream s;
    s.n_vertices = j.at("n_vertices").get<std::uint32_t>();
    s.directed = j.at("directed").get<bool>();
    s.weighted = j.at("weighted").get<bool>();
    s.alice_items = j.at("alice_items").get<std::size_t>();
    for (const auto& e : j.at("items")) {
        StreamItem it;
        it.u = e.at(0).get<std::uint32_t>();
        it.v = e.at(1).get<std::uint32_t>();
        if (s.weighted) it.w = e.at(2).get<std::int64_t>();
        s.items.push_back(it);
    }
    s.validate();
    return s;
}

Json to_json(const ProblemInstance& inst, const Provenance& p) {
    Json j;
    j["problem"] = to_string(inst.problem);
    j["label"] = to_string(inst.label);
    j["provenance"] = to_json(p);
    j["params"] = Json{{"eps", inst.params.eps}, {"n", inst.params.n}, {"k", inst.params.k},
                       {"W", inst.params.W}, {"q", inst.params.q}};
    j["stream"] = to_json(inst.stream);
    const auto& o = inst.optimum;
    Json opt{{"kind", kind_name(o.kind)}, {"probability", o.probability}};
    if (o.kind == AnalyticOptimum::Kind::real) {
        opt["value"] = o.value;
    } else {
        opt["lo"] = rational_string(o.lo);
        opt["hi"] = rational_string(o.hi);
        opt["feasible_lo"] = rational_string(o.feasible_lo);
        opt["feasible_hi"] = rational_string(o.feasible_hi);
    }
    j["optimum"] = std::move(opt);
    j["gap"] = Json{{"threshold", rational_string(inst.gap.threshold)},
                    {"yes_when", inst.gap.yes_when == Comparison::above ? "above" : "below"}};
    j["expected_items"] = inst.expected_items;
    j["expected_vertices"] = inst.expected_vertices;
    j["metadata"] = metadata_json(inst.metadata);
    return j;
}

ProblemInstance problem_from_json(const Json& j) {
    ProblemInstance inst;
    inst.problem = parse_problem(j.at("problem").get<std::string>());
    inst.label = parse_label(j.at("label").get<std::string>());
    const auto& pj = j.at("params");
    inst.params.eps = pj.at("eps").get<double>();
    inst.params.n = pj.at("n").get<std::uint32_t>();
    inst.params.k = pj.at("k").get<std::uint32_t>();
    inst.params.W = pj.at("W").get<std::int64_t>();
    inst.params.q = pj.at("q").get<double>();
    inst.stream = stream_from_json(j.at("stream"));
    const auto& oj = j.at("optimum");
    inst.optimum.kind = parse_kind(oj.at("kind").get<std::string>());
    inst.optimum.probability = oj.at("probability").get<double>();
    if (inst.optimum.kind == AnalyticOptimum::Kind::real) {
        inst.optimum.value = oj.at("value").get<double>();
    } else {
        inst.optimum.lo = parse_rational(oj.at("lo").get<std::string>());
        inst.optimum.hi = parse_rational(oj.at("hi").get<std::string>());
        inst.optimum.feasible_lo = parse_rational(oj.at("feasible_lo").get<std::string>());
        inst.optimum.feasible_hi = parse_rational(oj.at("feasible_hi").get<std::string>());
    }
    const auto& gj = j.at("gap");
    inst.gap.threshold = parse_rational(gj.at("threshold").get<std::string>());
    inst.gap.yes_when = gj.at("yes_when").get<std::string>() == "above" ? Comparison::above : Comparison::below;
    inst.expected_items = j.at("expected_items").get<std::size_t>();
    inst.expected_vertices = j.at("expected_vertices").get<std::uint32_t>();
    inst.metadata = metadata_from_json(j.value("metadata", Json()));
    return inst;
}

Json to_json(const RunReport& r) {
    return Json{{"ok", r.ok},
                {"answer", r.answer},
                {"passes", r.passes},
                {"max_state_bits", r.max_state_bits},
                {"items", r.items},
                {"algorithm", r.algorithm},
                {"diagnostics", r.diagnostics}};
}

Json to_json(const GapVerdict& v) {
    return Json{{"status", to_string(v.status)}, {"oracle_value", v.oracle_value}, {"detail", v.detail}};
}

Json to_json(const ProtocolStats& s) {
    return Json{{"trials", s.trials},         {"successes", s.successes}, {"false_no", s.false_no},
                {"success_rate", s.success_rate}, {"ci_lo", s.ci_lo},     {"ci_hi", s.ci_hi},
                {"mean_bits", s.mean_bits},   {"max_bits", s.max_bits},   {"max_rounds", s.max_rounds}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move output into place at " + path + ": " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace cyclegap
