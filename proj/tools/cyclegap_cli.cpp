#include <CLI11.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cyclegap/core_graph.hpp"
#include "cyclegap/edge_stream.hpp"
#include "cyclegap/identity_lab.hpp"
#include "cyclegap/info_theory.hpp"
#include "cyclegap/instances.hpp"
#include "cyclegap/protocols.hpp"
#include "cyclegap/reductions.hpp"
#include "cyclegap/samplers.hpp"
#include "cyclegap/serialize.hpp"
#include "cyclegap/stream_harness.hpp"

using namespace cyclegap;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerify = 3;

struct VerificationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, const std::vector<std::string>& formats = {"json"}) {
    cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--stream", c.stream, "RNG stream id")->capture_default_str();
    cmd->add_option("--out,-o", c.out, "output path (stdout if omitted)");
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
}

void emit(const Common& c, const std::string& content) {
    if (c.out.empty()) {
        std::cout << content;
        std::cout.flush();
    } else {
        write_atomic(c.out, content);
    }
}

std::string number(double v) {
    char buf[64];
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Shortest form that still round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        char shorter[64];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

EdgeStream omc_stream(const OmcInstance& inst) {
    EdgeStream s;
    s.n_vertices = inst.n;
    for (const auto& e : inst.edges()) s.items.push_back({e.u, e.v, 1});
    s.alice_items = inst.half();
    return s;
}

Json load_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("cannot parse " + path + ": " + e.what());
    }
}

bool looks_like_json(const std::string& text) {
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        return ch == '{';
    }
    return false;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    Common common;
    std::uint32_t m = 3, n = 0, k = 0, r = 1;
    std::size_t c = 1;
    std::string label = "yes";
    std::string source = "fmt";
    std::optional<std::size_t> c_override;
    bool strict = false;
    std::vector<Index> y, nperm;
};

OmcInstance make_omc(const GenArgs& a, Rng& rng) {
    OmcBuildOptions opt;
    opt.c = a.c_override;
    opt.strict = a.strict;
    opt.source = a.source == "planted" ? OmcSource::planted : OmcSource::fmt;
    return build_omc(a.n, a.k, a.r, parse_label(a.label), rng, opt);
}

std::string omc_construction(const GenArgs& a) {
    return a.source == "planted" ? "planted-cycles" : "fmt-two-copy-ring";
}

std::string render_omc(const OmcInstance& inst, const Common& c, const std::string& construction) {
    if (c.format == "edgelist") return to_edge_list(omc_stream(inst));
    return dump(to_json(inst, Provenance{c.seed, c.stream, construction}));
}

void cmd_gen_fmt(const GenArgs& a) {
    Rng rng(a.common.seed, a.common.stream);
    std::optional<std::vector<Index>> y, n;
    if (!a.y.empty()) y = a.y;
    if (!a.nperm.empty()) n = a.nperm;
    auto inst = build_fmt(a.m, a.c, a.r, parse_label(a.label), rng, y, n);
    if (a.common.format == "layered") {
        emit(a.common, to_layered_text(inst.graph));
        return;
    }
    emit(a.common, dump(to_json(inst, Provenance{a.common.seed, a.common.stream, "nested-block-fmt"})));
}

void cmd_gen_omc(const GenArgs& a) {
    Rng rng(a.common.seed, a.common.stream);
    emit(a.common, render_omc(make_omc(a, rng), a.common, omc_construction(a)));
}

void cmd_gen_kvs2k(const GenArgs& a) {
    Rng rng(a.common.seed, a.common.stream);
    OmcOptions opt;
    opt.strict = a.strict;
    auto inst = build_k_vs_2k(a.n, a.k, parse_label(a.label), rng, opt);
    emit(a.common, render_omc(inst, a.common, "k-vs-2k-cycles"));
}

// ---------------------------------------------------------------------------
// reduce

struct ReduceArgs {
    GenArgs gen;
    std::string problem;
    std::string input;
    double eps = 0.0;
    std::int64_t W = 2;
    double q = 1.0;
    bool certify = false;
    bool shuffle = false;
};

void cmd_reduce(const ReduceArgs& a) {
    const Common& c = a.gen.common;
    Rng rng(c.seed, c.stream);
    const Problem p = parse_problem(a.problem);
    const bool spectral = p == Problem::schatten || p == Problem::rank;

    OmcInstance inst;
    if (!a.input.empty()) {
        inst = omc_from_json(load_json(a.input));
    } else if (spectral) {
        inst = build_k_vs_2k(a.gen.n, a.gen.k, parse_label(a.gen.label), rng);
    } else {
        inst = make_omc(a.gen, rng);
    }

    ReductionOptions opt;
    opt.certify = a.certify;
    opt.shuffle_stream = a.shuffle;
    if (!spectral && !(a.eps > 0)) throw std::invalid_argument("ε > 0 violated");

    ProblemInstance pi;
    switch (p) {
    case Problem::maxcut: pi = to_maxcut(inst, a.eps, rng, opt); break;
    case Problem::matching: pi = to_matching(inst, a.eps, rng, opt); break;
    case Problem::mas: pi = to_mas(inst, a.eps, rng, opt); break;
    case Problem::mst: pi = to_mst(inst, a.eps, a.W, rng, opt); break;
    case Problem::pt_connectivity: pi = to_pt(inst, a.eps, PtVariant::connectivity, rng, opt); break;
    case Problem::pt_bipartite: pi = to_pt(inst, a.eps, PtVariant::bipartite, rng, opt); break;
    case Problem::pt_cyclefree: pi = to_pt(inst, a.eps, PtVariant::cyclefree, rng, opt); break;
    case Problem::schatten: pi = to_schatten(inst, a.q, rng, opt); break;
    case Problem::rank: pi = to_schatten(inst, 0.0, rng, opt); break;
    }
    if (c.format == "edgelist") {
        emit(c, to_edge_list(pi.stream));
        return;
    }
    std::string construction = pi.metadata.count("construction") ? pi.metadata.at("construction") : to_string(p);
    emit(c, dump(to_json(pi, Provenance{c.seed, c.stream, construction})));
}

// ---------------------------------------------------------------------------
// stream run

struct StreamArgs {
    Common common;
    std::string input;
    std::string algo = "connectivity";
    std::size_t passes = 1;
    std::size_t capacity = 16;
};

void cmd_stream_run(const StreamArgs& a) {
    const std::string text = read_file(a.input);
    std::optional<ProblemInstance> pi;
    EdgeStream s;
    if (looks_like_json(text)) {
        Json j = Json::parse(text);
        if (j.value("problem", "") == "omc") {
            s = omc_stream(omc_from_json(j));
        } else {
            pi = problem_from_json(j);
            s = pi->stream;
        }
    } else {
        s = parse_edge_list(text);
    }
    auto algo = make_algorithm(a.algo, a.common.seed, a.capacity);
    auto rep = run(*algo, s, a.passes);
    Json out;
    out["command"] = "stream run";
    out["provenance"] = to_json(Provenance{a.common.seed, a.common.stream, "stream-harness"});
    out["report"] = to_json(rep);
    if (pi) out["gap"] = to_json(verify_gap(*pi));
    emit(a.common, dump(out));
    if (!rep.ok) throw std::runtime_error(rep.diagnostics);
}

// ---------------------------------------------------------------------------
// protocol run | sweep

struct ProtocolArgs {
    Common common;
    std::string protocol = "pointer-chasing";
    std::uint32_t n = 0, k = 0, q = 0, r = 2, w = 1, rounds_for_fmt = 1;
    std::uint64_t trials = 100;
    std::string source = "planted";
    std::vector<std::uint32_t> q_grid, r_grid;
};

EstimateConfig estimate_config(const ProtocolArgs& a) {
    EstimateConfig cfg;
    cfg.n = a.n;
    cfg.k = a.k;
    cfg.trials = a.trials;
    cfg.seed = a.common.seed;
    cfg.stream = a.common.stream;
    cfg.source = a.source == "fmt" ? InstanceSource::fmt : InstanceSource::planted;
    cfg.rounds_for_fmt = a.rounds_for_fmt;
    return cfg;
}

void cmd_protocol_run(const ProtocolArgs& a) {
    ProtocolSpec spec{parse_protocol(a.protocol), a.q, a.r, a.w};
    auto stats = estimate_success(spec, estimate_config(a));
    Json out;
    out["command"] = "protocol run";
    out["provenance"] = to_json(Provenance{a.common.seed, a.common.stream, to_string(spec.kind)});
    out["params"] = Json{{"n", a.n}, {"k", a.k}, {"q", a.q}, {"r", a.r}, {"w", a.w}, {"source", a.source}};
    out["stats"] = to_json(stats);
    emit(a.common, dump(out));
}

void cmd_protocol_sweep(const ProtocolArgs& a) {
    auto points = tradeoff_sweep(parse_protocol(a.protocol), a.q_grid, a.r_grid, a.w, estimate_config(a));
    if (a.common.format == "csv") {
        emit(a.common, sweep_csv(points, a.n, a.k));
        return;
    }
    Json rows = Json::array();
    for (const auto& p : points)
        rows.push_back(Json{{"q", p.spec.q}, {"r", p.spec.r}, {"w", p.spec.w}, {"stats", to_json(p.stats)}});
    Json out;
    out["command"] = "protocol sweep";
    out["provenance"] = to_json(Provenance{a.common.seed, a.common.stream, a.protocol});
    out["points"] = std::move(rows);
    emit(a.common, dump(out));
}

// ---------------------------------------------------------------------------
// verify

struct Score {
    std::string name;
    bool pass = true;
    double max_discrepancy = 0;
    std::uint64_t trials = 0;
    Json extra;
};

Json scorecard(const std::string& command, const Common& c, const Json& params, const std::vector<Score>& rows) {
    Json entries = Json::array();
    bool all = true;
    for (const auto& s : rows) {
        Json e{{"name", s.name},
               {"status", s.pass ? "pass" : "fail"},
               {"max_discrepancy", s.max_discrepancy},
               {"trials", s.trials}};
        if (!s.extra.is_null()) e["detail"] = s.extra;
        entries.push_back(std::move(e));
        all = all && s.pass;
    }
    Json out;
    out["command"] = command;
    out["provenance"] = to_json(Provenance{c.seed, c.stream, command});
    out["params"] = params;
    out["entries"] = std::move(entries);
    out["all_pass"] = all;
    return out;
}

void finish_scorecard(const Common& c, const Json& card) {
    emit(c, dump(card));
    if (!card.at("all_pass").get<bool>()) throw VerificationFailed("verification failed");
}

struct IdentityArgs {
    Common common;
    std::string suite = "all";
    std::uint32_t m = 3, c = 2;
    std::uint64_t trials = 10000;
};

std::vector<Score> identity_second_moment(std::uint32_t m, std::uint32_t c, std::uint64_t seed) {
    std::vector<Score> out;
    for (const auto& pi : standard_message_functions(m, c, seed)) {
        Score s{"second-moment/" + pi.name};
        for (const auto& row : verify_second_moment(pi)) {
            s.max_discrepancy = std::max(s.max_discrepancy, row.discrepancy);
            ++s.trials;
        }
        s.pass = s.max_discrepancy <= 1e-9;
        out.push_back(s);
    }
    return out;
}

std::vector<Score> identity_alt_sum(std::uint32_t m, std::uint32_t c) {
    std::vector<Score> out;
    auto one = [&](const std::string& name, std::int64_t brute, std::int64_t closed) {
        Score s{name};
        s.trials = 1;
        s.max_discrepancy = std::abs(double(brute - closed));
        s.pass = brute == closed;
        s.extra = Json{{"brute", brute}, {"closed", closed}};
        out.push_back(s);
    };
    one("alpha", alpha_brute(m, c), alpha_closed(m, c));
    one("beta", beta_brute(m, c), beta_closed(c));
    one("gamma", gamma_brute(m, c), gamma_closed(c));
    Score s{"alt-sum"};
    for (std::uint32_t S = 0; S < (1u << c); ++S) {
        auto b = alt_sum_brute(m, c, S), cl = alt_sum_closed(m, c, S);
        s.max_discrepancy = std::max(s.max_discrepancy, std::abs(double(b - cl)));
        s.pass = s.pass && b == cl;
        ++s.trials;
    }
    out.push_back(s);
    return out;
}

std::vector<Score> identity_marginalization(std::uint32_t m, std::uint32_t c, std::uint64_t seed) {
    std::vector<Score> out;
    for (const auto& pi : standard_message_functions(m, c, seed)) {
        auto rep = verify_marginalization(pi);
        Score s{"marginalization/" + pi.name};
        s.trials = rep.checks;
        s.max_discrepancy = double(rep.failures);
        s.pass = rep.failures == 0;
        out.push_back(s);
    }
    return out;
}

std::vector<Score> identity_bounds(std::uint32_t m, std::uint32_t c, std::uint64_t seed) {
    std::vector<Score> out;
    for (const auto& pi : standard_message_functions(m, c, seed)) {
        Score d{"delta-s/" + pi.name};
        d.max_discrepancy = -1e300;
        for (const auto& chk : verify_delta_S_bound(pi)) {
            d.pass = d.pass && chk.holds;
            d.max_discrepancy = std::max(d.max_discrepancy, chk.lhs - chk.rhs);
            ++d.trials;
        }
        out.push_back(d);
        auto l2 = verify_marginal_l2(pi);
        Score s{"marginal-l2/" + pi.name};
        s.trials = 1;
        s.max_discrepancy = l2.lhs - l2.rhs;
        s.pass = l2.holds;
        out.push_back(s);
    }
    return out;
}

std::vector<Score> identity_inequalities(std::uint64_t trials, std::uint64_t seed) {
    std::vector<Score> out;
    for (const auto& row : run_inequality_suite(trials, seed)) {
        Score s{"inequality/" + row.name};
        s.trials = row.trials;
        s.max_discrepancy = row.max_excess;
        s.pass = row.violated == 0;
        s.extra = Json{{"held", row.held}, {"skipped", row.skipped}, {"violated", row.violated}};
        out.push_back(s);
    }
    return out;
}

void cmd_verify_identities(const IdentityArgs& a) {
    std::vector<Score> rows;
    auto append = [&](std::vector<Score> more) { rows.insert(rows.end(), more.begin(), more.end()); };
    const auto& s = a.suite;
    const bool all = s == "all";
    if (all || s == "second-moment") append(identity_second_moment(a.m, a.c, a.common.seed));
    if (all || s == "alt-sum") append(identity_alt_sum(a.m, a.c));
    if (all || s == "marginalization") append(identity_marginalization(a.m, a.c, a.common.seed));
    if (all || s == "bounds") append(identity_bounds(a.m, a.c, a.common.seed));
    if (all || s == "inequalities") append(identity_inequalities(a.trials, a.common.seed));
    Json params{{"suite", a.suite}, {"m", a.m}, {"c", a.c}};
    if (all || s == "inequalities") params["trials"] = a.trials;
    finish_scorecard(a.common, scorecard("verify identities", a.common, params, rows));
}

struct SamplerArgs {
    Common common;
    std::vector<std::uint32_t> t;
    std::uint64_t draws = 100000;
    double tol = 0.02;
    bool conditioned = false;
    std::string strategy = "constructive";
};

void cmd_verify_samplers(const SamplerArgs& a) {
    LayerSequence seq(a.t);
    Rng rng(a.common.seed, a.common.stream);
    std::vector<Score> rows;

    auto tv_against = [&](const std::vector<LayeredGraph>& support, auto&& draw, const std::string& name) {
        std::map<std::string, std::uint64_t> counts;
        for (const auto& g : support) counts[to_layered_text(g)] = 0;
        std::uint64_t outside = 0;
        for (std::uint64_t i = 0; i < a.draws; ++i) {
            auto it = counts.find(to_layered_text(draw()));
            if (it == counts.end()) ++outside;
            else ++it->second;
        }
        const double u = 1.0 / static_cast<double>(support.size());
        double tv = static_cast<double>(outside) / static_cast<double>(a.draws);
        for (const auto& [key, cnt] : counts) tv += std::abs(static_cast<double>(cnt) / a.draws - u);
        tv /= 2;
        Score s{name};
        s.trials = a.draws;
        s.max_discrepancy = tv;
        s.pass = tv <= a.tol && outside == 0;
        s.extra = Json{{"support", support.size()}, {"outside_support", outside}};
        rows.push_back(s);
    };

    auto support = enumerate_nice(seq);
    const auto strategy = a.strategy == "rejection" ? SampleStrategy::rejection : SampleStrategy::constructive;
    tv_against(support, [&] { return sample_nice_layered(seq, rng, strategy).first; }, "unconditioned/" + a.strategy);
    if (a.conditioned) {
        // Condition on the final matching of the first graph in canonical order.
        auto z = compose(support.front(), 0, seq.gaps());
        auto cond = enumerate_conditioned(seq, z);
        tv_against(cond, [&] { return sample_conditioned(seq, z, rng); }, "conditioned");
    }
    Json params{{"t", a.t}, {"draws", a.draws}, {"tol", a.tol}, {"strategy", a.strategy}};
    finish_scorecard(a.common, scorecard("verify samplers", a.common, params, rows));
}

struct GapArgs {
    Common common;
    std::string input;
};

void cmd_verify_gaps(const GapArgs& a) {
    auto pi = problem_from_json(load_json(a.input));
    auto v = verify_gap(pi);
    Score s{"gap/" + to_string(pi.problem)};
    s.trials = 1;
    s.pass = v.status != GapStatus::fail;
    s.extra = to_json(v);
    Json params{{"input", a.input}};
    finish_scorecard(a.common, scorecard("verify gaps", a.common, params, {s}));
}

// ---------------------------------------------------------------------------
// bound

struct BoundArgs {
    Common common;
    double s = 0, c = 0, s2 = 0, C = 0, eps = 0, beta = 1e6, kappa = 1.0;
    int p = 1;
    std::uint32_t m = 0, cc = 1, r = 1;
};

void emit_scalar(const BoundArgs& a, const std::string& name, double value, Json params) {
    if (a.common.format == "json") {
        Json out{{"command", "bound " + name},
                 {"params", std::move(params)},
                 {"provenance", to_json(Provenance{a.common.seed, a.common.stream, name})},
                 {"value", value}};
        emit(a.common, dump(out));
    } else {
        emit(a.common, number(value) + "\n");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclegap: hard-instance generators, reductions and verification tools"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    // gen
    auto* gen = app.add_subcommand("gen", "generate FMT / OMC / k-vs-2k instances");
    gen->require_subcommand(1);
    GenArgs gfmt, gomc, gkk;
    auto* gen_fmt = gen->add_subcommand("fmt", "nested block FMT instance");
    add_common(gen_fmt, gfmt.common, {"json", "layered"});
    gen_fmt->add_option("--m", gfmt.m, "block size")->required();
    gen_fmt->add_option("--c", gfmt.c, "nesting width")->required();
    gen_fmt->add_option("--r", gfmt.r, "rounds")->required();
    gen_fmt->add_option("--label", gfmt.label)->check(CLI::IsMember({"yes", "no"}))->capture_default_str();
    gen_fmt->add_option("--y", gfmt.y, "Y permutation, comma separated")->delimiter(',');
    gen_fmt->add_option("--n-perm", gfmt.nperm, "N permutation, comma separated")->delimiter(',');

    auto* gen_omc = gen->add_subcommand("omc", "one-or-many-cycles instance");
    add_common(gen_omc, gomc.common, {"json", "edgelist"});
    gen_omc->add_option("--n", gomc.n)->required();
    gen_omc->add_option("--k", gomc.k)->required();
    gen_omc->add_option("--rounds,--r", gomc.r)->capture_default_str();
    gen_omc->add_option("--label", gomc.label)->check(CLI::IsMember({"yes", "no"}))->capture_default_str();
    gen_omc->add_option("--source", gomc.source)->check(CLI::IsMember({"fmt", "planted"}))->capture_default_str();
    gen_omc->add_option("--c", gomc.c_override, "nesting width (default: largest feasible)");
    gen_omc->add_flag("--strict", gomc.strict, "refuse compressed embeddings");

    auto* gen_kk = gen->add_subcommand("kvs2k", "k-cycles versus 2k-cycles instance");
    add_common(gen_kk, gkk.common, {"json", "edgelist"});
    gen_kk->add_option("--n", gkk.n)->required();
    gen_kk->add_option("--k", gkk.k)->required();
    gen_kk->add_option("--label", gkk.label)->check(CLI::IsMember({"yes", "no"}))->capture_default_str();
    gen_kk->add_flag("--strict", gkk.strict);

    // reduce
    ReduceArgs red;
    auto* reduce = app.add_subcommand("reduce", "reduce an OMC instance to a streaming problem");
    add_common(reduce, red.gen.common, {"json", "edgelist"});
    reduce->add_option("problem", red.problem,
                       "maxcut|matching|mas|mst|pt-connectivity|pt-bipartite|pt-cyclefree|schatten|rank")
        ->required();
    reduce->add_option("--input,-i", red.input, "OMC instance JSON (otherwise generated)");
    reduce->add_option("--n", red.gen.n);
    reduce->add_option("--k", red.gen.k);
    reduce->add_option("--rounds,--r", red.gen.r)->capture_default_str();
    reduce->add_option("--label", red.gen.label)->check(CLI::IsMember({"yes", "no"}))->capture_default_str();
    reduce->add_option("--source", red.gen.source)->check(CLI::IsMember({"fmt", "planted"}))->capture_default_str();
    reduce->add_option("--eps", red.eps);
    reduce->add_option("--W", red.W)->capture_default_str();
    reduce->add_option("--q", red.q)->capture_default_str();
    reduce->add_flag("--certify", red.certify, "resample until the No-side event holds");
    reduce->add_flag("--shuffle-stream", red.shuffle);

    // stream
    StreamArgs sr;
    auto* stream = app.add_subcommand("stream", "run streaming algorithms");
    stream->require_subcommand(1);
    auto* stream_run = stream->add_subcommand("run", "run an algorithm over a stream");
    add_common(stream_run, sr.common);
    stream_run->add_option("--input,-i", sr.input, "problem JSON, OMC JSON or edge list")->required();
    stream_run->add_option("--algo", sr.algo)->capture_default_str();
    stream_run->add_option("--passes", sr.passes)->capture_default_str();
    stream_run->add_option("--capacity", sr.capacity)->capture_default_str();

    // protocol
    ProtocolArgs pr, ps;
    auto* protocol = app.add_subcommand("protocol", "two-party protocol simulations");
    protocol->require_subcommand(1);
    auto setup_protocol = [](CLI::App* cmd, ProtocolArgs& a) {
        cmd->add_option("--protocol", a.protocol)->capture_default_str();
        cmd->add_option("--n", a.n)->required();
        cmd->add_option("--k", a.k)->required();
        cmd->add_option("--trials", a.trials)->capture_default_str();
        cmd->add_option("--w", a.w)->capture_default_str();
        cmd->add_option("--source", a.source)->check(CLI::IsMember({"planted", "fmt"}))->capture_default_str();
        cmd->add_option("--fmt-rounds", a.rounds_for_fmt)->capture_default_str();
    };
    auto* prot_run = protocol->add_subcommand("run", "estimate success of one protocol");
    add_common(prot_run, pr.common);
    setup_protocol(prot_run, pr);
    prot_run->add_option("--q", pr.q)->capture_default_str();
    prot_run->add_option("--r", pr.r)->capture_default_str();
    auto* prot_sweep = protocol->add_subcommand("sweep", "q x r tradeoff sweep");
    add_common(prot_sweep, ps.common, {"csv", "json"});
    ps.common.format = "csv";
    setup_protocol(prot_sweep, ps);
    prot_sweep->add_option("--q-grid", ps.q_grid)->delimiter(',');
    prot_sweep->add_option("--r-grid", ps.r_grid)->delimiter(',');

    // verify
    auto* verify = app.add_subcommand("verify", "exhaustive and statistical checks");
    verify->require_subcommand(1);
    IdentityArgs vi;
    auto* ver_id = verify->add_subcommand("identities", "combinatorial identities and inequalities");
    add_common(ver_id, vi.common);
    ver_id->add_option("--suite", vi.suite)
        ->check(CLI::IsMember({"all", "second-moment", "alt-sum", "marginalization", "bounds", "inequalities"}))
        ->capture_default_str();
    ver_id->add_option("--m", vi.m)->capture_default_str();
    ver_id->add_option("--c", vi.c)->capture_default_str();
    ver_id->add_option("--trials", vi.trials)->capture_default_str();
    SamplerArgs vs;
    auto* ver_s = verify->add_subcommand("samplers", "sampler uniformity against enumeration");
    add_common(ver_s, vs.common);
    ver_s->add_option("--t", vs.t, "layer sizes, comma separated")->delimiter(',')->required();
    ver_s->add_option("--draws", vs.draws)->capture_default_str();
    ver_s->add_option("--tol", vs.tol)->capture_default_str();
    ver_s->add_option("--strategy", vs.strategy)
        ->check(CLI::IsMember({"constructive", "rejection"}))
        ->capture_default_str();
    ver_s->add_flag("--conditioned", vs.conditioned);
    GapArgs vg;
    auto* ver_g = verify->add_subcommand("gaps", "check a reduced instance against exact oracles");
    add_common(ver_g, vg.common);
    ver_g->add_option("--input,-i", vg.input)->required();

    // bound
    auto* bound = app.add_subcommand("bound", "evaluate bound formulas");
    bound->require_subcommand(1);
    BoundArgs bp, bt, bg;
    auto* b_phi = bound->add_subcommand("phi", "2 s2^2 (40C/(s2-s))^{c/6}");
    add_common(b_phi, bp.common, {"plain", "json"});
    bp.common.format = "plain";
    b_phi->add_option("--s", bp.s)->required();
    b_phi->add_option("--c", bp.c)->required();
    b_phi->add_option("--s2", bp.s2)->required();
    b_phi->add_option("--C", bp.C)->required();
    auto* b_thm = bound->add_subcommand("theorem", "composed multi-round bound");
    add_common(b_thm, bt.common);
    b_thm->add_option("--m", bt.m)->required();
    b_thm->add_option("--c", bt.cc)->required();
    b_thm->add_option("--r", bt.r)->required();
    b_thm->add_option("--C", bt.C)->required();
    b_thm->add_option("--kappa", bt.kappa, "constant in the 2^{-kappa r} factor")->required();
    auto* b_g = bound->add_subcommand("g", "beta * eps^{1/(2p-1)}");
    add_common(b_g, bg.common, {"plain", "json"});
    bg.common.format = "plain";
    b_g->add_option("--eps", bg.eps)->required();
    b_g->add_option("--p", bg.p)->required();
    b_g->add_option("--beta", bg.beta)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen_fmt) cmd_gen_fmt(gfmt);
        else if (*gen_omc) cmd_gen_omc(gomc);
        else if (*gen_kk) cmd_gen_kvs2k(gkk);
        else if (*reduce) cmd_reduce(red);
        else if (*stream_run) cmd_stream_run(sr);
        else if (*prot_run) cmd_protocol_run(pr);
        else if (*prot_sweep) cmd_protocol_sweep(ps);
        else if (*ver_id) cmd_verify_identities(vi);
        else if (*ver_s) cmd_verify_samplers(vs);
        else if (*ver_g) cmd_verify_gaps(vg);
        else if (*b_phi) emit_scalar(bp, "phi", phi(bp.s, bp.c, bp.s2, bp.C),
                                     Json{{"s", bp.s}, {"c", bp.c}, {"s2", bp.s2}, {"C", bp.C}});
        else if (*b_g) emit_scalar(bg, "g", g_bound(bg.eps, bg.p, bg.beta),
                                   Json{{"eps", bg.eps}, {"p", bg.p}, {"beta", bg.beta}});
        else if (*b_thm) {
            auto tb = theorem_bound(bt.m, bt.cc, bt.r, bt.C, bt.kappa);
            Json out{{"command", "bound theorem"},
                     {"params", Json{{"m", bt.m}, {"c", bt.cc}, {"r", bt.r}, {"C", bt.C}, {"kappa", bt.kappa}}},
                     {"provenance", to_json(Provenance{bt.common.seed, bt.common.stream, "theorem-chain"})},
                     {"sequence", tb.sequence},
                     {"chain", tb.chain},
                     {"simplified", tb.simplified},
                     {"comm_threshold", tb.comm_threshold},
                     {"below_threshold", tb.below_threshold}};
            emit(bt.common, dump(out));
        }
    } catch (const VerificationFailed& e) {
        std::cerr << "cyclegap: " << e.what() << "\n";
        return kExitVerify;
    } catch (const std::invalid_argument& e) {
        std::cerr << "cyclegap: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Json::exception& e) {
        std::cerr << "cyclegap: malformed input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "cyclegap: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
