#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cyclegap/edge_stream.hpp"
#include "cyclegap/instances.hpp"
#include "cyclegap/rational.hpp"
#include "cyclegap/rng.hpp"

namespace cyclegap {

enum class Problem { maxcut, matching, mas, mst, pt_connectivity, pt_bipartite, pt_cyclefree, schatten, rank };

std::string to_string(Problem p);
Problem parse_problem(const std::string& s);

/// Optimum the construction guarantees for one label.
struct AnalyticOptimum {
    enum class Kind { exact, interval, real };
    Kind kind = Kind::exact;
    Rational lo;
    Rational hi;
    /// Outside [lo, hi] but inside [feasible_lo, feasible_hi] is the
    /// construction's low-probability failure event.
    Rational feasible_lo;
    Rational feasible_hi;
    double value = 0.0;
    double probability = 1.0;

    static AnalyticOptimum exact(const Rational& v);
    static AnalyticOptimum interval(const Rational& lo, const Rational& hi, const Rational& feasible_lo,
                                    const Rational& feasible_hi, double probability);
    static AnalyticOptimum real(double v);
};

enum class Comparison { above, below };

/// Yes iff the optimum is strictly above (resp. below) the threshold.
struct GapPredicate {
    Rational threshold;
    Comparison yes_when = Comparison::above;

    Label decide(const Rational& value) const;
    Label decide(double value) const;
};

struct ReductionParams {
    double eps = 0.0;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::int64_t W = 1;
    double q = 0.0;
};

struct ProblemInstance {
    Problem problem = Problem::maxcut;
    EdgeStream stream;
    Label label = Label::yes;
    AnalyticOptimum optimum;
    GapPredicate gap;
    ReductionParams params;
    std::size_t expected_items = 0;
    std::uint32_t expected_vertices = 0;
    std::map<std::string, std::string> metadata;
};

struct ReductionOptions {
    /// Resample the stretching until the No-side odd-cycle event holds.
    bool certify = false;
    /// Uniformly shuffle the stream; the Alice/Bob prefix split is then lost
    /// (alice_items = 0).
    bool shuffle_stream = false;
    std::size_t max_resamples = 1000;
};

double g_bound(double eps, int p, double beta = 1e6);

/// Largest k allowed by the problem's bound: floor(1/(20ε)) for the
/// odd-cycle gadgets, floor(1/(4ε)) for MAS, floor(W/(4ε)) for MST,
/// floor(1/(2ε)) for connectivity and cycle-freeness.
std::uint32_t max_k(Problem p, double eps, std::int64_t W = 2);
/// Largest even k not exceeding max_k.
std::uint32_t derive_k(Problem p, double eps, std::int64_t W = 2);
void check_k(Problem p, std::uint32_t k, double eps, std::int64_t W = 2);

ProblemInstance to_maxcut(const OmcInstance& inst, double eps, Rng& rng, const ReductionOptions& opt = {});
ProblemInstance to_matching(const OmcInstance& inst, double eps, Rng& rng, const ReductionOptions& opt = {});
ProblemInstance to_mas(const OmcInstance& inst, double eps, Rng& rng, const ReductionOptions& opt = {});
ProblemInstance to_mst(const OmcInstance& inst, double eps, std::int64_t W, Rng& rng,
                       const ReductionOptions& opt = {});

enum class PtVariant { connectivity, bipartite, cyclefree };
ProblemInstance to_pt(const OmcInstance& inst, double eps, PtVariant variant, Rng& rng,
                      const ReductionOptions& opt = {});

/// Disjoint cycles on n vertices, randomly labeled.
struct CycleGraph {
    std::uint32_t n_vertices = 0;
    std::vector<OwnedEdge> edges;
};

CycleGraph build_cycle_profile(std::uint32_t n, std::uint32_t length, Rng& rng);
CycleGraph cycle_graph(const OmcInstance& inst);

/// Schatten-q norm of the Laplacian of disjoint cycles (q > 0), or its rank
/// (q = 0). Positive even q is rejected, as is any q for which the Yes and No
/// profiles have the same value (odd integer q below both cycle lengths).
ProblemInstance to_schatten(const CycleGraph& g, Label label, std::uint32_t yes_length,
                            std::uint32_t no_length, double q, Rng& rng, const ReductionOptions& opt = {});
/// k-vs-2k instance: Yes cycles have length 2k, No cycles length k.
ProblemInstance to_schatten(const OmcInstance& k_vs_2k, double q, Rng& rng, const ReductionOptions& opt = {});

/// sum_j lambda_j^q over the Laplacian spectrum 2 - 2cos(2πj/L) of C_L;
/// for q = 0 the number of nonzero eigenvalues.
double cycle_spectrum_power_sum(std::size_t length, double q);
double schatten_of_cycles(const std::vector<std::size_t>& lengths, double q);

} // namespace cyclegap
