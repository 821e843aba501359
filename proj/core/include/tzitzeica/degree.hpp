#pragma once

#include "tzitzeica/graph.hpp"
#include "tzitzeica/model.hpp"
#include "tzitzeica/solvers.hpp"

#include <optional>
#include <vector>

namespace tzitzeica {

enum class Confidence {
    Proven,     // exhaustive scalar enumeration, or the integral obstruction
    Heuristic   // multi-start search; cannot certify that every root was found
};

const char* to_string(Confidence c) noexcept;

struct DegreeReport {
    std::vector<VertexField> solutions;  // lexicographic order
    std::vector<int> signs;              // aligned with solutions
    std::vector<double> residual_norms;  // recomputed from scratch per root
    int degree = 0;
    double radius = 0.0;
    int starts_used = 0;                 // Halton points plus neighbourhood probes
    Confidence confidence = Confidence::Heuristic;
    bool obstructed = false;  // every pointwise term is positive, so no zero exists
    std::optional<double> stage_t;
};

/// True when every pointwise nonlinearity of `map` is strictly positive for
/// all u, so that integrating the equation (int Delta u dmu = 0) rules out
/// any solution.
bool integral_obstruction(const TzitzeicaMap& map);

/// Quasi-random start number `index` (Halton, first n primes) in [-radius, radius]^n.
VertexField halton_start(std::size_t n, std::uint64_t index, double radius);

/// Leading Halton points cluster near the corner -radius in the coordinates
/// with large primes; multi-start consumers skip this many indices.
inline constexpr std::uint64_t kHaltonBurnIn = 1000;

/// Brouwer degree of the (optionally deformed) map on B_radius, estimated as
/// the sum of Jacobian determinant signs over the roots found from `n_starts`
/// Halton points spread over the nested balls of radius R 2^-k, k = 0..4
/// (plain Newton, then deflated Newton) and from probes around
/// every root along the soft modes of its Jacobian. Further batches of
/// `n_starts` points follow while the previous batch still found new roots,
/// up to eight batches. The radius comes from the applicable
/// a priori box (t-uniform for deformed maps) or from cfg.radius.
/// Throws Error(Numerical) on a degenerate root, Error(Inapplicable) when no
/// radius is available.
DegreeReport estimate_degree(const ProblemSpec& spec, const WeightedGraph& g, const SolverConfig& cfg, int n_starts,
                             std::optional<HomotopyParams> hp = std::nullopt);

/// Exhaustive degree on a single vertex: sign changes of the scalar
/// nonlinearity on a fine grid over [lower - 1, upper + 1], refined by
/// bisection, each root weighted by the sign of the scalar derivative.
DegreeReport degree_single_vertex(const ProblemSpec& spec, std::optional<HomotopyParams> hp = std::nullopt,
                                  std::optional<double> radius = std::nullopt);

struct HomotopyInvarianceReport {
    std::vector<DegreeReport> stages;
    bool consistent = false;
};

/// Degree of the deformed map at each t; consistent iff all stages agree.
/// The classic deformation uses default_epsilon(spec).
HomotopyInvarianceReport verify_homotopy_invariance(const ProblemSpec& spec, const WeightedGraph& g,
                                                    const SolverConfig& cfg, std::span<const double> t_values,
                                                    int n_starts);

} // namespace tzitzeica
