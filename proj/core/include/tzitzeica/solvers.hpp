#pragma once

#include "tzitzeica/error.hpp"
#include "tzitzeica/graph.hpp"
#include "tzitzeica/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tzitzeica {

struct SolverConfig {
    double tol = 1e-10;               // residual sup-norm target
    int max_iter = 200;               // Newton iterations
    double shrink = 0.5;              // backtracking factor
    double min_step = 0x1p-30;        // below this the line search has stagnated
    double deflation_radius = 1e-5;
    std::uint64_t seed = 0;
    int max_box_iter = 20000;         // projected-gradient iterations in minimize_box
    std::optional<double> radius;     // degree ball override when no a priori box applies

    /// Throws Error(Validation) on tol <= 0, shrink outside (0,1), etc.
    void validate() const;
};

struct SolveReport {
    VertexField solution;
    double residual_norm = 0.0;
    int iterations = 0;
    int jac_sign = 0;  // sign of det of the Jacobian at `solution`
    bool converged = false;
    std::optional<double> stage_t;        // continuation parameter, when produced by continuation()
    std::vector<double> residual_history;  // sup-norm residual per Newton iterate
    std::vector<double> energy_history;    // J at accepted projected-gradient iterates
    std::vector<VertexField> iterate_history;  // the accepted projected-gradient iterates
};

/// Constant barriers for the box-constrained minimization. For the first
/// multiplicity branch the box is [delta, beta] with G(delta) < 0 < G(beta)
/// vertexwise; when `mirrored` it is [-beta, -delta] with G(-delta) < 0 < G(-beta).
struct BarrierPair {
    double delta;
    double beta;
    bool mirrored = false;

    double lower() const { return mirrored ? -beta : delta; }
    double upper() const { return mirrored ? -delta : beta; }
};

/// Raised when a continuation stage cannot be solved even after refinement.
/// Carries the stages solved before the failure.
class ContinuationError : public Error {
  public:
    ContinuationError(double failed_t, std::vector<SolveReport> stages);

    double failed_t() const noexcept { return failed_t_; }
    const std::vector<SolveReport>& stages() const noexcept { return stages_; }

  private:
    double failed_t_;
    std::vector<SolveReport> stages_;
};

/// Damped Newton (Armijo backtracking on ||F||_2^2). A singular step or a
/// singular Jacobian at the root yields converged = false and jac_sign = 0.
/// Range errors during the iteration count as divergence.
SolveReport newton(const TzitzeicaMap& map, const VertexField& start, const SolverConfig& cfg);
SolveReport newton(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& start,
                   const SolverConfig& cfg);

/// Newton on M(u) F(u), M(u) = prod_k (1 + 1/||u - u_k||_2^2). Converged roots
/// are at sup distance > cfg.deflation_radius from every known root.
SolveReport newton_deflated(const TzitzeicaMap& map, std::span<const VertexField> known, const VertexField& start,
                            const SolverConfig& cfg);
SolveReport newton_deflated(const ProblemSpec& spec, const WeightedGraph& g, std::span<const VertexField> known,
                            const VertexField& start, const SolverConfig& cfg);

/// `points` values evenly spaced from 1 down to 0.
std::vector<double> default_t_grid(std::size_t points = 21);

/// Follows the deformation from t = 1 (where u = 0 solves it) down to t = 0,
/// seeding each stage with the previous solution. A failed stage is retried
/// through bisected intermediate t values, at most 10 levels deep; every
/// solved stage (inserted ones included) is returned in order.
/// Throws ContinuationError with the failing t when refinement is exhausted.
std::vector<SolveReport> continuation(const ProblemSpec& spec, const WeightedGraph& g, std::span<const double> t_grid,
                                      double epsilon, const SolverConfig& cfg);

enum class MultiplicityBranch { AboveZero, BelowZero };

/// Which multiplicity hypothesis holds: A max h1 < B min h2 (AboveZero) or
/// A min h1 > B max h2 (BelowZero). Throws Error(Inapplicable) when neither does.
MultiplicityBranch multiplicity_branch(const ProblemSpec& spec);

/// Halving search for delta and doubling search for beta (60 steps each).
BarrierPair choose_barriers(const ProblemSpec& spec, const WeightedGraph& g);

/// Projected gradient with Armijo backtracking on J over the constant box of
/// `bp`, finished by Newton once the iterate is interior. Throws
/// Error(Numerical) ("interior violation") if the minimizer touches the box.
SolveReport minimize_box(const ProblemSpec& spec, const WeightedGraph& g, const BarrierPair& bp,
                         const SolverConfig& cfg);

struct MultiplicityResult {
    MultiplicityBranch branch;
    BarrierPair barriers;
    std::vector<SolveReport> solutions;  // [0] is u = 0, [1] the one-signed solution
};

/// Two distinct solutions of the generalized equation under either
/// multiplicity hypothesis: u = 0 and a one-signed solution inside the
/// barrier box.
MultiplicityResult find_two_solutions(const ProblemSpec& spec, const WeightedGraph& g, const SolverConfig& cfg);

} // namespace tzitzeica
