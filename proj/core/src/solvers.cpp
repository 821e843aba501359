#include "tzitzeica/solvers.hpp"

#include "tzitzeica/degree.hpp"
#include "tzitzeica/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tzitzeica {

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw Error(ErrorKind::Validation, "tol must be positive");
    if (max_iter <= 0) throw Error(ErrorKind::Validation, "max_iter must be positive");
    if (!(shrink > 0.0 && shrink < 1.0)) throw Error(ErrorKind::Validation, "shrink factor must lie in (0,1)");
    if (!(min_step > 0.0 && min_step < 1.0)) throw Error(ErrorKind::Validation, "min_step must lie in (0,1)");
    if (!(deflation_radius > 0.0)) throw Error(ErrorKind::Validation, "deflation_radius must be positive");
    if (max_box_iter <= 0) throw Error(ErrorKind::Validation, "max_box_iter must be positive");
}

ContinuationError::ContinuationError(double failed_t, std::vector<SolveReport> stages)
    : Error(ErrorKind::Numerical, "continuation broken at t = " + std::to_string(failed_t)),
      failed_t_(failed_t), stages_(std::move(stages)) {}

namespace {

double dot(const VertexField& a, const VertexField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sq_distance(const VertexField& a, const VertexField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

// log M(u) for M = prod (1 + 1/||u - u_k||^2).
double log_deflation(std::span<const VertexField> known, const VertexField& u) {
    double s = 0.0;
    for (const VertexField& k : known) s += std::log1p(1.0 / sq_distance(u, k));
    return s;
}

VertexField grad_log_deflation(std::span<const VertexField> known, const VertexField& u) {
    VertexField g(u.size());
    for (const VertexField& k : known) {
        const double r2 = sq_distance(u, k);
        const double scale = -2.0 / (r2 * (r2 + 1.0));
        for (std::size_t i = 0; i < u.size(); ++i) g[i] += scale * (u[i] - k[i]);
    }
    return g;
}

bool far_from(std::span<const VertexField> known, const VertexField& u, double radius) {
    return std::all_of(known.begin(), known.end(), [&](const VertexField& k) { return sup_distance(u, k) > radius; });
}

int jacobian_sign(const TzitzeicaMap& map, const VertexField& u) {
    return LuFactorization(map.jacobian(u)).determinant_sign();
}

constexpr int kPolishSteps = 3;
constexpr double kResolvedStep = 1e-8;

// Polishes a small-residual point with full Newton steps and returns the
// Jacobian sign there, or 0 when the point is not an isolated regular root at
// working precision: a singular Jacobian, or a Newton correction that stays
// large, as it does on the slow approach to a degenerate zero.
int resolved_sign(const TzitzeicaMap& map, VertexField& u, VertexField& f) {
    for (int k = 0;; ++k) {
        const LuFactorization lu(map.jacobian(u));
        if (lu.singular()) return 0;
        const VertexField step(lu.solve((-1.0 * f).values()));
        if (step.sup_norm() <= kResolvedStep * std::max(1.0, u.sup_norm())) return lu.determinant_sign();
        if (k == kPolishSteps) return 0;
        try {
            VertexField trial = u + step;
            VertexField ft = map.residual(trial);
            if (!(ft.sup_norm() <= f.sup_norm())) return 0;
            u = std::move(trial);
            f = std::move(ft);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Range) throw;
            return 0;
        }
    }
}

} // namespace

SolveReport newton_deflated(const TzitzeicaMap& map, std::span<const VertexField> known, const VertexField& start,
                            const SolverConfig& cfg) {
    cfg.validate();
    SolveReport rep;
    rep.solution = start;

    VertexField u = start;
    VertexField f;
    try {
        f = map.residual(u);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Range) throw;
        rep.residual_norm = std::numeric_limits<double>::infinity();
        return rep;
    }

    // Merit: log of M(u)^2 ||F(u)||_2^2, kept in log form since M blows up near known roots.
    auto log_merit = [&](const VertexField& x, const VertexField& fx) {
        return 2.0 * log_deflation(known, x) + 2.0 * std::log(fx.l2_norm());
    };

    for (int iter = 0;; ++iter) {
        rep.iterations = iter;
        rep.solution = u;
        rep.residual_norm = f.sup_norm();
        rep.residual_history.push_back(rep.residual_norm);

        if (rep.residual_norm < cfg.tol) {
            if (!far_from(known, u, cfg.deflation_radius)) return rep;  // fell back onto a known root
            const int sign = resolved_sign(map, u, f);
            if (sign == 0) return rep;
            rep.solution = u;
            rep.residual_norm = f.sup_norm();
            rep.jac_sign = sign;
            rep.converged = true;
            return rep;
        }
        if (iter >= cfg.max_iter) return rep;

        const LuFactorization lu(map.jacobian(u));
        if (lu.singular()) return rep;
        VertexField step(lu.solve((-1.0 * f).values()));
        if (!known.empty()) {
            // Deflated Newton step is a rescaling of the undeflated one.
            const double denom = 1.0 - dot(grad_log_deflation(known, u), step);
            if (denom == 0.0 || !std::isfinite(denom)) return rep;
            step = (1.0 / denom) * step;
        }

        const double phi0 = log_merit(u, f);
        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= cfg.min_step) {
            const VertexField trial = u + lambda * step;
            try {
                VertexField ft = map.residual(trial);
                const double phi = log_merit(trial, ft);
                // Armijo on M^2 ||F||^2: phi <= phi0 + log(1 - 2 c lambda), c = 1e-4.
                if (ft.l2_norm() == 0.0 || phi <= phi0 + std::log1p(-2e-4 * lambda)) {
                    u = trial;
                    f = std::move(ft);
                    accepted = true;
                    break;
                }
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Range) throw;
            }
            lambda *= cfg.shrink;
        }
        if (!accepted) return rep;
    }
}

SolveReport newton_deflated(const ProblemSpec& spec, const WeightedGraph& g, std::span<const VertexField> known,
                            const VertexField& start, const SolverConfig& cfg) {
    return newton_deflated(TzitzeicaMap(spec, g), known, start, cfg);
}

SolveReport newton(const TzitzeicaMap& map, const VertexField& start, const SolverConfig& cfg) {
    return newton_deflated(map, {}, start, cfg);
}

SolveReport newton(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& start,
                   const SolverConfig& cfg) {
    return newton(TzitzeicaMap(spec, g), start, cfg);
}

std::vector<double> default_t_grid(std::size_t points) {
    if (points < 2) throw Error(ErrorKind::Validation, "continuation grid needs at least two points");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = 1.0 - static_cast<double>(i) / static_cast<double>(points - 1);
    grid.back() = 0.0;
    return grid;
}

namespace {

constexpr int kMaxRefinement = 10;

struct Continuer {
    const ProblemSpec& spec;
    const WeightedGraph& g;
    double epsilon;
    const SolverConfig& cfg;
    std::vector<SolveReport> stages;

    std::optional<SolveReport> solve_at(double t, const VertexField& start) const {
        const TzitzeicaMap map(spec, g, HomotopyParams{t, epsilon});
        SolveReport rep = newton(map, start, cfg);
        if (!rep.converged) return std::nullopt;
        rep.stage_t = t;
        return rep;
    }

    // Advances from (t_from, u_from) to t_to, bisecting on failure.
    VertexField advance(double t_from, const VertexField& u_from, double t_to, int depth) {
        if (auto rep = solve_at(t_to, u_from)) {
            stages.push_back(*rep);
            return rep->solution;
        }
        if (depth >= kMaxRefinement) throw ContinuationError(t_to, stages);
        const double mid = 0.5 * (t_from + t_to);
        const VertexField u_mid = advance(t_from, u_from, mid, depth + 1);
        return advance(mid, u_mid, t_to, depth + 1);
    }
};

} // namespace

std::vector<SolveReport> continuation(const ProblemSpec& spec, const WeightedGraph& g, std::span<const double> t_grid,
                                      double epsilon, const SolverConfig& cfg) {
    cfg.validate();
    spec.check_aligned(g);
    if (t_grid.size() < 2 || t_grid.front() != 1.0 || t_grid.back() != 0.0)
        throw Error(ErrorKind::Validation, "continuation grid must run from t = 1 to t = 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] < t_grid[i - 1]))
            throw Error(ErrorKind::Validation, "continuation grid must be strictly decreasing");
    }
    HomotopyParams{1.0, epsilon}.validate(spec);

    Continuer c{spec, g, epsilon, cfg, {}};
    // u = 0 solves both deformations at t = 1.
    VertexField u(g.vertex_count(), 0.0);
    auto first = c.solve_at(1.0, u);
    if (!first) throw ContinuationError(1.0, {});
    c.stages.push_back(*first);
    u = first->solution;
    for (std::size_t i = 1; i < t_grid.size(); ++i) u = c.advance(t_grid[i - 1], u, t_grid[i], 0);
    return c.stages;
}

MultiplicityBranch multiplicity_branch(const ProblemSpec& spec) {
    if (spec.kind() != EquationKind::Generalized)
        throw Error(ErrorKind::Inapplicable, "multiplicity needs the generalized equation");
    if (spec.h2().min() <= 0.0) throw Error(ErrorKind::Inapplicable, "multiplicity needs h1, h2 > 0");
    const double A = spec.A();
    const double B = spec.B();
    if (A * spec.h1().max() < B * spec.h2().min()) return MultiplicityBranch::AboveZero;
    if (A * spec.h1().min() > B * spec.h2().max()) return MultiplicityBranch::BelowZero;
    throw Error(ErrorKind::Inapplicable,
                "neither A max h1 < B min h2 nor A min h1 > B max h2 holds; barrier construction inapplicable");
}

namespace {

constexpr int kBarrierSearchSteps = 60;

// Sign of the pointwise nonlinearity at the constant c, uniform over vertices:
// -1 if negative everywhere, +1 if positive everywhere, 0 otherwise.
int uniform_sign(const TzitzeicaMap& map, double c) {
    bool all_neg = true;
    bool all_pos = true;
    for (std::size_t x = 0; x < map.spec().vertex_count(); ++x) {
        const double v = map.term(x).value(c);
        all_neg = all_neg && v < 0.0;
        all_pos = all_pos && v > 0.0;
    }
    return all_neg ? -1 : (all_pos ? 1 : 0);
}

bool within_cap(const ProblemSpec& spec, double c) {
    return std::max(spec.A(), spec.B()) * std::abs(c) <= kExponentCap;
}

} // namespace

BarrierPair choose_barriers(const ProblemSpec& spec, const WeightedGraph& g) {
    const MultiplicityBranch branch = multiplicity_branch(spec);
    const TzitzeicaMap map(spec, g);
    const double side = branch == MultiplicityBranch::AboveZero ? 1.0 : -1.0;
    const double A = spec.A();
    const double B = spec.B();

    // delta: the first 2^-k with h1/h2 e^{(A+B) delta} < -(e^{-B delta}-1)/(e^{A delta}-1)
    // (above zero), or G(-delta) < 0 (below zero).
    std::optional<double> delta;
    for (int k = 0; k <= kBarrierSearchSteps && !delta; ++k) {
        const double d = std::ldexp(1.0, -k);
        bool ok = true;
        for (std::size_t x = 0; x < g.vertex_count() && ok; ++x) {
            if (branch == MultiplicityBranch::AboveZero) {
                ok = spec.h1()[x] / spec.h2()[x] * std::exp((A + B) * d) < -std::expm1(-B * d) / std::expm1(A * d);
            } else {
                ok = map.term(x).value(-d) < 0.0;
            }
        }
        if (ok && uniform_sign(map, side * d) == -1) delta = d;
    }
    if (!delta) throw Error(ErrorKind::Numerical, "no lower barrier found in 60 halvings");

    std::optional<double> beta;
    for (double b = 2.0 * *delta; within_cap(spec, b) && !beta; b *= 2.0) {
        if (uniform_sign(map, side * b) == 1) beta = b;
    }
    if (!beta) throw Error(ErrorKind::Numerical, "no upper barrier found below the exponent cap");

    return {*delta, *beta, branch == MultiplicityBranch::BelowZero};
}

namespace {

VertexField project(VertexField u, double lo, double hi) {
    for (double& v : u.values()) v = std::clamp(v, lo, hi);
    return u;
}

double mu_dot(const WeightedGraph& g, const VertexField& a, const VertexField& b) {
    double s = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) s += g.mu(x) * a[x] * b[x];
    return s;
}

} // namespace

SolveReport minimize_box(const ProblemSpec& spec, const WeightedGraph& g, const BarrierPair& bp,
                         const SolverConfig& cfg) {
    cfg.validate();
    if (spec.kind() != EquationKind::Generalized)
        throw Error(ErrorKind::Unsupported, "box minimization needs the generalized equation");
    if (!(bp.delta > 0.0 && bp.delta < bp.beta)) throw Error(ErrorKind::Validation, "barriers need 0 < delta < beta");
    const double lo = bp.lower();
    const double hi = bp.upper();

    SolveReport rep;
    VertexField u(g.vertex_count(), 0.5 * (lo + hi));
    double J = energy(spec, g, u);
    VertexField grad = energy_gradient(spec, g, u);
    rep.energy_history.push_back(J);
    rep.iterate_history.push_back(u);

    double alpha = 1.0;
    int iter = 0;
    for (; iter < cfg.max_box_iter; ++iter) {
        const VertexField pg = project(u - grad, lo, hi) - u;
        if (pg.sup_norm() < cfg.tol) break;

        bool accepted = false;
        VertexField next;
        double J_next = 0.0;
        for (double a = alpha; a >= cfg.min_step; a *= cfg.shrink) {
            next = project(u - a * grad, lo, hi);
            J_next = energy(spec, g, next);
            // Armijo along the projection arc, in the mu-weighted inner product.
            if (J_next <= J - 1e-4 * mu_dot(g, grad, u - next)) {
                accepted = true;
                break;
            }
        }
        if (!accepted || next == u) break;  // descent exhausted at rounding level

        const VertexField grad_next = energy_gradient(spec, g, next);
        const VertexField s = next - u;
        const VertexField y = grad_next - grad;
        const double sy = mu_dot(g, s, y);
        alpha = sy > 0.0 ? std::clamp(mu_dot(g, s, s) / sy, 1e-10, 1e10) : 1.0;

        u = next;
        J = J_next;
        grad = grad_next;
        rep.energy_history.push_back(J);
        rep.iterate_history.push_back(u);
    }
    rep.iterations = iter;

    for (double v : u) {
        if (v <= lo || v >= hi)
            throw Error(ErrorKind::Numerical, "interior violation: box minimizer touches the barrier box");
    }

    // Interior point: the projected and unconstrained gradients agree, so
    // Newton on G finishes the convergence below tol.
    SolveReport polish = newton(spec, g, u, cfg);
    rep.solution = polish.solution;
    rep.residual_norm = polish.residual_norm;
    rep.residual_history = std::move(polish.residual_history);
    rep.jac_sign = polish.jac_sign;
    rep.iterations += polish.iterations;
    rep.converged = polish.converged;
    if (polish.converged) {
        for (double v : rep.solution) {
            if (v <= lo || v >= hi)
                throw Error(ErrorKind::Numerical, "interior violation: refined minimizer left the barrier box");
        }
    }
    return rep;
}

namespace {

// Root of sum_x mu(x) g_x(c) on [lo, hi], where the sum changes sign.
std::optional<double> averaged_root(const TzitzeicaMap& map, double lo, double hi) {
    const WeightedGraph& g = map.graph();
    auto f = [&](double c) {
        double s = 0.0;
        for (std::size_t x = 0; x < g.vertex_count(); ++x) s += g.mu(x) * map.term(x).value(c);
        return s;
    };
    double flo = f(lo);
    if ((flo > 0.0) == (f(hi) > 0.0)) return std::nullopt;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

constexpr int kBelowZeroStarts = 64;

// Below-zero branch: the nonzero solution is a saddle of J, not a box
// minimizer, so it is located by Newton deflated away from u = 0, seeded with
// constants inside the mirrored barrier box, with zero enumeration as fallback.
SolveReport solve_below_zero(const ProblemSpec& spec, const WeightedGraph& g, const BarrierPair& bp,
                             const SolverConfig& cfg) {
    const TzitzeicaMap map(spec, g);
    const std::vector<VertexField> known{VertexField(g.vertex_count(), 0.0)};
    const double lo = bp.lower();
    const double hi = bp.upper();

    std::vector<double> seeds;
    if (auto c = averaged_root(map, lo, hi)) seeds.push_back(*c);
    for (int k = 1; k < 16; ++k) seeds.push_back(lo + (hi - lo) * k / 16.0);

    SolveReport last;
    for (double c : seeds) {
        last = newton_deflated(map, known, VertexField(g.vertex_count(), c), cfg);
        if (last.converged && last.solution.max() < 0.0) return last;
    }
    // The solution need not sit near a constant; fall back on enumerating the
    // zeros of G and take a strictly negative one.
    const DegreeReport all = estimate_degree(spec, g, cfg, kBelowZeroStarts);
    for (std::size_t k = 0; k < all.solutions.size(); ++k) {
        if (!(all.solutions[k].max() < 0.0)) continue;
        last = newton(map, all.solutions[k], cfg);
        if (last.converged) return last;
    }
    last.converged = false;
    return last;
}

} // namespace

MultiplicityResult find_two_solutions(const ProblemSpec& spec, const WeightedGraph& g, const SolverConfig& cfg) {
    cfg.validate();
    MultiplicityResult out{multiplicity_branch(spec), choose_barriers(spec, g), {}};
    const TzitzeicaMap map(spec, g);

    SolveReport zero;
    zero.solution = VertexField(g.vertex_count(), 0.0);
    zero.residual_norm = map.residual(zero.solution).sup_norm();
    zero.residual_history.push_back(zero.residual_norm);
    zero.jac_sign = jacobian_sign(map, zero.solution);
    zero.converged = zero.jac_sign != 0 && zero.residual_norm < cfg.tol;

    SolveReport other;
    if (out.branch == MultiplicityBranch::AboveZero) {
        other = minimize_box(spec, g, out.barriers, cfg);
    } else {
        other = solve_below_zero(spec, g, out.barriers, cfg);
        if (other.converged) {
            // Shrink the mirrored barriers until they enclose the solution;
            // G(-delta) < 0 persists under halving and G(-beta) > 0 under doubling.
            BarrierPair& bp = out.barriers;
            for (int k = 0; k < kBarrierSearchSteps && other.solution.max() >= bp.upper(); ++k) {
                if (uniform_sign(map, -0.5 * bp.delta) != -1) break;
                bp.delta *= 0.5;
            }
            for (int k = 0; k < kBarrierSearchSteps && other.solution.min() <= bp.lower(); ++k) {
                if (!within_cap(spec, 2.0 * bp.beta) || uniform_sign(map, -2.0 * bp.beta) != 1) break;
                bp.beta *= 2.0;
            }
        }
    }
    if (!other.converged)
        throw Error(ErrorKind::Numerical, "multiplicity failure: the one-signed solution was not found");
    if (!(sup_distance(other.solution, zero.solution) > cfg.deflation_radius))
        throw Error(ErrorKind::Numerical, "multiplicity failure: second solution coincides with u = 0");

    out.solutions.push_back(std::move(zero));
    out.solutions.push_back(std::move(other));
    return out;
}

} // namespace tzitzeica
