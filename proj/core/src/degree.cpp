#include "tzitzeica/degree.hpp"

#include "tzitzeica/error.hpp"
#include "tzitzeica/estimates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <future>
#include <numeric>

namespace tzitzeica {

const char* to_string(Confidence c) noexcept { return c == Confidence::Proven ? "proven" : "heuristic"; }

bool integral_obstruction(const TzitzeicaMap& map) {
    for (std::size_t x = 0; x < map.spec().vertex_count(); ++x) {
        const PointwiseTerm p = map.term(x);
        const bool positive = p.kind == EquationKind::Classic ? (p.c1 > 0.0 && p.c2 >= 0.0)
                                                              : (p.t == 0.0 && p.c1 > 0.0 && p.c2 >= 0.0);
        if (!positive) return false;
    }
    return true;
}

namespace {

std::vector<std::uint64_t> first_primes(std::size_t n) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t c = 2; primes.size() < n; ++c) {
        if (std::all_of(primes.begin(), primes.end(), [c](std::uint64_t p) { return c % p != 0; }))
            primes.push_back(c);
    }
    return primes;
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double scale = inv;
    double r = 0.0;
    while (index > 0) {
        r += static_cast<double>(index % base) * scale;
        index /= base;
        scale *= inv;
    }
    return r;
}

std::optional<AprioriBox> box_for(const ProblemSpec& spec, const WeightedGraph& g,
                                  const std::optional<HomotopyParams>& hp) {
    if (hp && spec.kind() == EquationKind::Classic) return bounds_classic_homotopy(spec, hp->epsilon);
    return applicable_box(spec, g);
}

bool lex_less(const VertexField& a, const VertexField& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void canonicalize(DegreeReport& rep) {
    std::vector<std::size_t> order(rep.solutions.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return lex_less(rep.solutions[i], rep.solutions[j]); });
    DegreeReport sorted = rep;
    for (std::size_t k = 0; k < order.size(); ++k) {
        sorted.solutions[k] = rep.solutions[order[k]];
        sorted.signs[k] = rep.signs[order[k]];
        sorted.residual_norms[k] = rep.residual_norms[order[k]];
    }
    rep = std::move(sorted);
    rep.degree = std::accumulate(rep.signs.begin(), rep.signs.end(), 0);
}

constexpr std::size_t kWaveSize = 8;
constexpr int kRetriesPerStart = 8;
// Newton from the outer shell of a large ball rarely reaches roots near the
// origin, so start i is drawn from the ball of radius R 2^-(i mod kStartLevels).
constexpr int kStartLevels = 5;
constexpr int kMaxBatches = 8;
constexpr int kQuietBatches = 2;
constexpr std::array<double, 3> kProbeScales{0.1, 0.3, 1.0};
constexpr std::size_t kProbeModes = 8;

struct Probe {
    VertexField point;
    int retries;
    bool plain;
};

// Points root +- s v for the kProbeModes eigenvectors of M^{1/2} J M^{-1/2}
// with the smallest |eigenvalue|, mapped back by M^{-1/2} and scaled to unit
// sup norm.
std::vector<Probe> neighbourhood_probes(const TzitzeicaMap& map, const VertexField& root) {
    const WeightedGraph& g = map.graph();
    const std::size_t n = g.vertex_count();
    const DenseMatrix jac = map.jacobian(root);
    DenseMatrix sym(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::sqrt(g.mu(i) / g.mu(j)) * jac(i, j);
            const double b = std::sqrt(g.mu(j) / g.mu(i)) * jac(j, i);
            sym(i, j) = 0.5 * (a + b);
        }
    const SymmetricEigen eig = symmetric_eigen(std::move(sym));
    std::vector<std::size_t> modes(n);
    std::iota(modes.begin(), modes.end(), 0);
    std::stable_sort(modes.begin(), modes.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(eig.values[i]) < std::abs(eig.values[j]);
    });
    modes.resize(std::min(n, kProbeModes));

    std::vector<Probe> out;
    for (std::size_t k : modes) {
        VertexField v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = eig.vectors(i, k) / std::sqrt(g.mu(i));
        v = (1.0 / v.sup_norm()) * v;
        for (double s : kProbeScales)
            for (double sign : {1.0, -1.0}) out.push_back({root + (sign * s) * v, 0, true});
    }
    return out;
}

} // namespace

VertexField halton_start(std::size_t n, std::uint64_t index, double radius) {
    static thread_local std::vector<std::uint64_t> primes;
    if (primes.size() < n) primes = first_primes(n);
    VertexField u(n);
    for (std::size_t x = 0; x < n; ++x) u[x] = radius * (2.0 * radical_inverse(index, primes[x]) - 1.0);
    return u;
}

DegreeReport estimate_degree(const ProblemSpec& spec, const WeightedGraph& g, const SolverConfig& cfg, int n_starts,
                             std::optional<HomotopyParams> hp) {
    cfg.validate();
    if (n_starts <= 0) throw Error(ErrorKind::Validation, "n_starts must be positive");
    const TzitzeicaMap map(spec, g, hp);

    DegreeReport rep;
    if (hp) rep.stage_t = hp->t;
    if (integral_obstruction(map)) {
        rep.confidence = Confidence::Proven;
        rep.obstructed = true;
        if (auto box = box_for(spec, g, hp)) rep.radius = box->radius;
        else if (cfg.radius) rep.radius = *cfg.radius;
        return rep;
    }

    if (cfg.radius) {
        rep.radius = *cfg.radius;
    } else if (auto box = box_for(spec, g, hp)) {
        rep.radius = box->radius;
    } else {
        throw Error(ErrorKind::Inapplicable, "no a priori box applies; supply an explicit radius");
    }
    if (!(rep.radius > 0.0)) throw Error(ErrorKind::Validation, "degree radius must be positive");

    const std::size_t n = g.vertex_count();
    // Every start is first run undeflated, then deflated against the roots
    // known when its wave begins, as long as that keeps producing roots.
    using Start = Probe;
    std::deque<Start> queue;
    const std::uint64_t batch = static_cast<std::uint64_t>(n_starts);
    const std::uint64_t offset = kHaltonBurnIn + cfg.seed * batch * kMaxBatches;
    int batches = 0;
    auto push_batch = [&] {
        for (int i = 0; i < n_starts; ++i) {
            const double r = std::ldexp(rep.radius, -(i % kStartLevels));
            queue.push_back({halton_start(n, offset + batches * batch + i, r), 0, true});
        }
        ++batches;
    };
    push_batch();
    int starts = n_starts;

    std::vector<VertexField> roots;
    std::size_t seeded = 0;
    std::size_t roots_before_batch = 0;
    int quiet = 0;
    for (;;) {
        if (queue.empty()) {
            // Roots tend to come in pairs split along soft modes of the
            // Jacobian; probe each root's neighbourhood along the eigenvectors
            // of the mu-symmetrized Jacobian.
            if (seeded == roots.size()) {
                // Saturation: draw fresh batches until kQuietBatches in a row
                // find no new root.
                quiet = roots.size() == roots_before_batch ? quiet + 1 : 0;
                if (quiet == kQuietBatches || batches == kMaxBatches) break;
                roots_before_batch = roots.size();
                push_batch();
                starts += n_starts;
                continue;
            }
            for (const Start& s : neighbourhood_probes(map, roots[seeded++])) queue.push_back(s);
            starts += static_cast<int>(queue.size());
            continue;
        }
        std::vector<Start> wave;
        while (!queue.empty() && wave.size() < kWaveSize) {
            wave.push_back(std::move(queue.front()));
            queue.pop_front();
        }
        const std::vector<VertexField> snapshot = roots;
        std::vector<std::future<SolveReport>> jobs;
        for (const Start& s : wave) {
            jobs.push_back(std::async(std::launch::async, [&map, &snapshot, &cfg, &s] {
                return s.plain ? newton(map, s.point, cfg) : newton_deflated(map, snapshot, s.point, cfg);
            }));
        }
        // Merge in start order so the outcome does not depend on scheduling.
        std::vector<Start> retry;
        for (std::size_t k = 0; k < wave.size(); ++k) {
            SolveReport r = jobs[k].get();
            const bool fresh = std::all_of(roots.begin(), roots.end(), [&](const VertexField& known) {
                return sup_distance(known, r.solution) > cfg.deflation_radius;
            });
            if (r.residual_norm < cfg.tol && r.jac_sign == 0 && fresh)
                throw Error(ErrorKind::Numerical, "degenerate root: Jacobian singular at a zero, degree undefined");
            if (wave[k].plain) retry.push_back({wave[k].point, 0, false});
            if (!r.converged || !(r.solution.sup_norm() < rep.radius)) continue;
            if (fresh) roots.push_back(r.solution);
            if (!wave[k].plain && wave[k].retries < kRetriesPerStart)
                retry.push_back({wave[k].point, wave[k].retries + 1, false});
        }
        for (auto it = retry.rbegin(); it != retry.rend(); ++it) queue.push_front(std::move(*it));
    }

    rep.starts_used = starts;
    for (const VertexField& root : roots) {
        rep.solutions.push_back(root);
        rep.residual_norms.push_back(map.residual(root).sup_norm());
        const int sign = LuFactorization(map.jacobian(root)).determinant_sign();
        if (sign == 0) throw Error(ErrorKind::Numerical, "degenerate root: Jacobian singular at a zero");
        rep.signs.push_back(sign);
    }
    canonicalize(rep);
    return rep;
}

DegreeReport degree_single_vertex(const ProblemSpec& spec, std::optional<HomotopyParams> hp,
                                  std::optional<double> radius) {
    if (spec.vertex_count() != 1) throw Error(ErrorKind::Validation, "single-vertex degree needs exactly one vertex");
    const WeightedGraph g({"v"}, {1.0}, {});
    const TzitzeicaMap map(spec, g, hp);
    const PointwiseTerm term = map.term(0);

    DegreeReport rep;
    rep.confidence = Confidence::Proven;
    rep.starts_used = 0;
    if (hp) rep.stage_t = hp->t;

    double lo = 0.0;
    double hi = 0.0;
    if (radius) {
        lo = -*radius;
        hi = *radius;
        rep.radius = *radius;
    } else if (auto box = box_for(spec, g, hp)) {
        lo = box->lower - 1.0;
        hi = box->upper + 1.0;
        rep.radius = box->radius;
    } else if (integral_obstruction(map)) {
        rep.obstructed = true;
        return rep;
    } else {
        throw Error(ErrorKind::Inapplicable, "no a priori interval applies; supply an explicit radius");
    }

    constexpr int kGrid = 20000;
    std::vector<double> roots;
    auto bisect = [&](double a, double b, double fa) {
        for (int i = 0; i < 200 && b - a > 0.0; ++i) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            const double fm = term.value(m);
            if (fm == 0.0) return m;
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };

    double prev_x = lo;
    double prev_f = term.value(lo);
    if (prev_f == 0.0) roots.push_back(lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / kGrid;
        const double fx = term.value(x);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if (prev_f != 0.0 && (fx > 0.0) != (prev_f > 0.0)) {
            roots.push_back(bisect(prev_x, x, prev_f));
        }
        prev_x = x;
        prev_f = fx;
    }

    for (double r : roots) {
        const double d = term.derivative(r);
        if (std::abs(d) < 1e-12) throw Error(ErrorKind::Numerical, "degenerate scalar root");
        rep.solutions.push_back(VertexField{r});
        rep.signs.push_back(d > 0.0 ? 1 : -1);
        rep.residual_norms.push_back(std::abs(term.value(r)));
    }
    canonicalize(rep);
    return rep;
}

HomotopyInvarianceReport verify_homotopy_invariance(const ProblemSpec& spec, const WeightedGraph& g,
                                                    const SolverConfig& cfg, std::span<const double> t_values,
                                                    int n_starts) {
    HomotopyInvarianceReport out;
    const double eps = default_epsilon(spec);
    for (double t : t_values) out.stages.push_back(estimate_degree(spec, g, cfg, n_starts, HomotopyParams{t, eps}));
    out.consistent = !out.stages.empty() &&
                     std::all_of(out.stages.begin(), out.stages.end(),
                                 [&](const DegreeReport& d) { return d.degree == out.stages.front().degree; });
    return out;
}

} // namespace tzitzeica
