#include "tzitzeica/model.hpp"

#include "tzitzeica/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tzitzeica {

const char* to_string(EquationKind kind) noexcept {
    return kind == EquationKind::Classic ? "classic" : "generalized";
}

ProblemSpec::ProblemSpec(EquationKind kind, VertexField h1, VertexField h2, double A, double B)
    : kind_(kind), h1_(std::move(h1)), h2_(std::move(h2)), A_(A), B_(B) {
    if (!(std::isfinite(A_) && A_ > 0.0)) throw Error(ErrorKind::Validation, "exponent A must be positive");
    if (!(std::isfinite(B_) && B_ > 0.0)) throw Error(ErrorKind::Validation, "exponent B must be positive");
    if (h1_.size() != h2_.size()) throw Error(ErrorKind::Alignment, "h1 and h2 have different lengths");
    if (!h1_.all_finite() || !h2_.all_finite()) throw Error(ErrorKind::Validation, "coefficients must be finite");
    for (std::size_t x = 0; x < h1_.size(); ++x) {
        if (h1_[x] <= 0.0)
            throw Error(ErrorKind::Validation, "h1 must be positive (vertex index " + std::to_string(x) + ")");
    }
}

void ProblemSpec::check_aligned(const WeightedGraph& g) const { g.check_aligned(h1_, "h1"); }

void HomotopyParams::validate(const ProblemSpec& spec) const {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::Inapplicable, "homotopy parameter t must lie in [0,1]");
    if (spec.kind() == EquationKind::Generalized) return;
    if (!(std::isfinite(epsilon) && epsilon > 0.0))
        throw Error(ErrorKind::Inapplicable, "classic deformation needs epsilon > 0");
    // t eps + (1-t) h1 > 0 holds for any eps > 0; -t eps + (1-t) h2 < 0 for all t needs h2 < 0.
    if (spec.h2().max() >= 0.0)
        throw Error(ErrorKind::Inapplicable,
                    "classic deformation requires -t*eps + (1-t)*h2(x) < 0 for all t, which fails since max h2 >= 0");
}

double default_epsilon(const ProblemSpec& spec) {
    if (spec.kind() != EquationKind::Classic) return 0.0;
    return std::min(spec.h1().min(), -spec.h2().max()) / 4.0;
}

double PointwiseTerm::value(double u) const {
    if (kind == EquationKind::Classic) return c1 * std::exp(A * u) + c2 * std::exp(-B * u);
    const double ea = std::exp(A * u);
    const double eb = std::exp(-B * u);
    if (t == 1.0) return c1 * ea * std::expm1(A * u) + c2 * eb * std::expm1(-B * u);
    return c1 * ea * (ea - t) + c2 * eb * (eb - t);
}

double PointwiseTerm::derivative(double u) const {
    const double ea = std::exp(A * u);
    const double eb = std::exp(-B * u);
    if (kind == EquationKind::Classic) return A * c1 * ea - B * c2 * eb;
    return c1 * A * ea * (2.0 * ea - t) - c2 * B * eb * (2.0 * eb - t);
}

TzitzeicaMap::TzitzeicaMap(const ProblemSpec& spec, const WeightedGraph& g, std::optional<HomotopyParams> hp)
    : spec_(&spec), graph_(&g), hp_(hp) {
    spec.check_aligned(g);
    if (hp_) hp_->validate(spec);
}

PointwiseTerm TzitzeicaMap::term(std::size_t x) const {
    const ProblemSpec& s = *spec_;
    PointwiseTerm p{s.kind(), s.h1()[x], s.h2()[x], s.A(), s.B(), 1.0};
    if (!hp_) return p;
    const double t = hp_->t;
    if (s.kind() == EquationKind::Classic) {
        p.c1 = t * hp_->epsilon + (1.0 - t) * s.h1()[x];
        p.c2 = -t * hp_->epsilon + (1.0 - t) * s.h2()[x];
    } else {
        p.t = t;
    }
    return p;
}

void TzitzeicaMap::check_range(const VertexField& u) const {
    graph_->check_aligned(u);
    const double reach = std::max(spec_->A(), spec_->B()) * u.sup_norm();
    if (!(reach <= kExponentCap))
        throw Error(ErrorKind::Range, "exponent cap exceeded: max(A,B)*|u| = " + std::to_string(reach));
}

VertexField TzitzeicaMap::residual(const VertexField& u) const {
    check_range(u);
    VertexField r = laplacian(*graph_, u);
    for (std::size_t x = 0; x < r.size(); ++x) r[x] = -r[x] + term(x).value(u[x]);
    if (!r.all_finite()) throw Error(ErrorKind::Range, "residual overflowed");
    return r;
}

DenseMatrix TzitzeicaMap::jacobian(const VertexField& u) const {
    check_range(u);
    DenseMatrix j = laplacian_matrix(*graph_);
    const std::size_t n = j.size();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) j(x, y) = -j(x, y);
        j(x, x) += term(x).derivative(u[x]);
        if (!std::isfinite(j(x, x))) throw Error(ErrorKind::Range, "jacobian overflowed");
    }
    return j;
}

VertexField residual(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u) {
    return TzitzeicaMap(spec, g).residual(u);
}

VertexField residual_homotopy(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u,
                              const HomotopyParams& hp) {
    return TzitzeicaMap(spec, g, hp).residual(u);
}

DenseMatrix jacobian(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u) {
    return TzitzeicaMap(spec, g).jacobian(u);
}

DenseMatrix jacobian_homotopy(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u,
                              const HomotopyParams& hp) {
    return TzitzeicaMap(spec, g, hp).jacobian(u);
}

namespace {

void require_generalized(const ProblemSpec& spec) {
    if (spec.kind() != EquationKind::Generalized)
        throw Error(ErrorKind::Unsupported, "the energy functional is defined for the generalized equation only");
}

} // namespace

double energy(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u) {
    require_generalized(spec);
    spec.check_aligned(g);
    g.check_aligned(u);
    if (!(std::max(spec.A(), spec.B()) * u.sup_norm() <= kExponentCap))
        throw Error(ErrorKind::Range, "exponent cap exceeded in energy");
    const VertexField grad2 = gradient_norm_sq(g, u);
    double total = 0.0;
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
        const double pa = std::expm1(spec.A() * u[x]);
        const double pb = std::expm1(-spec.B() * u[x]);
        const double density = grad2[x] + spec.h1()[x] * pa * pa / spec.A() - spec.h2()[x] * pb * pb / spec.B();
        total += g.mu(x) * density;
    }
    if (!std::isfinite(total)) throw Error(ErrorKind::Range, "energy overflowed");
    return 0.5 * total;
}

VertexField energy_gradient(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u) {
    require_generalized(spec);
    return residual(spec, g, u);
}

} // namespace tzitzeica
