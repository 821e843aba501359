#include "tzitzeica/estimates.hpp"

#include "tzitzeica/error.hpp"

#include <algorithm>
#include <cmath>

namespace tzitzeica {

bool AprioriBox::contains(const VertexField& u) const {
    return std::all_of(u.begin(), u.end(), [&](double v) { return v >= lower && v <= upper; });
}

AprioriBox make_box(double lower, double upper) {
    const double reach = std::max(std::abs(lower), std::abs(upper));
    const double radius = reach * 1.5 + 1.0;
    return {lower, upper, radius, radius - reach};
}

AprioriBox bounds_classic(const ProblemSpec& spec) {
    if (spec.kind() != EquationKind::Classic)
        throw Error(ErrorKind::Inapplicable, "classic bounds requested for the generalized equation");
    if (spec.h2().max() >= 0.0)
        throw Error(ErrorKind::Inapplicable, "classic a priori bounds need h2(x) < 0 at every vertex");
    const double ab = spec.A() + spec.B();
    const double lower = std::log(-spec.h2().max() / spec.h1().max()) / ab;
    const double upper = std::log(-spec.h2().min() / spec.h1().min()) / ab;
    return make_box(lower, upper);
}

AprioriBox bounds_classic_homotopy(const ProblemSpec& spec, double epsilon) {
    HomotopyParams{0.0, epsilon}.validate(spec);
    const AprioriBox b = bounds_classic(spec);
    return make_box(std::min(b.lower, 0.0), std::max(b.upper, 0.0));
}

GeneralizedBoundChain generalized_chain(const ProblemSpec& spec, const WeightedGraph& g) {
    if (spec.kind() != EquationKind::Generalized)
        throw Error(ErrorKind::Inapplicable, "generalized bounds requested for the classic equation");
    spec.check_aligned(g);
    if (spec.h2().min() <= 0.0)
        throw Error(ErrorKind::Inapplicable, "generalized a priori bounds need h1, h2 > 0 at every vertex");
    const double vol = volume(g);
    const double mu0 = *std::min_element(g.mu().begin(), g.mu().end());
    const double A = spec.A();
    const double B = spec.B();

    GeneralizedBoundChain c{};
    c.c1 = std::log(0.5 + std::sqrt(spec.h2().max() / (4.0 * spec.h1().min()) + 0.25)) / A;
    c.c2 = spec.h2().max() * vol + spec.h1().max() * std::max(0.25, std::exp(2.0 * A * c.c1)) * vol;
    c.c3 = -std::log(0.5 + std::sqrt(c.c2 / (spec.h2().min() * mu0) + 0.25)) / B;
    return c;
}

AprioriBox bounds_generalized(const ProblemSpec& spec, const WeightedGraph& g) {
    const GeneralizedBoundChain c = generalized_chain(spec, g);
    return make_box(c.c3, c.c1);
}

double elliptic_constant(const GraphConstants& c) {
    if (!c.lambda1) return 0.0;
    return std::sqrt(static_cast<double>(c.diameter) * c.volume / (c.w0 * *c.lambda1));
}

double elliptic_constant(const WeightedGraph& g) { return elliptic_constant(graph_constants(g)); }

std::optional<AprioriBox> applicable_box(const ProblemSpec& spec, const WeightedGraph& g) {
    if (spec.kind() == EquationKind::Classic) {
        if (spec.h2().max() < 0.0) return bounds_classic(spec);
        return std::nullopt;
    }
    if (spec.h2().min() > 0.0) return bounds_generalized(spec, g);
    return std::nullopt;
}

} // namespace tzitzeica
