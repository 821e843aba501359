#pragma once

#include "tzitzeica/graph.hpp"
#include "tzitzeica/model.hpp"

namespace tzitzeica {

/// Pointwise box [lower, upper] containing every solution, plus the radius of
/// the sup-norm ball used for degree computations.
struct AprioriBox {
    double lower;
    double upper;
    double radius;
    double margin;

    bool contains(const VertexField& u) const;
};

/// radius = max(|lower|, |upper|) * 1.5 + 1; margin = radius - max(|lower|, |upper|).
AprioriBox make_box(double lower, double upper);

/// Classic kind with h2 < 0 everywhere (maximum principle at the extremal vertices):
///   lower = log(-max h2 / max h1) / (A+B),  upper = log(-min h2 / min h1) / (A+B).
/// Throws Error(Inapplicable) if any h2(x) >= 0.
AprioriBox bounds_classic(const ProblemSpec& spec);

/// Box valid for every deformed classic problem with parameter t in [0,1] and
/// the given epsilon. The deformed bounds are Moebius functions of t, so the
/// hull of the t = 0 box and the t = 1 box {0} covers the whole path.
AprioriBox bounds_classic_homotopy(const ProblemSpec& spec, double epsilon);

/// Intermediate constants of the generalized bound, kept for reporting.
struct GeneralizedBoundChain {
    double c1;  // upper bound
    double c2;  // integral majorant
    double c3;  // lower bound
};

GeneralizedBoundChain generalized_chain(const ProblemSpec& spec, const WeightedGraph& g);

/// Generalized kind with h1, h2 > 0. Uniform over the whole deformation
/// h1 e^{Au}(e^{Au}-t) + h2 e^{-Bu}(e^{-Bu}-t), t in [0,1]:
///   C1 = (1/A) log(1/2 + sqrt(max h2 / (4 min h1) + 1/4))
///   C2 = max h2 Vol + max h1 max{1/4, e^{2 A C1}} Vol
///   C3 = -(1/B) log(1/2 + sqrt(C2 / (min h2 mu0) + 1/4))
AprioriBox bounds_generalized(const ProblemSpec& spec, const WeightedGraph& g);

/// C = sqrt(D Vol / (w0 lambda1)) with D the diameter, so that
/// max u - min u <= C ||Delta u||_inf for every field. Zero on a single vertex.
double elliptic_constant(const WeightedGraph& g);
double elliptic_constant(const GraphConstants& c);

/// The box that applies to `spec` on `g`, if any (classic with h2 < 0,
/// generalized with h1, h2 > 0).
std::optional<AprioriBox> applicable_box(const ProblemSpec& spec, const WeightedGraph& g);

} // namespace tzitzeica
