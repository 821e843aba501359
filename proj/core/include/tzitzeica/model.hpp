#pragma once

#include "tzitzeica/dense.hpp"
#include "tzitzeica/graph.hpp"

#include <optional>

namespace tzitzeica {

enum class EquationKind { Classic, Generalized };

const char* to_string(EquationKind kind) noexcept;

/// |A u| and |B u| beyond this raise Error(Range) instead of overflowing.
inline constexpr double kExponentCap = 700.0;

/// Coefficients of
///   classic:      -Delta u + h1 e^{Au} + h2 e^{-Bu}
///   generalized:  -Delta u + h1 e^{Au}(e^{Au} - 1) + h2 e^{-Bu}(e^{-Bu} - 1)
/// h1 must be positive; the sign of h2 is data.
class ProblemSpec {
  public:
    ProblemSpec(EquationKind kind, VertexField h1, VertexField h2, double A, double B);

    EquationKind kind() const noexcept { return kind_; }
    const VertexField& h1() const noexcept { return h1_; }
    const VertexField& h2() const noexcept { return h2_; }
    double A() const noexcept { return A_; }
    double B() const noexcept { return B_; }
    std::size_t vertex_count() const noexcept { return h1_.size(); }

    void check_aligned(const WeightedGraph& g) const;

  private:
    EquationKind kind_;
    VertexField h1_;
    VertexField h2_;
    double A_;
    double B_;
};

/// Deformation parameter. Classic: h1 -> t eps + (1-t) h1, h2 -> -t eps + (1-t) h2.
/// Generalized: the "-1" in both brackets becomes "-t".
struct HomotopyParams {
    double t = 0.0;
    double epsilon = 0.0;

    /// Throws Error(Inapplicable) unless t in [0,1] and, for the classic kind,
    /// eps > 0 keeps the deformed h1 positive and h2 negative for every t.
    void validate(const ProblemSpec& spec) const;
};

/// min(min h1, -max h2) / 4 for the classic kind; 0 otherwise.
double default_epsilon(const ProblemSpec& spec);

/// Scalar nonlinearity at one vertex (the Laplacian part vanishes on a single
/// vertex) and its derivative. `t` is the deformation parameter (1 for the
/// undeformed generalized map; ignored for classic, where c1/c2 carry it).
struct PointwiseTerm {
    EquationKind kind;
    double c1;
    double c2;
    double A;
    double B;
    double t = 1.0;

    double value(double u) const;
    double derivative(double u) const;
};

/// The residual map u -> -Delta u + nonlinearity, optionally deformed.
class TzitzeicaMap {
  public:
    TzitzeicaMap(const ProblemSpec& spec, const WeightedGraph& g, std::optional<HomotopyParams> hp = std::nullopt);

    const ProblemSpec& spec() const noexcept { return *spec_; }
    const WeightedGraph& graph() const noexcept { return *graph_; }
    const std::optional<HomotopyParams>& homotopy() const noexcept { return hp_; }

    PointwiseTerm term(std::size_t x) const;

    VertexField residual(const VertexField& u) const;
    DenseMatrix jacobian(const VertexField& u) const;

  private:
    void check_range(const VertexField& u) const;

    const ProblemSpec* spec_;
    const WeightedGraph* graph_;
    std::optional<HomotopyParams> hp_;
};

VertexField residual(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u);
VertexField residual_homotopy(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u,
                              const HomotopyParams& hp);
DenseMatrix jacobian(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u);
DenseMatrix jacobian_homotopy(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u,
                              const HomotopyParams& hp);

/// J(u) = 1/2 int [ |grad u|^2 + (1/A) h1 (e^{Au}-1)^2 - (1/B) h2 (e^{-Bu}-1)^2 ] dmu.
/// Generalized kind only (Error(Unsupported) otherwise).
double energy(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u);

/// Gradient of J in the mu-weighted inner product, which is the generalized
/// residual itself: dJ/du(x) = mu(x) * energy_gradient(u)(x).
VertexField energy_gradient(const ProblemSpec& spec, const WeightedGraph& g, const VertexField& u);

} // namespace tzitzeica
