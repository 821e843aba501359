#pragma once

#include "tzitzeica/dense.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tzitzeica {

/// A real-valued function on the vertex set, in the graph's vertex order.
class VertexField {
  public:
    VertexField() = default;
    explicit VertexField(std::size_t n, double value = 0.0) : values_(n, value) {}
    explicit VertexField(std::vector<double> values) : values_(std::move(values)) {}
    VertexField(std::initializer_list<double> values) : values_(values) {}

    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    double max() const;
    double min() const;
    double sup_norm() const;
    double l2_norm() const;
    bool all_finite() const;

    friend bool operator==(const VertexField&, const VertexField&) = default;

  private:
    std::vector<double> values_;
};

VertexField operator+(const VertexField& a, const VertexField& b);
VertexField operator-(const VertexField& a, const VertexField& b);
VertexField operator*(double s, const VertexField& a);

/// Sup-norm distance.
double sup_distance(const VertexField& a, const VertexField& b);

struct Edge {
    std::size_t a;
    std::size_t b;
    double weight;
};

struct Neighbor {
    std::size_t vertex;
    double weight;
};

/// Finite connected graph with positive vertex measure and symmetric positive
/// edge weights. Immutable after construction; the vertex order fixed here is
/// the coordinate system for every field and matrix.
class WeightedGraph {
  public:
    /// Throws Error(Validation) on nonpositive or non-finite data, self-loops,
    /// repeated edges, out-of-range endpoints, or a disconnected vertex set.
    WeightedGraph(std::vector<std::string> labels, std::vector<double> mu, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::span<const double> mu() const noexcept { return mu_; }
    double mu(std::size_t x) const { return mu_[x]; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const Neighbor> neighbors(std::size_t x) const { return adjacency_[x]; }

    /// Throws Error(Alignment) when `f` is not a field on this graph.
    void check_aligned(const VertexField& f, const char* what = "field") const;

  private:
    std::vector<std::string> labels_;
    std::vector<double> mu_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

struct GraphConstants {
    double volume;
    double w0;   // min edge weight; 0 for an edgeless (single-vertex) graph
    double mu0;
    std::size_t diameter;  // shortest-path edge count, maximised over vertex pairs
    std::size_t ell;       // diameter + 1 (vertex count of a longest shortest path)
    std::optional<double> lambda1;  // absent on a single vertex
};

VertexField laplacian(const WeightedGraph& g, const VertexField& u);

/// Matrix of the Laplacian: row x holds -(1/mu(x)) sum w_xy on the diagonal
/// and w_xy/mu(x) at the neighbours.
DenseMatrix laplacian_matrix(const WeightedGraph& g);

/// Pointwise |grad u|^2 = (1/(2 mu(x))) sum_y w_xy (u(y) - u(x))^2.
VertexField gradient_norm_sq(const WeightedGraph& g, const VertexField& u);

double integrate(const WeightedGraph& g, const VertexField& f);
double average(const WeightedGraph& g, const VertexField& f);
double volume(const WeightedGraph& g);

/// Vol, w0, mu0, diameter and the spectral gap lambda1 of -Delta.
///
/// -Delta = M^{-1} L is only M-self-adjoint, so the gap is read from the
/// symmetric similarity M^{-1/2} L M^{-1/2}; its second smallest eigenvalue is
/// the infimum of the Rayleigh quotient int |grad v|^2 / int v^2 over
/// mean-zero v.
GraphConstants graph_constants(const WeightedGraph& g);

} // namespace tzitzeica
