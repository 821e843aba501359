#include "tzitzeica/graph.hpp"

#include "tzitzeica/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <utility>

namespace tzitzeica {

double VertexField::max() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double VertexField::min() const {
    return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double VertexField::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double VertexField::l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

bool VertexField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

VertexField operator+(const VertexField& a, const VertexField& b) {
    VertexField r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

VertexField operator-(const VertexField& a, const VertexField& b) {
    VertexField r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

VertexField operator*(double s, const VertexField& a) {
    VertexField r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

double sup_distance(const VertexField& a, const VertexField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

namespace {

// Breadth-first distances from `source`; max() marks unreachable vertices.
std::vector<std::size_t> bfs_distances(const std::vector<std::vector<Neighbor>>& adj, std::size_t source) {
    constexpr auto unreached = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(adj.size(), unreached);
    std::deque<std::size_t> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const std::size_t x = queue.front();
        queue.pop_front();
        for (const Neighbor& nb : adj[x]) {
            if (dist[nb.vertex] == unreached) {
                dist[nb.vertex] = dist[x] + 1;
                queue.push_back(nb.vertex);
            }
        }
    }
    return dist;
}

} // namespace

WeightedGraph::WeightedGraph(std::vector<std::string> labels, std::vector<double> mu, std::vector<Edge> edges)
    : labels_(std::move(labels)), mu_(std::move(mu)), edges_(std::move(edges)) {
    const std::size_t n = labels_.size();
    if (n == 0) throw Error(ErrorKind::Validation, "graph has no vertices");
    if (mu_.size() != n) throw Error(ErrorKind::Validation, "measure count does not match vertex count");
    for (std::size_t x = 0; x < n; ++x) {
        if (!std::isfinite(mu_[x]) || mu_[x] <= 0.0)
            throw Error(ErrorKind::Validation, "vertex '" + labels_[x] + "' has nonpositive measure");
    }
    std::set<std::string> names;
    for (const std::string& label : labels_)
        if (!names.insert(label).second) throw Error(ErrorKind::Validation, "vertex '" + label + "' declared twice");

    adjacency_.assign(n, {});
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const Edge& e : edges_) {
        if (e.a >= n || e.b >= n) throw Error(ErrorKind::Validation, "edge endpoint out of range");
        if (e.a == e.b) throw Error(ErrorKind::Validation, "self-loop at vertex '" + labels_[e.a] + "'");
        if (!std::isfinite(e.weight) || e.weight <= 0.0)
            throw Error(ErrorKind::Validation,
                        "edge '" + labels_[e.a] + "'-'" + labels_[e.b] + "' has nonpositive weight");
        if (!seen.insert(std::minmax(e.a, e.b)).second)
            throw Error(ErrorKind::Validation, "edge '" + labels_[e.a] + "'-'" + labels_[e.b] + "' declared twice");
        adjacency_[e.a].push_back({e.b, e.weight});
        adjacency_[e.b].push_back({e.a, e.weight});
    }

    const auto dist = bfs_distances(adjacency_, 0);
    for (std::size_t x = 0; x < n; ++x) {
        if (dist[x] == std::numeric_limits<std::size_t>::max())
            throw Error(ErrorKind::Validation,
                        "graph is disconnected: '" + labels_[0] + "' cannot reach '" + labels_[x] + "'");
    }
}

void WeightedGraph::check_aligned(const VertexField& f, const char* what) const {
    if (f.size() != vertex_count())
        throw Error(ErrorKind::Alignment, std::string(what) + " has " + std::to_string(f.size()) +
                                              " entries, graph has " + std::to_string(vertex_count()) + " vertices");
}

VertexField laplacian(const WeightedGraph& g, const VertexField& u) {
    g.check_aligned(u);
    VertexField out(g.vertex_count());
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
        double s = 0.0;
        for (const Neighbor& nb : g.neighbors(x)) s += nb.weight * (u[nb.vertex] - u[x]);
        out[x] = s / g.mu(x);
    }
    return out;
}

DenseMatrix laplacian_matrix(const WeightedGraph& g) {
    DenseMatrix m(g.vertex_count());
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
        for (const Neighbor& nb : g.neighbors(x)) {
            m(x, nb.vertex) += nb.weight / g.mu(x);
            m(x, x) -= nb.weight / g.mu(x);
        }
    }
    return m;
}

VertexField gradient_norm_sq(const WeightedGraph& g, const VertexField& u) {
    g.check_aligned(u);
    VertexField out(g.vertex_count());
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
        double s = 0.0;
        for (const Neighbor& nb : g.neighbors(x)) {
            const double d = u[nb.vertex] - u[x];
            s += nb.weight * d * d;
        }
        out[x] = s / (2.0 * g.mu(x));
    }
    return out;
}

double integrate(const WeightedGraph& g, const VertexField& f) {
    g.check_aligned(f);
    double s = 0.0;
    for (std::size_t x = 0; x < g.vertex_count(); ++x) s += g.mu(x) * f[x];
    return s;
}

double volume(const WeightedGraph& g) {
    double s = 0.0;
    for (double m : g.mu()) s += m;
    return s;
}

double average(const WeightedGraph& g, const VertexField& f) { return integrate(g, f) / volume(g); }

GraphConstants graph_constants(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    GraphConstants c{};
    c.volume = volume(g);
    c.mu0 = *std::min_element(g.mu().begin(), g.mu().end());
    c.w0 = 0.0;
    if (!g.edges().empty()) {
        c.w0 = std::numeric_limits<double>::infinity();
        for (const Edge& e : g.edges()) c.w0 = std::min(c.w0, e.weight);
    }

    std::vector<std::vector<Neighbor>> adj(n);
    for (std::size_t x = 0; x < n; ++x) adj[x].assign(g.neighbors(x).begin(), g.neighbors(x).end());
    c.diameter = 0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t d : bfs_distances(adj, s)) c.diameter = std::max(c.diameter, d);
    }
    c.ell = c.diameter + 1;

    if (n >= 2) {
        // M^{-1/2} L M^{-1/2} with L the weighted combinatorial Laplacian.
        DenseMatrix s(n);
        for (const Edge& e : g.edges()) {
            const double off = -e.weight / std::sqrt(g.mu(e.a) * g.mu(e.b));
            s(e.a, e.b) += off;
            s(e.b, e.a) += off;
            s(e.a, e.a) += e.weight / g.mu(e.a);
            s(e.b, e.b) += e.weight / g.mu(e.b);
        }
        c.lambda1 = symmetric_eigenvalues(std::move(s))[1];
    }
    return c;
}

} // namespace tzitzeica
