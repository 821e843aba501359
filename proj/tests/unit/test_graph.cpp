#include <doctest.h>

#include "test_support.hpp"
#include "tzitzeica/error.hpp"
#include "tzitzeica/estimates.hpp"
#include "tzitzeica/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace tzitzeica;

namespace {

// Smallest nonzero eigenvalue of the pencil L v = lambda M v, with L the
// combinatorial Laplacian and M = diag(mu).
double lambda1_pencil(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        L(e.a, e.a) += e.weight;
        L(e.b, e.b) += e.weight;
        L(e.a, e.b) -= e.weight;
        L(e.b, e.a) -= e.weight;
    }
    for (std::size_t x = 0; x < n; ++x) M(x, x) = g.mu(x);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(L, M);
    return solver.eigenvalues()(1);
}

WeightedGraph p3() { return WeightedGraph({"x", "y", "z"}, {1.0, 2.0, 1.0}, {{0, 1, 1.0}, {1, 2, 3.0}}); }

} // namespace

TEST_SUITE("graph") {

TEST_CASE("Laplacian on K2") {
    const VertexField lap = laplacian(tzt::k2(), {0.0, 1.0});
    CHECK(lap == VertexField{1.0, -1.0});
}

TEST_CASE("Laplacian of a constant vanishes") {
    tzt::Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const WeightedGraph g = tzt::random_graph(rng, tzt::uniform_int(rng, 1, 10));
        const VertexField lap = laplacian(g, VertexField(g.vertex_count(), tzt::uniform(rng, -5.0, 5.0)));
        CHECK(lap.sup_norm() == 0.0);
    }
}

TEST_CASE("Laplacian on the weighted path matches the double-loop sum") {
    const WeightedGraph g = p3();
    const VertexField u{1.0, 0.0, 2.0};
    const VertexField lap = laplacian(g, u);
    const VertexField ref = tzt::laplacian_oracle(g, u);
    for (std::size_t x = 0; x < 3; ++x) CHECK(std::abs(lap[x] - ref[x]) <= 1e-14);
    // Hand values: x: (0-1)*1 = -1; y: (1*(1-0) + 3*(2-0))/2 = 3.5; z: 3*(0-2) = -6.
    CHECK(ref == VertexField{-1.0, 3.5, -6.0});
}

TEST_CASE("Laplacian matrix") {
    const DenseMatrix m = laplacian_matrix(tzt::k2());
    CHECK(m(0, 0) == -1.0);
    CHECK(m(0, 1) == 1.0);
    CHECK(m(1, 0) == 1.0);
    CHECK(m(1, 1) == -1.0);

    const WeightedGraph g = p3();
    const DenseMatrix l = laplacian_matrix(g);
    const std::vector<double> ones(3, 1.0);
    for (double v : l.multiply(ones)) CHECK(std::abs(v) <= 1e-15);
    tzt::Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const VertexField u = tzt::random_field(rng, 3, -3.0, 3.0);
        const std::vector<double> lu = l.multiply(u.values());
        const VertexField op = laplacian(g, u);
        for (std::size_t x = 0; x < 3; ++x) CHECK(std::abs(lu[x] - op[x]) <= 1e-14);
    }
}

TEST_CASE("gradient form") {
    CHECK(gradient_norm_sq(tzt::k2(), {0.0, 1.0}) == VertexField{0.5, 0.5});
    CHECK(gradient_norm_sq(p3(), VertexField(3, 4.0)).sup_norm() == 0.0);

    tzt::Rng rng(4);
    const WeightedGraph g = p3();
    for (int trial = 0; trial < 50; ++trial) {
        const VertexField u = tzt::random_field(rng, 3, -2.0, 2.0);
        const VertexField grad = gradient_norm_sq(g, u);
        CHECK(grad.min() >= 0.0);
        const double lhs = integrate(g, grad);
        const double rhs = -tzt::mu_integral(g, VertexField([&] {
            const VertexField lap = tzt::laplacian_oracle(g, u);
            std::vector<double> prod(3);
            for (std::size_t x = 0; x < 3; ++x) prod[x] = u[x] * lap[x];
            return prod;
        }()));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("integral, average, volume") {
    tzt::Rng rng(5);
    const WeightedGraph g = tzt::random_graph(rng, 4);
    CHECK(integrate(g, VertexField(4, 1.0)) == doctest::Approx(volume(g)).epsilon(1e-15));
    CHECK(integrate(g, VertexField(4, 0.0)) == 0.0);
    const VertexField f{-1.5, 2.0, 0.25, -3.0};
    CHECK(std::abs(integrate(g, f) - tzt::mu_integral(g, f)) <= 1e-14);

    CHECK(average(g, VertexField(4, 2.5)) == doctest::Approx(2.5).epsilon(1e-15));
    VertexField balanced{1.0, 0.0, 0.0, 0.0};
    balanced[1] = -g.mu(0) / g.mu(1);
    CHECK(std::abs(average(g, balanced)) <= 1e-15);
    for (int trial = 0; trial < 20; ++trial) {
        const VertexField r = tzt::random_field(rng, 4, -5.0, 5.0);
        double vol = 0.0;
        for (std::size_t x = 0; x < 4; ++x) vol += g.mu(x);
        CHECK(std::abs(average(g, r) - tzt::mu_integral(g, r) / vol) <= 1e-14);
    }
}

TEST_CASE("constants of K2") {
    const GraphConstants c = graph_constants(tzt::k2());
    REQUIRE(c.lambda1.has_value());
    CHECK(*c.lambda1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c.volume == 2.0);
    CHECK(c.w0 == 1.0);
    CHECK(c.mu0 == 1.0);
    CHECK(c.diameter == 1);
    CHECK(c.ell == 2);
    CHECK(elliptic_constant(tzt::k2()) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("single vertex has no spectral gap") {
    const GraphConstants c = graph_constants(tzt::single_vertex(2.0));
    CHECK_FALSE(c.lambda1.has_value());
    CHECK(c.volume == 2.0);
    CHECK(c.w0 == 0.0);
    CHECK(c.diameter == 0);
    CHECK(elliptic_constant(tzt::single_vertex()) == 0.0);
}

TEST_CASE("spectral gap agrees with a generalized eigensolver") {
    tzt::Rng rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = trial < 10 ? 6 : tzt::uniform_int(rng, 2, 14);
        const WeightedGraph g = tzt::random_graph(rng, n);
        const double ref = lambda1_pencil(g);
        const double got = *graph_constants(g).lambda1;
        CHECK(std::abs(got - ref) <= 1e-9 * ref);
    }
}

TEST_CASE("spectral gap is invariant under vertex reordering") {
    tzt::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = tzt::uniform_int(rng, 2, 10);
        const WeightedGraph g = tzt::random_graph(rng, n);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const GraphConstants a = graph_constants(g);
        const GraphConstants b = graph_constants(tzt::permuted(g, perm));
        CHECK(std::abs(*a.lambda1 - *b.lambda1) <= 1e-12 * *a.lambda1);
        CHECK(a.diameter == b.diameter);
        CHECK(a.volume == doctest::Approx(b.volume).epsilon(1e-15));
    }
}

TEST_CASE("diameter of a path and of a complete graph") {
    const WeightedGraph path({"a", "b", "c", "d", "e"}, {1, 1, 1, 1, 1},
                             {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}});
    CHECK(graph_constants(path).diameter == 4);
    CHECK(graph_constants(path).ell == 5);
    std::vector<Edge> all;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b) all.push_back({a, b, 0.5});
    const GraphConstants c = graph_constants(WeightedGraph({"a", "b", "c", "d"}, {1, 1, 1, 1}, all));
    CHECK(c.diameter == 1);
    CHECK(c.w0 == 0.5);
}

TEST_CASE("construction rejects invalid data") {
    auto kind_of = [](auto&& make) {
        try {
            make();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Numerical;
    };
    CHECK(kind_of([] { WeightedGraph({"a", "b"}, {1.0, 0.0}, {{0, 1, 1.0}}); }) == ErrorKind::Validation);
    CHECK(kind_of([] { WeightedGraph({"a", "b"}, {1.0, 1.0}, {{0, 1, -1.0}}); }) == ErrorKind::Validation);
    CHECK(kind_of([] { WeightedGraph({"a", "b"}, {1.0, 1.0}, {{0, 0, 1.0}, {0, 1, 1.0}}); }) ==
          ErrorKind::Validation);
    CHECK(kind_of([] { WeightedGraph({"a", "b"}, {1.0, 1.0}, {{0, 1, 1.0}, {1, 0, 1.0}}); }) ==
          ErrorKind::Validation);
    CHECK(kind_of([] { WeightedGraph({"a", "a"}, {1.0, 1.0}, {{0, 1, 1.0}}); }) == ErrorKind::Validation);
    CHECK(kind_of([] { WeightedGraph({"a", "b"}, {1.0, 1.0}, {{0, 2, 1.0}}); }) == ErrorKind::Validation);

    try {
        WeightedGraph({"a", "b", "c"}, {1.0, 1.0, 1.0}, {{0, 1, 1.0}});
        FAIL("disconnected graph accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
        const std::string msg = e.what();
        CHECK(msg.find('c') != std::string::npos);
        CHECK(msg.find('a') != std::string::npos);
    }
}

TEST_CASE("misaligned fields are rejected") {
    CHECK_THROWS_AS(laplacian(tzt::k2(), VertexField{1.0}), Error);
    try {
        integrate(tzt::k2(), VertexField{1.0, 2.0, 3.0});
        FAIL("misaligned field accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Alignment);
    }
}

TEST_CASE("divergence identity") {
    tzt::Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const WeightedGraph g = tzt::random_graph(rng, tzt::uniform_int(rng, 1, 12));
        const VertexField u = tzt::random_field(rng, g.vertex_count(), -10.0, 10.0);
        const double total = integrate(g, laplacian(g, u));
        CHECK(std::abs(total) <= 1e-10 * (1.0 + u.sup_norm() * tzt::sum_weights(g)));
    }
}

TEST_CASE("integration by parts") {
    tzt::Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedGraph g = tzt::random_graph(rng, tzt::uniform_int(rng, 2, 12));
        const VertexField u = tzt::random_field(rng, g.vertex_count(), -3.0, 3.0);
        const VertexField lap = laplacian(g, u);
        VertexField prod(u.size());
        for (std::size_t x = 0; x < u.size(); ++x) prod[x] = u[x] * lap[x];
        const double lhs = integrate(g, gradient_norm_sq(g, u));
        const double rhs = -integrate(g, prod);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("elliptic estimate audit") {
    tzt::Rng rng(10);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedGraph g = tzt::random_graph(rng, tzt::uniform_int(rng, 2, 12));
        const double C = elliptic_constant(g);
        const VertexField u = tzt::random_field(rng, g.vertex_count(), -4.0, 4.0);
        if (u.max() - u.min() > C * laplacian(g, u).sup_norm()) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("Poincare step for mean-zero fields") {
    tzt::Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedGraph g = tzt::random_graph(rng, tzt::uniform_int(rng, 2, 12));
        const double lambda1 = *graph_constants(g).lambda1;
        VertexField u = tzt::random_field(rng, g.vertex_count(), -2.0, 2.0);
        u = u - VertexField(u.size(), average(g, u));
        const VertexField lap = laplacian(g, u);
        VertexField sq(u.size());
        for (std::size_t x = 0; x < u.size(); ++x) sq[x] = lap[x] * lap[x];
        const double lhs = integrate(g, gradient_norm_sq(g, u));
        const double rhs = integrate(g, sq) / lambda1;
        CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
}

}
