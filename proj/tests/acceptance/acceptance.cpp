// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
// Ensembles are drawn from fixed seeds. Graphs have 1 to 12 vertices, vertex
// measures in (0.5, 1.5) and edge weights in (0.5, 2).

#include "test_support.hpp"
#include "tzitzeica/degree.hpp"
#include "tzitzeica/error.hpp"
#include "tzitzeica/estimates.hpp"
#include "tzitzeica/solvers.hpp"
#include "tzitzeica_cli/commands.hpp"
#include "tzitzeica_cli/graph_document.hpp"
#include "tzitzeica_cli/report.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace tzitzeica;
namespace fs = std::filesystem;
using Json = cli::Json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (failures.size() < 5) failures.push_back(what);
    }
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("tzitzeica-acceptance-" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
}

std::string document_text(const WeightedGraph& g, const VertexField& h1, const VertexField& h2) {
    cli::GraphDocument doc;
    for (std::size_t x = 0; x < g.vertex_count(); ++x) doc.vertices.push_back({g.labels()[x], g.mu(x), h1[x], h2[x]});
    for (const Edge& e : g.edges()) doc.edges.push_back({g.labels()[e.a], g.labels()[e.b], e.weight});
    return cli::serialize(doc);
}

std::vector<std::string> model_flags(const ProblemSpec& spec) {
    return {"--equation", to_string(spec.kind()), "--A", cli::format_double(spec.A()), "--B",
            cli::format_double(spec.B()), "--no-timestamp"};
}

cli::CliResult run_cli(const std::string& command, const std::string& file, const ProblemSpec& spec,
                       std::vector<std::string> extra = {}) {
    std::vector<std::string> args{command, file};
    for (auto& f : model_flags(spec)) args.push_back(f);
    for (auto& f : extra) args.push_back(f);
    return cli::run(args);
}

// Minority roots of the generalized map can have basins of about 1% of the
// ball, so the generalized degree ensemble runs 128 starts per batch.
constexpr int kGeneralizedStarts = 128;

std::string str(double v) { return cli::format_double(v); }

std::size_t graph_size(tzt::Rng& rng, std::size_t lo, std::size_t hi) { return tzt::uniform_int(rng, lo, hi); }

// ---------------------------------------------------------------------------

Outcome existence_branch() {
    Outcome o;
    tzt::Rng rng(101);
    const int instances = 50;
    int degree_one = 0;
    double worst_residual = 0.0;
    for (int i = 0; i < instances; ++i) {
        const std::size_t n = graph_size(rng, 1, 12);
        const WeightedGraph g = tzt::random_graph(rng, n);
        const ProblemSpec spec = tzt::random_spec(rng, EquationKind::Classic, n, 0.5, 2.0, -2.0, -0.5);
        try {
            const auto stages = continuation(spec, g, default_t_grid(), default_epsilon(spec), SolverConfig{});
            const SolveReport& last = stages.back();
            const SolveReport polished = newton(spec, g, last.solution, SolverConfig{});
            const double res = residual(spec, g, polished.solution).sup_norm();
            worst_residual = std::max(worst_residual, res);
            o.expect(polished.converged && res < 1e-10, "instance " + std::to_string(i) + ": residual " + str(res));
            o.expect(tzt::within(bounds_classic(spec), polished.solution), "instance " + std::to_string(i) + ": outside box");
            const DegreeReport d = estimate_degree(spec, g, SolverConfig{}, 64);
            if (d.degree == 1) ++degree_one;
            o.expect(d.degree == 1, "instance " + std::to_string(i) + ": degree " + std::to_string(d.degree));
        } catch (const std::exception& e) {
            o.expect(false, "instance " + std::to_string(i) + ": " + e.what());
        }
    }
    o.detail = std::to_string(instances) + " instances, degree 1 in " + std::to_string(degree_one) +
               ", worst residual " + str(worst_residual);
    return o;
}

Outcome nonexistence_branch() {
    Outcome o;
    tzt::Rng rng(202);
    const int instances = 50;
    int fields = 0;
    int exit3 = 0;
    for (int i = 0; i < instances; ++i) {
        const std::size_t n = graph_size(rng, 1, 12);
        const WeightedGraph g = tzt::random_graph(rng, n);
        const ProblemSpec spec = tzt::random_spec(rng, EquationKind::Classic, n, 0.5, 2.0, 0.5, 2.0);
        for (int f = 0; f < 100; ++f) {
            const VertexField u = tzt::random_field(rng, n, -5.0, 5.0);
            double integral = 0.0;
            for (std::size_t x = 0; x < n; ++x)
                integral += g.mu(x) * tzt::classic_term(spec.h1()[x], spec.h2()[x], spec.A(), spec.B(), u[x]);
            ++fields;
            o.expect(integral > 0.0, "instance " + std::to_string(i) + ": nonpositive integral");
            o.expect(integrate(g, residual(spec, g, u)) > 0.0, "instance " + std::to_string(i) + ": residual integral");
        }
        const DegreeReport d = estimate_degree(spec, g, SolverConfig{}, 64);
        o.expect(d.degree == 0 && d.solutions.empty(), "instance " + std::to_string(i) + ": degree nonzero");
        const std::string file = write_file("nonexist.graph", document_text(g, spec.h1(), spec.h2()));
        const cli::CliResult r = run_cli("solve", file, spec);
        const bool ok = r.exit_code == cli::kExitNumerical &&
                        Json::parse(r.stdout_text)["error"]["reason"] == "integral obstruction: no solution exists";
        if (ok) ++exit3;
        o.expect(ok, "instance " + std::to_string(i) + ": solve exit " + std::to_string(r.exit_code));
    }
    o.detail = std::to_string(instances) + " instances, " + std::to_string(fields) +
               " fields with positive integral, solve exit 3 in " + std::to_string(exit3);
    return o;
}

Outcome generalized_degree_zero() {
    Outcome o;
    tzt::Rng rng(303);
    const int instances = 50;
    int zero = 0;
    std::size_t most_roots = 0;
    for (int i = 0; i < instances; ++i) {
        const std::size_t n = graph_size(rng, 1, 12);
        const WeightedGraph g = tzt::random_graph(rng, n);
        const ProblemSpec spec = tzt::random_spec(rng, EquationKind::Generalized, n, 0.5, 2.0, 0.5, 2.0);
        try {
            const DegreeReport d = estimate_degree(spec, g, SolverConfig{}, kGeneralizedStarts);
            most_roots = std::max(most_roots, d.solutions.size());
            if (d.degree == 0) ++zero;
            o.expect(d.degree == 0, "instance " + std::to_string(i) + " (n=" + std::to_string(n) + "): degree " +
                                        std::to_string(d.degree) + " from " + std::to_string(d.solutions.size()) +
                                        " roots");
        } catch (const std::exception& e) {
            o.expect(false, "instance " + std::to_string(i) + ": " + e.what());
        }
    }
    int scalar_zero = 0;
    const int scalars = 50;
    for (int i = 0; i < scalars; ++i) {
        const ProblemSpec spec = tzt::random_spec(rng, EquationKind::Generalized, 1, 0.5, 2.0, 0.5, 2.0);
        const DegreeReport d = degree_single_vertex(spec);
        if (d.degree == 0) ++scalar_zero;
        o.expect(d.confidence == Confidence::Proven && d.degree == 0,
                 "scalar draw " + std::to_string(i) + ": degree " + std::to_string(d.degree));
    }
    o.detail = std::to_string(zero) + "/" + std::to_string(instances) + " graphs with degree 0 (up to " +
               std::to_string(most_roots) + " roots), " + std::to_string(scalar_zero) + "/" +
               std::to_string(scalars) + " exhaustive scalar sums 0";
    return o;
}

ProblemSpec multiplicity_draw(tzt::Rng& rng, std::size_t n, bool above) {
    for (;;) {
        ProblemSpec spec = tzt::random_spec(rng, EquationKind::Generalized, n, 0.5, 2.0, 0.5, 2.0);
        const double A = spec.A();
        const double B = spec.B();
        const bool holds = above ? A * spec.h1().max() < B * spec.h2().min() : A * spec.h1().min() > B * spec.h2().max();
        if (holds) return spec;
    }
}

Outcome multiplicity() {
    Outcome o;
    tzt::Rng rng(404);
    int good[2] = {0, 0};
    const int per_branch = 20;
    for (int branch = 0; branch < 2; ++branch) {
        const bool above = branch == 0;
        for (int i = 0; i < per_branch; ++i) {
            const std::size_t n = graph_size(rng, 1, 12);
            const WeightedGraph g = tzt::random_graph(rng, n);
            const ProblemSpec spec = multiplicity_draw(rng, n, above);
            const std::string file = write_file("mult.graph", document_text(g, spec.h1(), spec.h2()));
            const cli::CliResult r = run_cli("multiplicity", file, spec);
            const std::string tag = std::string(above ? "above" : "below") + " instance " + std::to_string(i);
            if (r.exit_code != cli::kExitOk) {
                o.expect(false, tag + ": exit " + std::to_string(r.exit_code) + " " + r.stderr_text);
                continue;
            }
            const Json j = Json::parse(r.stdout_text)["result"];
            const auto& sols = j["solutions"];
            if (sols.size() != 2) {
                o.expect(false, tag + ": " + std::to_string(sols.size()) + " solutions");
                continue;
            }
            const VertexField zero(sols[0]["solution"].get<std::vector<double>>());
            const VertexField other(sols[1]["solution"].get<std::vector<double>>());
            const double lo = j["barriers"]["lower"].get<double>();
            const double hi = j["barriers"]["upper"].get<double>();
            bool ok = zero.sup_norm() <= 1e-10 && sup_distance(zero, other) > 1e-3;
            for (double v : other) ok = ok && (above ? v > 0.0 : v < 0.0) && v > lo && v < hi;
            ok = ok && (above ? lo > 0.0 : hi < 0.0);
            ok = ok && residual(spec, g, other).sup_norm() < 1e-10;
            if (ok) ++good[branch];
            o.expect(ok, tag + ": solutions do not match the expected shape");
        }
    }
    o.detail = std::to_string(good[0]) + "/" + std::to_string(per_branch) + " above-zero and " +
               std::to_string(good[1]) + "/" + std::to_string(per_branch) + " below-zero instances";
    return o;
}

Outcome elliptic_estimate() {
    Outcome o;
    tzt::Rng rng(505);
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const WeightedGraph g = tzt::random_graph(rng, graph_size(rng, 2, 12));
        const GraphConstants c = graph_constants(g);
        const double C = std::sqrt(static_cast<double>(c.diameter) * c.volume / (c.w0 * *c.lambda1));
        o.expect(std::abs(C - elliptic_constant(g)) <= 1e-14 * C, "constant mismatch");
        const VertexField u = tzt::random_field(rng, g.vertex_count(), -3.0, 3.0);
        const double lhs = u.max() - u.min();
        const double rhs = C * laplacian(g, u).sup_norm();
        worst = std::max(worst, lhs / rhs);
        if (lhs > rhs) ++violations;
    }
    o.expect(violations == 0, std::to_string(violations) + " violations");
    const VertexField u{0.0, 1.0};
    const double ratio = (u.max() - u.min()) / (elliptic_constant(tzt::k2()) * laplacian(tzt::k2(), u).sup_norm());
    o.expect(std::abs(ratio - 1.0) <= 1e-12, "K2 ratio " + str(ratio));
    o.detail = "500 pairs, " + std::to_string(violations) + " violations, worst ratio " + str(worst) +
               ", K2 ratio " + str(ratio);
    return o;
}

Outcome homotopy_uniform_bounds() {
    Outcome o;
    tzt::Rng rng(606);
    int checked = 0;
    const int instances = 30;
    for (int i = 0; i < instances; ++i) {
        const std::size_t n = graph_size(rng, 1, 12);
        const WeightedGraph g = tzt::random_graph(rng, n);
        const ProblemSpec spec = tzt::random_spec(rng, EquationKind::Generalized, n, 0.5, 2.0, 0.5, 2.0);
        const AprioriBox box = bounds_generalized(spec, g);
        std::vector<SolveReport> stages;
        try {
            stages = continuation(spec, g, default_t_grid(), 0.0, SolverConfig{});
        } catch (const ContinuationError& e) {
            stages = e.stages();
        }
        for (const SolveReport& s : stages) {
            ++checked;
            o.expect(tzt::within(box, s.solution), "instance " + std::to_string(i) + ": stage outside box");
        }
        // Every other root of the deformed map on the grid as well.
        for (int k = 0; k <= 10; k += 2) {
            const DegreeReport d = estimate_degree(spec, g, SolverConfig{}, 32, HomotopyParams{k / 10.0, 0.0});
            for (const VertexField& root : d.solutions) {
                ++checked;
                o.expect(tzt::within(box, root), "instance " + std::to_string(i) + ": root outside box at t=" +
                                                 std::to_string(k / 10.0));
            }
        }
    }
    o.detail = std::to_string(instances) + " instances, " + std::to_string(checked) +
               " stage and grid solutions inside the box";
    return o;
}

Outcome variational_identity() {
    Outcome o;
    tzt::Rng rng(707);
    const double tau = 1e-6;
    double worst = 0.0;
    const int instances = 20;
    for (int i = 0; i < instances; ++i) {
        const std::size_t n = graph_size(rng, 1, 12);
        const WeightedGraph g = tzt::random_graph(rng, n);
        const ProblemSpec spec = tzt::random_spec(rng, EquationKind::Generalized, n, 0.5, 2.0, 0.5, 2.0);
        for (int f = 0; f < 50; ++f) {
            const VertexField u = tzt::random_field(rng, n, -1.0, 1.0);
            const VertexField grad = energy_gradient(spec, g, u);
            for (std::size_t x = 0; x < n; ++x) {
                VertexField up = u;
                VertexField down = u;
                up[x] += tau;
                down[x] -= tau;
                const double fd = (energy(spec, g, up) - energy(spec, g, down)) / (2.0 * tau) / g.mu(x);
                worst = std::max(worst, std::abs(fd - grad[x]) / std::max(1.0, std::abs(grad[x])));
            }
        }
    }
    o.expect(worst <= 1e-5, "max relative error " + str(worst));
    int monotone = 0;
    int steps = 0;
    for (int i = 0; i < instances; ++i) {
        const std::size_t n = graph_size(rng, 1, 12);
        const WeightedGraph g = tzt::random_graph(rng, n);
        const ProblemSpec spec = multiplicity_draw(rng, n, true);
        const SolveReport r = minimize_box(spec, g, choose_barriers(spec, g), SolverConfig{});
        bool ok = true;
        for (std::size_t k = 1; k < r.energy_history.size(); ++k) ok = ok && r.energy_history[k] <= r.energy_history[k - 1];
        steps += static_cast<int>(r.energy_history.size()) - 1;
        if (ok) ++monotone;
        o.expect(ok, "box minimization " + std::to_string(i) + ": energy increased");
    }
    o.detail = "max relative FD error " + str(worst) + " over " + std::to_string(instances * 50) +
               " fields; J monotone in " + std::to_string(monotone) + "/" + std::to_string(instances) + " runs (" +
               std::to_string(steps) + " steps)";
    return o;
}

// Roots of the scalar map and their derivative signs, from test-side formulas.
std::pair<std::vector<double>, int> scalar_oracle(EquationKind kind, double h1, double h2, double A, double B,
                                                  double lo, double hi) {
    auto f = [&](double u) {
        return kind == EquationKind::Classic ? tzt::classic_term(h1, h2, A, B, u)
                                             : tzt::generalized_term(h1, h2, A, B, u);
    };
    std::vector<double> roots = tzt::scalar_roots(f, lo, hi);
    int degree = 0;
    for (double r : roots) degree += (f(r + 1e-7) - f(r - 1e-7)) > 0.0 ? 1 : -1;
    return {roots, degree};
}

Outcome oracle_equivalence() {
    Outcome o;
    tzt::Rng rng(808);
    int solves = 0;
    int degrees = 0;
    double worst = 0.0;
    for (int i = 0; i < 60; ++i) {
        const bool classic = i % 2 == 0;
        const bool single = i % 4 < 2;
        const std::size_t n = single ? 1 : graph_size(rng, 2, 12);
        const WeightedGraph g = tzt::random_graph(rng, n);
        const double h1 = tzt::uniform(rng, 0.5, 2.0);
        const double h2 = classic ? tzt::uniform(rng, -2.0, -0.5) : tzt::uniform(rng, 0.5, 2.0);
        const double A = tzt::uniform(rng, 0.5, 2.0);
        const double B = tzt::uniform(rng, 0.5, 2.0);
        if (!classic && std::abs(A * h1 - B * h2) < 1e-3) continue;
        const EquationKind kind = classic ? EquationKind::Classic : EquationKind::Generalized;
        const ProblemSpec spec(kind, VertexField(n, h1), VertexField(n, h2), A, B);
        const AprioriBox box = *applicable_box(spec, g);
        const auto [roots, oracle_degree] = scalar_oracle(kind, h1, h2, A, B, box.lower - 1.0, box.upper + 1.0);
        const std::string tag = std::string(classic ? "classic" : "generalized") + " n=" + std::to_string(n);
        try {
            if (classic) {
                const auto stages = continuation(spec, g, default_t_grid(), default_epsilon(spec), SolverConfig{});
                const VertexField& u = stages.back().solution;
                o.expect(roots.size() == 1, tag + ": scalar oracle root count");
                for (double v : u) worst = std::max(worst, std::abs(v - roots.at(0)));
            } else {
                const double nonzero = std::abs(roots.at(0)) > std::abs(roots.at(1)) ? roots.at(0) : roots.at(1);
                if (A * h1 == B * h2) continue;
                const bool above = A * h1 < B * h2;
                const MultiplicityResult m = find_two_solutions(spec, g, SolverConfig{});
                o.expect(above == (m.branch == MultiplicityBranch::AboveZero), tag + ": branch");
                for (double v : m.solutions[1].solution) worst = std::max(worst, std::abs(v - nonzero));
                for (double v : m.solutions[0].solution) worst = std::max(worst, std::abs(v));
            }
            ++solves;
            const DegreeReport multi = estimate_degree(spec, g, SolverConfig{}, 64);
            const DegreeReport exhaustive = degree_single_vertex(ProblemSpec(kind, {h1}, {h2}, A, B));
            o.expect(multi.degree == exhaustive.degree && exhaustive.degree == oracle_degree,
                     tag + ": degrees " + std::to_string(multi.degree) + " / " + std::to_string(exhaustive.degree) +
                         " / " + std::to_string(oracle_degree));
            ++degrees;
        } catch (const std::exception& e) {
            o.expect(false, tag + ": " + e.what());
        }
    }
    o.expect(worst <= 1e-6, "worst deviation " + str(worst));
    o.detail = std::to_string(solves) + " solver comparisons (worst deviation " + str(worst) + "), " +
               std::to_string(degrees) + " degree comparisons";
    return o;
}

// --- fuzzing ---------------------------------------------------------------

struct ProcessResult {
    bool exited = false;
    int code = -1;
    std::string out;
};

ProcessResult run_binary(const std::vector<std::string>& args) {
    const std::string out_path = (scratch_dir() / "proc.out").string();
    std::string cmd = "'" TZITZEICA_CLI_PATH "'";
    for (const std::string& a : args) cmd += " '" + a + "'";
    cmd += " > '" + out_path + "' 2>/dev/null";
    const int status = std::system(cmd.c_str());
    ProcessResult r;
    r.exited = status != -1 && WIFEXITED(status);
    if (r.exited) r.code = WEXITSTATUS(status);
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string join(const std::vector<std::string>& lines) {
    std::string s;
    for (const auto& l : lines) s += l + "\n";
    return s;
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> t;
    for (std::string w; in >> w;) t.push_back(w);
    return t;
}

std::string untokens(const std::vector<std::string>& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + t[i];
    return s;
}

// A valid document, then one defect that the format rules out.
std::string malformed(tzt::Rng& rng, int kind) {
    const std::size_t n = tzt::uniform_int(rng, 2, 8);
    const WeightedGraph g = tzt::random_graph(rng, n);
    const VertexField h1 = tzt::random_field(rng, n, 0.5, 2.0);
    const VertexField h2 = tzt::random_field(rng, n, -2.0, -0.5);
    std::vector<std::string> lines = lines_of(document_text(g, h1, h2));
    const std::size_t nv = n;
    const std::size_t ne = lines.size() - nv;
    const std::size_t v = tzt::uniform_int(rng, 0, nv - 1);
    const std::size_t e = nv + tzt::uniform_int(rng, 0, ne - 1);
    const std::size_t anywhere = tzt::uniform_int(rng, 0, lines.size());
    static const char* bad_numbers[] = {"abc", "1.2.3", "--1", "1e", "nan", "inf", "-inf", "0x", "1,5", "", "1e999"};
    auto bad_number = [&] {
        std::string s = bad_numbers[tzt::uniform_int(rng, 0, std::size(bad_numbers) - 1)];
        return s.empty() ? std::string("+") : s;
    };
    switch (kind) {
    case 0: {  // nonpositive measure
        auto t = tokens(lines[v]);
        t[2] = tzt::uniform_int(rng, 0, 1) ? "0" : "-" + str(tzt::uniform(rng, 0.1, 3.0));
        lines[v] = untokens(t);
        break;
    }
    case 1: {  // nonpositive h1
        auto t = tokens(lines[v]);
        t[3] = tzt::uniform_int(rng, 0, 1) ? "0" : "-" + str(tzt::uniform(rng, 0.1, 3.0));
        lines[v] = untokens(t);
        break;
    }
    case 2: {  // nonpositive weight
        auto t = tokens(lines[e]);
        t[3] = tzt::uniform_int(rng, 0, 1) ? "-0" : "-" + str(tzt::uniform(rng, 0.1, 3.0));
        lines[e] = untokens(t);
        break;
    }
    case 3: {  // unparsable number in a vertex or edge line
        const bool vertex = tzt::uniform_int(rng, 0, 1);
        auto t = tokens(lines[vertex ? v : e]);
        t[vertex ? tzt::uniform_int(rng, 2, 4) : 3] = bad_number();
        lines[vertex ? v : e] = untokens(t);
        break;
    }
    case 4: {  // missing or extra field
        auto t = tokens(lines[tzt::uniform_int(rng, 0, 1) ? v : e]);
        if (tzt::uniform_int(rng, 0, 1)) t.pop_back();
        else t.push_back("7");
        lines[tzt::uniform_int(rng, 0, 1) ? v : e] = untokens(t);
        lines.push_back(untokens(t));
        break;
    }
    case 5:  // unknown record keyword
        lines.insert(lines.begin() + anywhere, std::string(tzt::uniform_int(rng, 0, 1) ? "vertx" : "node") + " q 1 1 1");
        break;
    case 6:  // duplicate vertex label
        lines.insert(lines.begin() + anywhere, lines[v]);
        break;
    case 7:  // undeclared endpoint
        lines.insert(lines.begin() + anywhere, "edge " + g.labels()[v] + " ghost" + std::to_string(v) + " 1");
        break;
    case 8:  // self-loop
        lines.insert(lines.begin() + anywhere, "edge " + g.labels()[v] + " " + g.labels()[v] + " 1");
        break;
    case 9: {  // repeated edge, possibly reversed
        auto t = tokens(lines[e]);
        if (tzt::uniform_int(rng, 0, 1)) std::swap(t[1], t[2]);
        lines.push_back(untokens(t));
        break;
    }
    case 10:  // isolated vertex
        lines.push_back("vertex island 1 1 -1");
        break;
    case 11: {  // binary garbage line
        std::string junk(1, static_cast<char>(tzt::uniform_int(rng, 1, 31)));
        for (int k = 0; k < 8; ++k) junk += static_cast<char>(tzt::uniform_int(rng, 33, 255));
        lines.insert(lines.begin() + anywhere, junk);
        break;
    }
    case 12: {  // malformed parameter
        static const char* params[] = {"param equation cubic", "param A -1", "param B 0", "param C 1",
                                       "param A", "param equation"};
        lines.insert(lines.begin() + anywhere, params[tzt::uniform_int(rng, 0, std::size(params) - 1)]);
        break;
    }
    case 13:  // no vertices at all
        lines.assign({"# empty", ""});
        break;
    default: {  // truncated mid-line
        std::string text = join(lines);
        const std::size_t cut = text.find(' ', tzt::uniform_int(rng, 0, text.size() / 2));
        text = text.substr(0, cut == std::string::npos ? text.size() / 2 : cut);
        // A cut right after a complete record is still valid; force a dangling field count.
        return text + "\nvertex cut";
    }
    }
    return join(lines);
}

Outcome determinism_and_fuzz() {
    Outcome o;
    tzt::Rng rng(909);

    // Byte-identical reports across repeated runs.
    int identical = 0;
    int compared = 0;
    for (int i = 0; i < 6; ++i) {
        const std::size_t n = graph_size(rng, 2, 6);
        const WeightedGraph g = tzt::random_graph(rng, n);
        const bool classic = i % 2 == 0;
        const ProblemSpec spec = classic ? tzt::random_spec(rng, EquationKind::Classic, n, 0.5, 2.0, -2.0, -0.5)
                                         : multiplicity_draw(rng, n, i % 4 == 1);
        const std::string file = write_file("det.graph", document_text(g, spec.h1(), spec.h2()));
        std::vector<std::string> commands{"solve", "degree", "bounds", "check"};
        if (!classic) commands.push_back("multiplicity");
        for (const std::string& c : commands) {
            std::vector<std::string> args{c, file};
            for (auto& f : model_flags(spec)) args.push_back(f);
            args.push_back("--seed");
            args.push_back(std::to_string(i));
            const ProcessResult a = run_binary(args);
            const ProcessResult b = run_binary(args);
            ++compared;
            const bool same = a.exited && b.exited && a.code == b.code && a.out == b.out && !a.out.empty();
            if (same) ++identical;
            o.expect(same, c + " report differs between runs");
        }
    }

    const std::regex located(R"(^line [0-9]+: |^graph is disconnected: '[^']+' cannot reach '[^']+'$)");
    const int fuzz = 1000;
    int located_exit2 = 0;
    int crashes = 0;
    for (int i = 0; i < fuzz; ++i) {
        const std::string file = write_file("fuzz.graph", malformed(rng, i % 15));
        const ProcessResult r = run_binary({"degree", file, "--equation", "classic", "--A", "1", "--B", "1"});
        if (!r.exited) {
            ++crashes;
            o.expect(false, "fuzz case " + std::to_string(i) + " did not exit normally");
            continue;
        }
        std::string reason;
        try {
            reason = Json::parse(r.out)["error"]["reason"].get<std::string>();
        } catch (const std::exception&) {
        }
        const bool ok = r.code == cli::kExitValidation && std::regex_search(reason, located);
        if (ok) ++located_exit2;
        o.expect(ok, "fuzz case " + std::to_string(i) + " (kind " + std::to_string(i % 15) + "): exit " +
                         std::to_string(r.code) + " reason '" + reason + "'");
    }
    o.detail = std::to_string(identical) + "/" + std::to_string(compared) + " repeated reports identical; " +
               std::to_string(located_exit2) + "/" + std::to_string(fuzz) + " malformed files gave a located exit 2, " +
               std::to_string(crashes) + " crashes";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "classic existence, h2 < 0", existence_branch},
        {2, "classic non-existence, h2 > 0", nonexistence_branch},
        {3, "generalized degree zero", generalized_degree_zero},
        {4, "generalized multiplicity", multiplicity},
        {5, "elliptic estimate", elliptic_estimate},
        {6, "homotopy-uniform generalized bounds", homotopy_uniform_bounds},
        {7, "variational identity and monotone descent", variational_identity},
        {8, "scalar oracle equivalence", oracle_equivalence},
        {9, "determinism and malformed input", determinism_and_fuzz},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("aborted: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.1fs", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << " ("
                  << timing << ")\n";
        for (const std::string& f : o.failures) std::cout << "        " << f << "\n";
        if (!o.pass) ++failed;
    }
    std::error_code ec;
    fs::remove_all(scratch_dir(), ec);
    std::cout << (failed ? "FAILED: " : "ALL PASSED: ") << criteria.size() - failed << "/" << criteria.size()
              << " criteria\n";
    return failed ? 1 : 0;
}
