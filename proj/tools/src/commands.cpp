#include "tzitzeica_cli/commands.hpp"

#include "tzitzeica/degree.hpp"
#include "tzitzeica/error.hpp"
#include "tzitzeica/estimates.hpp"
#include "tzitzeica/graph.hpp"
#include "tzitzeica/model.hpp"
#include "tzitzeica/solvers.hpp"
#include "tzitzeica_cli/graph_document.hpp"
#include "tzitzeica_cli/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

namespace tzitzeica::cli {

namespace {

struct Options {
    std::string command;
    std::string graph_path;
    std::string equation;
    std::optional<double> A;
    std::optional<double> B;
    double tol = 1e-10;
    int max_iter = 200;
    int starts = 64;
    std::uint64_t seed = 0;
    std::optional<double> radius;
    std::string output;
    std::string format = "json";
    bool no_timestamp = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Alignment:
    case ErrorKind::Validation:
    case ErrorKind::Parse:
    case ErrorKind::Inapplicable:
    case ErrorKind::Unsupported:
        return kExitValidation;
    case ErrorKind::Range:
    case ErrorKind::NoSolution:
    case ErrorKind::Numerical:
        return kExitNumerical;
    }
    return kExitNumerical;
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

Json field_json(const VertexField& u) { return Json(std::vector<double>(u.begin(), u.end())); }

Json box_json(const AprioriBox& b) {
    return {{"lower", b.lower}, {"upper", b.upper}, {"radius", b.radius}, {"margin", b.margin}};
}

Json solve_report_json(const SolveReport& r) {
    Json j = {{"solution", field_json(r.solution)},
              {"residual_norm", r.residual_norm},
              {"iterations", r.iterations},
              {"jac_sign", r.jac_sign},
              {"converged", r.converged}};
    if (r.stage_t) j["t"] = *r.stage_t;
    return j;
}

Json degree_json(const DegreeReport& d) {
    Json roots = Json::array();
    for (std::size_t i = 0; i < d.solutions.size(); ++i) {
        roots.push_back({{"solution", field_json(d.solutions[i])},
                         {"sign", d.signs[i]},
                         {"residual_norm", d.residual_norms[i]}});
    }
    Json j = {{"degree", d.degree},
              {"roots", roots},
              {"radius", d.radius},
              {"starts_used", d.starts_used},
              {"confidence", to_string(d.confidence)},
              {"obstructed", d.obstructed}};
    if (d.stage_t) j["t"] = *d.stage_t;
    return j;
}

Json constants_json(const GraphConstants& c) {
    return {{"volume", c.volume},
            {"w0", c.w0},
            {"mu0", c.mu0},
            {"diameter", c.diameter},
            {"ell", c.ell},
            {"lambda1", c.lambda1 ? Json(*c.lambda1) : Json(nullptr)},
            {"elliptic_constant", elliptic_constant(c)}};
}

struct Context {
    const Options& opt;
    GraphDocument doc;
    WeightedGraph graph;
    ProblemSpec spec;
    SolverConfig cfg;
};

EquationKind resolve_kind(const Options& opt, const GraphDocument& doc) {
    if (opt.equation == "classic") return EquationKind::Classic;
    if (opt.equation == "generalized") return EquationKind::Generalized;
    if (!opt.equation.empty()) throw UsageError("--equation must be classic or generalized");
    if (doc.equation) return *doc.equation;
    throw UsageError("--equation is required (no 'param equation' line in the graph file)");
}

double resolve_exponent(const std::optional<double>& flag, const std::optional<double>& param, const char* name) {
    if (flag) return *flag;
    if (param) return *param;
    throw UsageError(std::string("--") + name + " is required (no 'param " + name + "' line in the graph file)");
}

Json cmd_solve(Context& ctx) {
    const TzitzeicaMap map(ctx.spec, ctx.graph);
    if (integral_obstruction(map)) throw Error(ErrorKind::NoSolution, "integral obstruction: no solution exists");

    Json result;
    SolveReport final;
    const auto box = applicable_box(ctx.spec, ctx.graph);
    if (ctx.spec.kind() == EquationKind::Classic && box) {
        const double eps = default_epsilon(ctx.spec);
        const auto grid = default_t_grid();
        const auto stages = continuation(ctx.spec, ctx.graph, grid, eps, ctx.cfg);
        final = stages.back();
        result["method"] = "continuation";
        result["epsilon"] = eps;
        result["stages"] = stages.size();
    } else {
        final = newton(ctx.spec, ctx.graph, VertexField(ctx.graph.vertex_count(), 0.0), ctx.cfg);
        result["method"] = "newton";
        if (!final.converged) throw Error(ErrorKind::Numerical, "newton did not converge");
    }
    result["solution"] = solve_report_json(final);
    result["inside_box"] = box ? Json(box->contains(final.solution)) : Json(nullptr);
    return result;
}

Json cmd_degree(Context& ctx) {
    DegreeReport d = ctx.graph.vertex_count() == 1 ? degree_single_vertex(ctx.spec, std::nullopt, ctx.opt.radius)
                                                   : estimate_degree(ctx.spec, ctx.graph, ctx.cfg, ctx.opt.starts);
    return degree_json(d);
}

Json cmd_bounds(Context& ctx) {
    Json result;
    const auto box = applicable_box(ctx.spec, ctx.graph);
    result["applicable"] = box.has_value();
    result["box"] = box ? box_json(*box) : Json(nullptr);
    if (box && ctx.spec.kind() == EquationKind::Generalized) {
        const auto c = generalized_chain(ctx.spec, ctx.graph);
        result["chain"] = {{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}};
    }
    if (box && ctx.spec.kind() == EquationKind::Classic) {
        const double eps = default_epsilon(ctx.spec);
        result["homotopy_box"] = box_json(bounds_classic_homotopy(ctx.spec, eps));
        result["epsilon"] = eps;
    }
    if (!box) {
        result["reason"] = ctx.spec.kind() == EquationKind::Classic
                               ? "classic a priori bounds need h2 < 0 at every vertex"
                               : "generalized a priori bounds need h1, h2 > 0 at every vertex";
    }
    return result;
}

Json cmd_multiplicity(Context& ctx) {
    const MultiplicityResult m = find_two_solutions(ctx.spec, ctx.graph, ctx.cfg);
    Json sols = Json::array();
    for (const SolveReport& r : m.solutions) sols.push_back(solve_report_json(r));
    return {{"branch", m.branch == MultiplicityBranch::AboveZero ? "above_zero" : "below_zero"},
            {"barriers",
             {{"delta", m.barriers.delta},
              {"beta", m.barriers.beta},
              {"mirrored", m.barriers.mirrored},
              {"lower", m.barriers.lower()},
              {"upper", m.barriers.upper()}}},
            {"solutions", sols},
            {"separation", sup_distance(m.solutions[0].solution, m.solutions[1].solution)}};
}

VertexField random_field(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    VertexField u(n);
    for (double& v : u.values()) v = dist(rng);
    return u;
}

Json cmd_check(Context& ctx, std::vector<std::string>& violations) {
    const WeightedGraph& g = ctx.graph;
    const std::size_t n = g.vertex_count();
    std::mt19937_64 rng(ctx.opt.seed);
    Json checks;

    auto record = [&](const std::string& name, bool passed, Json detail) {
        detail["passed"] = passed;
        checks[name] = std::move(detail);
        if (!passed) violations.push_back(name);
    };

    {
        const GraphConstants gc = graph_constants(g);
        const double C = elliptic_constant(gc);
        int bad = 0;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const VertexField u = random_field(rng, n, 1.0);
            const double osc = u.max() - u.min();
            const double rhs = C * laplacian(g, u).sup_norm();
            if (osc > rhs * (1.0 + 1e-12) + 1e-14) ++bad;
            if (rhs > 0.0) worst = std::max(worst, osc / rhs);
        }
        record("elliptic_estimate", bad == 0, {{"fields", 100}, {"violations", bad}, {"max_ratio", worst}, {"C", C}});
    }
    {
        double weight_sum = 0.0;
        for (const Edge& e : g.edges()) weight_sum += e.weight;
        int bad_div = 0;
        int bad_ibp = 0;
        for (int i = 0; i < 100; ++i) {
            const VertexField u = random_field(rng, n, 1.0);
            const VertexField lap = laplacian(g, u);
            if (std::abs(integrate(g, lap)) > 1e-10 * (1.0 + u.sup_norm() * weight_sum)) ++bad_div;
            const double lhs = integrate(g, gradient_norm_sq(g, u));
            VertexField ulap(n);
            for (std::size_t x = 0; x < n; ++x) ulap[x] = u[x] * lap[x];
            const double rhs = -integrate(g, ulap);
            if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(lhs))) ++bad_ibp;
        }
        record("divergence_identity", bad_div == 0, {{"fields", 100}, {"violations", bad_div}});
        record("integration_by_parts", bad_ibp == 0, {{"fields", 100}, {"violations", bad_ibp}});
    }
    {
        int bad = 0;
        for (int i = 0; i < 20; ++i) {
            const DenseMatrix J = jacobian(ctx.spec, g, random_field(rng, n, 1.0));
            const double scale = std::max(1.0, J.norm_inf());
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = x + 1; y < n; ++y)
                    if (std::abs(g.mu(x) * J(x, y) - g.mu(y) * J(y, x)) > 1e-12 * scale) ++bad;
        }
        record("jacobian_mu_symmetry", bad == 0, {{"fields", 20}, {"violations", bad}});
    }
    if (ctx.spec.kind() == EquationKind::Generalized) {
        constexpr double tau = 1e-6;
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const VertexField u = random_field(rng, n, 0.5);
            const VertexField grad = energy_gradient(ctx.spec, g, u);
            for (std::size_t x = 0; x < n; ++x) {
                VertexField up = u, um = u;
                up[x] += tau;
                um[x] -= tau;
                const double fd = (energy(ctx.spec, g, up) - energy(ctx.spec, g, um)) / (2.0 * tau * g.mu(x));
                worst = std::max(worst, std::abs(fd - grad[x]) / std::max(1.0, std::abs(grad[x])));
            }
        }
        record("energy_gradient", worst <= 1e-5, {{"fields", 50}, {"max_relative_error", worst}, {"step", tau}});
    }
    if (ctx.spec.kind() == EquationKind::Classic && ctx.spec.h2().min() >= 0.0) {
        int bad = 0;
        double least = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 100; ++i) {
            const double v = integrate(g, residual(ctx.spec, g, random_field(rng, n, 2.0)));
            least = std::min(least, v);
            if (!(v > 0.0)) ++bad;
        }
        record("integral_obstruction", bad == 0, {{"fields", 100}, {"violations", bad}, {"min_integral", least}});
    }
    if (applicable_box(ctx.spec, g)) {
        const std::vector<double> ts{0.0, 0.5, 1.0};
        const auto inv = verify_homotopy_invariance(ctx.spec, g, ctx.cfg, ts, ctx.opt.starts);
        Json degrees = Json::array();
        for (const DegreeReport& d : inv.stages) degrees.push_back({{"t", *d.stage_t}, {"degree", d.degree}});
        record("homotopy_invariance", inv.consistent, {{"stages", degrees}});
    }
    return {{"checks", checks}, {"violations", violations}};
}

Options parse_options(const std::vector<std::string>& args, CLI::App& app) {
    Options opt;
    app.require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> commands{
        {"solve", "continuation + Newton for one solution"},
        {"degree", "estimate the Brouwer degree on the a priori ball"},
        {"bounds", "a priori box and graph constants"},
        {"multiplicity", "two distinct solutions of the generalized equation"},
        {"check", "invariant audit; nonzero exit on any violation"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("graph", opt.graph_path, "graph file")->required();
        sub->add_option("--equation", opt.equation, "classic | generalized");
        sub->add_option("--A", opt.A, "exponent A > 0");
        sub->add_option("--B", opt.B, "exponent B > 0");
        sub->add_option("--tol", opt.tol, "residual sup-norm tolerance")->capture_default_str();
        sub->add_option("--max-iter", opt.max_iter, "Newton iteration cap")->capture_default_str();
        sub->add_option("--starts", opt.starts, "multi-start points per batch for degree estimation")->capture_default_str();
        sub->add_option("--seed", opt.seed, "start-point sequence offset")->capture_default_str();
        sub->add_option("--radius", opt.radius, "degree ball radius override");
        sub->add_option("--output", opt.output, "report path (default stdout)");
        sub->add_option("--format", opt.format, "json | text")
            ->check(CLI::IsMember({"json", "text"}))
            ->capture_default_str();
        sub->add_flag("--no-timestamp", opt.no_timestamp, "omit wall time from the report");
        sub->callback([&opt, name = name] { opt.command = name; });
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    return opt;
}

} // namespace

CliResult run(const std::vector<std::string>& args) {
    CliResult res;
    CLI::App app{"Tzitzeica equations on weighted graphs", "tzitzeica"};
    Options opt;
    try {
        opt = parse_options(args, app);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            res.stdout_text = app.help();
            return res;
        }
        res.exit_code = kExitUsage;
        res.stderr_text = "usage error: " + one_line(e.what()) + "\n";
        return res;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Json report = {{"schema_version", 1}, {"command", opt.command}, {"input", opt.graph_path}};
    std::vector<std::string> violations;
    try {
        GraphDocument doc = parse_graph(opt.graph_path);
        const EquationKind kind = resolve_kind(opt, doc);
        const double A = resolve_exponent(opt.A, doc.A, "A");
        const double B = resolve_exponent(opt.B, doc.B, "B");
        if (opt.starts <= 0) throw UsageError("--starts must be positive");
        if (opt.radius && !(*opt.radius > 0.0)) throw UsageError("--radius must be positive");

        SolverConfig cfg;
        cfg.tol = opt.tol;
        cfg.max_iter = opt.max_iter;
        cfg.seed = opt.seed;
        cfg.radius = opt.radius;
        cfg.validate();

        report["config"] = {{"equation", to_string(kind)},
                            {"A", A},
                            {"B", B},
                            {"tol", cfg.tol},
                            {"max_iter", cfg.max_iter},
                            {"starts", opt.starts},
                            {"seed", opt.seed},
                            {"radius", opt.radius ? Json(*opt.radius) : Json(nullptr)},
                            {"deflation_radius", cfg.deflation_radius}};

        WeightedGraph graph = doc.graph();
        ProblemSpec spec(kind, doc.h1(), doc.h2(), A, B);
        report["graph"] = {{"labels", graph.labels()},
                           {"vertices", graph.vertex_count()},
                           {"edges", graph.edges().size()},
                           {"constants", constants_json(graph_constants(graph))}};

        Context ctx{opt, std::move(doc), std::move(graph), std::move(spec), cfg};
        if (opt.command == "solve") report["result"] = cmd_solve(ctx);
        else if (opt.command == "degree") report["result"] = cmd_degree(ctx);
        else if (opt.command == "bounds") report["result"] = cmd_bounds(ctx);
        else if (opt.command == "multiplicity") report["result"] = cmd_multiplicity(ctx);
        else report["result"] = cmd_check(ctx, violations);

        if (!violations.empty()) {
            std::string names;
            for (const auto& v : violations) names += (names.empty() ? "" : ", ") + v;
            throw Error(ErrorKind::Numerical, "invariant violated: " + names);
        }
        report["status"] = "ok";
        report["exit_code"] = kExitOk;
    } catch (const UsageError& e) {
        res.exit_code = kExitUsage;
        res.stderr_text = "usage error: " + one_line(e.what()) + "\n";
        return res;
    } catch (const Error& e) {
        res.exit_code = exit_code_for(e.kind());
        report["status"] = "error";
        report["exit_code"] = res.exit_code;
        report["error"] = {{"kind", to_string(e.kind())}, {"reason", one_line(e.what())}};
        res.stderr_text = std::string("error: ") + to_string(e.kind()) + ": " + one_line(e.what()) + "\n";
    } catch (const std::exception& e) {
        res.exit_code = kExitNumerical;
        report["status"] = "error";
        report["exit_code"] = res.exit_code;
        report["error"] = {{"kind", "internal"}, {"reason", one_line(e.what())}};
        res.stderr_text = std::string("error: internal: ") + one_line(e.what()) + "\n";
    }

    if (!opt.no_timestamp) {
        report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    const std::string text = opt.format == "text" ? dump_text(report) : dump_json(report);
    if (opt.output.empty()) {
        res.stdout_text = text;
    } else {
        std::ofstream out(opt.output, std::ios::binary);
        out << text;
        if (!out) {
            res.exit_code = kExitValidation;
            res.stderr_text += "error: validation: cannot write report to '" + opt.output + "'\n";
        }
    }
    return res;
}

} // namespace tzitzeica::cli
