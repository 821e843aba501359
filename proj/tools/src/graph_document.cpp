#include "tzitzeica_cli/graph_document.hpp"

#include "tzitzeica/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace tzitzeica::cli {

namespace {

[[noreturn]] void fail(ErrorKind kind, int line, const std::string& msg) {
    throw Error(kind, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

double number(std::string_view token, int line, const char* what) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last)
        fail(ErrorKind::Parse, line, std::string("invalid number for ") + what + ": '" + std::string(token) + "'");
    if (!std::isfinite(v)) fail(ErrorKind::Validation, line, std::string(what) + " must be finite");
    return v;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

GraphDocument parse_graph_text(std::string_view text) {
    GraphDocument doc;
    std::map<std::string, std::size_t, std::less<>> index;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tok = split(line);
        if (tok.empty()) {
            if (eol == text.size()) break;
            continue;
        }

        if (tok[0] == "vertex") {
            if (tok.size() != 5) fail(ErrorKind::Parse, line_no, "expected 'vertex <label> <mu> <h1> <h2>'");
            VertexRecord v{std::string(tok[1]), number(tok[2], line_no, "mu"), number(tok[3], line_no, "h1"),
                           number(tok[4], line_no, "h2"), line_no};
            if (v.mu <= 0.0) fail(ErrorKind::Validation, line_no, "vertex '" + v.label + "' has nonpositive mu");
            if (v.h1 <= 0.0) fail(ErrorKind::Validation, line_no, "vertex '" + v.label + "' has nonpositive h1");
            if (!index.emplace(v.label, doc.vertices.size()).second)
                fail(ErrorKind::Validation, line_no, "duplicate vertex '" + v.label + "'");
            doc.vertices.push_back(std::move(v));
        } else if (tok[0] == "edge") {
            if (tok.size() != 4) fail(ErrorKind::Parse, line_no, "expected 'edge <labelA> <labelB> <weight>'");
            EdgeRecord e{std::string(tok[1]), std::string(tok[2]), number(tok[3], line_no, "weight"), line_no};
            doc.edges.push_back(std::move(e));
        } else if (tok[0] == "param") {
            if (tok.size() != 3) fail(ErrorKind::Parse, line_no, "expected 'param <name> <value>'");
            if (tok[1] == "equation") {
                if (tok[2] == "classic") doc.equation = EquationKind::Classic;
                else if (tok[2] == "generalized") doc.equation = EquationKind::Generalized;
                else fail(ErrorKind::Parse, line_no, "equation must be classic or generalized");
            } else if (tok[1] == "A" || tok[1] == "B") {
                const double v = number(tok[2], line_no, tok[1] == "A" ? "A" : "B");
                if (v <= 0.0) fail(ErrorKind::Validation, line_no, "exponents must be positive");
                (tok[1] == "A" ? doc.A : doc.B) = v;
            } else {
                fail(ErrorKind::Parse, line_no, "unknown parameter '" + std::string(tok[1]) + "'");
            }
        } else {
            fail(ErrorKind::Parse, line_no, "unknown record '" + std::string(tok[0]) + "'");
        }
        if (eol == text.size()) break;
    }

    // Edges may precede the vertices they mention, so references resolve after the scan.
    std::map<std::pair<std::size_t, std::size_t>, int> seen;
    for (const EdgeRecord& e : doc.edges) {
        const auto ia = index.find(e.a);
        const auto ib = index.find(e.b);
        if (ia == index.end()) fail(ErrorKind::Validation, e.line, "edge endpoint '" + e.a + "' is not a declared vertex");
        if (ib == index.end()) fail(ErrorKind::Validation, e.line, "edge endpoint '" + e.b + "' is not a declared vertex");
        if (ia->second == ib->second) fail(ErrorKind::Validation, e.line, "self-loop at '" + e.a + "'");
        if (e.weight <= 0.0) fail(ErrorKind::Validation, e.line, "edge '" + e.a + "'-'" + e.b + "' has nonpositive weight");
        const auto key = std::minmax(ia->second, ib->second);
        if (const auto [it, fresh] = seen.emplace(key, e.line); !fresh)
            fail(ErrorKind::Validation, e.line,
                 "edge '" + e.a + "'-'" + e.b + "' repeats line " + std::to_string(it->second));
    }
    if (doc.vertices.empty()) throw Error(ErrorKind::Validation, "line " + std::to_string(line_no) + ": no vertices declared");
    (void)doc.graph();  // connectivity
    return doc;
}

GraphDocument parse_graph(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Validation, "cannot read graph file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph_text(ss.str());
}

WeightedGraph GraphDocument::graph() const {
    std::map<std::string, std::size_t, std::less<>> index;
    std::vector<std::string> labels;
    std::vector<double> mu;
    for (const VertexRecord& v : vertices) {
        index.emplace(v.label, labels.size());
        labels.push_back(v.label);
        mu.push_back(v.mu);
    }
    std::vector<Edge> es;
    for (const EdgeRecord& e : edges) es.push_back({index.at(e.a), index.at(e.b), e.weight});
    return WeightedGraph(std::move(labels), std::move(mu), std::move(es));
}

VertexField GraphDocument::h1() const {
    VertexField f(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) f[i] = vertices[i].h1;
    return f;
}

VertexField GraphDocument::h2() const {
    VertexField f(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) f[i] = vertices[i].h2;
    return f;
}

bool operator==(const GraphDocument& a, const GraphDocument& b) {
    auto same_vertex = [](const VertexRecord& x, const VertexRecord& y) {
        return x.label == y.label && x.mu == y.mu && x.h1 == y.h1 && x.h2 == y.h2;
    };
    auto same_edge = [](const EdgeRecord& x, const EdgeRecord& y) {
        return x.a == y.a && x.b == y.b && x.weight == y.weight;
    };
    return std::equal(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(), same_vertex) &&
           std::equal(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(), same_edge) &&
           a.equation == b.equation && a.A == b.A && a.B == b.B;
}

std::string serialize(const GraphDocument& doc) {
    std::string out;
    if (doc.equation) out += std::string("param equation ") + to_string(*doc.equation) + "\n";
    if (doc.A) out += "param A " + format_number(*doc.A) + "\n";
    if (doc.B) out += "param B " + format_number(*doc.B) + "\n";
    for (const VertexRecord& v : doc.vertices)
        out += "vertex " + v.label + " " + format_number(v.mu) + " " + format_number(v.h1) + " " +
               format_number(v.h2) + "\n";
    for (const EdgeRecord& e : doc.edges) out += "edge " + e.a + " " + e.b + " " + format_number(e.weight) + "\n";
    return out;
}

} // namespace tzitzeica::cli
