#pragma once

#include "tzitzeica/graph.hpp"
#include "tzitzeica/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tzitzeica::cli {

struct VertexRecord {
    std::string label;
    double mu;
    double h1;
    double h2;
    int line = 0;
};

struct EdgeRecord {
    std::string a;
    std::string b;
    double weight;
    int line = 0;
};

/// Parsed graph file. Line-oriented:
///
///     # comment
///     vertex <label> <mu> <h1> <h2>
///     edge <labelA> <labelB> <weight>
///     param equation classic|generalized
///     param A <value>
///     param B <value>
///
/// `param` lines are optional defaults; command-line flags override them.
struct GraphDocument {
    std::vector<VertexRecord> vertices;
    std::vector<EdgeRecord> edges;
    std::optional<EquationKind> equation;
    std::optional<double> A;
    std::optional<double> B;

    WeightedGraph graph() const;
    VertexField h1() const;
    VertexField h2() const;

    friend bool operator==(const GraphDocument&, const GraphDocument&);
};

/// Throws Error(Parse) for syntax problems and Error(Validation) for bad data;
/// messages start with "line N:" or name the offending labels.
GraphDocument parse_graph_text(std::string_view text);
GraphDocument parse_graph(const std::filesystem::path& path);

/// Inverse of parse_graph_text, numbers written with 17 significant digits.
std::string serialize(const GraphDocument& doc);

} // namespace tzitzeica::cli
