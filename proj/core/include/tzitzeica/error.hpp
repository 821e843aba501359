#pragma once

#include <stdexcept>
#include <string>

namespace tzitzeica {

enum class ErrorKind {
    Alignment,     // field length does not match the graph
    Validation,    // malformed graph or problem data
    Parse,         // graph file syntax
    Range,         // exponent cap exceeded / non-finite evaluation
    Inapplicable,  // hypothesis of a bound or construction violated
    Unsupported,   // operation not defined for this equation kind
    NoSolution,    // provably no solution exists
    Numerical      // non-convergence, degeneracy, broken continuation
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace tzitzeica
