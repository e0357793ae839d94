#pragma once

#include <stdexcept>
#include <string>

namespace wente {

/// Invalid sizes, levels, exponents or other caller-supplied parameters.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A field descriptor produced a non-finite value at a grid node.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// The radial tridiagonal system could not be factored.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Zero denominators in ratio reports and similar degenerate inputs.
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

/// Two fields live on different grids.
class GridMismatchError : public std::invalid_argument {
public:
    explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace wente
