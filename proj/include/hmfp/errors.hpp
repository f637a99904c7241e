#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmfp {

// Base for every library failure. Subclasses map onto CLI exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class GridMismatch : public Error {
  public:
    GridMismatch() : Error("fields live on different phase grids") {}
};

class NonConvergence : public Error {
  public:
    NonConvergence(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

  private:
    double last_residual_;
};

class SolverAbort : public Error {
  public:
    SolverAbort(const std::string& what, std::size_t step) : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

  private:
    std::size_t step_;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace hmfp
