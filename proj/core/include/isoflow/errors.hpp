#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isoflow {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid flow, tableau, variant or experiment configuration.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Iterative procedure (stage solver, eigenvalue QR) did not reach tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual,
                   std::size_t iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}

  double last_residual() const { return last_residual_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double last_residual_;
  std::size_t iterations_;
};

// Evaluation hit a singular point of B or H (e.g. colliding point vortices).
class SingularityError : public Error {
 public:
  using Error::Error;
};

// A convergence study had too few points above the round-off floor.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

}  // namespace isoflow
