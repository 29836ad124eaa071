#pragma once

#include <stdexcept>
#include <string>

namespace bilateral {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class InfeasibleObstacles : public Error {
 public:
  using Error::Error;
};

class UnsupportedControlKind : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its iteration cap. Carries the best residual seen.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations, double best_residual)
      : Error(what), iterations_(iterations), best_residual_(best_residual) {}

  int iterations() const noexcept { return iterations_; }
  double best_residual() const noexcept { return best_residual_; }

 private:
  int iterations_;
  double best_residual_;
};

class ComplementarityViolated : public Error {
 public:
  using Error::Error;
};

class NotMonotonePair : public Error {
 public:
  using Error::Error;
};

class InvalidD : public Error {
 public:
  using Error::Error;
};

class InvalidPartition : public Error {
 public:
  using Error::Error;
};

class InvalidBeta : public Error {
 public:
  using Error::Error;
};

class EvaluationDomain : public Error {
 public:
  using Error::Error;
};

class NoClosedFormGradient : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bilateral
