#pragma once

#include <stdexcept>
#include <string>

namespace ltpmor {

// Numerical failures (CLI exit code 1). Usage errors are reported through
// std::invalid_argument (exit code 2), I/O failures through IoError (exit 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class SingularShiftError : public NumericalError {
 public:
  explicit SingularShiftError(const std::string& what) : NumericalError(what) {}
};

class SpectralOverlapError : public NumericalError {
 public:
  explicit SpectralOverlapError(const std::string& what) : NumericalError(what) {}
};

class NonHermitianError : public NumericalError {
 public:
  explicit NonHermitianError(const std::string& what) : NumericalError(what) {}
};

class InstabilityError : public NumericalError {
 public:
  explicit InstabilityError(const std::string& what) : NumericalError(what) {}
};

// Eigenvector matrix numerically rank deficient; simple-pole formulas refuse.
class DefectiveMatrixError : public NumericalError {
 public:
  explicit DefectiveMatrixError(const std::string& what) : NumericalError(what) {}
};

// |Im lambda(Q)| >= omega0: poles collide across frequency shells.
class SpectralGapError : public NumericalError {
 public:
  explicit SpectralGapError(const std::string& what) : NumericalError(what) {}
};

class SharedStateMatrixError : public NumericalError {
 public:
  explicit SharedStateMatrixError(const std::string& what) : NumericalError(what) {}
};

class FrequencyMismatchError : public NumericalError {
 public:
  explicit FrequencyMismatchError(const std::string& what) : NumericalError(what) {}
};

// Monodromy eigenvalue on the closed negative real axis: principal matrix
// logarithm undefined.
class LogBranchError : public NumericalError {
 public:
  explicit LogBranchError(const std::string& what) : NumericalError(what) {}
};

class RankDeficiencyError : public NumericalError {
 public:
  explicit RankDeficiencyError(const std::string& what) : NumericalError(what) {}
};

class ConvergenceError : public NumericalError {
 public:
  explicit ConvergenceError(const std::string& what) : NumericalError(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ltpmor
