#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace bqm {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind {
  DimensionMismatch,
  ZeroVector,
  InvalidSpace,
  InvalidDecomposition,
  NonDiagonalizable,
  UndefinedFunction,
  NotAProjection,
  ComplexSpectrum,
  DegenerateBasis,
  NonUnitState,
  NotPhysical,
  SingularPair,
  InvalidArgument,
  InvalidConfig,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::InvalidSpace: return "InvalidSpace";
    case ErrorKind::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorKind::NonDiagonalizable: return "NonDiagonalizable";
    case ErrorKind::UndefinedFunction: return "UndefinedFunction";
    case ErrorKind::NotAProjection: return "NotAProjection";
    case ErrorKind::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::NonUnitState: return "NonUnitState";
    case ErrorKind::NotPhysical: return "NotPhysical";
    case ErrorKind::SingularPair: return "SingularPair";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical thresholds shared by the whole library. All are absolute unless
/// noted; the defaults suit well-conditioned problems of dimension <= ~64.
struct Tolerances {
  /// Verdict band for 0 <= omega(P) <= 1 and the imaginary part of omega(P).
  double verdict = 1e-9;
  /// ||P^2 - P||_F, relative to max(1, ||P||_F^2).
  double projection = 1e-9;
  /// Unit-norm checks on state vectors.
  double unit = 1e-9;
  /// |sum of transition values - 1|.
  double conservation = 1e-8;
  /// Eigenvalues closer than grouping * (spectral diameter + 1) are merged.
  double grouping = 1e-8;
  /// Eigenvector matrices with 2-norm condition number above this are rejected.
  double max_condition = 1e12;
  /// |Im lambda| allowed for a spectrum to count as real.
  double real_spectrum = 1e-9;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, std::string_view what) {
  if (got != want) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": expected dimension " + std::to_string(want) +
                    ", got " + std::to_string(got));
  }
}

inline void require_square(const CMatrix& m, Eigen::Index dim, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", not square");
  }
  require_dim(m.rows(), dim, what);
}

}  // namespace bqm
