#pragma once

// Worked qubit examples on (C^2, ||.||_p): the Pauli matrices with their
// explicit eigenprojections, and the general oblique pair E_x, E_y built from
// two independent unit vectors. Each scenario carries a closed-form
// physicality test at pure states that is independent of the generic
// predicate in states.hpp.
//
// For a unit z = u|0> + v|1> with u, v != 0:
//   sigma_1 is physical iff 1 +/- (v/u |u|^p + u/v |v|^p)   >= 0,
//   sigma_2 is physical iff 1 +/- i (v/u |u|^p - u/v |v|^p) >= 0,
//   sigma_3 is physical everywhere (its event values are |u|^p and |v|^p);
// sigma_1 and sigma_2 are also physical whenever u = 0 or v = 0. The
// conditions above are twice the event values [E z, z]_p, so they are
// compared against twice the verdict tolerance.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "bqm/sip_space.hpp"
#include "bqm/spectral.hpp"
#include "bqm/types.hpp"

namespace bqm {

enum class ScenarioKind { Pauli1, Pauli2, Pauli3, Oblique };

struct ConditionValues {
  Complex plus;
  Complex minus;
};

inline CMatrix pauli_matrix(int index) {
  CMatrix m(2, 2);
  switch (index) {
    case 1: m << 0.0, 1.0, 1.0, 0.0; break;
    case 2: m << 0.0, -kI, kI, 0.0; break;
    case 3: m << 1.0, 0.0, 0.0, -1.0; break;
    default: throw Error(ErrorKind::InvalidArgument, "pauli index must be 1, 2 or 3");
  }
  return m;
}

class QubitScenario {
 public:
  QubitScenario(std::string name, ScenarioKind kind, PSpace space, CMatrix matrix, SpectralDecomposition h,
                CVector x = {}, CVector y = {})
      : name_(std::move(name)),
        kind_(kind),
        space_(std::move(space)),
        matrix_(std::move(matrix)),
        hamiltonian_(std::move(h)),
        x_(std::move(x)),
        y_(std::move(y)) {}

  const std::string& name() const noexcept { return name_; }
  ScenarioKind kind() const noexcept { return kind_; }
  const PSpace& space() const noexcept { return space_; }
  const CMatrix& matrix() const noexcept { return matrix_; }
  const SpectralDecomposition& hamiltonian() const noexcept { return hamiltonian_; }

  /// Closed-form condition values at a unit z; physical iff both are real and
  /// nonnegative. plus belongs to the first atom, minus to the second. For
  /// sigma_1 / sigma_2 with u = 0 or v = 0 the ratio terms are taken as 0.
  ConditionValues condition_values(const CVector& z) const {
    require_dim(z.size(), 2, "condition_values");
    const Complex u = z[0];
    const Complex v = z[1];
    const double p = space_.p();
    switch (kind_) {
      case ScenarioKind::Pauli1: {
        if (u == 0.0 || v == 0.0) return {1.0, 1.0};
        const Complex s = v / u * std::pow(std::abs(u), p) + u / v * std::pow(std::abs(v), p);
        return {1.0 + s, 1.0 - s};
      }
      case ScenarioKind::Pauli2: {
        if (u == 0.0 || v == 0.0) return {1.0, 1.0};
        // 2 [E_x z, z] = 1 - iY here, so the sign flips relative to sigma_1.
        const Complex s = kI * (v / u * std::pow(std::abs(u), p) - u / v * std::pow(std::abs(v), p));
        return {1.0 - s, 1.0 + s};
      }
      case ScenarioKind::Pauli3: {
        const double scale = std::pow(space_.norm(z), 2.0 - p);
        return {scale * std::pow(std::abs(u), p), scale * std::pow(std::abs(v), p)};
      }
      case ScenarioKind::Oblique: {
        // E_x z = (d u - c v)/(ad - cb) x,  E_y z = (-b u + a v)/(ad - cb) y
        const Complex a = x_[0], b = x_[1], c = y_[0], d = y_[1];
        const Complex det = a * d - c * b;
        const CVector ex = (d * u - c * v) / det * x_;
        const CVector ey = (-b * u + a * v) / det * y_;
        return {space_.sip(ex, z), space_.sip(ey, z)};
      }
    }
    return {0.0, 0.0};
  }

  /// Amount by which w misses the half-line [0, inf): max(|Im w|, -Re w).
  static double violation(Complex w) noexcept { return std::max(std::abs(w.imag()), -w.real()); }

  /// Tolerance band applied to the condition values.
  double band(double tol) const noexcept { return kind_ == ScenarioKind::Oblique ? tol : 2.0 * tol; }

  /// Closed-form physicality of the scenario operator at the pure state z.
  bool closed_form(const CVector& z, double tol = 1e-9) const {
    if (kind_ == ScenarioKind::Pauli3) return true;
    const ConditionValues c = condition_values(z);
    return std::max(violation(c.plus), violation(c.minus)) <= band(tol);
  }

  /// Distance of z from the verdict boundary, measured on the condition
  /// values; small values mark states whose verdict hinges on rounding.
  /// Imaginary parts below half the band are settled and do not count.
  double boundary_distance(const CVector& z, double tol = 1e-9) const {
    if (kind_ == ScenarioKind::Pauli3) return std::numeric_limits<double>::infinity();
    const ConditionValues c = condition_values(z);
    const double b = band(tol);
    double d = std::min(std::abs(c.plus.real() + b), std::abs(c.minus.real() + b));
    for (Complex w : {c.plus, c.minus}) {
      if (std::abs(w.imag()) > 0.5 * b) d = std::min(d, std::abs(std::abs(w.imag()) - b));
    }
    return d;
  }

 private:
  std::string name_;
  ScenarioKind kind_;
  PSpace space_;
  CMatrix matrix_;
  SpectralDecomposition hamiltonian_;
  CVector x_;
  CVector y_;
};

/// sigma_index = E_x - E_y with the explicit projections
///   sigma_1: E_x = (1/2)[[1, 1], [1, 1]],   E_y = (1/2)[[1, -1], [-1, 1]]
///   sigma_2: E_x = (1/2)[[1, -i], [i, 1]],  E_y = (1/2)[[1, i], [-i, 1]]
///   sigma_3: E_x = diag(1, 0),              E_y = diag(0, 1)
inline QubitScenario pauli(const PSpace& space, int index, const Tolerances& tol = {}) {
  if (space.dim() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "pauli scenarios need a two-dimensional space");
  }
  CMatrix ex(2, 2), ey(2, 2);
  ScenarioKind kind{};
  switch (index) {
    case 1:
      ex << 0.5, 0.5, 0.5, 0.5;
      ey << 0.5, -0.5, -0.5, 0.5;
      kind = ScenarioKind::Pauli1;
      break;
    case 2:
      ex << 0.5, -0.5 * kI, 0.5 * kI, 0.5;
      ey << 0.5, 0.5 * kI, -0.5 * kI, 0.5;
      kind = ScenarioKind::Pauli2;
      break;
    case 3:
      ex << 1.0, 0.0, 0.0, 0.0;
      ey << 0.0, 0.0, 0.0, 1.0;
      kind = ScenarioKind::Pauli3;
      break;
    default: throw Error(ErrorKind::InvalidArgument, "pauli index must be 1, 2 or 3");
  }
  SpectralDecomposition h({{1.0, ex}, {-1.0, ey}}, tol);
  return {"pauli" + std::to_string(index), kind, space, pauli_matrix(index), std::move(h)};
}

/// H = lambda1 E_x + lambda2 E_y for unit x = (a, b), y = (c, d) with
/// ad - cb != 0, where
///   E_x z = (du - cv)/(ad - cb) x,   E_y z = (-bu + av)/(ad - cb) y.
inline QubitScenario oblique_qubit(const PSpace& space, const CVector& x, const CVector& y, double lambda1,
                                   double lambda2, const Tolerances& tol = {}) {
  if (space.dim() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "oblique scenario needs a two-dimensional space");
  }
  require_dim(x.size(), 2, "oblique x");
  require_dim(y.size(), 2, "oblique y");
  for (const CVector* w : {&x, &y}) {
    const double n = space.norm(*w);
    if (std::abs(n - 1.0) > tol.unit) {
      throw Error(ErrorKind::NonUnitState, "oblique scenario vectors must be unit, got norm " + std::to_string(n));
    }
  }
  if (!(lambda1 != lambda2) || !std::isfinite(lambda1) || !std::isfinite(lambda2)) {
    throw Error(ErrorKind::InvalidArgument, "oblique scenario needs two distinct finite energies");
  }
  const Complex a = x[0], b = x[1], c = y[0], d = y[1];
  const Complex det = a * d - c * b;
  if (std::abs(det) < tol.projection) {
    throw Error(ErrorKind::SingularPair, "oblique scenario: ad - cb vanishes, x and y are dependent");
  }
  CMatrix ex(2, 2), ey(2, 2);
  ex << a * d, -a * c, b * d, -b * c;
  ey << -c * b, c * a, -d * b, d * a;
  ex /= det;
  ey /= det;
  SpectralDecomposition h({{lambda1, ex}, {lambda2, ey}}, tol);
  CMatrix m = lambda1 * ex + lambda2 * ey;
  return {"oblique", ScenarioKind::Oblique, space, std::move(m), std::move(h), x, y};
}

}  // namespace bqm
