#pragma once

// l_p^n spaces and their canonical Lumer semi-inner product.
//
// For y != 0 the duality map is
//   w_i(y) = ||y||_p^(2-p) * sign(conj(y_i)) * |y_i|^(p-1),  sign(0) = 0,
// and the semi-inner product is [x, y]_p = sum_i x_i w_i(y). It is linear in
// x, satisfies [x, x] = ||x||^2 and |[x, y]|^2 <= [x, x][y, y], and at p = 2
// reduces to the Hilbert inner product sum_i x_i conj(y_i).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <string>

#include "bqm/types.hpp"

namespace bqm {

/// Any normed space equipped with a fixed semi-inner product that the state,
/// measurement and dynamics layers can run on.
template <class S>
concept SemiInnerProductSpace = requires(const S& s, const CVector& x) {
  { s.dim() } -> std::convertible_to<Eigen::Index>;
  { s.norm(x) } -> std::convertible_to<double>;
  { s.sip(x, x) } -> std::convertible_to<Complex>;
  { s.dual(x) } -> std::convertible_to<CVector>;
};

namespace detail {

// sign(conj(u)) * |u|^(p-1), with the u = 0 case pinned to 0.
inline Complex duality_coordinate(Complex u, double p) {
  const double r = std::abs(u);
  if (r == 0.0) return {0.0, 0.0};
  if (p == 2.0) return std::conj(u);
  return std::conj(u) / r * std::pow(r, p - 1.0);
}

}  // namespace detail

class PSpace {
 public:
  PSpace(Eigen::Index dim, double p) : dim_(dim), p_(p) {
    if (dim < 1) {
      throw Error(ErrorKind::InvalidSpace, "dimension must be >= 1, got " + std::to_string(dim));
    }
    if (!std::isfinite(p) || p < 1.0) {
      throw Error(ErrorKind::InvalidSpace, "p must be finite and >= 1, got " + std::to_string(p));
    }
  }

  Eigen::Index dim() const noexcept { return dim_; }
  double p() const noexcept { return p_; }

  /// Hoelder conjugate exponent; +inf when p == 1.
  double conjugate_exponent() const noexcept {
    return p_ == 1.0 ? std::numeric_limits<double>::infinity() : p_ / (p_ - 1.0);
  }

  double norm(const CVector& x) const {
    require_dim(x.size(), dim_, "p_norm");
    return lp_norm(x, p_);
  }

  CVector dual(const CVector& y) const {
    require_dim(y.size(), dim_, "dual_functional");
    CVector w(dim_);
    const double ny = lp_norm(y, p_);
    if (ny == 0.0) {
      w.setZero();
      return w;
    }
    const double scale = p_ == 2.0 ? 1.0 : std::pow(ny, 2.0 - p_);
    for (Eigen::Index i = 0; i < dim_; ++i) {
      w[i] = scale * detail::duality_coordinate(y[i], p_);
    }
    return w;
  }

  Complex sip(const CVector& x, const CVector& y) const {
    require_dim(x.size(), dim_, "sip");
    const CVector w = dual(y);
    Complex acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < dim_; ++i) acc += x[i] * w[i];
    return acc;
  }

  bool operator==(const PSpace&) const = default;

  /// Plain l_r norm, rescaled by the largest modulus to avoid overflow.
  static double lp_norm(const CVector& x, double r) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i]));
    if (m == 0.0) return 0.0;
    if (std::isinf(r)) return m;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]) / m, r);
    return m * std::pow(acc, 1.0 / r);
  }

 private:
  Eigen::Index dim_;
  double p_;
};

static_assert(SemiInnerProductSpace<PSpace>);

inline double p_norm(const PSpace& space, const CVector& x) { return space.norm(x); }

inline Complex sip(const PSpace& space, const CVector& x, const CVector& y) {
  return space.sip(x, y);
}

/// Coefficients w with sip(x, y) == sum_i x_i w_i for every x.
inline CVector dual_functional(const PSpace& space, const CVector& y) { return space.dual(y); }

/// Operator norm of the functional x -> sum_i x_i w_i on l_p, i.e. the l_q
/// norm of w with 1/p + 1/q = 1.
inline double dual_norm(const PSpace& space, const CVector& w) {
  require_dim(w.size(), space.dim(), "dual_norm");
  return PSpace::lp_norm(w, space.conjugate_exponent());
}

template <SemiInnerProductSpace Space>
CVector normalize(const Space& space, const CVector& x) {
  const double n = space.norm(x);
  if (n == 0.0 || !std::isfinite(n)) {
    throw Error(ErrorKind::ZeroVector, "cannot normalize a zero (or non-finite) vector");
  }
  return x / n;
}

}  // namespace bqm
