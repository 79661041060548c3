#pragma once

// Time evolution generated by a real-spectrum scalar operator H (hbar = 1):
// U(t) = exp(-itH) = sum_k exp(-it lambda_k) E_k. U is a one-parameter group
// of invertible scalar operators and x(t) = U(t) x0 solves i x' = H x. For
// non-normal H the evolution does not preserve the ambient norm, and states
// are deliberately not renormalized along the way.

#include <cmath>
#include <utility>

#include "bqm/spectral.hpp"
#include "bqm/types.hpp"

namespace bqm {

/// U(t) = exp(-itH) through the functional calculus.
inline CMatrix propagator_at(const SpectralDecomposition& h, double t, const Tolerances& tol = {}) {
  h.require_real_spectrum(tol.real_spectrum, "propagator_at");
  return func_calc(h, [t](Complex lambda) { return std::exp(-kI * t * lambda.real()); });
}

/// A Hamiltonian together with U(t) evaluated at a fixed time.
class Propagator {
 public:
  Propagator(SpectralDecomposition hamiltonian, double t, const Tolerances& tol = {})
      : hamiltonian_(std::move(hamiltonian)), time_(t), matrix_(propagator_at(hamiltonian_, t, tol)) {}

  const SpectralDecomposition& hamiltonian() const noexcept { return hamiltonian_; }
  double time() const noexcept { return time_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

  CVector apply(const CVector& x) const {
    require_dim(x.size(), matrix_.rows(), "Propagator::apply");
    return matrix_ * x;
  }

  /// U(t + dt), evaluated directly rather than by composition.
  Propagator advanced(double dt, const Tolerances& tol = {}) const { return {hamiltonian_, time_ + dt, tol}; }

 private:
  SpectralDecomposition hamiltonian_;
  double time_;
  CMatrix matrix_;
};

inline CVector evolve_state(const SpectralDecomposition& h, const CVector& x0, double t, const Tolerances& tol = {}) {
  require_dim(x0.size(), h.dim(), "evolve_state");
  if (x0.isZero(0.0)) throw Error(ErrorKind::ZeroVector, "evolve_state: initial state is zero");
  return propagator_at(h, t, tol) * x0;
}

/// d/dt U(t) x0 = sum_k (-i lambda_k) exp(-it lambda_k) E_k x0, from the
/// functional calculus.
inline CVector evolve_derivative(const SpectralDecomposition& h, const CVector& x0, double t,
                                 const Tolerances& tol = {}) {
  require_dim(x0.size(), h.dim(), "evolve_derivative");
  h.require_real_spectrum(tol.real_spectrum, "evolve_derivative");
  const CMatrix du = func_calc(h, [t](Complex lambda) {
    return -kI * lambda.real() * std::exp(-kI * t * lambda.real());
  });
  return du * x0;
}

/// ||i x'(t) - H x(t)||_2 with x' from the functional calculus and H from
/// reconstruct(h).
inline double schrodinger_residual(const SpectralDecomposition& h, const CVector& x0, double t,
                                   const Tolerances& tol = {}) {
  const CVector x = evolve_state(h, x0, t, tol);
  const CVector dx = evolve_derivative(h, x0, t, tol);
  return (kI * dx - reconstruct(h) * x).norm();
}

/// Same residual with x'(t) replaced by a central difference of step delta.
inline double schrodinger_residual_fd(const SpectralDecomposition& h, const CVector& x0, double t, double delta,
                                      const Tolerances& tol = {}) {
  const CVector x = evolve_state(h, x0, t, tol);
  const CVector dx = (evolve_state(h, x0, t + delta, tol) - evolve_state(h, x0, t - delta, tol)) / (2.0 * delta);
  return (kI * dx - reconstruct(h) * x).norm();
}

/// Classic fixed-step fourth-order Runge-Kutta for x' = -iHx, working on the
/// raw matrix only. Used to cross-check the spectral propagator.
inline CVector evolve_ode_oracle(const CMatrix& h, const CVector& x0, double t, int steps) {
  require_square(h, x0.size(), "evolve_ode_oracle");
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "evolve_ode_oracle: steps must be >= 1");
  if (t == 0.0) return x0;
  const CMatrix a = -kI * h;
  const double dt = t / steps;
  CVector x = x0;
  for (int s = 0; s < steps; ++s) {
    const CVector k1 = a * x;
    const CVector k2 = a * (x + 0.5 * dt * k1);
    const CVector k3 = a * (x + 0.5 * dt * k2);
    const CVector k4 = a * (x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace bqm
