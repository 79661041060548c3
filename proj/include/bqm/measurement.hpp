#pragma once

// Born-rule measurement in a biorthogonal eigenbasis.
//
// For a real-spectrum scalar operator with eigenbasis {e_n} and dual basis
// {e*_n} (e*_n(e_m) = delta_nm), the transition value of outcome n at a unit
// vector x is e*_n(x) [e_n, x], and the expectation is
// sum_n lambda_n e*_n(x) [e_n, x]. Because x = sum_n e*_n(x) e_n and the
// semi-inner product is linear in its first slot, the values always sum to
// [x, x] = 1, whether or not each one is a genuine probability.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "bqm/sip_space.hpp"
#include "bqm/spectral.hpp"
#include "bqm/types.hpp"

namespace bqm {

struct EigenBasis {
  /// Column n is e_n, unit in the ambient norm.
  CMatrix vectors;
  /// Row n holds the coefficients of e*_n: e*_n(x) = duals.row(n) * x.
  CMatrix duals;
  /// Eigenvalue of each basis vector.
  std::vector<double> eigenvalues;
  /// Index of the decomposition atom each basis vector belongs to.
  std::vector<std::size_t> atom_of;
  /// Eigenvalue and rank of each atom.
  std::vector<double> atom_eigenvalues;
  std::vector<Eigen::Index> atom_rank;

  Eigen::Index size() const noexcept { return vectors.cols(); }
  CVector vector(Eigen::Index n) const { return vectors.col(n); }
  Complex coordinate(Eigen::Index n, const CVector& x) const { return duals.row(n) * x; }

  /// max_{n,m} |e*_n(e_m) - delta_nm|
  double biorthogonality_defect() const {
    const CMatrix g = duals * vectors;
    return (g - CMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  }
};

namespace detail {

// Rotate so the first coordinate of largest modulus is real and positive.
inline CVector fix_phase(const CVector& v) {
  const double top = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double r = std::abs(v[i]);
    if (r >= top * (1.0 - 1e-12)) return v * (std::conj(v[i]) / r);
  }
  return v;
}

}  // namespace detail

/// Each atom contributes rank(E_k) basis vectors taken from its range (the
/// pivot columns of E_k), normalized in the ambient norm; the duals are the
/// rows of the inverse of the resulting basis matrix.
template <SemiInnerProductSpace Space>
EigenBasis eigen_basis(const Space& space, const SpectralDecomposition& d, const Tolerances& tol = {}) {
  require_dim(d.dim(), space.dim(), "eigen_basis");
  d.require_real_spectrum(tol.real_spectrum, "eigen_basis");
  const Eigen::Index n = d.dim();
  EigenBasis basis;
  basis.vectors.resize(n, n);
  Eigen::Index col = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const CMatrix& e = d[k].projection;
    const auto rank = static_cast<Eigen::Index>(std::llround(e.trace().real()));
    if (rank < 1 || col + rank > n) {
      throw Error(ErrorKind::DegenerateBasis, "eigen_basis: atom has invalid rank " + std::to_string(rank));
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(e);
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index r = 0; r < rank; ++r) {
      CVector v = e.col(perm[r]);
      basis.vectors.col(col++) = detail::fix_phase(normalize(space, v));
      basis.eigenvalues.push_back(d[k].eigenvalue.real());
      basis.atom_of.push_back(k);
    }
    basis.atom_eigenvalues.push_back(d[k].eigenvalue.real());
    basis.atom_rank.push_back(rank);
  }
  if (col != n) throw Error(ErrorKind::DegenerateBasis, "eigen_basis: atom ranks do not add up to the dimension");
  const double cond = detail::condition_number(basis.vectors);
  if (!(cond <= tol.max_condition)) {
    throw Error(ErrorKind::DegenerateBasis,
                "eigen_basis: eigenvector matrix is numerically singular (condition " + std::to_string(cond) + ")");
  }
  basis.duals = basis.vectors.partialPivLu().inverse();
  return basis;
}

struct MeasurementReport {
  struct Outcome {
    double eigenvalue;
    /// Set only when raw_value is real and nonnegative within tolerance.
    std::optional<double> probability;
    Complex raw_value;
    Eigen::Index rank;
  };

  /// One entry per distinct eigenvalue; degenerate eigenspaces are summed.
  std::vector<Outcome> outcomes;
  /// e*_n(x) [e_n, x] for every basis vector.
  std::vector<Complex> components;
  /// e*_n(x) for every basis vector.
  std::vector<Complex> coefficients;
  Complex expectation{0.0, 0.0};
  Complex total{0.0, 0.0};
  bool conserved = false;
  bool physical = false;
  /// The input was not unit and was scaled before measuring.
  bool renormalized = false;
  double input_norm = 1.0;
  /// The (unit) vector actually measured.
  CVector state;

  double conservation_residual() const { return std::abs(total - 1.0); }
};

template <SemiInnerProductSpace Space>
MeasurementReport transition_probabilities(const Space& space, const EigenBasis& basis, const CVector& x,
                                           const Tolerances& tol = {}, bool auto_normalize = false) {
  require_dim(x.size(), space.dim(), "transition_probabilities");
  require_dim(basis.size(), space.dim(), "transition_probabilities basis");
  MeasurementReport report;
  report.input_norm = space.norm(x);
  if (report.input_norm == 0.0) throw Error(ErrorKind::ZeroVector, "transition_probabilities: zero state");
  report.state = x;
  if (std::abs(report.input_norm - 1.0) > tol.unit) {
    if (!auto_normalize) {
      throw Error(ErrorKind::NonUnitState,
                  "transition_probabilities: state has norm " + std::to_string(report.input_norm));
    }
    report.state = x / report.input_norm;
    report.renormalized = true;
  }
  const CVector& z = report.state;
  const CVector coeffs = basis.duals * z;
  for (std::size_t k = 0; k < basis.atom_eigenvalues.size(); ++k) {
    report.outcomes.push_back({basis.atom_eigenvalues[k], std::nullopt, Complex{0.0, 0.0}, basis.atom_rank[k]});
  }
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const Complex value = coeffs[i] * space.sip(basis.vectors.col(i), z);
    report.coefficients.push_back(coeffs[i]);
    report.components.push_back(value);
    report.outcomes[basis.atom_of[static_cast<std::size_t>(i)]].raw_value += value;
    report.total += value;
  }
  report.physical = true;
  for (auto& o : report.outcomes) {
    const Complex v = o.raw_value;
    const bool real = std::abs(v.imag()) <= tol.verdict;
    if (real && v.real() >= -tol.verdict) o.probability = std::max(0.0, v.real());
    if (!real || v.real() < -tol.verdict || v.real() > 1.0 + tol.verdict) report.physical = false;
    report.expectation += o.eigenvalue * v;
  }
  report.conserved = report.conservation_residual() <= tol.conservation;
  return report;
}

template <SemiInnerProductSpace Space>
Complex expectation(const Space& space, const EigenBasis& basis, const CVector& x, const Tolerances& tol = {},
                    bool auto_normalize = false) {
  return transition_probabilities(space, basis, x, tol, auto_normalize).expectation;
}

struct CollapseResult {
  std::size_t outcome;
  double eigenvalue;
  CVector post_state;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit Mersenne
/// Twister draw. Unlike std::uniform_real_distribution this is identical
/// across standard libraries.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Draws an outcome with probability p(x|e_n). The post-state is e_n for a
/// simple eigenvalue, and the normalized component E_k x of the measured
/// state for a degenerate one.
template <SemiInnerProductSpace Space>
CollapseResult sample_collapse(const Space& space, const MeasurementReport& report, const EigenBasis& basis,
                               std::mt19937_64& rng) {
  if (!report.physical) {
    throw Error(ErrorKind::NotPhysical, "sample_collapse: some transition value lies outside [0, 1]");
  }
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t chosen = report.outcomes.size();
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < report.outcomes.size(); ++k) {
    const double pk = report.outcomes[k].probability.value_or(0.0);
    if (pk <= 0.0) continue;
    last_nonzero = k;
    cumulative += pk;
    if (u < cumulative) {
      chosen = k;
      break;
    }
  }
  // Rounding can leave the cumulative sum a hair below 1.
  if (chosen == report.outcomes.size()) chosen = last_nonzero;

  CVector post = CVector::Zero(basis.vectors.rows());
  Eigen::Index members = 0;
  Eigen::Index only = 0;
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    if (basis.atom_of[static_cast<std::size_t>(i)] != chosen) continue;
    post += report.coefficients[static_cast<std::size_t>(i)] * basis.vectors.col(i);
    only = i;
    ++members;
  }
  if (members == 1) post = basis.vectors.col(only);
  else post = normalize(space, post);
  return {chosen, report.outcomes[chosen].eigenvalue, std::move(post)};
}

template <SemiInnerProductSpace Space>
CollapseResult sample_collapse(const Space& space, const MeasurementReport& report, const EigenBasis& basis,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_collapse(space, report, basis, rng);
}

}  // namespace bqm
