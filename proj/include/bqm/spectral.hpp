#pragma once

// Scalar-type operators in finite dimension.
//
// A matrix is of scalar type exactly when it is diagonalizable; its spectral
// resolution is then the finite family of (generally oblique) eigenprojections
// E_k, with E_k^2 = E_k, E_j E_k = 0 for j != k and sum_k E_k = I. The
// spectral measure of a Borel set A is the sum of the atoms whose eigenvalue
// lies in A, and f(T) = sum_k f(lambda_k) E_k.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bqm/spectral_set.hpp"
#include "bqm/types.hpp"

namespace bqm {

struct SpectralAtom {
  Complex eigenvalue;
  CMatrix projection;
};

namespace detail {

inline double merge_radius(const std::vector<Complex>& values, double grouping) {
  double diameter = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      diameter = std::max(diameter, std::abs(values[i] - values[j]));
    }
  }
  return grouping * (diameter + 1.0);
}

inline double condition_number(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smallest = s[s.size() - 1];
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smallest;
}

}  // namespace detail

/// Validated list of (eigenvalue, projection) pairs resolving the identity.
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(std::vector<SpectralAtom> atoms, const Tolerances& tol = {})
      : atoms_(std::move(atoms)) {
    validate(tol);
  }

  Eigen::Index dim() const noexcept { return atoms_.front().projection.rows(); }
  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<SpectralAtom>& atoms() const noexcept { return atoms_; }
  const SpectralAtom& operator[](std::size_t k) const { return atoms_[k]; }

  bool has_real_spectrum(double imag_tol) const noexcept {
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [&](const SpectralAtom& a) { return std::abs(a.eigenvalue.imag()) <= imag_tol; });
  }

  void require_real_spectrum(double imag_tol, std::string_view what) const {
    for (const SpectralAtom& a : atoms_) {
      if (std::abs(a.eigenvalue.imag()) > imag_tol) {
        throw Error(ErrorKind::ComplexSpectrum,
                    std::string(what) + ": eigenvalue with imaginary part " +
                        std::to_string(a.eigenvalue.imag()) + " is not real");
      }
    }
  }

 private:
  void validate(const Tolerances& tol) const {
    if (atoms_.empty()) throw Error(ErrorKind::InvalidDecomposition, "decomposition has no atoms");
    const Eigen::Index n = atoms_.front().projection.rows();
    if (n < 1) throw Error(ErrorKind::InvalidDecomposition, "empty projection matrix");
    CMatrix sum = CMatrix::Zero(n, n);
    double mass = 0.0;
    std::vector<Complex> values;
    for (const SpectralAtom& a : atoms_) {
      require_square(a.projection, n, "spectral atom");
      const double pn = a.projection.norm();
      if (!std::isfinite(pn) || !std::isfinite(std::abs(a.eigenvalue))) {
        throw Error(ErrorKind::InvalidDecomposition, "non-finite spectral atom");
      }
      const double defect = (a.projection * a.projection - a.projection).norm();
      if (defect > tol.projection * std::max(1.0, pn * pn)) {
        throw Error(ErrorKind::InvalidDecomposition,
                    "atom is not idempotent: ||E^2 - E|| = " + std::to_string(defect));
      }
      sum += a.projection;
      mass += pn;
      values.push_back(a.eigenvalue);
    }
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      for (std::size_t k = 0; k < atoms_.size(); ++k) {
        if (j == k) continue;
        const double cross = (atoms_[j].projection * atoms_[k].projection).norm();
        const double scale = std::max(1.0, atoms_[j].projection.norm() * atoms_[k].projection.norm());
        if (cross > tol.projection * scale) {
          throw Error(ErrorKind::InvalidDecomposition,
                      "atoms do not annihilate: ||E_j E_k|| = " + std::to_string(cross));
        }
      }
    }
    const double resolution = (sum - CMatrix::Identity(n, n)).norm();
    if (resolution > tol.projection * std::max(1.0, mass)) {
      throw Error(ErrorKind::InvalidDecomposition,
                  "atoms do not sum to the identity: ||sum E - I|| = " + std::to_string(resolution));
    }
    const double radius = detail::merge_radius(values, tol.grouping);
    for (std::size_t j = 0; j < values.size(); ++j) {
      for (std::size_t k = j + 1; k < values.size(); ++k) {
        if (std::abs(values[j] - values[k]) < radius) {
          throw Error(ErrorKind::InvalidDecomposition, "eigenvalues of two atoms coincide");
        }
      }
    }
  }

  std::vector<SpectralAtom> atoms_;
};

/// Spectral resolution of a diagonalizable matrix. Atoms are ordered by
/// decreasing real part, then decreasing imaginary part.
inline SpectralDecomposition decompose(const CMatrix& m, const Tolerances& tol = {}) {
  require_square(m, m.rows(), "decompose");
  const Eigen::Index n = m.rows();
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "decompose: empty matrix");
  if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "decompose: matrix has non-finite entries");

  Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonDiagonalizable, "decompose: eigenvalue iteration did not converge");
  }
  std::vector<Complex> raw(solver.eigenvalues().data(), solver.eigenvalues().data() + n);

  // Single-linkage clustering of numerically split eigenvalues.
  const double radius = detail::merge_radius(raw, tol.grouping);
  std::vector<std::size_t> parent(raw.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (std::abs(raw[i] - raw[j]) < radius) parent[find(i)] = find(j);
    }
  }
  struct Cluster {
    Complex value{0.0, 0.0};
    Eigen::Index multiplicity = 0;
  };
  std::vector<Cluster> clusters;
  std::vector<std::size_t> root_to_cluster(raw.size(), raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::size_t r = find(i);
    if (root_to_cluster[r] == raw.size()) {
      root_to_cluster[r] = clusters.size();
      clusters.push_back({});
    }
    Cluster& c = clusters[root_to_cluster[r]];
    c.value += raw[i];
    ++c.multiplicity;
  }
  for (Cluster& c : clusters) c.value /= static_cast<double>(c.multiplicity);
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() > b.value.imag();
  });

  // Each eigenspace is the numerical null space of (m - lambda I); the
  // projections come from the eigenvector matrix and its inverse.
  CMatrix vectors(n, n);
  Eigen::Index col = 0;
  for (const Cluster& c : clusters) {
    const CMatrix shifted = m - c.value * CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
    vectors.middleCols(col, c.multiplicity) = svd.matrixV().rightCols(c.multiplicity);
    col += c.multiplicity;
  }
  const double cond = detail::condition_number(vectors);
  if (!(cond <= tol.max_condition)) {
    throw Error(ErrorKind::NonDiagonalizable,
                "decompose: eigenvector matrix condition number " + std::to_string(cond) +
                    " exceeds " + std::to_string(tol.max_condition) + " (operator is not of scalar type)");
  }
  const CMatrix duals = vectors.partialPivLu().inverse();

  std::vector<SpectralAtom> atoms;
  atoms.reserve(clusters.size());
  CMatrix rebuilt = CMatrix::Zero(n, n);
  col = 0;
  for (const Cluster& c : clusters) {
    CMatrix e = vectors.middleCols(col, c.multiplicity) * duals.middleRows(col, c.multiplicity);
    rebuilt += c.value * e;
    atoms.push_back({c.value, std::move(e)});
    col += c.multiplicity;
  }
  // A defective eigenvalue yields a null space smaller than its multiplicity;
  // the padded vectors then fail to reproduce the operator.
  const double residual = (rebuilt - m).norm();
  if (residual > 1e-6 * (m.norm() + 1.0)) {
    throw Error(ErrorKind::NonDiagonalizable,
                "decompose: eigenprojections do not reconstruct the operator (residual " +
                    std::to_string(residual) + "); operator is defective");
  }
  try {
    return SpectralDecomposition(std::move(atoms), tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::NonDiagonalizable, std::string("decompose: ") + e.what());
  }
}

/// sum_k lambda_k E_k
inline CMatrix reconstruct(const SpectralDecomposition& d) {
  CMatrix out = CMatrix::Zero(d.dim(), d.dim());
  for (const SpectralAtom& a : d.atoms()) out += a.eigenvalue * a.projection;
  return out;
}

/// E(A): sum of the atoms whose eigenvalue lies in the real set A. Atoms with
/// a non-real eigenvalue (beyond imag_tol) belong to no real set.
inline CMatrix spectral_measure(const SpectralDecomposition& d, const SpectralSet& set,
                                double tol = 1e-9, double imag_tol = 1e-9) {
  CMatrix out = CMatrix::Zero(d.dim(), d.dim());
  for (const SpectralAtom& a : d.atoms()) {
    if (set.contains(a.eigenvalue, tol * (1.0 + std::abs(a.eigenvalue)), imag_tol)) out += a.projection;
  }
  return out;
}

/// f(T) = sum_k f(lambda_k) E_k. f must return a finite value at every
/// eigenvalue.
template <class F>
  requires std::invocable<F&, Complex>
CMatrix func_calc(const SpectralDecomposition& d, F&& f) {
  CMatrix out = CMatrix::Zero(d.dim(), d.dim());
  for (const SpectralAtom& a : d.atoms()) {
    const Complex value = static_cast<Complex>(f(a.eigenvalue));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw Error(ErrorKind::UndefinedFunction,
                  "func_calc: function undefined at eigenvalue (" + std::to_string(a.eigenvalue.real()) +
                      ", " + std::to_string(a.eigenvalue.imag()) + ")");
    }
    out += value * a.projection;
  }
  return out;
}

}  // namespace bqm
