#pragma once

// Lumer states and the state-dependent notions of physical event and
// physical quantity.
//
// A point state is omega_x(T) = [Tx, x]; mixed states are finite convex
// combinations of pure (unit) point states. A projection P is a physical event
// at omega when omega(P) is real and lies in [0, 1]; a real-spectrum scalar
// operator is a physical quantity at omega when every spectral projection
// E(A) is a physical event there.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "bqm/sip_space.hpp"
#include "bqm/spectral.hpp"
#include "bqm/types.hpp"

namespace bqm {

template <SemiInnerProductSpace Space>
class StateFunctional {
 public:
  struct Term {
    double weight;
    CVector vector;
  };

  /// Convex combination of pure states. Vectors must be unit within tol.unit
  /// unless renormalize is set, in which case they are scaled to unit norm and
  /// renormalized() reports it.
  StateFunctional(Space space, std::vector<Term> terms, const Tolerances& tol = {}, bool renormalize = false)
      : space_(std::move(space)), terms_(std::move(terms)) {
    if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "state needs at least one term");
    double total = 0.0;
    for (Term& t : terms_) {
      require_dim(t.vector.size(), space_.dim(), "state vector");
      if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) {
        throw Error(ErrorKind::InvalidArgument, "state weights must be finite and nonnegative");
      }
      total += t.weight;
      const double n = space_.norm(t.vector);
      if (n == 0.0) throw Error(ErrorKind::ZeroVector, "state vector is zero");
      if (std::abs(n - 1.0) > tol.unit) {
        if (!renormalize) {
          throw Error(ErrorKind::NonUnitState, "state vector has norm " + std::to_string(n) + ", expected 1");
        }
        t.vector /= n;
        renormalized_ = true;
      }
    }
    if (std::abs(total - 1.0) > tol.unit) {
      throw Error(ErrorKind::InvalidArgument, "state weights sum to " + std::to_string(total) + ", expected 1");
    }
  }

  const Space& space() const noexcept { return space_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_point_state() const noexcept { return terms_.size() == 1; }
  bool renormalized() const noexcept { return renormalized_; }

 private:
  Space space_;
  std::vector<Term> terms_;
  bool renormalized_ = false;
};

/// omega_x. A non-unit x is normalized and the state is flagged renormalized().
template <SemiInnerProductSpace Space>
StateFunctional<Space> point_state(const Space& space, const CVector& x, const Tolerances& tol = {}) {
  require_dim(x.size(), space.dim(), "point_state");
  if (space.norm(x) == 0.0) throw Error(ErrorKind::ZeroVector, "point_state: zero vector");
  return StateFunctional<Space>(space, {{1.0, x}}, tol, /*renormalize=*/true);
}

template <SemiInnerProductSpace Space>
Complex evaluate(const StateFunctional<Space>& s, const CMatrix& t) {
  require_square(t, s.space().dim(), "evaluate");
  Complex acc{0.0, 0.0};
  for (const auto& term : s.terms()) {
    const CVector tx = t * term.vector;
    acc += term.weight * s.space().sip(tx, term.vector);
  }
  return acc;
}

enum class ViolationReason { ImaginaryPart, BelowZero, AboveOne };

constexpr std::string_view to_string(ViolationReason r) noexcept {
  switch (r) {
    case ViolationReason::ImaginaryPart: return "imaginary";
    case ViolationReason::BelowZero: return "below-zero";
    case ViolationReason::AboveOne: return "above-one";
  }
  return "?";
}

struct Violation {
  std::string label;
  Complex value;
  ViolationReason reason;
};

struct PhysicalityVerdict {
  std::vector<Violation> violations;
  /// Values of omega on each atom E_k (empty for a single event check).
  std::vector<Complex> atom_values;
  /// False when only atoms and their complements were checked.
  bool exhaustive = true;

  bool is_physical() const noexcept { return violations.empty(); }
  explicit operator bool() const noexcept { return is_physical(); }
};

namespace detail {

inline void check_event_value(Complex value, const std::string& label, double tol, PhysicalityVerdict& out) {
  if (std::abs(value.imag()) > tol) out.violations.push_back({label, value, ViolationReason::ImaginaryPart});
  if (value.real() < -tol) out.violations.push_back({label, value, ViolationReason::BelowZero});
  if (value.real() > 1.0 + tol) out.violations.push_back({label, value, ViolationReason::AboveOne});
}

inline void require_projection(const CMatrix& p, double tol, std::string_view what) {
  const double pn = p.norm();
  const double defect = (p * p - p).norm();
  if (!(defect <= tol * std::max(1.0, pn * pn))) {
    throw Error(ErrorKind::NotAProjection,
                std::string(what) + ": ||P^2 - P|| = " + std::to_string(defect) + " exceeds tolerance");
  }
}

inline std::string format_eigenvalue(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace detail

/// Largest atom count for which every subset sum is checked.
inline constexpr std::size_t kExhaustiveAtomLimit = 12;

template <SemiInnerProductSpace Space>
PhysicalityVerdict is_physical_event(const StateFunctional<Space>& s, const CMatrix& p, const Tolerances& tol = {},
                                     const std::string& label = "P") {
  require_square(p, s.space().dim(), "is_physical_event");
  detail::require_projection(p, tol.projection, "is_physical_event");
  PhysicalityVerdict v;
  detail::check_event_value(evaluate(s, p), label, tol.verdict, v);
  return v;
}

/// Checks E(A) for every A in the Boolean algebra generated by the atoms.
/// By linearity omega(E(A)) is the sum of the atom values in A, so each
/// subset costs O(k). Beyond kExhaustiveAtomLimit atoms only the atoms and
/// their complements are checked and the verdict is marked non-exhaustive.
template <SemiInnerProductSpace Space>
PhysicalityVerdict is_physical_quantity(const StateFunctional<Space>& s, const SpectralDecomposition& d,
                                        const Tolerances& tol = {}) {
  require_dim(d.dim(), s.space().dim(), "is_physical_quantity");
  d.require_real_spectrum(tol.real_spectrum, "is_physical_quantity");
  PhysicalityVerdict v;
  const std::size_t k = d.size();
  v.atom_values.reserve(k);
  Complex total{0.0, 0.0};
  for (const SpectralAtom& a : d.atoms()) {
    v.atom_values.push_back(evaluate(s, a.projection));
    total += v.atom_values.back();
  }
  auto label_of = [&](std::uint64_t mask) {
    std::string label = "E{";
    bool first = true;
    for (std::size_t j = 0; j < k; ++j) {
      if (!(mask >> j & 1U)) continue;
      if (!first) label += ",";
      label += detail::format_eigenvalue(d[j].eigenvalue);
      first = false;
    }
    return label + "}";
  };
  if (k <= kExhaustiveAtomLimit) {
    const std::uint64_t full = (std::uint64_t{1} << k) - 1;
    for (std::uint64_t mask = 1; mask <= full; ++mask) {
      Complex value{0.0, 0.0};
      for (std::size_t j = 0; j < k; ++j) {
        if (mask >> j & 1U) value += v.atom_values[j];
      }
      detail::check_event_value(value, label_of(mask), tol.verdict, v);
    }
  } else {
    v.exhaustive = false;
    for (std::size_t j = 0; j < k; ++j) {
      detail::check_event_value(v.atom_values[j], "E{" + detail::format_eigenvalue(d[j].eigenvalue) + "}",
                                tol.verdict, v);
      detail::check_event_value(total - v.atom_values[j],
                                "E{not " + detail::format_eigenvalue(d[j].eigenvalue) + "}", tol.verdict, v);
    }
    detail::check_event_value(total, "E{all}", tol.verdict, v);
  }
  return v;
}

/// I - P
inline CMatrix complement_event(const CMatrix& p, const Tolerances& tol = {}) {
  require_square(p, p.rows(), "complement_event");
  detail::require_projection(p, tol.projection, "complement_event");
  return CMatrix::Identity(p.rows(), p.cols()) - p;
}

}  // namespace bqm
