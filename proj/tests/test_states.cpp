#include <cmath>

#include <gtest/gtest.h>

#include "bqm/scenarios.hpp"
#include "bqm/states.hpp"
#include "test_support.hpp"

using namespace bqm;
using bqm::testing::Rng;

namespace {

CVector ket(Complex u, Complex v) {
  CVector z(2);
  z << u, v;
  return z;
}

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

/// Random oblique idempotent of rank r: V diag(1..1, 0..0) V^-1.
CMatrix random_idempotent(Rng& rng, Eigen::Index n, Eigen::Index r) {
  const CMatrix v = rng.well_conditioned(n);
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(n);
  d.head(r).setOnes();
  return v * d.asDiagonal() * v.inverse();
}

}  // namespace

TEST(PointState, Examples) {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const PSpace s(2, p);
    EXPECT_NEAR(std::abs(evaluate(point_state(s, ket(1, 0)), pauli_matrix(3)) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(evaluate(point_state(s, ket(0, 1)), pauli_matrix(3)) + 1.0), 0.0, 1e-14);
  }
  Rng rng(31);
  for (double p : {1.0, 2.5, 4.0}) {
    const PSpace s(3, p);
    for (int i = 0; i < 20; ++i) {
      const auto st = point_state(s, rng.unit_vector(3, p));
      EXPECT_NEAR(std::abs(evaluate(st, CMatrix::Identity(3, 3)) - 1.0), 0.0, 1e-12);
    }
  }
}

TEST(PointState, RenormalizesAndFlags) {
  const PSpace s(2, 2.0);
  const auto st = point_state(s, ket(3, 4));
  EXPECT_TRUE(st.renormalized());
  EXPECT_NEAR(s.norm(st.terms()[0].vector), 1.0, 1e-15);
  EXPECT_FALSE(point_state(s, ket(1, 0)).renormalized());
  try {
    point_state(s, ket(0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
  }
}

TEST(StateFunctional, RejectsBadMixtures) {
  const PSpace s(2, 2.0);
  using SF = StateFunctional<PSpace>;
  EXPECT_THROW(SF(s, {}), Error);
  EXPECT_THROW(SF(s, {{0.5, ket(1, 0)}, {0.4, ket(0, 1)}}), Error);
  EXPECT_THROW(SF(s, {{1.5, ket(1, 0)}, {-0.5, ket(0, 1)}}), Error);
  try {
    SF(s, {{1.0, ket(2, 0)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonUnitState);
  }
}

TEST(Evaluate, Examples) {
  const PSpace s(2, 3.0);
  EXPECT_NEAR(std::abs(evaluate(point_state(s, ket(1, 0)), pauli_matrix(1))), 0.0, 1e-15);
  const StateFunctional<PSpace> mix(s, {{0.5, ket(1, 0)}, {0.5, ket(0, 1)}});
  EXPECT_NEAR(std::abs(evaluate(mix, pauli_matrix(3))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(evaluate(mix, CMatrix::Identity(2, 2)) - 1.0), 0.0, 1e-15);
  EXPECT_THROW(evaluate(mix, CMatrix::Identity(3, 3)), Error);
}

TEST(PhysicalEvent, Sigma3XAlwaysPhysical) {
  Rng rng(32);
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    const PSpace s(2, p);
    for (int i = 0; i < 200; ++i) {
      const CVector z = rng.unit_vector(2, p);
      const auto st = point_state(s, z);
      const PhysicalityVerdict v = is_physical_event(st, diag2(1, 0));
      EXPECT_TRUE(v.is_physical());
      const Complex value = evaluate(st, diag2(1, 0));
      EXPECT_NEAR(value.real(), std::pow(std::abs(z[0]), p), 1e-12);
      EXPECT_NEAR(value.imag(), 0.0, 1e-12);
    }
  }
}

TEST(PhysicalEvent, TrivialEvents) {
  const PSpace s(2, 1.5);
  const auto st = point_state(s, ket(Complex(0.3, 0.2), Complex(-0.5, 0.1)));
  EXPECT_TRUE(is_physical_event(st, CMatrix::Zero(2, 2)).is_physical());
  EXPECT_TRUE(is_physical_event(st, CMatrix::Identity(2, 2)).is_physical());
  EXPECT_NEAR(std::abs(evaluate(st, CMatrix::Identity(2, 2)) - 1.0), 0.0, 1e-14);
}

TEST(PhysicalEvent, Sigma1BoundaryAtP4) {
  const PSpace s(2, 4.0);
  const double c = std::pow(2.0, -0.25);
  const auto st = point_state(s, ket(c, c));
  const CMatrix ey = pauli(s, 1).hamiltonian()[1].projection;
  const Complex value = evaluate(st, ey);
  EXPECT_NEAR(value.real(), 0.0, 1e-15);
  EXPECT_NEAR(value.imag(), 0.0, 1e-15);
  EXPECT_TRUE(is_physical_event(st, ey).is_physical());
}

TEST(PhysicalEvent, NotAProjection) {
  const PSpace s(2, 2.0);
  const auto st = point_state(s, ket(1, 0));
  try {
    is_physical_event(st, pauli_matrix(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAProjection);
  }
}

TEST(PhysicalEvent, RecordsViolationReasons) {
  const PSpace s(2, 3.0);
  // sigma_2 events at a real state carry an imaginary part
  const CVector z = normalize(s, ket(1.0, -0.4));
  const auto st = point_state(s, z);
  const CMatrix ex = pauli(s, 2).hamiltonian()[0].projection;
  const PhysicalityVerdict v = is_physical_event(st, ex, {}, "Ex");
  const Complex value = evaluate(st, ex);
  ASSERT_FALSE(v.is_physical());
  EXPECT_EQ(v.violations.front().reason, ViolationReason::ImaginaryPart);
  EXPECT_EQ(v.is_physical(), std::abs(value.imag()) <= 1e-9 && value.real() >= -1e-9 && value.real() <= 1 + 1e-9);
  for (const Violation& viol : v.violations) EXPECT_EQ(viol.label, "Ex");
}

TEST(PhysicalQuantity, Examples) {
  Rng rng(33);
  for (double p : {1.0, 1.5, 3.0, 4.0}) {
    const PSpace s(2, p);
    for (int i = 0; i < 100; ++i) {
      EXPECT_TRUE(is_physical_quantity(point_state(s, rng.unit_vector(2, p)), pauli(s, 3).hamiltonian()).is_physical());
    }
    EXPECT_TRUE(is_physical_quantity(point_state(s, ket(1, 0)), pauli(s, 2).hamiltonian()).is_physical());
    EXPECT_TRUE(is_physical_quantity(point_state(s, ket(0, 1)), pauli(s, 1).hamiltonian()).is_physical());
  }
}

TEST(PhysicalQuantity, ComplexSpectrumRejected) {
  const PSpace s(2, 2.0);
  CMatrix rot(2, 2);
  rot << 0, -1, 1, 0;
  try {
    is_physical_quantity(point_state(s, ket(1, 0)), decompose(rot));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ComplexSpectrum);
  }
}

TEST(PhysicalQuantity, ClosedFormAgreementForPauli) {
  Rng rng(34);
  int disagreements = 0;
  for (double p : {1.0, 1.5, 3.0, 4.0}) {
    const PSpace s(2, p);
    for (int index : {1, 2, 3}) {
      const QubitScenario sc = pauli(s, index);
      for (int i = 0; i < 500; ++i) {
        const CVector z = i % 2 == 0 ? rng.unit_vector(2, p) : rng.aligned_qubit(p, index == 2 ? kI : Complex(1.0));
        if (sc.boundary_distance(z) <= 1e-7) continue;
        const bool generic = is_physical_quantity(point_state(s, z), sc.hamiltonian()).is_physical();
        if (generic != sc.closed_form(z)) ++disagreements;
      }
    }
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(PhysicalQuantity, EigenvectorsArePhysical) {
  Rng rng(35);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = rng.integer(2, 5);
      const PSpace s(n, p);
      const auto k = bqm::testing::random_diagonalizable(rng, n);
      const SpectralDecomposition d = decompose(k.matrix);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto st = point_state(s, k.vectors.col(i));
        const PhysicalityVerdict v = is_physical_quantity(st, d);
        EXPECT_TRUE(v.is_physical());
        for (const Complex& value : v.atom_values) {
          const bool zero_or_one = std::abs(value) < 1e-9 || std::abs(value - 1.0) < 1e-9;
          EXPECT_TRUE(zero_or_one) << value;
        }
        // realness of the expectation at a physical point state
        EXPECT_LE(std::abs(evaluate(st, reconstruct(d)).imag()), 1e-9);
      }
    }
  }
}

TEST(PhysicalQuantity, ExpectationRealWheneverPhysical) {
  Rng rng(36);
  int checked = 0;
  for (double p : {1.5, 3.0}) {
    const PSpace s(2, p);
    for (int index : {1, 2}) {
      const QubitScenario sc = pauli(s, index);
      const Complex phase = index == 1 ? Complex(1.0, 0.0) : kI;
      for (int i = 0; i < 300; ++i) {
        const auto st = point_state(s, rng.aligned_qubit(p, phase));
        if (!is_physical_quantity(st, sc.hamiltonian()).is_physical()) continue;
        ++checked;
        EXPECT_LE(std::abs(evaluate(st, reconstruct(sc.hamiltonian())).imag()), 2e-9);
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(PhysicalQuantity, GenericComplexStatesAreRarelyPhysicalAwayFromP2) {
  // Off the aligned families the sigma_1 event values pick up an imaginary
  // part proportional to Im(v conj(u)) (|u|^(p-2) - |v|^(p-2)).
  Rng rng(38);
  const PSpace s(2, 3.0);
  const QubitScenario sc = pauli(s, 1);
  int physical = 0;
  for (int i = 0; i < 200; ++i) {
    physical += is_physical_quantity(point_state(s, rng.unit_vector(2, 3.0)), sc.hamiltonian()).is_physical();
  }
  EXPECT_LT(physical, 20);
}

TEST(PhysicalQuantity, LargeAlgebraIsMarkedNonExhaustive) {
  const Eigen::Index n = 13;
  Eigen::VectorXcd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = static_cast<double>(i);
  const SpectralDecomposition dec = decompose(CMatrix(d.asDiagonal()));
  const PSpace s(n, 2.0);
  const PhysicalityVerdict v = is_physical_quantity(point_state(s, CVector::Ones(n)), dec);
  EXPECT_FALSE(v.exhaustive);
  EXPECT_TRUE(v.is_physical());
  const PhysicalityVerdict small = is_physical_quantity(point_state(PSpace(2, 2.0), ket(1, 0)), decompose(pauli_matrix(3)));
  EXPECT_TRUE(small.exhaustive);
}

TEST(ComplementEvent, Examples) {
  EXPECT_LE((complement_event(diag2(1, 0)) - diag2(0, 1)).norm(), 0.0);
  EXPECT_LE(complement_event(CMatrix::Identity(2, 2)).norm(), 0.0);
  const auto h = pauli(PSpace(2, 2.0), 1).hamiltonian();
  EXPECT_LE((complement_event(h[0].projection) - h[1].projection).norm(), 1e-15);
  EXPECT_THROW(complement_event(pauli_matrix(3)), Error);
}

TEST(ComplementEvent, ClosureUnderPhysicality) {
  Rng rng(37);
  int physical = 0;
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::Index n = rng.integer(2, 4);
      const PSpace s(n, p);
      const CMatrix pm = random_idempotent(rng, n, rng.integer(0, static_cast<int>(n)));
      const auto st = point_state(s, rng.unit_vector(n, p));
      if (!is_physical_event(st, pm).is_physical()) continue;
      ++physical;
      EXPECT_TRUE(is_physical_event(st, complement_event(pm)).is_physical());
    }
  }
  EXPECT_GT(physical, 0);
}
