#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bqm/scenarios.hpp"
#include "bqm/spectral.hpp"
#include "test_support.hpp"

using namespace bqm;
using bqm::testing::Rng;

namespace {

CMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

void expect_projection_algebra(const SpectralDecomposition& d, double tol) {
  const Eigen::Index n = d.dim();
  CMatrix sum = CMatrix::Zero(n, n);
  for (std::size_t j = 0; j < d.size(); ++j) {
    const CMatrix& e = d[j].projection;
    EXPECT_LE((e * e - e).norm(), tol * std::max(1.0, e.squaredNorm()));
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (j != k) {
        EXPECT_LE((e * d[k].projection).norm(), tol * std::max(1.0, e.squaredNorm()));
      }
    }
    sum += e;
  }
  EXPECT_LE((sum - CMatrix::Identity(n, n)).norm(), tol * static_cast<double>(n));
}

}  // namespace

TEST(Decompose, Sigma3) {
  const SpectralDecomposition d = decompose(pauli_matrix(3));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(std::abs(d[0].eigenvalue - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d[1].eigenvalue + 1.0), 0.0, 1e-12);
  EXPECT_LE((d[0].projection - m2(1, 0, 0, 0)).norm(), 1e-12);
  EXPECT_LE((d[1].projection - m2(0, 0, 0, 1)).norm(), 1e-12);
}

TEST(Decompose, Sigma1) {
  const SpectralDecomposition d = decompose(pauli_matrix(1));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(d[0].eigenvalue.real(), 1.0, 1e-12);
  EXPECT_NEAR(d[1].eigenvalue.real(), -1.0, 1e-12);
  EXPECT_LE((d[0].projection - m2(0.5, 0.5, 0.5, 0.5)).norm(), 1e-12);
  EXPECT_LE((d[1].projection - m2(0.5, -0.5, -0.5, 0.5)).norm(), 1e-12);
}

TEST(Decompose, IdentityIsSingleAtom) {
  const SpectralDecomposition d = decompose(CMatrix::Identity(3, 3));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(std::abs(d[0].eigenvalue - 1.0), 0.0, 1e-12);
  EXPECT_LE((d[0].projection - CMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(Decompose, JordanBlockIsNotDiagonalizable) {
  try {
    decompose(m2(1, 1, 0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonDiagonalizable);
  }
}

TEST(Decompose, MergesRepeatedEigenvalues) {
  Rng rng(21);
  const CMatrix v = rng.well_conditioned(4);
  Eigen::VectorXcd diag(4);
  diag << 2.0, 2.0, -1.0, 2.0;
  const CMatrix m = v * diag.asDiagonal() * v.inverse();
  const SpectralDecomposition d = decompose(m);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(d[0].eigenvalue.real(), 2.0, 1e-9);
  EXPECT_NEAR(d[0].projection.trace().real(), 3.0, 1e-9);
  expect_projection_algebra(d, 1e-9);
}

TEST(Decompose, RejectsNonSquare) {
  EXPECT_THROW(decompose(CMatrix::Zero(2, 3)), Error);
}

TEST(Reconstruct, Examples) {
  const SpectralDecomposition d2 = decompose(pauli_matrix(2));
  EXPECT_LE((reconstruct(d2) - pauli_matrix(2)).norm(), 1e-10);

  const SpectralDecomposition five({{5.0, CMatrix::Identity(3, 3)}});
  EXPECT_LE((reconstruct(five) - 5.0 * CMatrix::Identity(3, 3)).norm(), 1e-15);

  const CMatrix e = pauli(PSpace(2, 3.0), 2).hamiltonian()[0].projection;
  const SpectralDecomposition pm({{1.0, e}, {-1.0, CMatrix::Identity(2, 2) - e}});
  EXPECT_LE((reconstruct(pm) - (2.0 * e - CMatrix::Identity(2, 2))).norm(), 1e-15);
}

TEST(SpectralDecomposition, ValidatesInvariants) {
  EXPECT_THROW(SpectralDecomposition({{1.0, m2(1, 0, 0, 0)}}), Error);  // does not sum to I
  EXPECT_THROW(SpectralDecomposition({{1.0, m2(1, 1, 0, 0)}, {2.0, m2(0, 0, 0, 1)}}), Error);
  EXPECT_THROW(SpectralDecomposition({{1.0, m2(1, 0, 0, 0)}, {1.0, m2(0, 0, 0, 1)}}), Error);
  try {
    SpectralDecomposition(std::vector<SpectralAtom>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDecomposition);
  }
}

TEST(SpectralMeasure, Examples) {
  const SpectralDecomposition d3 = decompose(pauli_matrix(3));
  EXPECT_LE((spectral_measure(d3, SpectralSet::point(1.0)) - m2(1, 0, 0, 0)).norm(), 1e-12);
  EXPECT_LE((spectral_measure(d3, SpectralSet::reals()) - CMatrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LE(spectral_measure(d3, SpectralSet::empty_set()).norm(), 0.0);

  const SpectralDecomposition d1 = decompose(pauli_matrix(1));
  EXPECT_LE((spectral_measure(d1, SpectralSet::interval(0.0, 2.0)) - m2(0.5, 0.5, 0.5, 0.5)).norm(), 1e-12);
}

TEST(SpectralMeasure, BooleanHomomorphismAndCommutation) {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = rng.integer(2, 6);
    const auto k = bqm::testing::random_diagonalizable(rng, n);
    const SpectralDecomposition d = decompose(k.matrix);
    const double cut1 = rng.uniform(-3.0, 3.0);
    const double cut2 = rng.uniform(-3.0, 3.0);
    const SpectralSet a = SpectralSet::interval(std::min(cut1, cut2), std::max(cut1, cut2));
    const SpectralSet b = SpectralSet::interval(rng.uniform(-3.0, 0.0), rng.uniform(0.0, 3.0), false, true);
    const CMatrix ea = spectral_measure(d, a);
    const CMatrix eb = spectral_measure(d, b);
    const double scale = 1.0 + ea.norm() * eb.norm();
    EXPECT_LE((spectral_measure(d, a.intersect(b)) - ea * eb).norm(), 1e-8 * scale);
    EXPECT_LE((spectral_measure(d, a.unite(b)) - (ea + eb - ea * eb)).norm(), 1e-8 * scale);
    // finite additivity on disjoint sets
    const SpectralSet c = a.minus(b);
    EXPECT_LE((spectral_measure(d, c.unite(b)) - (spectral_measure(d, c) + eb)).norm(), 1e-8 * scale);
    // commutation with the operator
    EXPECT_LE((k.matrix * ea - ea * k.matrix).norm(), 1e-8 * (1.0 + k.matrix.norm() * ea.norm()));
  }
}

TEST(FuncCalc, Examples) {
  const SpectralDecomposition d1 = decompose(pauli_matrix(1));
  EXPECT_LE((func_calc(d1, [](Complex z) { return z; }) - pauli_matrix(1)).norm(), 1e-12);
  EXPECT_LE((func_calc(d1, [](Complex z) { return z * z; }) - CMatrix::Identity(2, 2)).norm(), 1e-12);

  const SpectralDecomposition d3 = decompose(pauli_matrix(3));
  const double t = std::numbers::pi;
  const CMatrix u = func_calc(d3, [t](Complex z) { return std::exp(-kI * t * z); });
  EXPECT_LE((u + CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(FuncCalc, UndefinedAtEigenvalue) {
  const SpectralDecomposition d3 = decompose(pauli_matrix(3));
  try {
    func_calc(d3, [](Complex z) { return 1.0 / (z.real() - 1.0); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UndefinedFunction);
  }
}

TEST(FuncCalc, PolynomialHomomorphism) {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = rng.integer(2, 6);
    const auto k = bqm::testing::random_diagonalizable(rng, n);
    const SpectralDecomposition d = decompose(k.matrix);
    std::vector<Complex> coeffs;
    const int degree = rng.integer(0, 4);
    for (int j = 0; j <= degree; ++j) coeffs.push_back(rng.complex_normal());
    auto poly = [&](Complex z) {
      Complex acc{0.0, 0.0}, power{1.0, 0.0};
      for (const Complex& c : coeffs) {
        acc += c * power;
        power *= z;
      }
      return acc;
    };
    const CMatrix want = bqm::testing::matrix_polynomial(k.matrix, coeffs);
    EXPECT_LE((func_calc(d, poly) - want).norm(), 1e-8 * (1.0 + want.norm()));
    // composition law
    const CMatrix fg = func_calc(d, [&](Complex z) { return poly(z) * std::exp(z); });
    const CMatrix f_g = func_calc(d, poly) * func_calc(d, [](Complex z) { return std::exp(z); });
    EXPECT_LE((fg - f_g).norm(), 1e-8 * (1.0 + fg.norm()));
  }
}

TEST(Decompose, RecoversKnownDiagonalization) {
  Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = rng.integer(2, 8);
    const auto k = bqm::testing::random_diagonalizable(rng, n);
    const SpectralDecomposition d = decompose(k.matrix);
    ASSERT_EQ(d.size(), static_cast<std::size_t>(n));
    expect_projection_algebra(d, 1e-9);
    EXPECT_LE((reconstruct(d) - k.matrix).norm(), 1e-8 * k.matrix.norm());

    const CMatrix vinv = k.vectors.inverse();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lambda = k.eigenvalues[static_cast<std::size_t>(i)];
      const auto it = std::find_if(d.atoms().begin(), d.atoms().end(),
                                   [&](const SpectralAtom& a) { return std::abs(a.eigenvalue - lambda) < 1e-8; });
      ASSERT_NE(it, d.atoms().end()) << "eigenvalue " << lambda << " not recovered";
      const CMatrix want = k.vectors.col(i) * vinv.row(i);
      EXPECT_LE((it->projection - want).norm(), 1e-8 * (1.0 + want.norm()));
    }
  }
}

TEST(Decompose, AtomsAreOrderedByDescendingRealPart) {
  Rng rng(25);
  const auto k = bqm::testing::random_diagonalizable(rng, 6);
  const SpectralDecomposition d = decompose(k.matrix);
  for (std::size_t i = 1; i < d.size(); ++i) EXPECT_GT(d[i - 1].eigenvalue.real(), d[i].eigenvalue.real());
}

TEST(SpectralDecomposition, RealSpectrumCheck) {
  const SpectralDecomposition rot = decompose(m2(0, -1, 1, 0));
  EXPECT_FALSE(rot.has_real_spectrum(1e-9));
  try {
    rot.require_real_spectrum(1e-9, "test");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ComplexSpectrum);
  }
  EXPECT_TRUE(decompose(pauli_matrix(2)).has_real_spectrum(1e-9));
}
