#include <gtest/gtest.h>

#include <cmath>

#include "gcert/spectral.hpp"
#include "generators.hpp"
#include "test_util.hpp"

namespace gcert {
namespace {

SymmetricMatrix rows(std::vector<Vector> r) { return SymmetricMatrix::from_rows(r); }

TEST(Spectral, TwoByTwoExamples) {
  const Vector e = eigs_sym(rows({{2, -1}, {-1, 1}}));
  EXPECT_NEAR(e[0], (3 - std::sqrt(5.0)) / 2, 1e-12);
  EXPECT_NEAR(e[1], (3 + std::sqrt(5.0)) / 2, 1e-12);
  const Vector f = eigs_sym(rows({{-2, 4}, {4, -2}}));
  EXPECT_NEAR(f[0], -6, 1e-12);
  EXPECT_NEAR(f[1], 2, 1e-12);
}

TEST(Spectral, IdentityHasUnitEigenvalues) {
  for (double v : eigs_sym(SymmetricMatrix::identity(5))) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Spectral, Classification) {
  EXPECT_EQ(classify(rows({{2, -1}, {-1, 1}})).classification, Definiteness::PD);
  EXPECT_EQ(classify(rows({{-10, 4}, {4, -10}})).classification, Definiteness::ND);
  EXPECT_EQ(classify(rows({{1, 2}, {2, 1}})).classification, Definiteness::Indefinite);
  const auto z = classify(SymmetricMatrix(3));
  EXPECT_EQ(z.classification, Definiteness::PSD);
  EXPECT_TRUE(z.both_semidefinite);
  EXPECT_TRUE(z.is_psd());
  EXPECT_TRUE(z.is_nsd());
}

TEST(Spectral, MuFirstEigenvalue) {
  EXPECT_NEAR(mu_first_eigenvalue(rows({{-2, 0}, {0, -2}})), 1.0, 1e-12);
  EXPECT_NEAR(mu_first_eigenvalue(SymmetricMatrix(2)), 0.0, 1e-12);
  EXPECT_NEAR(mu_first_eigenvalue(rows({{-2, 4}, {4, -2}})), -1.0, 1e-12);
}

TEST(Spectral, RandomTraceDeterminantRayleighNegation) {
  testgen::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto M = testgen::random_symmetric(rng, n, 3.0);
    const Vector e = eigs_sym(M);
    double sum = 0.0;
    double prod = 1.0;
    for (double v : e) {
      sum += v;
      prod *= v;
    }
    const double scale = 1.0 + M.frobenius_norm();
    EXPECT_NEAR(sum, M.trace(), 1e-10 * scale);
    EXPECT_NEAR(prod, testutil::determinant(M), 1e-9 * std::pow(scale, static_cast<double>(n)));
    for (int k = 0; k < 5; ++k) {
      const Vector y = testgen::random_vector(rng, n, 1.0);
      const double r = M.quadratic_form(y) / vec::dot(y, y);
      EXPECT_GE(r, e.front() - 1e-10 * scale);
      EXPECT_LE(r, e.back() + 1e-10 * scale);
    }
    const Vector neg = eigs_sym(-M);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(neg[i], -e[n - 1 - i], 1e-10 * scale);
  }
}

TEST(Spectral, DefaultTolerance) {
  const auto M = rows({{3, 4}, {4, 0}});
  EXPECT_DOUBLE_EQ(default_definiteness_tol(M), 1e-9 * (1 + std::sqrt(9.0 + 16 + 16)));
}

}  // namespace
}  // namespace gcert
