#include <gtest/gtest.h>

#include <cmath>

#include "gcert/certify.hpp"
#include "gcert/errors.hpp"
#include "gcert/fractional.hpp"
#include "gcert/oracle.hpp"
#include "generators.hpp"
#include "test_util.hpp"

namespace gcert {
namespace {

using testutil::builtin;

MultiplierVector lam(double v) { return MultiplierVector(Vector{v}); }

SymmetricMatrix rows(std::vector<Vector> r) { return SymmetricMatrix::from_rows(r); }

void expect_matrix_near(const SymmetricMatrix& a, const SymmetricMatrix& b, double tol) {
  ASSERT_EQ(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) EXPECT_NEAR(a(i, j), b(i, j), tol);
  }
}

/// E4 with the constraint numerator and denominator both negated.
ProblemInstance e4_negated() {
  auto fp = builtin("e4.opt").fractional();
  auto& c = fp.constraints[0];
  c.num = QuadraticFunction(-c.num.A, vec::scaled(c.num.a, -1), -c.num.c);
  c.den = QuadraticFunction(-c.den.A, vec::scaled(c.den.a, -1), -c.den.c);
  return ProblemInstance(builtin("e4.opt").box(), fp);
}

TEST(Fractional, XiSigns) {
  EXPECT_EQ(xi_signs(builtin("e4.opt")).signs, (std::vector<int>{1, 1}));
  EXPECT_EQ(xi_signs(e4_negated()).signs, (std::vector<int>{1, -1}));
}

TEST(Fractional, SignChangingDenominatorRejected) {
  auto fp = builtin("e4.opt").fractional();
  fp.constraints[0].den = QuadraticFunction(SymmetricMatrix(2), Vector{1.0, 0.0}, 0.0);
  EXPECT_THROW(ProblemInstance(builtin("e4.opt").box(), fp), SignIndefiniteDenominator);
}

TEST(Fractional, ReformulateE4) {
  const auto p = builtin("e4.opt");
  const auto s = reformulate(p, Vector{-1, -1});
  EXPECT_DOUBLE_EQ(s.e0, -2.0);
  EXPECT_DOUBLE_EQ(s.c_scalar, 2.0);
  const auto& qp = s.base.quadratic();
  expect_matrix_near(qp.objective.A, rows({{-2, -1}, {-1, 2}}), 1e-15);
  expect_matrix_near(qp.constraints[0].A, rows({{2, 0}, {0, 2}}), 1e-15);
  EXPECT_DOUBLE_EQ(qp.constraints[0].c, -2.0);
  EXPECT_NEAR(s.base.objective_value(Vector{-1, -1}), 0.0, 1e-15);
}

TEST(Fractional, ReformulateWithZeroBoundIsIdentity) {
  auto fp = builtin("e4.opt").fractional();
  fp.constraints[0].bound = 0.0;
  fp.constraints[0].num.c = -3.0;
  const ProblemInstance p(builtin("e4.opt").box(), fp);
  const auto s = reformulate(p, Vector{0, 1});
  const auto& c = s.base.quadratic().constraints[0];
  EXPECT_EQ(c, fp.constraints[0].num);
}

TEST(Fractional, NegatedDenominatorKeepsSurrogateSign) {
  const auto p = e4_negated();
  const auto s = reformulate(p, Vector{-1, -1});
  expect_matrix_near(s.base.quadratic().constraints[0].A, rows({{2, 0}, {0, 2}}), 1e-15);
  EXPECT_DOUBLE_EQ(s.base.quadratic().constraints[0].c, -2.0);
}

TEST(Fractional, TransformMultipliers) {
  const auto p = builtin("e4.opt");
  const Vector x{-1, -1};
  EXPECT_DOUBLE_EQ(transform_multipliers(p, x, lam(2))[0], 2.0);
  EXPECT_DOUBLE_EQ(transform_multipliers(p, x, lam(1))[0], 1.0);
  EXPECT_DOUBLE_EQ(transform_multipliers(p, x, lam(0))[0], 0.0);
}

TEST(Fractional, GscE4) {
  const auto p = builtin("e4.opt");
  for (double l : {0.0, 0.7, 2.0}) {
    const auto r = certify_p3(p, Vector{-1, -1}, lam(l));
    EXPECT_EQ(r.verdict, Verdict::Certified);
    expect_matrix_near(*r.witness, 0.5 * rows({{2, -1}, {-1, 1}}), 1e-12);
  }
  EXPECT_EQ(certify_p3(p, Vector{1, -1}, lam(0)).verdict, Verdict::NotCertified);
  EXPECT_THROW(certify_p3(p, Vector{-1, -1}, lam(2.5)), ContractError);
}

TEST(Fractional, UnitDenominatorsReduceToQuadratic) {
  testgen::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto q = testgen::plant_quadratic(rng, 1 + trial % 3, trial % 3);
    const std::size_t n = q.instance.dim();
    const QuadraticFunction one(SymmetricMatrix(n), Vector(n, 0.0), 1.0);
    FractionalProgram fp;
    fp.objective = FractionalConstraint(q.instance.quadratic().objective, one);
    for (const auto& c : q.instance.quadratic().constraints) {
      fp.constraints.emplace_back(c, one, 0.0);
    }
    const ProblemInstance f(q.instance.box(), fp);
    const auto M3 = p3_certificate_matrix(f, q.x, q.lambda);
    const auto M1 = p1_certificate_matrix(q.instance, q.x, q.lambda);
    expect_matrix_near(M3, M1, 1e-12);
  }
}

TEST(Fractional, SurrogateIdentities) {
  testgen::Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pl = testgen::plant_fractional(rng, 1 + trial % 3, trial % 3);
    const auto& p = pl.instance;
    const auto s = reformulate(p, pl.x);
    const auto mu = transform_multipliers(p, pl.x, pl.lambda);
    const double c = s.c_scalar;

    const Vector gs = lagrangian_gradient(s.base, pl.x, mu);
    const Vector gp = vec::scaled(lagrangian_gradient(p, pl.x, pl.lambda), c);
    EXPECT_LE(vec::norm2(vec::sub(gs, gp)), 1e-9);

    const auto M3 = p3_certificate_matrix(p, pl.x, pl.lambda);
    const auto M1 = p1_certificate_matrix(s.base, pl.x, mu);
    expect_matrix_near(M1, c * M3, 1e-9 * (1 + M1.frobenius_norm()));
    EXPECT_EQ(certify_p3(p, pl.x, pl.lambda).fired(), certify_p1(s.base, pl.x, mu).fired());

    const double s0 = p.objective_value(pl.x);
    const auto& den0 = p.fractional().objective.den;
    for (int k = 0; k < 50; ++k) {
      const Vector y = testgen::random_box_point(rng, p.box());
      const double lhs = s.base.objective_value(y);
      const double rhs = den0.value(y) * (p.objective_value(y) - s0);
      EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + std::abs(rhs)));
      for (std::size_t j = 0; j < p.num_constraints(); ++j) {
        const double a = p.constraint_value(j, y);
        const double b = s.base.constraint_value(j, y);
        EXPECT_NEAR(b, std::abs(p.fractional().constraints[j].den.value(y)) * a,
                    1e-9 * (1 + std::abs(b)));
      }
    }
  }
}

TEST(Fractional, SurrogateArgminAgreesOnE4) {
  const auto p = builtin("e4.opt");
  const auto s = reformulate(p, Vector{-1, -1});
  const auto a = global_search(p, 41, 0);
  const auto b = global_search(s.base, 41, 0);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(a.best_point.x[i], b.best_point.x[i], 2.0 / 40 + 1e-12);
  }
}

}  // namespace
}  // namespace gcert
