#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "warpfield/car.hpp"
#include "warpfield/errors.hpp"

using namespace warpfield;
using namespace warpfield::car;

namespace {

Vector random_vector(std::mt19937_64& g, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = {u(g), u(g)};
  return v;
}

// f+ (+) 0 and 0 (+) f- with a single unit entry.
Vector plus_mode(int d, int j) {
  Vector v = Vector::Zero(2 * d);
  v[j] = 1.0;
  return v;
}
Vector minus_mode(int d, int j) {
  Vector v = Vector::Zero(2 * d);
  v[d + j] = 1.0;
  return v;
}

double spectral_norm(const Matrix& m) { return Eigen::JacobiSVD<Matrix>(m).singularValues()[0]; }

const CarRep& rep4() {
  static const CarRep R = CarRep::with_boost({1, 1, 2, -1});
  return R;
}

}  // namespace

TEST(Selfdual, ConjugationIsInvolution) {
  std::mt19937_64 g(1);
  const SelfdualSpace h(3);
  const Vector f = random_vector(g, 6);
  EXPECT_LT((h.conjugate(h.conjugate(f)) - f).norm(), 1e-15);
  EXPECT_LT((h.gamma() * f.conjugate() - h.conjugate(f)).norm(), 1e-15);
  EXPECT_NEAR(std::abs(h.form(f, f) - h.conjugate(f).dot(f)), 0.0, 1e-15);
}

TEST(CarRep, Errors) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(2, 2);
  k(0, 1) = 0.5;
  EXPECT_THROW(CarRep(2, k), PreconditionError);
  EXPECT_THROW(CarRep(11, Eigen::MatrixXd::Identity(11, 11)), ResourceError);
  EXPECT_THROW(CarRep::with_boost({1, 2}, {true}), StructuralError);
}

TEST(CarRep, AnticommutatorIsForm) {
  std::mt19937_64 g(2);
  const CarRep R = CarRep::with_boost({1, -2, 0}, {true, false, true});
  for (int t = 0; t < 5; ++t) {
    const Vector f = random_vector(g, 6), h = random_vector(g, 6);
    const Matrix Bf = R.b_operator(f), Bh = R.b_operator(h);
    const Matrix I = Matrix::Identity(R.dim(), R.dim());
    EXPECT_LT(spectral::max_abs(Matrix(Bf * Bf + Bf * Bf - R.space().form(f, f) * I)), 1e-14);
    EXPECT_LT(spectral::max_abs(Matrix(Bf * Bh + Bh * Bf - R.space().form(f, h) * I)), 1e-14);
    EXPECT_LT(spectral::max_abs(Matrix(Bf.adjoint() - R.b_operator(R.space().conjugate(f)))), 1e-15);
  }
}

TEST(CarRep, NormFormula) {
  std::mt19937_64 g(3);
  const CarRep& R = rep4();
  for (int t = 0; t < 5; ++t) {
    const Vector f = random_vector(g, 8);
    EXPECT_NEAR(b_norm_formula(f, R.space()), spectral_norm(R.b_operator(f)), 1e-10);
  }
  Vector f = Vector::Zero(8);
  f[0] = f[4] = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(f.dot(R.space().conjugate(f))), 1.0, 1e-15);
  EXPECT_NEAR(b_norm_formula(f, R.space()), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(spectral_norm(R.b_operator(f)), 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(Gauge, FullTurnIsIdentity) {
  const CarRep& R = rep4();
  EXPECT_LT(spectral::max_abs(Matrix(R.gauge_unitary(2 * M_PI) - Matrix::Identity(R.dim(), R.dim()))), 1e-14);
}

TEST(Gauge, LoweringOperatorMovesChargeDown) {
  const CarRep& R = rep4();
  const Matrix psi = R.b_operator(minus_mode(4, 2));
  for (int m = -4; m <= 4; ++m)
    for (int n = -4; n <= 4; ++n) {
      if (m == n - 1) continue;
      EXPECT_EQ(spectral::max_abs(Matrix(R.charge_projection(m) * psi * R.charge_projection(n))), 0.0);
    }
}

TEST(Gauge, NeutralObservablesCommuteWithCharge) {
  const CarRep& R = rep4();
  const Matrix A = R.b_operator(minus_mode(4, 0)) * R.b_operator(plus_mode(4, 3));
  const Matrix V = R.gauge_unitary(0.77);
  EXPECT_LT(spectral::max_abs(Matrix(V * A - A * V)), 1e-15);
}

TEST(SectorDeform, FixedPointsUnchanged) {
  const CarRep& R = rep4();
  // c0^dagger c1 + h.c.: modes 0 and 1 share k = 1.
  const Matrix A = R.annihilator(0).adjoint() * R.annihilator(1) + R.annihilator(1).adjoint() * R.annihilator(0);
  for (double k : {0.3, 1.0, 5.0}) EXPECT_LT(spectral::max_abs(Matrix(sector_deform(A, 0, k, R) - A)), 1e-15);
}

TEST(SectorDeform, KappaZero) {
  std::mt19937_64 g(4);
  const CarRep& R = rep4();
  const Matrix B = R.b_operator(random_vector(g, 8).cwiseProduct(plus_mode(4, 0) + plus_mode(4, 1) + plus_mode(4, 3)));
  EXPECT_EQ(spectral::max_abs(Matrix(sector_deform(B, 1, 0.0, R) - B)), 0.0);
}

TEST(SectorDeform, SingleEigenmodeMatchesWarp) {
  const CarRep& R = rep4();
  const Matrix B = R.b_operator(plus_mode(4, 2));
  const auto lam = R.joint_eigenvalues();
  for (double k : {0.1, 1.0, 10.0})
    EXPECT_LT(spectral::max_abs(Matrix(sector_deform(B, 1, k, R) - spectral::warp(B, lam, spectral::DeformationMatrix(k)))),
              1e-14);
}

TEST(SectorDeform, InhomogeneousOperatorNamesSectors) {
  const CarRep& R = rep4();
  const Matrix B = R.b_operator(plus_mode(4, 0) + minus_mode(4, 1));
  try {
    sector_deform(B, 1, 1.0, R);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("1 -> 0"), std::string::npos) << e.what();
  }
}

TEST(Vacuum, DeformationLeavesVacuumVectorInvariant) {
  std::mt19937_64 g(5);
  const CarRep& R = rep4();
  const Matrix D = Matrix(random_vector(g, static_cast<int>(R.dim())).asDiagonal());
  EXPECT_EQ(deformed_vacuum_check(D, 0, 1.0, R), 0.0);
  Vector f = Vector::Zero(8);
  f.head(4) = random_vector(g, 4);
  const Matrix B = R.b_operator(f);
  for (double k : {0.1, 1.0, 10.0}) EXPECT_LT(deformed_vacuum_check(B, 1, k, R), 1e-12);
}

TEST(FixedPoint, DerivativeClassification) {
  const CarRep& R = rep4();
  const auto id = fixed_point_derivative(Matrix::Identity(R.dim(), R.dim()), R);
  EXPECT_TRUE(id.derivative_zero);
  Eigen::VectorXcd qk(R.dim());
  for (Index a = 0; a < R.dim(); ++a) qk[a] = R.charge(a) * R.charge(a) + 0.5 * R.boost(a);
  const auto fn = fixed_point_derivative(Matrix(qk.asDiagonal()), R);
  EXPECT_TRUE(fn.derivative_zero);
  EXPECT_TRUE(fn.commutes_off_zero);
  // Psi(f-) Psi^dagger(f+) with f- on mode 0 (k = 1) and f+ on mode 2 (k = 2).
  const Matrix A = R.b_operator(minus_mode(4, 0)) * R.b_operator(plus_mode(4, 2));
  const auto off = fixed_point_derivative(A, R);
  EXPECT_GT(off.derivative_norm, 0.5);
  EXPECT_FALSE(off.commutes_off_zero);
  EXPECT_LT(off.finite_difference_error, 1e-8);
}

TEST(Quasifree, MomentsMatchFock) {
  std::mt19937_64 g(6);
  const CarRep R = CarRep::with_boost({1, -1, 2}, {true, false, true});
  const QuasifreeSpec S{R.projection()};
  std::vector<Vector> fs;
  for (int k = 0; k < 4; ++k) fs.push_back(random_vector(g, 6));
  EXPECT_LT(std::abs(quasifree_moments(S, fs, R.space()) - fock_moment(fs, R)), 1e-12);
  const std::vector<Vector> odd(fs.begin(), fs.begin() + 3);
  EXPECT_EQ(quasifree_moments(S, odd, R.space()), spectral::cplx(0.0));
  const std::vector<Vector> two(fs.begin(), fs.begin() + 2);
  EXPECT_LT(std::abs(fock_moment(two, R) - R.space().form(fs[0], R.projection() * fs[1])), 1e-15);
}

TEST(Quasifree, InvalidSpecRejected) {
  const SelfdualSpace h(2);
  EXPECT_THROW((QuasifreeSpec{Matrix::Identity(4, 4)}).validate(h), PreconditionError);
  EXPECT_THROW((QuasifreeSpec{Matrix::Identity(3, 3)}).validate(h), StructuralError);
}

TEST(FourPoint, KappaZeroIsUndeformed) {
  std::mt19937_64 g(7);
  const CarRep& R = rep4();
  std::vector<Vector> fs;
  for (int k = 0; k < 4; ++k) fs.push_back(random_vector(g, 8));
  const auto r = deformed_car_fourpoint(fs, 0.0, R);
  EXPECT_LT(std::abs(r.closed - fock_moment(fs, R)), 1e-13);
  EXPECT_LT(r.abs_diff, 1e-13);
}

TEST(FourPoint, DeformedTwoPointUnchanged) {
  std::mt19937_64 g(8);
  const CarRep& R = rep4();
  const Vector f1 = random_vector(g, 8), f2 = random_vector(g, 8);
  const Matrix W = spectral::warp(R.b_operator(f2), R.joint_eigenvalues(), spectral::DeformationMatrix(1.0));
  Vector v = Vector::Zero(R.dim());
  v[0] = 1.0;
  const spectral::cplx deformed = (R.b_operator(f1) * (W * v))[0];
  EXPECT_LT(std::abs(deformed - fock_moment({f1, f2}, R)), 1e-14);
}

TEST(FourPoint, DistinctEigenmodesAtKappaOne) {
  std::mt19937_64 g(9);
  const CarRep& R = rep4();
  const Vector f1 = random_vector(g, 8), f4 = random_vector(g, 8);
  const Vector f = plus_mode(4, 2) + 0.5 * minus_mode(4, 3);
  const auto r = deformed_car_fourpoint({f1, f, f, f4}, 1.0, R);
  EXPECT_LT(r.abs_diff, 1e-10);
  const auto r0 = deformed_car_fourpoint({f1, f, f, f4}, 0.0, R);
  EXPECT_GT(std::abs(r.brute - r0.brute), 1e-6);
}
