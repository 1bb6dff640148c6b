#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "warpfield/errors.hpp"
#include "warpfield/scalar.hpp"

using namespace warpfield;
using namespace warpfield::scalar;

namespace {

GridPtr line_grid() {
  return MassShellGrid::custom(1.0, {{-1, 0, 0}, {0, 0, 0}, {1, 0, 0}}, {0.5, 0.5, 0.5});
}

MassShellFunction random_function(std::mt19937_64& g, const GridPtr& grid) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXcd a(grid->size());
  for (int j = 0; j < grid->size(); ++j) a[j] = {u(g), u(g)};
  return {grid, a};
}

cplx expect(const SparseMatrix& A, const SparseMatrix& B, const TruncatedFock& F) {
  const Eigen::VectorXcd v = F.vacuum();
  return v.dot(A * (B * v));
}

}  // namespace

TEST(InnerProduct, SingleNodeGivesWeight) {
  const auto grid = line_grid();
  const auto f = MassShellFunction::node(grid, 1);
  EXPECT_DOUBLE_EQ(inner_product_m(f, f).real(), 0.5);
  EXPECT_EQ(inner_product_m(f, MassShellFunction::node(grid, 2)), cplx(0.0));
}

TEST(InnerProduct, GaussianOnLineGrid) {
  const auto grid = line_grid();
  const auto f = MassShellFunction::gaussian(grid, Eigen::Vector3d::Zero(), 1.0);
  EXPECT_NEAR(inner_product_m(f, f).real(), 0.5 * (2 * std::exp(-1.0) + 1.0), 1e-15);
}

TEST(InnerProduct, GridMismatchIsStructural) {
  const auto f = MassShellFunction::node(line_grid(), 0);
  const auto g = MassShellFunction::node(line_grid(), 0);
  EXPECT_THROW(inner_product_m(f, g), StructuralError);
}

TEST(ComplexStructure, SquaresToMinusOne) {
  std::mt19937_64 g(1);
  const auto grid = MassShellGrid::cubic(1.0, 1, 0.5);
  const auto f = random_function(g, grid);
  EXPECT_LT((apply_complex_structure(apply_complex_structure(f)).amp + f.amp).norm(), 1e-15);
  const MassShellFunction r(grid, Eigen::VectorXcd::Ones(grid->size()));
  EXPECT_EQ(apply_complex_structure(r).amp.real().norm(), 0.0);
}

TEST(ComplexStructure, SymplecticCompatibility) {
  std::mt19937_64 g(2);
  const auto grid = MassShellGrid::cubic(1.0, 1, 0.5);
  const auto f = random_function(g, grid), h = random_function(g, grid);
  EXPECT_NEAR(inner_product_m(f, apply_complex_structure(h)).imag(),
              -inner_product_m(apply_complex_structure(f), h).imag(), 1e-15);
}

TEST(Grid, CubicIsInversionClosed) {
  const auto grid = MassShellGrid::cubic(1.0, 2, 0.3);
  ASSERT_TRUE(grid->inversion_closed());
  for (int j = 0; j < grid->size(); ++j) EXPECT_EQ(grid->node(grid->partner(j)), -grid->node(j));
}

TEST(Grid, PairsOrdering) {
  const auto grid = MassShellGrid::symmetric_pairs(1.0, {{0, 0.5, 0}, {0.1, 0, 0}}, {0.2, 0.3});
  EXPECT_EQ(grid->size(), 4);
  EXPECT_EQ(grid->partner(0), 2);
  EXPECT_EQ(grid->partner(3), 1);
  EXPECT_THROW(MassShellGrid::symmetric_pairs(1.0, {{0, 0, 0}}, {1.0}), PreconditionError);
}

TEST(Grid, AutomorphismRejectsNonSymmetry) {
  const auto grid = MassShellGrid::cubic(1.0, 1, 0.5);
  Eigen::Matrix3d r90;
  r90 << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_NO_THROW(grid->automorphism(r90));
  const Eigen::Matrix3d r30 = Eigen::AngleAxisd(M_PI / 6, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  EXPECT_THROW(grid->automorphism(r30), PreconditionError);
}

TEST(Fock, DimensionAndOrdering) {
  const auto grid = line_grid();
  const TruncatedFock F(grid, 2);
  EXPECT_EQ(F.dim(), static_cast<Index>(TruncatedFock::dimension(3, 2)));
  EXPECT_EQ(F.dim(), 10);
  EXPECT_EQ(F.total(0), 0);
  for (Index a = 1; a < F.dim(); ++a) EXPECT_LT(F.occupation(a - 1), F.occupation(a));
}

TEST(Fock, ResourceLimit) {
  EXPECT_THROW(TruncatedFock(MassShellGrid::cubic(1.0, 2, 0.3), 4, false, 1000), ResourceError);
}

TEST(Fock, NumberOperatorSingleMode) {
  const auto grid = MassShellGrid::custom(1.0, {{0, 0, 0}}, {1.0});
  const TruncatedFock F(grid, 2);
  const SparseMatrix b = F.mode_lowering(0);
  const Eigen::MatrixXcd n = Eigen::MatrixXcd(SparseMatrix(b.adjoint()) * b);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(3, 3);
  expected.diagonal() << 0, 1, 2;
  EXPECT_LT((n - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Fock, AnnihilatorKillsVacuumAndContractions) {
  std::mt19937_64 g(3);
  const auto grid = line_grid();
  const TruncatedFock F(grid, 3);
  const auto phi = random_function(g, grid), psi = random_function(g, grid);
  EXPECT_EQ((annihilation(phi, F) * F.vacuum()).norm(), 0.0);
  EXPECT_NEAR(std::abs(expect(annihilation(phi, F), creation(psi, F), F) - inner_product_m(phi, psi)), 0.0, 1e-15);
}

TEST(Fock, CanonicalCommutatorOnProtectedStates) {
  std::mt19937_64 g(4);
  const auto grid = line_grid();
  const TruncatedFock F(grid, 3);
  const auto phi = random_function(g, grid), psi = random_function(g, grid);
  const SparseMatrix a = annihilation(phi, F), ad = creation(psi, F);
  const SparseMatrix c = a * ad - ad * a;
  EXPECT_LT(identity_residual(c, inner_product_m(phi, psi), F.protected_states(1)), 1e-14);
}

TEST(VacuumField, TwoPointIsHalfInnerProduct) {
  std::mt19937_64 g(5);
  const auto grid = line_grid();
  const TruncatedFock F(grid, 2);
  const auto f = random_function(g, grid), h = random_function(g, grid);
  const SparseMatrix pf = vacuum_field(f, F), ph = vacuum_field(h, F);
  EXPECT_NEAR(std::abs(expect(pf, ph, F) - 0.5 * inner_product_m(f, h)), 0.0, 1e-15);
  EXPECT_EQ(F.vacuum().dot(pf * F.vacuum()), cplx(0.0));
  EXPECT_EQ(SparseMatrix(pf * pf - pf * pf).norm(), 0.0);
}

TEST(Translation, ActsByPlaneWavePhase) {
  const auto grid = line_grid();
  const auto f = MassShellFunction::node(grid, 2);
  const Eigen::Vector4d y(0.3, 0.7, 0, 0);
  const auto fy = translated(f, y);
  const Eigen::Vector4d p = grid->momentum4(2);
  const double py = p[0] * y[0] - p[1] * y[1];
  EXPECT_NEAR(std::abs(fy.amp[2] - std::polar(1.0, py)), 0.0, 1e-15);
}
