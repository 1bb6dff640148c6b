#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "warpfield/errors.hpp"
#include "warpfield/thermal.hpp"

using namespace warpfield;
using namespace warpfield::thermal;

namespace {

MassShellFunction random_function(std::mt19937_64& g, const scalar::GridPtr& grid) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXcd a(grid->size());
  for (int j = 0; j < grid->size(); ++j) a[j] = {u(g), u(g)};
  return {grid, a};
}

scalar::GridPtr pair_grid() {
  return scalar::MassShellGrid::symmetric_pairs(1.0, {{0, 0.5, 0}, {0, 0, 0.5}, {0.4, 0.3, 0}}, {0.3, 0.25, 0.2});
}

double column_norm(const SparseMatrix& A, const std::vector<Index>& cols) { return scalar::max_abs_columns(A, cols); }

Eigen::Matrix4d embed(const Eigen::Matrix3d& r) {
  Eigen::Matrix4d R = Eigen::Matrix4d::Identity();
  R.bottomRightCorner<3, 3>() = r;
  return R;
}

}  // namespace

TEST(Theta4, StandardAndValidation) {
  const auto th = standard_theta4(0.7);
  EXPECT_EQ(th(2, 3), 0.7);
  EXPECT_EQ(th(3, 2), -0.7);
  EXPECT_EQ(th.cwiseAbs().sum(), 1.4);
  Eigen::Matrix4d bad = th;
  bad(3, 2) = 0.1;
  EXPECT_THROW(validate_theta4(bad), StructuralError);
  EXPECT_THROW((ThermalParams{-1.0, 1.0, 0.0}).validate(), PreconditionError);
}

TEST(ThermalLadder, AnnihilatorDoesNotKillVacuum) {
  std::mt19937_64 g(1);
  const ThermalRep R(pair_grid(), 2, 1.0);
  const auto L = thermal_ladder(random_function(g, R.grid()), R);
  EXPECT_GT((L.a * R.fock().vacuum()).norm(), 1e-3);
}

TEST(ThermalLadder, CanonicalCommutator) {
  std::mt19937_64 g(2);
  const ThermalRep R(pair_grid(), 3, 0.8);
  const auto phi = random_function(g, R.grid()), psi = random_function(g, R.grid());
  const SparseMatrix a = thermal_ladder(phi, R).a, ad = thermal_ladder(psi, R).adag;
  EXPECT_LT(scalar::identity_residual(SparseMatrix(a * ad - ad * a), scalar::inner_product_m(phi, psi),
                                      R.fock().protected_states(2)),
            1e-13);
}

TEST(ThermalLadder, ColdLimit) {
  const ThermalRep R(pair_grid(), 1, 50.0);
  for (int j = 0; j < R.nodes(); ++j) EXPECT_LE(R.rho(j), std::exp(-50.0) * (1 + 1e-12));
}

TEST(ThermalState, TwoPointClosedForm) {
  std::mt19937_64 g(3);
  const ThermalRep R(pair_grid(), 2, 1.3);
  const auto f = random_function(g, R.grid()), h = random_function(g, R.grid());
  cplx closed = 0.0;
  for (int j = 0; j < R.nodes(); ++j) {
    const double w = R.grid()->weight(j), rho = R.rho(j);
    closed += w * (std::conj(f.amp[j]) * h.amp[j] * (1 + rho) + std::conj(h.amp[j]) * f.amp[j] * rho);
  }
  const SparseMatrix pf = thermal_field(f, R), ph = thermal_field(h, R);
  EXPECT_NEAR(std::abs(vacuum_expectation({&pf, &ph}, R) - 0.5 * closed), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(thermal_two_point(f, h, R) - 0.5 * closed), 0.0, 1e-15);
  EXPECT_EQ(vacuum_expectation({&pf}, R), cplx(0.0));
}

TEST(ThermalState, DetailedBalancePerNode) {
  const ThermalRep R(scalar::MassShellGrid::cubic(1.0, 1, 0.6), 1, 2.0);
  for (int j = 0; j < R.nodes(); ++j) {
    const double rho = R.rho(j);
    EXPECT_LT(std::abs((1 + rho) - std::exp(2.0 * R.grid()->energy(j)) * rho) / (1 + rho), 1e-14);
  }
}

TEST(Deformed, KappaZeroIsUndeformed) {
  std::mt19937_64 g(4);
  const ThermalRep R(pair_grid(), 2, 1.0);
  const auto f = random_function(g, R.grid());
  EXPECT_EQ(SparseMatrix(deformed_thermal_field(f, R, 0.0) - thermal_field(f, R)).norm(), 0.0);
  const auto L0 = deformed_thermal_ladder(f, R, 0.0), L = thermal_ladder(f, R);
  EXPECT_EQ(SparseMatrix(L0.a - L.a).norm(), 0.0);
}

TEST(Deformed, ExchangeRelationOfLowering) {
  const ThermalRep R(pair_grid(), 3, 1.0);
  const auto th = standard_theta4(0.5), thp = standard_theta4(1.1);
  const int j = 0, k = 1;
  const SparseMatrix a = R.deformed_mode_lowering(j, th), b = R.deformed_mode_lowering(k, thp);
  const Eigen::Vector4d p = R.grid()->momentum4(j), q = R.grid()->momentum4(k);
  const cplx phase = std::polar(1.0, p.dot((th + thp) * q));
  EXPECT_LT(column_norm(SparseMatrix(a * b - phase * (b * a)), R.fock().protected_states(2)), 1e-12);
}

TEST(Deformed, OppositeParametersCommute) {
  const ThermalRep R(pair_grid(), 3, 1.0);
  const auto th = standard_theta4(2.0);
  const SparseMatrix a = R.deformed_mode_lowering(0, th), b = R.deformed_mode_lowering(4, -th);
  EXPECT_LT(column_norm(SparseMatrix(a * b - b * a), R.fock().protected_states(2)), 1e-12);
}

TEST(Deformed, TwoPointUnchangedAndHermitian) {
  std::mt19937_64 g(5);
  const ThermalRep R(pair_grid(), 2, 1.0);
  const auto f = random_function(g, R.grid()), h = random_function(g, R.grid());
  const SparseMatrix pf = deformed_thermal_field(f, R, 0.9), ph = deformed_thermal_field(h, R, 0.9);
  EXPECT_NEAR(std::abs(vacuum_expectation({&pf, &ph}, R) - thermal_two_point(f, h, R)), 0.0, 1e-14);
  EXPECT_EQ(SparseMatrix(pf - SparseMatrix(pf.adjoint())).norm(), 0.0);
}

TEST(Deformed, RotationCovariance) {
  std::mt19937_64 g(6);
  const auto grid = scalar::MassShellGrid::cubic(1.0, 1, 0.6);
  const ThermalRep R(grid, 2, 1.0);
  const auto f = random_function(g, grid);
  Eigen::Matrix3d r;
  r << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  const auto th = standard_theta4(0.8);
  const Eigen::Matrix4d rth = embed(r) * th * embed(r).transpose();
  const SparseMatrix U = R.rotation_unitary(r);
  const SparseMatrix lhs = U * deformed_thermal_field(f, R, th) * SparseMatrix(U.adjoint());
  const SparseMatrix rhs = deformed_thermal_field(scalar::rotated(f, r), R, rth);
  EXPECT_LT(SparseMatrix(lhs - rhs).coeffs().cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Locality, EvenRealProfileCommutes) {
  const auto grid = scalar::MassShellGrid::cubic(1.0, 1, 0.5);
  const ThermalRep R(grid, 3, 1.0);
  const auto f = MassShellFunction::gaussian(grid, Eigen::Vector3d::Zero(), 1.0);
  const auto rep = locality_commutator(f, f, R, 0.0);
  for (const auto& v : rep.sector_values) EXPECT_LT(std::abs(v), 1e-15);
  EXPECT_LT(rep.brute_vs_sector, 1e-12);
}

TEST(Locality, UndeformedKernelOnPairNodes) {
  const auto grid = pair_grid();
  const ThermalRep R(grid, 3, 1.0);
  const auto f = MassShellFunction::node(grid, 0, {0.3, 0.2});
  const auto h = MassShellFunction::node(grid, 3, {-0.1, 0.6});
  const auto rep = locality_commutator(f, h, R, 0.0);
  // [phi(f), phi(g)] = i Im <f, g>; nonzero only through the f(p) g(-p) cross terms.
  const SparseMatrix pf = thermal_field(f, R), ph = thermal_field(h, R);
  const Eigen::VectorXcd v = R.fock().vacuum();
  const cplx brute = v.dot((pf * ph - ph * pf) * v);
  ASSERT_FALSE(rep.sector_values.empty());
  EXPECT_NEAR(std::abs(rep.sector_values[0] - brute), 0.0, 1e-14);
  EXPECT_LT(rep.brute_vs_sector, 1e-12);
  EXPECT_LT(rep.sector_vs_shifted, 1e-12);
}

TEST(Locality, DeformedSectorReduction) {
  std::mt19937_64 g(7);
  const ThermalRep R(pair_grid(), 3, 1.0);
  const auto rep = locality_commutator(random_function(g, R.grid()), random_function(g, R.grid()), R, 0.8);
  EXPECT_LT(rep.brute_vs_sector, 1e-10);
  EXPECT_LT(rep.sector_vs_shifted, 1e-10);
}

TEST(Locality, RequiresInversionClosedGrid) {
  const auto grid = scalar::MassShellGrid::custom(1.0, {{0, 0.5, 0}, {0, 0, 0.5}}, {0.3, 0.3});
  const ThermalRep R(grid, 2, 1.0);
  const auto f = MassShellFunction::node(grid, 0);
  EXPECT_THROW(locality_commutator(f, f, R, 0.5), PreconditionError);
}

TEST(Npoint, OddVanishesBothWays) {
  std::mt19937_64 g(8);
  const ThermalRep R(pair_grid(), 3, 1.0);
  std::vector<MassShellFunction> fs;
  for (int k = 0; k < 3; ++k) fs.push_back(random_function(g, R.grid()));
  const auto r = deformed_npoint(fs, R, 0.7);
  EXPECT_EQ(r.closed, cplx(0.0));
  EXPECT_LT(std::abs(r.brute), 1e-15);
}

TEST(Npoint, TwoPointIsDeformationIndependent) {
  std::mt19937_64 g(9);
  const ThermalRep R(pair_grid(), 3, 1.0);
  const std::vector<MassShellFunction> fs{random_function(g, R.grid()), random_function(g, R.grid())};
  const auto a = deformed_npoint(fs, R, 0.0), b = deformed_npoint(fs, R, 0.5);
  EXPECT_NEAR(std::abs(a.brute - b.brute), 0.0, 1e-15);
  EXPECT_LT(b.rel_diff, 1e-12);
}

TEST(Npoint, FourPointSinglePairMatchesBruteForce) {
  const auto grid = pair_grid();
  const ThermalRep R(grid, 3, 1.0);
  const std::vector<MassShellFunction> fs{
      MassShellFunction::node(grid, 0, {0.3, 0.4}), MassShellFunction::node(grid, 3, 0.7),
      MassShellFunction::node(grid, 0, 1.0), MassShellFunction::node(grid, 3, {0.0, -0.5})};
  const auto r = deformed_npoint(fs, R, 1.0);
  EXPECT_GT(std::abs(r.brute), 1e-3);
  EXPECT_LT(r.rel_diff, 1e-10);
}

TEST(Npoint, CrossingConfigurationDependsOnKappa) {
  const auto grid = pair_grid();
  const ThermalRep R(grid, 3, 1.0);
  const std::vector<MassShellFunction> fs{MassShellFunction::node(grid, 0), MassShellFunction::node(grid, 1),
                                          MassShellFunction::node(grid, 0), MassShellFunction::node(grid, 1)};
  const auto a = deformed_npoint(fs, R, 0.0), b = deformed_npoint(fs, R, 1.0);
  EXPECT_LT(b.rel_diff, 1e-10);
  EXPECT_GT(std::abs(a.brute - b.brute), 1e-6);
}

TEST(Npoint, TruncationTooSmall) {
  std::mt19937_64 g(10);
  const ThermalRep R(pair_grid(), 2, 1.0);
  std::vector<MassShellFunction> fs;
  for (int k = 0; k < 4; ++k) fs.push_back(random_function(g, R.grid()));
  EXPECT_THROW(deformed_npoint(fs, R, 0.5), PreconditionError);
}

TEST(Fingerprint, RotatedParameterSeparatesRepresentations) {
  const auto grid = scalar::MassShellGrid::cubic(1.0, 1, 0.6);
  const ThermalRep R(grid, 2, 1.0);
  std::mt19937_64 g(11);
  const auto f = random_function(g, grid);
  Eigen::Matrix3d r;
  r << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  const auto th = standard_theta4(1.0);
  const Eigen::Matrix4d rth = embed(r) * th * embed(r).transpose();
  // p = (0.6, 0.6, 0), q = (0, 0.6, 0.6): generic nodes with p.theta q differing between theta and r theta r^T.
  const int p = 9 * 2 + 3 * 2 + 1, q = 9 * 1 + 3 * 2 + 2;
  ASSERT_EQ(grid->node(p), Eigen::Vector3d(0.6, 0.6, 0.0));
  ASSERT_EQ(grid->node(q), Eigen::Vector3d(0.0, 0.6, 0.6));
  const auto res = inequivalence_fingerprint(f, p, q, R, th, rth);
  EXPECT_NEAR(std::abs(res.brute - res.formula), 0.0, 1e-14);
  EXPECT_GT(std::abs(res.formula), 1e-6);
}
