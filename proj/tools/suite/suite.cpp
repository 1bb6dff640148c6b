#include "suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "warpfield/car.hpp"
#include "warpfield/errors.hpp"
#include "warpfield/geometry.hpp"
#include "warpfield/scalar.hpp"
#include "warpfield/spectral.hpp"
#include "warpfield/thermal.hpp"
#include "warpfield/wick.hpp"

namespace warpfield::suite {

namespace {

using spectral::cplx;
using spectral::Matrix;
using spectral::SparseMatrix;
using spectral::Vec2;

class Rng {
 public:
  Rng(std::uint64_t seed, int stream) : g_(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(stream)) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g_); }
  cplx complex() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }
  Matrix matrix(Eigen::Index n) {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex();
    return m;
  }
  std::mt19937_64& engine() { return g_; }
  Eigen::VectorXcd vector(Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = complex();
    return v;
  }

 private:
  std::mt19937_64 g_;
};

Check below(std::string name, double value, double bound) {
  return {std::move(name), value, bound, "<", value < bound, false};
}
Check above(std::string name, double value, double bound) {
  return {std::move(name), value, bound, ">", value > bound, false};
}
Check count_zero(std::string name, double value) { return {std::move(name), value, 0.0, "==", value == 0.0, false}; }
Check flag(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, "flag", ok, false}; }

std::vector<double> kappas(const SuiteConfig& cfg, std::vector<double> k) {
  if (cfg.degenerate_kappa) return {0.0};
  return k;
}

std::vector<Vec2> integer_spectrum(Rng& rng, int dim, int range) {
  std::vector<Vec2> ev;
  for (int a = 0; a < dim; ++a) ev.emplace_back(rng.integer(-range, range), rng.integer(-range, range));
  return ev;
}

// ------------------------------------------------------------------ 1

void criterion_engine(const SuiteConfig& cfg, CriterionResult& r) {
  Rng rng(cfg.seed, 1);
  double worst = 0.0;
  int diagnostics = 0, runs = 0;
  for (int i = 0; i < 20; ++i) {
    const int dim = rng.integer(2, 8);
    auto rep = std::make_shared<const spectral::JointSpectrumRep>(integer_spectrum(rng, dim, 2));
    const spectral::Operator F(rep, rng.matrix(dim));
    for (double k : kappas(cfg, {0.3, 1.0, 2.0})) {
      ++runs;
      try {
        const auto res = spectral::warp_oscillatory(F, spectral::DeformationMatrix(k));
        worst = std::max(worst, res.report.final_residual());
      } catch (const DiagnosticError&) {
        ++diagnostics;
      }
    }
  }
  r.checks.push_back(below("oscillatory vs exact final-eps residual (" + std::to_string(runs) + " runs)", worst,
                           cfg.tol("oscillatory")));
  r.checks.push_back(count_zero("non-monotone convergence diagnostics", diagnostics));
}

// ------------------------------------------------------------------ 2

void criterion_algebra(const SuiteConfig& cfg, CriterionResult& r) {
  Rng rng(cfg.seed, 2);
  double adj = 0.0, hom = 0.0, zero = 0.0, gl2 = 0.0, flip = 0.0, inter = 0.0;
  Eigen::Matrix2d P;
  P << 0, 1, 1, 0;
  for (int i = 0; i < 50; ++i) {
    const int dim = rng.integer(2, 6);
    auto rep = std::make_shared<const spectral::JointSpectrumRep>(integer_spectrum(rng, dim, 3));
    const spectral::Operator F(rep, rng.matrix(dim)), G(rep, rng.matrix(dim));
    const double k = cfg.degenerate_kappa ? 0.0 : rng.uniform(-2.0, 2.0);
    const spectral::DeformationMatrix d(k);

    adj = std::max(adj, spectral::max_abs(Matrix(spectral::warp(F.adjoint(), d).matrix() -
                                                 spectral::warp(F, d).matrix().adjoint())));
    hom = std::max(hom, spectral::max_abs(Matrix((spectral::warp(F, d) * spectral::warp(G, d)).matrix() -
                                                 spectral::warp(spectral::rieffel_product(F, G, d), d).matrix())));
    zero = std::max(zero, spectral::max_abs(Matrix(spectral::warp(F, d.with_kappa(0.0)).matrix() - F.matrix())));

    Eigen::Matrix2d N;
    do {
      for (int a = 0; a < 4; ++a) N(a / 2, a % 2) = rng.uniform(-2.0, 2.0);
    } while (std::abs(N.determinant()) < 0.25);
    auto repN = std::make_shared<const spectral::JointSpectrumRep>(rep->rescaled(N));
    gl2 = std::max(gl2, spectral::max_abs(Matrix(spectral::warp(spectral::Operator(repN, F.matrix()), d).matrix() -
                                                 spectral::warp(F, d.with_kappa(N.determinant() * k)).matrix())));
    auto repP = std::make_shared<const spectral::JointSpectrumRep>(rep->rescaled(P));
    flip = std::max(flip, spectral::max_abs(Matrix(spectral::warp(spectral::Operator(repP, F.matrix()), d).matrix() -
                                                   spectral::warp(F, d.with_kappa(-k)).matrix())));

    Eigen::VectorXcd x(dim);
    for (int a = 0; a < dim; ++a) x[a] = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    const Matrix X = x.asDiagonal();
    const spectral::Operator XF(rep, X * F.matrix() * X.adjoint());
    inter = std::max(inter, spectral::max_abs(Matrix(X * spectral::warp(F, d).matrix() * X.adjoint() -
                                                     spectral::warp(XF, d).matrix())));
  }
  const double tol = cfg.tol("algebra");
  r.checks.push_back(below("adjoint covariance", adj, tol));
  r.checks.push_back(below("rieffel product homomorphism", hom, tol));
  r.checks.push_back(below("kappa=0 identity", zero, tol));
  r.checks.push_back(below("GL(2) det rescaling", gl2, tol));
  r.checks.push_back(below("flip reverses kappa", flip, tol));
  r.checks.push_back(below("diagonal unitary intertwining", inter, tol));

  Eigen::Matrix2d theta = spectral::DeformationMatrix::standard_theta();
  if (cfg.break_theta_antisymmetry) theta(1, 0) = -0.5;
  bool ok = true;
  try {
    const spectral::DeformationMatrix d(theta, 1.0);
    ok = d.antisymmetry_defect() == 0.0;
  } catch (const StructuralError&) {
    ok = false;
  }
  r.checks.push_back(flag("theta antisymmetry", ok));
}

// ------------------------------------------------------------------ 3

scalar::MassShellFunction random_function(Rng& rng, const scalar::GridPtr& g) {
  return {g, rng.vector(g->size())};
}

void criterion_thermal(const SuiteConfig& cfg, CriterionResult& r) {
  Rng rng(cfg.seed, 3);
  const double beta = 1.0;
  const auto grid = scalar::MassShellGrid::cubic(1.0, 1, 0.6);
  const thermal::ThermalRep R(grid, 3, beta);
  const auto states = R.fock().protected_states(2);

  double ccr = 0.0, two = 0.0, herm = 0.0, odd = 0.0, not_annihilated = 1e300;
  for (int t = 0; t < 3; ++t) {
    const auto phi = random_function(rng, grid), psi = random_function(rng, grid);
    const auto A = thermal::thermal_ladder(phi, R), B = thermal::thermal_ladder(psi, R);
    const SparseMatrix comm = SparseMatrix(A.a * B.adag) - SparseMatrix(B.adag * A.a);
    ccr = std::max(ccr, scalar::identity_residual(comm, scalar::inner_product_m(phi, psi), states));

    const SparseMatrix F = thermal::thermal_field(phi, R), G = thermal::thermal_field(psi, R);
    cplx closed = 0.0;
    for (int j = 0; j < grid->size(); ++j)
      closed += grid->weight(j) * (std::conj(phi.amp[j]) * psi.amp[j] * (1.0 + R.rho(j)) +
                                   std::conj(psi.amp[j]) * phi.amp[j] * R.rho(j));
    two = std::max(two, std::abs(thermal::vacuum_expectation({&F, &G}, R) - 0.5 * closed));
    herm = std::max(herm, spectral::max_abs(SparseMatrix(F - SparseMatrix(F.adjoint()))));
    odd = std::max(odd, std::abs(thermal::vacuum_expectation({&F}, R)));
    not_annihilated = std::min(not_annihilated, (A.a * R.fock().vacuum()).norm());
  }
  double kms = 0.0;
  for (int j = 0; j < grid->size(); ++j) {
    const double rho = R.rho(j);
    kms = std::max(kms, std::abs((1.0 + rho) - std::exp(beta * grid->energy(j)) * rho) / (1.0 + rho));
  }
  const thermal::ThermalRep cold(grid, 1, 50.0);
  double cold_ratio = 0.0;
  for (int j = 0; j < grid->size(); ++j) cold_ratio = std::max(cold_ratio, cold.rho(j) / std::exp(-50.0 * grid->mass()));

  r.checks.push_back(below("CCR on protected sub-basis (depth 2)", ccr, cfg.tol("ccr")));
  r.checks.push_back(below("two-point vs closed form", two, cfg.tol("two_point")));
  r.checks.push_back(below("(1+rho) = exp(beta eps) rho per node, relative", kms, cfg.tol("kms")));
  r.checks.push_back(below("field hermiticity", herm, cfg.tol("two_point")));
  r.checks.push_back(below("odd moment", odd, cfg.tol("two_point")));
  r.checks.push_back(above("thermal annihilator does not annihilate the vacuum", not_annihilated, 1e-6));
  r.checks.push_back(below("beta=50: rho / exp(-beta m)", cold_ratio, 1.0 + 1e-9));
}

// ------------------------------------------------------------------ 4

void criterion_exchange(const SuiteConfig& cfg, CriterionResult& r) {
  Rng rng(cfg.seed, 4);
  const auto grid = scalar::MassShellGrid::cubic(1.0, 1, 0.6);
  const thermal::ThermalRep R(grid, 3, 1.0);
  const auto states = R.fock().protected_states(2);
  const int K = grid->size();

  std::vector<std::pair<int, int>> pairs;
  const int j0 = rng.integer(0, K - 1);
  pairs.emplace_back(j0, j0);
  while (pairs.size() < 10) pairs.emplace_back(rng.integer(0, K - 1), rng.integer(0, K - 1));

  double r1 = 0.0, r2 = 0.0, r3 = 0.0, opposite = 0.0, engine = 0.0;
  for (double k : kappas(cfg, {0.5, 2.0})) {
    const Eigen::Matrix4d th = thermal::standard_theta4(k);
    const spectral::DeformationMatrix d(k);
    for (const Eigen::Matrix4d& thp : {th, Eigen::Matrix4d(-th), thermal::standard_theta4(0.7 * k + 0.2)}) {
      for (const auto& [j, l] : pairs) {
        const SparseMatrix a1 = R.deformed_mode_lowering(j, th), a2 = R.deformed_mode_lowering(l, thp);
        const SparseMatrix ad1 = a1.adjoint(), ad2 = a2.adjoint();
        const Eigen::Vector4d p = grid->momentum4(j), q = grid->momentum4(l);
        const cplx ph = std::polar(1.0, p.dot((th + thp) * q));
        r1 = std::max(r1, scalar::max_abs_columns(SparseMatrix(a1 * a2) - ph * SparseMatrix(a2 * a1), states));
        r2 = std::max(r2, scalar::max_abs_columns(SparseMatrix(ad1 * ad2) - ph * SparseMatrix(ad2 * ad1), states));
        SparseMatrix m3 = SparseMatrix(a1 * ad2) - std::conj(ph) * SparseMatrix(ad2 * a1);
        if (j == l) {
          Eigen::VectorXcd diag(R.dim());
          for (Eigen::Index a = 0; a < R.dim(); ++a)
            diag[a] = std::polar(1.0, -p.dot((th - thp) * R.momentum(a))) / grid->weight(j);
          SparseMatrix D(R.dim(), R.dim());
          std::vector<Eigen::Triplet<cplx>> t;
          for (Eigen::Index a = 0; a < R.dim(); ++a) t.emplace_back(a, a, diag[a]);
          D.setFromTriplets(t.begin(), t.end());
          m3 -= D;
        }
        r3 = std::max(r3, scalar::max_abs_columns(m3, states));
        if (j != l && thp.isApprox(-th, 0.0))
          opposite = std::max(opposite, scalar::max_abs_columns(SparseMatrix(a1 * a2) - SparseMatrix(a2 * a1), states));
      }
    }
    for (const auto& [j, l] : pairs) {
      (void)l;
      engine = std::max(engine, spectral::max_abs(SparseMatrix(
                                    R.deformed_mode_lowering(j, th) -
                                    spectral::warp(R.mode_lowering(j), R.edge_eigenvalues(), d))));
    }
  }
  const double tol = cfg.tol("exchange");
  r.checks.push_back(below("a a exchange (depth 2)", r1, tol));
  r.checks.push_back(below("a* a* exchange (depth 2)", r2, tol));
  r.checks.push_back(below("a a* exchange with delta term (depth 2)", r3, tol));
  r.checks.push_back(below("[a_theta(p), a_-theta(p')] = 0, p != p' (depth 2)", opposite, tol));
  r.checks.push_back(below("deformed mode operator equals warp", engine, cfg.tol("engine")));
}

// ------------------------------------------------------------------ 5

scalar::GridPtr npoint_grid() {
  return scalar::MassShellGrid::symmetric_pairs(
      1.0, {{0.0, 0.5, 0.0}, {0.0, 0.0, 0.5}, {0.4, 0.3, 0.0}, {0.2, 0.0, 0.45}}, {0.3, 0.25, 0.2, 0.35});
}

void criterion_npoint(const SuiteConfig& cfg, CriterionResult& r) {
  Rng rng(cfg.seed, 5);
  const auto grid = npoint_grid();
  const thermal::ThermalRep R(grid, 3, 1.0);
  double rel = 0.0, odd = 0.0, two_dep = 0.0;
  for (int n : {2, 3, 4}) {
    for (int t = 0; t < 3; ++t) {
      std::vector<scalar::MassShellFunction> fs;
      for (int k = 0; k < n; ++k) fs.push_back(random_function(rng, grid));
      cplx base = 0.0;
      for (double k : {0.0, 0.5, 1.0}) {
        const double kk = cfg.degenerate_kappa ? 0.0 : k;
        const auto res = thermal::deformed_npoint(fs, R, kk);
        if (n % 2) {
          odd = std::max({odd, std::abs(res.closed), std::abs(res.brute)});
        } else {
          rel = std::max(rel, res.rel_diff);
        }
        if (n == 2) {
          if (k == 0.0) base = res.brute;
          two_dep = std::max(two_dep, std::abs(res.brute - base));
        }
      }
    }
  }
  // Documented configuration: crossing tuple (p, q, p, q) with p along x2 and q along x3.
  std::vector<scalar::MassShellFunction> doc{
      scalar::MassShellFunction::node(grid, 0), scalar::MassShellFunction::node(grid, 1),
      scalar::MassShellFunction::node(grid, 0), scalar::MassShellFunction::node(grid, 1)};
  const auto d0 = thermal::deformed_npoint(doc, R, 0.0);
  const auto d1 = thermal::deformed_npoint(doc, R, 1.0);
  rel = std::max({rel, d0.rel_diff, d1.rel_diff});
  // Single pair of nodes +-p.
  std::vector<scalar::MassShellFunction> pm{
      scalar::MassShellFunction::node(grid, 0, {0.3, 0.4}), scalar::MassShellFunction::node(grid, 4, 0.7),
      scalar::MassShellFunction::node(grid, 0, 1.0), scalar::MassShellFunction::node(grid, 4, {0.0, -0.5})};
  rel = std::max(rel, thermal::deformed_npoint(pm, R, 1.0).rel_diff);

  r.checks.push_back(below("closed form vs brute force, relative (n=2,4)", rel, cfg.tol("npoint")));
  r.checks.push_back(below("n=3 vanishes", odd, cfg.tol("npoint_zero")));
  r.checks.push_back(below("n=2 kappa independent", two_dep, cfg.tol("kappa_independent")));
  if (!cfg.degenerate_kappa)
    r.checks.push_back(above("n=4 documented config: |w(kappa=1) - w(kappa=0)|", std::abs(d1.brute - d0.brute),
                             cfg.tol("kappa_dependence")));
}

// ------------------------------------------------------------------ 6

void criterion_locality(const SuiteConfig& cfg, CriterionResult& r) {
  Rng rng(cfg.seed, 6);
  const auto grid = scalar::MassShellGrid::cubic(1.0, 1, 0.5);
  const thermal::ThermalRep R(grid, 3, 1.0);
  // Spacelike separation (-1, 4, 0, 0) with a time offset, so parity does not force Im <f, g_y> = 0.
  const Eigen::Vector4d xf(0.5, -2.0, 0.0, 0.0), xg(-0.5, 2.0, 0.0, 0.0);
  const double sigma = cfg.tol("pauli_jordan_sigma");

  double brute = 0.0, shifted = 0.0;
  std::vector<Eigen::Vector4d> shifts;
  for (double k : kappas(cfg, {0.5, 1.0})) {
    const auto f = scalar::MassShellFunction::gaussian(grid, Eigen::Vector3d::Zero(), sigma, xf);
    const auto g = scalar::MassShellFunction::gaussian(grid, Eigen::Vector3d::Zero(), sigma, xg);
    for (const auto& [ff, gg] : {std::pair{f, g}, std::pair{random_function(rng, grid), random_function(rng, grid)}}) {
      const auto rep = thermal::locality_commutator(ff, gg, R, k);
      brute = std::max(brute, rep.brute_vs_sector);
      shifted = std::max(shifted, rep.sector_vs_shifted);
    }
    const Eigen::Matrix4d th = thermal::standard_theta4(k);
    for (auto a : R.fock().protected_states(2)) shifts.push_back(thermal::locality_shift(th, R.momentum(a)));
  }

  // Kernel quadrature on a fine grid at the sector shifts.
  const int K = static_cast<int>(cfg.tol("pauli_jordan_K"));
  const auto fine = scalar::MassShellGrid::cubic(1.0, K, cfg.tol("pauli_jordan_dp"));
  auto normalized = [&](const Eigen::Vector4d& x) {
    auto h = scalar::MassShellFunction::gaussian(fine, Eigen::Vector3d::Zero(), sigma, x);
    h.amp /= std::sqrt(scalar::inner_product_m(h, h).real());
    return h;
  };
  const auto f = normalized(xf), g = normalized(xg);
  double pj = 0.0;
  for (const auto& y : shifts) pj = std::max(pj, std::abs(scalar::inner_product_m(f, scalar::translated(g, y)).imag()));
  const auto g_timelike = normalized(xf + Eigen::Vector4d(1.0, 0.0, 0.0, 0.0));
  const double control = std::abs(scalar::inner_product_m(f, g_timelike).imag());

  r.checks.push_back(below("brute-force commutator vs sector kernel (depth 2)", brute, cfg.tol("locality")));
  r.checks.push_back(below("sector kernel vs shifted-g kernel", shifted, cfg.tol("locality")));
  r.checks.push_back(below("Pauli-Jordan smallness at spacelike centers, all sector shifts", pj, cfg.tol("pauli_jordan")));
  r.checks.push_back(above("commutator kernel at timelike separation (control)", control, cfg.tol("pauli_jordan")));
}

// ------------------------------------------------------------------ 7

geometry::Matrix4 random_lorentz(Rng& rng) {
  auto axis = [&]() {
    Eigen::Vector3d e(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    return Eigen::Vector3d(e.normalized() * rng.uniform(0.0, M_PI));
  };
  return geometry::rotation(axis()) * geometry::boost_x1(rng.uniform(-1.0, 1.0)) * geometry::rotation(axis());
}

geometry::Vector4 random_vector(Rng& rng, double s) {
  return {rng.uniform(-s, s), rng.uniform(-s, s), rng.uniform(-s, s), rng.uniform(-s, s)};
}

// Translation strictly inside the reference wedge, edge components arbitrary.
geometry::Vector4 inside_w0(Rng& rng) {
  const double x1 = rng.uniform(0.2, 1.5);
  return {rng.uniform(-0.9, 0.9) * x1, x1, rng.uniform(-1, 1), rng.uniform(-1, 1)};
}

geometry::Matrix5 random_desitter(Rng& rng) { return suite::random_desitter(rng.engine()); }

void criterion_geometry(const SuiteConfig& cfg, CriterionResult& r) {
  Rng rng(cfg.seed, 7);
  using geometry::Wedge;

  double involution = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Wedge m = Wedge::minkowski(random_lorentz(rng), random_vector(rng, 1.0));
    const Wedge d = Wedge::desitter(random_desitter(rng));
    const Wedge f = Wedge::frw(geometry::FRWChart::power(1.0, 1.0), geometry::KillingPair{geometry::Backend::frw,
                               {0, rng.uniform(-1, 1), 1, 0}, {0, 0, rng.uniform(-1, 1), 1}},
                               {rng.uniform(0.5, 2.0), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    for (const Wedge* w : {&m, &d, &f})
      involution = std::max(involution,
                            geometry::causal_complement(geometry::causal_complement(*w)).canonical().distance(w->canonical()));
  }

  geometry::InclusionOptions opt;
  opt.samples = 10000;
  int contradicted = 0, unexpected = 0;
  std::map<geometry::Inclusion, int> verdicts;
  for (int i = 0; i < 100; ++i) {
    const Wedge w2 = Wedge::minkowski(random_lorentz(rng), random_vector(rng, 1.0));
    std::optional<geometry::Inclusion> expect;
    Wedge w1 = w2;
    switch (i % 4) {
      case 0:
        w1 = Wedge::minkowski(w2.lorentz(), w2.translation() + w2.lorentz() * inside_w0(rng));
        expect = geometry::Inclusion::proper_subset;
        break;
      case 1: {
        const Wedge c = geometry::causal_complement(w2);
        w1 = Wedge::minkowski(c.lorentz(), c.translation() + c.lorentz() * inside_w0(rng));
        expect = geometry::Inclusion::complement_subset;
        break;
      }
      case 2: {
        const geometry::Vector4 edge(0.0, 0.0, rng.uniform(-1, 1), rng.uniform(-1, 1));
        w1 = Wedge::minkowski(w2.lorentz() * geometry::boost_x1(rng.uniform(-1, 1)) *
                                  geometry::rotation({rng.uniform(-M_PI, M_PI), 0.0, 0.0}),
                              w2.translation() + w2.lorentz() * edge);
        expect = geometry::Inclusion::equal;
        break;
      }
      default:
        w1 = Wedge::minkowski(random_lorentz(rng), random_vector(rng, 1.0));
    }
    const bool swap = rng.integer(0, 1) == 1 && i % 4 == 0;
    try {
      const auto v = swap ? geometry::wedge_inclusion(w2, w1, opt) : geometry::wedge_inclusion(w1, w2, opt);
      ++verdicts[v];
      if (expect && v != *expect) ++unexpected;
    } catch (const DiagnosticError&) {
      ++contradicted;
    }
  }

  int proper = 0;
  for (int i = 0; i < 100; ++i) {
    const Wedge w1 = Wedge::desitter(random_desitter(rng));
    const Wedge w2 = i % 5 == 0 ? Wedge::desitter(w1.ambient() * geometry::desitter_reference_boost(rng.uniform(-1, 1)))
                                : Wedge::desitter(random_desitter(rng));
    const auto e = geometry::sample_relation(w1, w2, 10000);
    if ((e.w1_not_w2 == 0 && e.w2_not_w1 > 0) || (e.w2_not_w1 == 0 && e.w1_not_w2 > 0)) ++proper;
    if (geometry::analytic_inclusion(w1, w2) == geometry::Inclusion::proper_subset) ++proper;
  }

  const auto chart = geometry::FRWChart::power(1.0, 1.0);
  double roundtrip = 0.0;
  for (int i = 0; i < 50; ++i) {
    Eigen::Vector3d u(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    Eigen::Vector3d v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    geometry::Edge E{geometry::Backend::frw,
                     {rng.uniform(0.2, 5.0), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)},
                     {geometry::Backend::frw, {0, u[0], u[1], u[2]}, {0, v[0], v[1], v[2]}}};
    const auto img = geometry::frw_edge_image(E, *chart);
    const auto back = geometry::frw_edge_from_flat(img, *chart);
    roundtrip = std::max({roundtrip, (back.base - E.base).cwiseAbs().maxCoeff(),
                          (back.xi.xi1 - E.xi.xi1).cwiseAbs().maxCoeff(), (back.xi.xi2 - E.xi.xi2).cwiseAbs().maxCoeff()});
  }
  const double tau_e = std::abs(chart->tau(std::exp(1.0)) - 1.0);

  r.checks.push_back(below("complement involution on canonical forms", involution, cfg.tol("involution")));
  r.checks.push_back(count_zero("Minkowski verdicts contradicted by 1e4-point sampling", contradicted));
  r.checks.push_back(count_zero("Minkowski verdicts differing from construction", unexpected));
  for (auto v : {geometry::Inclusion::equal, geometry::Inclusion::proper_subset, geometry::Inclusion::complement_subset,
                 geometry::Inclusion::incomparable})
    r.checks.push_back(above("Minkowski pairs with verdict " + geometry::to_string(v), verdicts[v], 0.0));
  r.checks.push_back(count_zero("de Sitter proper inclusions found", proper));
  r.checks.push_back(below("FRW edge round trip", roundtrip, cfg.tol("frw_roundtrip")));
  r.checks.push_back(below("a(t)=t: |tau(e) - 1|", tau_e, cfg.tol("frw_roundtrip")));
}

// ------------------------------------------------------------------ 8

double spectral_norm(const Matrix& m) { return Eigen::JacobiSVD<Matrix>(m).singularValues()[0]; }

void criterion_car(const SuiteConfig& cfg, CriterionResult& r) {
  Rng rng(cfg.seed, 8);
  double anti = 0.0, star = 0.0, norm = 0.0, engine = 0.0, vacuum = 0.0, wick = 0.0, four = 0.0;
  for (int d = 1; d <= 4; ++d) {
    std::vector<double> k;
    for (int j = 0; j < d; ++j) k.push_back(rng.integer(-3, 3));
    std::vector<bool> mask;
    for (int j = 0; j < d; ++j) mask.push_back(rng.integer(0, 3) != 0);
    const car::CarRep R = car::CarRep::with_boost(k, mask);
    const auto& h = R.space();
    const Matrix I = Matrix::Identity(R.dim(), R.dim());
    for (int t = 0; t < 10; ++t) {
      const auto f = rng.vector(h.dim()), g = rng.vector(h.dim());
      const Matrix Bf = R.b_operator(f), Bg = R.b_operator(g);
      anti = std::max(anti, spectral::max_abs(Matrix(Bf * Bg + Bg * Bf - h.form(f, g) * I)));
      star = std::max(star, spectral::max_abs(Matrix(Bf.adjoint() - R.b_operator(h.conjugate(f)))));
      norm = std::max(norm, std::abs(spectral_norm(Bf) - car::b_norm_formula(f, h)));
    }
    const auto lam = R.joint_eigenvalues();
    for (int t = 0; t < 5; ++t) {
      Eigen::VectorXcd fp = Eigen::VectorXcd::Zero(h.dim()), fm = Eigen::VectorXcd::Zero(h.dim());
      fp.head(d) = rng.vector(d);
      fm.tail(d) = rng.vector(d);
      const Matrix Bp = R.b_operator(fp), Bm = R.b_operator(fm);
      Eigen::VectorXcd fp2 = Eigen::VectorXcd::Zero(h.dim());
      fp2.head(d) = rng.vector(d);
      const std::vector<std::pair<Matrix, int>> ops{
          {Bp, 1}, {Bm, -1}, {Bp * Bm, 0}, {Bp * R.b_operator(fp2), 2}, {R.charge_projection(0), 0}};
      for (const auto& [F, m] : ops) {
        if (!car::homogeneity_violations(F, m, R).empty()) continue;
        for (double kk : kappas(cfg, {0.1, 1.0, 10.0})) {
          engine = std::max(engine, spectral::max_abs(Matrix(car::sector_deform(F, m, kk, R) -
                                                             spectral::warp(F, lam, spectral::DeformationMatrix(kk)))));
          vacuum = std::max(vacuum, car::deformed_vacuum_check(F, m, kk, R));
        }
      }
    }
    if (d >= 2) {
      const car::QuasifreeSpec S{R.projection()};
      for (int n : {1, 2, 3, 4, 5, 6}) {
        std::vector<Eigen::VectorXcd> fs;
        for (int i = 0; i < n; ++i) fs.push_back(rng.vector(h.dim()));
        wick = std::max(wick, std::abs(car::quasifree_moments(S, fs, h) - car::fock_moment(fs, R)));
      }
      std::vector<Eigen::VectorXcd> fs;
      for (int i = 0; i < 4; ++i) fs.push_back(rng.vector(h.dim()));
      for (double kk : kappas(cfg, {0.0, 0.5, 1.0})) four = std::max(four, car::deformed_car_fourpoint(fs, kk, R).abs_diff);
    }
  }

  // Fixed-point biconditional on 20 gauge-invariant operators.
  const car::CarRep R = car::CarRep::with_boost({1, 1, 2, -1});
  int mismatched = 0, wrong_class = 0;
  double fd = 0.0;
  for (int t = 0; t < 20; ++t) {
    Matrix A = Matrix::Zero(R.dim(), R.dim());
    bool expect_zero = true;
    switch (t % 5) {
      case 0:
        for (Eigen::Index a = 0; a < R.dim(); ++a) A(a, a) = rng.uniform(-1, 1);
        break;
      case 1:
        A = R.annihilator(0).adjoint() * R.annihilator(1) * rng.complex();
        A += A.adjoint().eval();
        break;
      case 2: {
        Eigen::VectorXcd fm = Eigen::VectorXcd::Zero(8), fpv = Eigen::VectorXcd::Zero(8);
        fm[4 + 2] = 1.0;
        fpv[0] = 1.0;
        A = R.b_operator(fm) * R.b_operator(fpv);
        expect_zero = false;
        break;
      }
      case 3:
        A = rng.matrix(R.dim());
        for (Eigen::Index a = 0; a < R.dim(); ++a)
          for (Eigen::Index b = 0; b < R.dim(); ++b)
            if (R.charge(a) != R.charge(b) || (R.boost(a) != R.boost(b) && R.charge(b) != 0)) A(a, b) = 0.0;
        break;
      default:
        A = rng.matrix(R.dim());
        for (Eigen::Index a = 0; a < R.dim(); ++a)
          for (Eigen::Index b = 0; b < R.dim(); ++b)
            if (R.charge(a) != R.charge(b)) A(a, b) = 0.0;
        expect_zero = false;
    }
    const auto rep = car::fixed_point_derivative(A, R);
    if (rep.derivative_zero != rep.commutes_off_zero) ++mismatched;
    if (rep.derivative_zero != expect_zero) ++wrong_class;
    fd = std::max(fd, rep.finite_difference_error);
  }

  r.checks.push_back(below("anticommutator {B(f),B(g)} - <cf,g>", anti, cfg.tol("car_exact")));
  r.checks.push_back(below("B(f)* - B(cf)", star, cfg.tol("car_exact")));
  r.checks.push_back(below("norm formula vs spectral norm", norm, cfg.tol("car_norm")));
  r.checks.push_back(below("sector_deform vs warp", engine, cfg.tol("car_engine")));
  r.checks.push_back(below("deformed vacuum residual", vacuum, cfg.tol("car_vacuum")));
  r.checks.push_back(count_zero("fixed-point biconditional violations (20 operators)", mismatched));
  r.checks.push_back(count_zero("fixed-point derivative class differing from construction", wrong_class));
  r.checks.push_back(below("fixed-point derivative vs finite difference", fd, cfg.tol("fixed_point_fd")));
  r.checks.push_back(below("fermionic Wick vs brute force", wick, cfg.tol("car_wick")));
  r.checks.push_back(below("deformed 4-point closed form vs brute force", four, cfg.tol("car_fourpoint")));
}

struct Entry {
  const char* title;
  double budget;
  void (*run)(const SuiteConfig&, CriterionResult&);
};

const Entry kEntries[] = {
    {"engine equivalence", 30.0, criterion_engine},
    {"deformation algebra", 5.0, criterion_algebra},
    {"thermal structure", 10.0, criterion_thermal},
    {"deformed exchange relations", 10.0, criterion_exchange},
    {"deformed n-point oracle", 60.0, criterion_npoint},
    {"locality reduction", 30.0, criterion_locality},
    {"geometry laws", 60.0, criterion_geometry},
    {"CAR suite", 30.0, criterion_car},
};

}  // namespace

std::map<std::string, double> SuiteConfig::default_tolerances() {
  return {
      {"oscillatory", 1e-6},       {"algebra", 1e-12},        {"ccr", 1e-10},
      {"two_point", 1e-12},        {"kms", 1e-14},            {"exchange", 1e-12},
      {"engine", 1e-13},           {"npoint", 1e-10},         {"npoint_zero", 1e-14},
      {"kappa_independent", 1e-12}, {"kappa_dependence", 1e-6}, {"locality", 1e-10},
      {"pauli_jordan", 1e-3},      {"pauli_jordan_sigma", 2.0}, {"pauli_jordan_dp", 0.3},
      {"pauli_jordan_K", 27.0},    {"involution", 1e-15},     {"frw_roundtrip", 1e-10},
      {"car_exact", 1e-13},        {"car_norm", 1e-10},       {"car_engine", 1e-14},
      {"car_vacuum", 1e-12},       {"car_wick", 1e-12},       {"car_fourpoint", 1e-10},
      {"fixed_point_fd", 1e-8},
  };
}

double SuiteConfig::tol(const std::string& key) const {
  const auto it = tolerances.find(key);
  if (it == tolerances.end()) throw PreconditionError("unknown tolerance key: " + key);
  return it->second;
}

bool CriterionResult::passed() const {
  if (!error.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<std::string> CriterionResult::failing() const {
  std::vector<std::string> out;
  if (!error.empty()) out.push_back("error: " + error);
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name);
  return out;
}

CriterionResult run_criterion(int id, const SuiteConfig& cfg) {
  if (id < 1 || id > 8) throw PreconditionError("criterion id must be in 1..8");
  const Entry& e = kEntries[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  r.budget = e.budget * cfg.budget_scale;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    e.run(cfg, r);
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Check budget{"runtime budget", r.seconds, r.budget, "<", r.seconds < r.budget, true};
  r.checks.push_back(budget);
  return r;
}

std::vector<CriterionResult> run_suite(const SuiteConfig& cfg) {
  std::vector<CriterionResult> out;
  for (int id : cfg.criteria) out.push_back(run_criterion(id, cfg));
  return out;
}

Eigen::Matrix<double, 5, 5> random_desitter(std::mt19937_64& eng) {
  auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); };
  auto integer = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); };
  Eigen::Matrix<double, 5, 5> h = Eigen::Matrix<double, 5, 5>::Identity();
  for (int s = 0; s < 6; ++s) {
    Eigen::Matrix<double, 5, 5> g = Eigen::Matrix<double, 5, 5>::Identity();
    const int i = integer(1, 4);
    if (s % 2 == 0) {
      const double t = uniform(-1.0, 1.0);
      g(0, 0) = g(i, i) = std::cosh(t);
      g(0, i) = g(i, 0) = std::sinh(t);
    } else {
      int j = integer(1, 4);
      if (j == i) j = i % 4 + 1;
      const double a = uniform(0.0, 2.0 * M_PI);
      g(i, i) = g(j, j) = std::cos(a);
      g(i, j) = -std::sin(a);
      g(j, i) = std::sin(a);
    }
    h = h * g;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string to_csv(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  os << "criterion,title,check,value,relation,bound,pass\n";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& r : results) {
    for (const auto& c : r.checks)
      os << r.id << ',' << quote(r.title) << ',' << quote(c.name) << ',' << (c.timing ? "-" : format_double(c.value))
         << ',' << c.relation << ',' << format_double(c.bound) << ',' << (c.passed ? "pass" : "fail") << '\n';
    if (!r.error.empty())
      os << r.id << ',' << quote(r.title) << ',' << quote("error: " + r.error) << ",-,flag,-,fail\n";
  }
  return os.str();
}

nlohmann::json to_json(const std::vector<CriterionResult>& results) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
      nlohmann::json j{{"name", c.name}, {"relation", c.relation}, {"bound", c.bound}, {"pass", c.passed}};
      if (!c.timing) j["value"] = c.value;
      checks.push_back(j);
    }
    nlohmann::json j{{"criterion", r.id}, {"title", r.title}, {"pass", r.passed()}, {"checks", checks}};
    if (!r.error.empty()) j["error"] = r.error;
    out.push_back(j);
  }
  return out;
}

}  // namespace warpfield::suite
