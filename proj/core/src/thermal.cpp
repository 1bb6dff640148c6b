#include "warpfield/thermal.hpp"

#include <cmath>

#include "warpfield/errors.hpp"
#include "warpfield/wick.hpp"

namespace warpfield::thermal {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_grid(const MassShellFunction& f, const ThermalRep& R, const char* where) {
  if (f.grid.get() != R.grid().get()) throw StructuralError(std::string(where) + ": grid mismatch");
}

SparseMatrix field_from(const Ladder& l) { return (l.a + l.adag) * kInvSqrt2; }

Eigen::VectorXcd smearing(const MassShellFunction& phi, const ThermalRep& R) {
  Eigen::VectorXcd c(R.nodes());
  for (int j = 0; j < R.nodes(); ++j) c[j] = std::sqrt(R.grid()->weight(j)) * std::conj(phi.amp[j]);
  return c;
}

}  // namespace

Eigen::Matrix4d standard_theta4(double kappa) {
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  t(2, 3) = kappa;
  t(3, 2) = -kappa;
  return t;
}

void validate_theta4(const Eigen::Matrix4d& theta) {
  if ((theta + theta.transpose()).cwiseAbs().maxCoeff() != 0.0) throw StructuralError("theta antisymmetry violated");
}

void ThermalParams::validate() const {
  if (!(beta > 0.0)) throw PreconditionError("ThermalParams: beta must be positive");
  if (!(mass > 0.0)) throw PreconditionError("ThermalParams: mass must be positive");
  if (!std::isfinite(kappa)) throw PreconditionError("ThermalParams: kappa must be finite");
}

ThermalRep::ThermalRep(scalar::GridPtr grid, int max_total, double beta)
    : fock_(std::move(grid), max_total, true), beta_(beta) {
  if (!(beta_ > 0.0)) throw PreconditionError("ThermalRep: beta must be positive");
  const int K = nodes();
  rho_.resize(K);
  for (int j = 0; j < K; ++j) rho_[j] = 1.0 / std::expm1(beta_ * this->grid()->energy(j));
  momenta_.resize(static_cast<std::size_t>(dim()));
  edge_.resize(static_cast<std::size_t>(dim()));
  for (Index a = 0; a < dim(); ++a) {
    Eigen::Vector4d L = Eigen::Vector4d::Zero();
    for (int j = 0; j < K; ++j) {
      const int n = fock_.occupation(a, j) - fock_.occupation(a, K + j);
      if (n != 0) L += n * this->grid()->momentum4(j);
    }
    momenta_[static_cast<std::size_t>(a)] = L;
    edge_[static_cast<std::size_t>(a)] = spectral::Vec2(L[2], L[3]);
  }
}

spectral::RepPtr ThermalRep::edge_rep() const { return std::make_shared<const spectral::JointSpectrumRep>(edge_); }

Eigen::VectorXcd ThermalRep::translation_diagonal(const Eigen::Vector4d& y) const {
  Eigen::VectorXcd d(dim());
  for (Index a = 0; a < dim(); ++a) {
    const auto& L = momenta_[static_cast<std::size_t>(a)];
    d[a] = std::polar(1.0, L[0] * y[0] - L.tail<3>().dot(y.tail<3>()));
  }
  return d;
}

SparseMatrix ThermalRep::assemble_lowering(const Eigen::VectorXcd& c, const Eigen::Matrix4d* theta) const {
  const int K = nodes();
  if (c.size() != K) throw StructuralError("ThermalRep: coefficient length differs from node count");
  std::vector<Eigen::Vector4d> tl;
  if (theta) {
    tl.resize(static_cast<std::size_t>(dim()));
    for (Index a = 0; a < dim(); ++a) tl[static_cast<std::size_t>(a)] = *theta * momenta_[static_cast<std::size_t>(a)];
  }
  std::vector<Eigen::Triplet<cplx>> t;
  for (Index a = 0; a < dim(); ++a)
    for (int j = 0; j < K; ++j) {
      if (c[j] == cplx(0.0)) continue;
      auto emit = [&](Index b, double amp) {
        cplx v = c[j] * amp;
        if (theta) v *= std::polar(1.0, -grid()->momentum4(j).dot(tl[static_cast<std::size_t>(b)]));
        t.emplace_back(b, a, v);
      };
      const int np = fock_.occupation(a, j);
      if (np > 0) emit(fock_.lowered(a, j), std::sqrt((1.0 + rho_[j]) * np));
      const Index up = fock_.raised(a, K + j);
      if (up >= 0) emit(up, std::sqrt(rho_[j] * (fock_.occupation(a, K + j) + 1)));
    }
  SparseMatrix m(dim(), dim());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix ThermalRep::mode_lowering(int j) const {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(nodes());
  c[j] = 1.0 / std::sqrt(grid()->weight(j));
  return assemble_lowering(c, nullptr);
}

SparseMatrix ThermalRep::deformed_mode_lowering(int j, const Eigen::Matrix4d& theta) const {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(nodes());
  c[j] = 1.0 / std::sqrt(grid()->weight(j));
  return assemble_lowering(c, &theta);
}

SparseMatrix ThermalRep::rotation_unitary(const Eigen::Matrix3d& r) const {
  const std::vector<int> perm = grid()->automorphism(r);
  const int K = nodes();
  std::vector<int> occ(static_cast<std::size_t>(2 * K));
  std::vector<Eigen::Triplet<cplx>> t;
  for (Index a = 0; a < dim(); ++a) {
    for (int j = 0; j < K; ++j) {
      occ[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = fock_.occupation(a, j);
      occ[static_cast<std::size_t>(K + perm[static_cast<std::size_t>(j)])] = fock_.occupation(a, K + j);
    }
    t.emplace_back(*fock_.index_of(occ), a, 1.0);
  }
  SparseMatrix U(dim(), dim());
  U.setFromTriplets(t.begin(), t.end());
  return U;
}

Ladder thermal_ladder(const MassShellFunction& phi, const ThermalRep& R) {
  require_grid(phi, R, "thermal_ladder");
  SparseMatrix a = R.assemble_lowering(smearing(phi, R), nullptr);
  SparseMatrix adag = a.adjoint();
  return {std::move(a), std::move(adag)};
}

SparseMatrix thermal_field(const MassShellFunction& f, const ThermalRep& R) { return field_from(thermal_ladder(f, R)); }

Ladder deformed_thermal_ladder(const MassShellFunction& phi, const ThermalRep& R, const Eigen::Matrix4d& theta) {
  require_grid(phi, R, "deformed_thermal_ladder");
  validate_theta4(theta);
  SparseMatrix a = R.assemble_lowering(smearing(phi, R), &theta);
  SparseMatrix adag = a.adjoint();
  return {std::move(a), std::move(adag)};
}

Ladder deformed_thermal_ladder(const MassShellFunction& phi, const ThermalRep& R, double kappa) {
  return deformed_thermal_ladder(phi, R, standard_theta4(kappa));
}

SparseMatrix deformed_thermal_field(const MassShellFunction& f, const ThermalRep& R, const Eigen::Matrix4d& theta) {
  return field_from(deformed_thermal_ladder(f, R, theta));
}

SparseMatrix deformed_thermal_field(const MassShellFunction& f, const ThermalRep& R, double kappa) {
  return deformed_thermal_field(f, R, standard_theta4(kappa));
}

cplx thermal_two_point(const MassShellFunction& f, const MassShellFunction& g, const ThermalRep& R) {
  require_grid(f, R, "thermal_two_point");
  require_grid(g, R, "thermal_two_point");
  cplx s = 0.0;
  for (int j = 0; j < R.nodes(); ++j) {
    const double w = R.grid()->weight(j), rho = R.rho(j);
    s += w * (std::conj(f.amp[j]) * g.amp[j] * (1.0 + rho) + std::conj(g.amp[j]) * f.amp[j] * rho);
  }
  return 0.5 * s;
}

cplx vacuum_expectation(const std::vector<const SparseMatrix*>& ops, const ThermalRep& R) {
  Eigen::VectorXcd v = R.fock().vacuum();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) v = (**it) * v;
  return v[0];
}

Eigen::Vector4d locality_shift(const Eigen::Matrix4d& theta, const Eigen::Vector4d& lambda) {
  const Eigen::Vector4d t = theta * lambda;
  return {-2.0 * t[0], 2.0 * t[1], 2.0 * t[2], 2.0 * t[3]};
}

LocalityReport locality_commutator(const MassShellFunction& f, const MassShellFunction& g, const ThermalRep& R,
                                   double kappa) {
  require_grid(f, R, "locality_commutator");
  require_grid(g, R, "locality_commutator");
  if (!R.grid()->inversion_closed()) throw PreconditionError("locality_commutator: grid is not inversion-closed");
  const Eigen::Matrix4d theta = standard_theta4(kappa);
  const SparseMatrix A = deformed_thermal_field(f, R, theta);
  const SparseMatrix B = deformed_thermal_field(g, R, Eigen::Matrix4d(-theta));

  LocalityReport r;
  r.sectors = R.fock().protected_states(2);
  const SparseMatrix S = R.fock().selector(r.sectors);
  const SparseMatrix AS = A * S, BS = B * S;
  r.commutator = SparseMatrix(A * BS) - SparseMatrix(B * AS);
  r.commutator.makeCompressed();

  const auto& grid = *R.grid();
  for (std::size_t k = 0; k < r.sectors.size(); ++k) {
    const Eigen::Vector4d& L = R.momentum(r.sectors[k]);
    const Eigen::Vector4d tl = theta * L;
    cplx s = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
      const cplx e = std::polar(1.0, -2.0 * grid.momentum4(j).dot(tl));
      s += grid.weight(j) * (std::conj(f.amp[j]) * g.amp[j] * e - f.amp[j] * std::conj(g.amp[j]) * std::conj(e));
    }
    r.sector_values.push_back(0.5 * s);
    const cplx shifted = scalar::inner_product_m(f, scalar::translated(g, locality_shift(theta, L)));
    r.shifted_values.push_back(cplx(0.0, shifted.imag()));
    r.sector_vs_shifted = std::max(r.sector_vs_shifted, std::abs(r.sector_values.back() - r.shifted_values.back()));

    const auto col = static_cast<Index>(k);
    bool diag = false;
    for (SparseMatrix::InnerIterator it(r.commutator, col); it; ++it) {
      const bool on = it.row() == r.sectors[k];
      diag = diag || on;
      r.brute_vs_sector = std::max(r.brute_vs_sector, std::abs(it.value() - (on ? r.sector_values.back() : 0.0)));
    }
    if (!diag) r.brute_vs_sector = std::max(r.brute_vs_sector, std::abs(r.sector_values.back()));
  }
  return r;
}

NpointResult deformed_npoint(const std::vector<MassShellFunction>& fs, const ThermalRep& R,
                             const Eigen::Matrix4d& theta, int max_points) {
  validate_theta4(theta);
  const int n = static_cast<int>(fs.size());
  if (n > max_points)
    throw PreconditionError("deformed_npoint: n=" + std::to_string(n) + " exceeds the configured maximum " +
                            std::to_string(max_points));
  const int required = n / 2 + 1;
  if (R.fock().max_total() < required)
    throw PreconditionError("deformed_npoint: truncation N=" + std::to_string(R.fock().max_total()) +
                            " too small, n=" + std::to_string(n) + " requires N >= " + std::to_string(required));
  for (const auto& f : fs) require_grid(f, R, "deformed_npoint");

  NpointResult res;
  // Brute force: product of deformed field matrices on the thermal vacuum.
  {
    std::vector<SparseMatrix> fields;
    fields.reserve(fs.size());
    for (const auto& f : fs) fields.push_back(deformed_thermal_field(f, R, theta));
    std::vector<const SparseMatrix*> ops;
    for (const auto& m : fields) ops.push_back(&m);
    res.brute = vacuum_expectation(ops, R);
  }

  if (n % 2 == 0 && n > 0) {
    const auto& grid = *R.grid();
    const int K = grid.size();
    const int pairs = n / 2;
    const auto& set = wick::enumerate_pairings(pairs, wick::Statistics::bose);
    const double c2 = 0.5;  // (1/sqrt 2)^2 per pair
    std::vector<Eigen::Vector4d> q(static_cast<std::size_t>(n));
    std::vector<int> choice(static_cast<std::size_t>(pairs));
    cplx total = 0.0;
    for (const auto& pairing : set.pairings) {
      // Each pair (k, l) picks a node j and an order: a at k and a^dagger at l, or the reverse.
      std::fill(choice.begin(), choice.end(), 0);
      while (true) {
        cplx term = 1.0;
        for (int s = 0; s < pairs && term != cplx(0.0); ++s) {
          const auto [k, l] = pairing[static_cast<std::size_t>(s)];
          const int j = choice[static_cast<std::size_t>(s)] / 2;
          const bool a_first = choice[static_cast<std::size_t>(s)] % 2 == 0;
          const double w = grid.weight(j), rho = R.rho(j);
          const Eigen::Vector4d p = grid.momentum4(j);
          const cplx fk = fs[static_cast<std::size_t>(k)].amp[j], fl = fs[static_cast<std::size_t>(l)].amp[j];
          if (a_first) {
            term *= c2 * w * std::conj(fk) * w * fl * (1.0 + rho) / w;
            q[static_cast<std::size_t>(k)] = p;
            q[static_cast<std::size_t>(l)] = -p;
          } else {
            term *= c2 * w * fk * w * std::conj(fl) * rho / w;
            q[static_cast<std::size_t>(k)] = -p;
            q[static_cast<std::size_t>(l)] = p;
          }
        }
        if (term != cplx(0.0)) {
          double phase = 0.0;
          for (int k = 0; k < n; ++k)
            for (int l = k + 1; l < n; ++l)
              phase += q[static_cast<std::size_t>(k)].dot(theta * q[static_cast<std::size_t>(l)]);
          total += term * std::polar(1.0, phase);
        }
        int s = pairs - 1;
        while (s >= 0 && ++choice[static_cast<std::size_t>(s)] == 2 * K) choice[static_cast<std::size_t>(s--)] = 0;
        if (s < 0) break;
      }
    }
    res.closed = total;
  } else if (n == 0) {
    res.closed = 1.0;
  }
  res.abs_diff = std::abs(res.closed - res.brute);
  res.rel_diff = res.abs_diff / std::max({std::abs(res.brute), std::abs(res.closed), 1e-300});
  return res;
}

NpointResult deformed_npoint(const std::vector<MassShellFunction>& fs, const ThermalRep& R, double kappa,
                             int max_points) {
  return deformed_npoint(fs, R, standard_theta4(kappa), max_points);
}

FingerprintResult inequivalence_fingerprint(const MassShellFunction& f, int p, int q, const ThermalRep& R,
                                            const Eigen::Matrix4d& theta, const Eigen::Matrix4d& theta_prime) {
  require_grid(f, R, "inequivalence_fingerprint");
  const int K = R.nodes();
  if (R.fock().max_total() < 2) throw PreconditionError("inequivalence_fingerprint: needs N >= 2");
  std::vector<int> occ(static_cast<std::size_t>(2 * K), 0);
  occ[static_cast<std::size_t>(p)] = 1;
  const Index src = *R.fock().index_of(occ);
  occ[static_cast<std::size_t>(K + q)] = 1;
  const Index dst = *R.fock().index_of(occ);
  const SparseMatrix D =
      deformed_thermal_field(f, R, theta) - deformed_thermal_field(f, R, theta_prime);
  FingerprintResult r;
  r.brute = D.coeff(dst, src);
  const Eigen::Vector4d pp = R.grid()->momentum4(p), qq = R.grid()->momentum4(q);
  const cplx diff = std::polar(1.0, -qq.dot(theta * pp)) - std::polar(1.0, -qq.dot(theta_prime * pp));
  r.formula = kInvSqrt2 * std::sqrt(R.grid()->weight(q) * R.rho(q)) * std::conj(f.amp[q]) * diff;
  return r;
}

}  // namespace warpfield::thermal
