#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "warpfield/scalar.hpp"
#include "warpfield/spectral.hpp"

namespace warpfield::thermal {

using scalar::cplx;
using scalar::Index;
using scalar::MassShellFunction;
using scalar::SparseMatrix;

// Mat_-(4) matrix with theta_{23} = kappa = -theta_{32} (coordinates x^0..x^3).
Eigen::Matrix4d standard_theta4(double kappa);
// Throws StructuralError("theta antisymmetry violated") unless theta^T = -theta.
void validate_theta4(const Eigen::Matrix4d& theta);

struct ThermalParams {
  double beta = 1.0;
  double mass = 1.0;
  double kappa = 0.0;
  void validate() const;
  Eigen::Matrix4d theta4() const { return standard_theta4(kappa); }
};

// Araki-Woods representation on the doubled truncated Fock space (particles, then holes).
class ThermalRep {
 public:
  ThermalRep(scalar::GridPtr grid, int max_total, double beta);

  const scalar::TruncatedFock& fock() const { return fock_; }
  const scalar::GridPtr& grid() const { return fock_.grid(); }
  double beta() const { return beta_; }
  Index dim() const { return fock_.dim(); }
  int nodes() const { return grid()->size(); }

  // rho_j = 1 / (exp(beta eps_j) - 1)
  double rho(int j) const { return rho_[static_cast<std::size_t>(j)]; }
  const Eigen::VectorXd& rho() const { return rho_; }

  // Eigenvalue of P_beta on basis state a: particle momenta minus hole momenta.
  const Eigen::Vector4d& momentum(Index a) const { return momenta_[static_cast<std::size_t>(a)]; }
  // Edge pair (Lambda^2, Lambda^3) per basis state.
  const std::vector<spectral::Vec2>& edge_eigenvalues() const { return edge_; }
  spectral::RepPtr edge_rep() const;

  // exp(i Lambda_a . y), Minkowski product.
  Eigen::VectorXcd translation_diagonal(const Eigen::Vector4d& y) const;

  // sum_j c_j exp(-i p_j.theta Lambda) [sqrt(1+rho_j) b_j + sqrt(rho_j) h_j^dagger];
  // theta == nullptr gives the undeformed combination.
  SparseMatrix assemble_lowering(const Eigen::VectorXcd& c, const Eigen::Matrix4d* theta) const;

  // a_beta(p_j), normalized so that [a_beta(p_j), a_beta^dagger(p_k)] = delta_jk / w_j.
  SparseMatrix mode_lowering(int j) const;
  SparseMatrix deformed_mode_lowering(int j, const Eigen::Matrix4d& theta) const;

  // Unitary permuting particle and hole modes by a grid automorphism r.
  SparseMatrix rotation_unitary(const Eigen::Matrix3d& r) const;

 private:
  scalar::TruncatedFock fock_;
  double beta_;
  Eigen::VectorXd rho_;
  std::vector<Eigen::Vector4d> momenta_;
  std::vector<spectral::Vec2> edge_;
};

struct Ladder {
  SparseMatrix a;
  SparseMatrix adag;
};

Ladder thermal_ladder(const MassShellFunction& phi, const ThermalRep& R);
SparseMatrix thermal_field(const MassShellFunction& f, const ThermalRep& R);

Ladder deformed_thermal_ladder(const MassShellFunction& phi, const ThermalRep& R, double kappa);
Ladder deformed_thermal_ladder(const MassShellFunction& phi, const ThermalRep& R, const Eigen::Matrix4d& theta);
SparseMatrix deformed_thermal_field(const MassShellFunction& f, const ThermalRep& R, double kappa);
SparseMatrix deformed_thermal_field(const MassShellFunction& f, const ThermalRep& R, const Eigen::Matrix4d& theta);

// <Omega, phi(f) phi(g) Omega> = (1/2)[<f,(1+rho)g> + <g,rho f>].
cplx thermal_two_point(const MassShellFunction& f, const MassShellFunction& g, const ThermalRep& R);

// <Omega, A_1 ... A_n Omega> evaluated right to left on the vacuum vector.
cplx vacuum_expectation(const std::vector<const SparseMatrix*>& ops, const ThermalRep& R);

// Translation y with e^{i p.y} = e^{-2i p.theta Lambda} for every node p.
Eigen::Vector4d locality_shift(const Eigen::Matrix4d& theta, const Eigen::Vector4d& lambda);

struct LocalityReport {
  SparseMatrix commutator;           // [phi_theta(f), phi_-theta(g)]
  std::vector<Index> sectors;        // protected basis states (depth 2)
  std::vector<cplx> sector_values;   // i Im sum_j w_j conj(f_j) g_j e^{-2i p_j.theta Lambda_a}
  std::vector<cplx> shifted_values;  // i Im <f, g_{y_a}>
  double brute_vs_sector = 0.0;      // entrywise on protected columns
  double sector_vs_shifted = 0.0;
};

// Requires an inversion-closed grid.
LocalityReport locality_commutator(const MassShellFunction& f, const MassShellFunction& g, const ThermalRep& R,
                                   double kappa);

struct NpointResult {
  cplx closed = 0.0;
  cplx brute = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
};

// Closed form: pairings of mode two-point functions dressed with prod_{k<l} e^{i q_k.theta q_l}.
// Throws PreconditionError when N < n/2 + 1 or n exceeds max_points.
NpointResult deformed_npoint(const std::vector<MassShellFunction>& fs, const ThermalRep& R,
                             const Eigen::Matrix4d& theta, int max_points = 6);
NpointResult deformed_npoint(const std::vector<MassShellFunction>& fs, const ThermalRep& R, double kappa,
                             int max_points = 6);

// (1,1)-sector component of [phi_theta(f) - phi_theta'(f)] |one particle at node p>
// on the state (particle p, hole q).
struct FingerprintResult {
  cplx brute = 0.0;
  cplx formula = 0.0;
};
FingerprintResult inequivalence_fingerprint(const MassShellFunction& f, int p, int q, const ThermalRep& R,
                                            const Eigen::Matrix4d& theta, const Eigen::Matrix4d& theta_prime);

}  // namespace warpfield::thermal
