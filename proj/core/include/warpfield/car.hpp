#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "warpfield/spectral.hpp"

namespace warpfield::car {

using spectral::cplx;
using spectral::Matrix;
using spectral::Vec2;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// h = C^d (+) C^d with conjugation c(f+ (+) f-) = conj(f-) (+) conj(f+).
class SelfdualSpace {
 public:
  explicit SelfdualSpace(int d);
  int d() const { return d_; }
  int dim() const { return 2 * d_; }
  Vector conjugate(const Vector& x) const;
  // Matrix of the antilinear conjugation: c x = Gamma conj(x).
  Matrix gamma() const;
  // <c f, g> = f^T Gamma g
  cplx form(const Vector& f, const Vector& g) const;
  // c S c as a linear operator: Gamma conj(S) Gamma.
  Matrix conjugated(const Matrix& S) const;

 private:
  int d_;
};

// Fermionic Fock space over P h for the basis projection P = diag(P1, 1 - P1),
// P1 = diag(mask). Fock mode j is e_j (+) 0 (charge +1, boost k_j) when mask[j],
// otherwise 0 (+) e_j (charge -1, boost -k_j). Basis state bits follow the
// Jordan-Wigner order of the modes; index 0 is the vacuum.
class CarRep {
 public:
  CarRep(int d, const Eigen::MatrixXd& k, std::vector<bool> mask = {}, int max_d = 10);
  static CarRep with_boost(const std::vector<double>& k, std::vector<bool> mask = {});

  const SelfdualSpace& space() const { return space_; }
  int d() const { return space_.d(); }
  Index dim() const { return dim_; }
  const std::vector<bool>& mask() const { return mask_; }
  const Eigen::VectorXd& boost_spectrum() const { return k_; }

  Matrix projection() const;
  // Fock vector of mode j within P h.
  Vector mode_vector(int j) const;
  // Jordan-Wigner annihilator of Fock mode j.
  const Matrix& annihilator(int j) const { return c_[static_cast<std::size_t>(j)]; }

  // a^dagger(v) = sum_j <u_j, v> c_j^dagger, linear in v; a(v) its adjoint.
  Matrix creation(const Vector& v) const;
  Matrix annihilation(const Vector& v) const;
  // B(f) = a^dagger(P f) + a(P c f)
  Matrix b_operator(const Vector& f) const;

  int charge(Index a) const { return charge_[static_cast<std::size_t>(a)]; }
  double boost(Index a) const { return boost_[static_cast<std::size_t>(a)]; }
  // Joint eigenvalues (K_xi, Q) per basis state.
  spectral::RepPtr joint_rep() const;
  std::vector<Vec2> joint_eigenvalues() const;

  Matrix grading() const;  // Y = (-1)^N
  Matrix twist() const;    // Z = (1 - iY)/sqrt 2
  Matrix gauge_unitary(double s) const;  // exp(i s Q)
  Matrix boost_unitary(double s) const;  // exp(i s K_xi)
  Matrix charge_projection(int n) const;  // E(n)

  // One-particle joint eigenvalue of basis vector i of h: (k_i, +1) or (-k_{i-d}, -1).
  Vec2 one_particle_eigenvalue(int i) const;
  // Distinct one-particle joint eigenvalues and the projections onto them.
  std::vector<Vec2> one_particle_spectrum() const;
  Matrix one_particle_projection(const Vec2& mu) const;

 private:
  SelfdualSpace space_;
  std::vector<bool> mask_;
  Eigen::VectorXd k_;
  Index dim_;
  std::vector<Matrix> c_;
  std::vector<int> charge_;
  std::vector<double> boost_;
};

// sum_n U(kappa n) F U(-kappa (n + m)) E(n). Throws PreconditionError naming the
// offending sectors when F does not map charge n into n + m.
Matrix sector_deform(const Matrix& F, int m, double kappa, const CarRep& R);
// Entries of F that break charge homogeneity of degree m, as "n -> n'" labels.
std::vector<std::string> homogeneity_violations(const Matrix& F, int m, const CarRep& R);

// |sector_deform(F) Omega - F Omega|
double deformed_vacuum_check(const Matrix& F, int m, double kappa, const CarRep& R);

struct FixedPointReport {
  Matrix derivative;                // sum_n i n [K, A] E(n)
  double derivative_norm = 0.0;
  double commutator_off_zero = 0.0;  // max_n != 0 |[K, A] E(n)|
  double finite_difference_error = 0.0;
  bool derivative_zero = false;
  bool commutes_off_zero = false;
};
FixedPointReport fixed_point_derivative(const Matrix& A, const CarRep& R, double tol = 1e-12);

// S = S*, 0 <= S <= 1, c S c = 1 - S.
struct QuasifreeSpec {
  Matrix S;
  void validate(const SelfdualSpace& h, double tol = 1e-12) const;
};

// Fermionic Wick assembly from <c f_i, S f_j>.
cplx quasifree_moments(const QuasifreeSpec& S, const std::vector<Vector>& fs, const SelfdualSpace& h);
// <Omega, B(f_1) ... B(f_n) Omega>
cplx fock_moment(const std::vector<Vector>& fs, const CarRep& R);

// |B(f)| from (1/2)(|f|^2 + sqrt(|f|^4 - |<f, c f>|^2)), squared root taken.
double b_norm_formula(const Vector& f, const SelfdualSpace& h);

struct FourPointResult {
  cplx closed = 0.0;
  cplx brute = 0.0;
  double abs_diff = 0.0;
};
// w2(1,2)w2(3,4) + w2(1,4)w2(2,3) - sum_{j,l} e^{2i kappa mu_j.theta mu_l} w2(f1, P_j f3) w2(f2, P_l f4),
// against <Omega, B(f1) warp(B(f2)) warp(B(f3)) B(f4) Omega>.
FourPointResult deformed_car_fourpoint(const std::vector<Vector>& fs, double kappa, const CarRep& R);

}  // namespace warpfield::car
