#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace warpfield::spectral {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Vec2 = Eigen::Vector2d;

// Hilbert space C^dim with two commuting generators, diagonal in the
// standard basis. Basis vector a carries the joint eigenvalue lambda_a.
class JointSpectrumRep {
 public:
  explicit JointSpectrumRep(std::vector<Vec2> eigenvalues,
                            std::vector<std::string> labels = {});

  std::size_t dim() const noexcept { return eigenvalues_.size(); }
  const std::vector<Vec2>& eigenvalues() const noexcept { return eigenvalues_; }
  const Vec2& eigenvalue(std::size_t a) const { return eigenvalues_.at(a); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  // Diagonal of U(v) = exp(i v . lambda_a).
  Eigen::VectorXcd unitary_diagonal(const Vec2& v) const;
  Matrix unitary(const Vec2& v) const;

  // Largest componentwise eigenvalue difference, max_{a,b} |lambda_a - lambda_b|_inf.
  double spectral_diameter() const;

  // Generators replaced by N xi: the flow satisfies U_{N xi}(s) = U_xi(N^T s),
  // so the eigenvalues become N lambda_a.
  JointSpectrumRep rescaled(const Eigen::Matrix2d& N) const;

 private:
  std::vector<Vec2> eigenvalues_;
  std::vector<std::string> labels_;
};

using RepPtr = std::shared_ptr<const JointSpectrumRep>;

class Operator {
 public:
  Operator(RepPtr rep, Matrix matrix);

  const RepPtr& rep() const noexcept { return rep_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  Operator adjoint() const { return Operator(rep_, matrix_.adjoint()); }

 private:
  RepPtr rep_;
  Matrix matrix_;
};

Operator operator*(const Operator& a, const Operator& b);
Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);

class DeformationMatrix {
 public:
  // Standard theta = ((0, 1), (-1, 0)).
  explicit DeformationMatrix(double kappa);
  // Throws StructuralError("theta antisymmetry violated") unless theta^T = -theta.
  DeformationMatrix(const Eigen::Matrix2d& theta, double kappa);
  // Skips validation; used for negative controls only.
  static DeformationMatrix unchecked(const Eigen::Matrix2d& theta, double kappa);

  static Eigen::Matrix2d standard_theta();

  const Eigen::Matrix2d& theta() const noexcept { return theta_; }
  double kappa() const noexcept { return kappa_; }
  double antisymmetry_defect() const { return (theta_ + theta_.transpose()).cwiseAbs().maxCoeff(); }
  DeformationMatrix with_kappa(double kappa) const;

  // kappa * (lambda . theta mu)
  double phase(const Vec2& lambda, const Vec2& mu) const {
    return kappa_ * lambda.dot(theta_ * mu);
  }

 private:
  DeformationMatrix(const Eigen::Matrix2d& theta, double kappa, bool);
  Eigen::Matrix2d theta_;
  double kappa_;
};

// Entrywise twist (F_kappa)_{ab} = exp(i kappa lambda_a . theta lambda_b) F_{ab}.
Operator warp(const Operator& F, const DeformationMatrix& d);
Matrix warp(const Matrix& F, const std::vector<Vec2>& lambda, const DeformationMatrix& d);
SparseMatrix warp(const SparseMatrix& F, const std::vector<Vec2>& lambda,
                  const DeformationMatrix& d);

// Deformed product with warp(F) warp(G) = warp(F x G).
Operator rieffel_product(const Operator& F, const Operator& G, const DeformationMatrix& d);

enum class CutoffKind { gaussian, compact_bump };

struct QuadratureSpec {
  // Grid half-width in units of 1/epsilon. Zero selects the kind default:
  // the bump support (2) or the Gaussian tail radius (6.5).
  double extent_scale = 0.0;
  // Lower bound on nodes per axis.
  int min_nodes = 257;
  // Step is 2 pi / (bandwidth * oversampling).
  double oversampling = 1.25;
};

struct CutoffSpec {
  CutoffKind kind = CutoffKind::compact_bump;
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  QuadratureSpec quadrature{};
  // Allowed growth of the residual between consecutive epsilons.
  double monotone_tolerance = 1e-8;

  void validate() const;
  double extent(double eps) const;
  // Product cutoff on one axis; chi(0) = 1.
  double profile(double u) const;
};

struct ConvergenceReport {
  std::vector<double> epsilons;
  std::vector<double> residuals;  // max-entry distance to warp()
  std::vector<std::size_t> nodes_x;
  std::vector<std::size_t> nodes_y;
  double final_residual() const { return residuals.empty() ? 0.0 : residuals.back(); }
};

struct OscillatoryResult {
  Operator op;
  ConvergenceReport report;
};

// Regularized oscillatory integral evaluated by quadrature for every epsilon.
OscillatoryResult warp_oscillatory(const Operator& F, const DeformationMatrix& d,
                                   const CutoffSpec& c = {});

// (1/2pi) sum over the trapezoid grid of exp(-ixy) chi(eps x) chi(eps y) exp(i a x + i b y);
// tends to exp(i a b).
cplx oscillatory_kernel(double a, double b, double eps, const CutoffSpec& c);

struct CommutantReport {
  double hypothesis_norm = 0.0;  // max over spectral shifts of |[U(v)FU(v)^-1, G]|
  double deformed_norm = 0.0;    // |[warp(F,+k), warp(G,-k)]|
  bool hypothesis_holds = false;
  bool conclusion_holds = false;
  std::string verdict;
};

CommutantReport check_commutant_property(const Operator& F, const Operator& G,
                                         const DeformationMatrix& d, double tol = 1e-12);

double max_abs(const Matrix& m);
double max_abs(const SparseMatrix& m);

}  // namespace warpfield::spectral
