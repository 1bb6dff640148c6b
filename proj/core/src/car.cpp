#include "warpfield/car.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "warpfield/errors.hpp"
#include "warpfield/wick.hpp"

namespace warpfield::car {

namespace {

void require_dim(const Vector& f, const SelfdualSpace& h, const char* where) {
  if (f.size() != h.dim())
    throw StructuralError(std::string(where) + ": vector has length " + std::to_string(f.size()) +
                          " but the selfdual space has dimension " + std::to_string(h.dim()));
}

void require_square(const Matrix& F, const CarRep& R, const char* where) {
  if (F.rows() != R.dim() || F.cols() != R.dim()) throw StructuralError(std::string(where) + ": dimension mismatch");
}

}  // namespace

SelfdualSpace::SelfdualSpace(int d) : d_(d) {
  if (d_ <= 0) throw PreconditionError("SelfdualSpace: d must be positive");
}

Vector SelfdualSpace::conjugate(const Vector& x) const {
  require_dim(x, *this, "conjugate");
  Vector y(dim());
  y.head(d_) = x.tail(d_).conjugate();
  y.tail(d_) = x.head(d_).conjugate();
  return y;
}

Matrix SelfdualSpace::gamma() const {
  Matrix G = Matrix::Zero(dim(), dim());
  G.topRightCorner(d_, d_).setIdentity();
  G.bottomLeftCorner(d_, d_).setIdentity();
  return G;
}

cplx SelfdualSpace::form(const Vector& f, const Vector& g) const {
  require_dim(f, *this, "form");
  require_dim(g, *this, "form");
  return (f.tail(d_).array() * g.head(d_).array()).sum() + (f.head(d_).array() * g.tail(d_).array()).sum();
}

Matrix SelfdualSpace::conjugated(const Matrix& S) const {
  const Matrix G = gamma();
  return G * S.conjugate() * G;
}

// ---------------------------------------------------------------- Fock representation

CarRep::CarRep(int d, const Eigen::MatrixXd& k, std::vector<bool> mask, int max_d)
    : space_(d), mask_(std::move(mask)) {
  if (d > max_d) throw ResourceError("CarRep: d=" + std::to_string(d) + " exceeds limit " + std::to_string(max_d));
  if (k.rows() != d || k.cols() != d) throw StructuralError("CarRep: k must be d x d");
  Eigen::MatrixXd off = k;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() != 0.0) throw PreconditionError("CarRep: one-particle generator k must be diagonal");
  k_ = k.diagonal();
  if (mask_.empty()) mask_.assign(static_cast<std::size_t>(d), true);
  if (static_cast<int>(mask_.size()) != d) throw StructuralError("CarRep: mask length differs from d");

  dim_ = Index(1) << d;
  // c_j = Z x ... x Z x sigma^- x 1 x ... x 1, mode j on bit j.
  for (int j = 0; j < d; ++j) {
    Matrix c = Matrix::Zero(dim_, dim_);
    for (Index b = 0; b < dim_; ++b) {
      if (!((b >> j) & 1)) continue;
      int parity = 0;
      for (int i = 0; i < j; ++i) parity += static_cast<int>((b >> i) & 1);
      c(b & ~(Index(1) << j), b) = (parity % 2) ? -1.0 : 1.0;
    }
    c_.push_back(std::move(c));
  }
  for (Index b = 0; b < dim_; ++b) {
    int q = 0;
    double kk = 0.0;
    for (int j = 0; j < d; ++j)
      if ((b >> j) & 1) {
        const bool plus = mask_[static_cast<std::size_t>(j)];
        q += plus ? 1 : -1;
        kk += plus ? k_[j] : -k_[j];
      }
    charge_.push_back(q);
    boost_.push_back(kk);
  }
}

CarRep CarRep::with_boost(const std::vector<double>& k, std::vector<bool> mask) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(static_cast<Index>(k.size()), static_cast<Index>(k.size()));
  for (std::size_t i = 0; i < k.size(); ++i) K(static_cast<Index>(i), static_cast<Index>(i)) = k[i];
  return CarRep(static_cast<int>(k.size()), K, std::move(mask));
}

Matrix CarRep::projection() const {
  Matrix P = Matrix::Zero(space_.dim(), space_.dim());
  for (int j = 0; j < d(); ++j) {
    if (mask_[static_cast<std::size_t>(j)])
      P(j, j) = 1.0;
    else
      P(d() + j, d() + j) = 1.0;
  }
  return P;
}

Vector CarRep::mode_vector(int j) const {
  Vector u = Vector::Zero(space_.dim());
  u[mask_[static_cast<std::size_t>(j)] ? j : d() + j] = 1.0;
  return u;
}

Matrix CarRep::creation(const Vector& v) const {
  require_dim(v, space_, "creation");
  Matrix m = Matrix::Zero(dim_, dim_);
  for (int j = 0; j < d(); ++j) {
    const cplx c = mode_vector(j).dot(v);
    if (c != cplx(0.0)) m += c * c_[static_cast<std::size_t>(j)].adjoint();
  }
  return m;
}

Matrix CarRep::annihilation(const Vector& v) const { return creation(v).adjoint(); }

Matrix CarRep::b_operator(const Vector& f) const {
  require_dim(f, space_, "b_operator");
  const Matrix P = projection();
  return creation(P * f) + annihilation(P * space_.conjugate(f));
}

std::vector<Vec2> CarRep::joint_eigenvalues() const {
  std::vector<Vec2> ev;
  for (Index b = 0; b < dim_; ++b) ev.emplace_back(boost(b), static_cast<double>(charge(b)));
  return ev;
}

spectral::RepPtr CarRep::joint_rep() const { return std::make_shared<const spectral::JointSpectrumRep>(joint_eigenvalues()); }

Matrix CarRep::grading() const {
  Eigen::VectorXcd y(dim_);
  for (Index b = 0; b < dim_; ++b) {
    int n = 0;
    for (int j = 0; j < d(); ++j) n += static_cast<int>((b >> j) & 1);
    y[b] = (n % 2) ? -1.0 : 1.0;
  }
  return y.asDiagonal();
}

Matrix CarRep::twist() const {
  return (Matrix::Identity(dim_, dim_) - cplx(0.0, 1.0) * grading()) / std::sqrt(2.0);
}

Matrix CarRep::gauge_unitary(double s) const {
  Eigen::VectorXcd v(dim_);
  for (Index b = 0; b < dim_; ++b) v[b] = std::polar(1.0, s * charge(b));
  return v.asDiagonal();
}

Matrix CarRep::boost_unitary(double s) const {
  Eigen::VectorXcd v(dim_);
  for (Index b = 0; b < dim_; ++b) v[b] = std::polar(1.0, s * boost(b));
  return v.asDiagonal();
}

Matrix CarRep::charge_projection(int n) const {
  Eigen::VectorXcd v(dim_);
  for (Index b = 0; b < dim_; ++b) v[b] = charge(b) == n ? 1.0 : 0.0;
  return v.asDiagonal();
}

Vec2 CarRep::one_particle_eigenvalue(int i) const {
  if (i < d()) return {k_[i], 1.0};
  return {-k_[i - d()], -1.0};
}

std::vector<Vec2> CarRep::one_particle_spectrum() const {
  std::set<std::pair<double, double>> s;
  for (int i = 0; i < space_.dim(); ++i) {
    const Vec2 v = one_particle_eigenvalue(i);
    s.emplace(v[0], v[1]);
  }
  std::vector<Vec2> out;
  for (const auto& [a, b] : s) out.emplace_back(a, b);
  return out;
}

Matrix CarRep::one_particle_projection(const Vec2& mu) const {
  Matrix P = Matrix::Zero(space_.dim(), space_.dim());
  for (int i = 0; i < space_.dim(); ++i)
    if (one_particle_eigenvalue(i) == mu) P(i, i) = 1.0;
  return P;
}

// ---------------------------------------------------------------- deformation

std::vector<std::string> homogeneity_violations(const Matrix& F, int m, const CarRep& R) {
  require_square(F, R, "sector_deform");
  std::set<std::pair<int, int>> bad;
  for (Index b = 0; b < R.dim(); ++b)
    for (Index a = 0; a < R.dim(); ++a)
      if (F(a, b) != cplx(0.0) && R.charge(a) - R.charge(b) != m) bad.emplace(R.charge(b), R.charge(a));
  std::vector<std::string> out;
  for (const auto& [from, to] : bad) out.push_back(std::to_string(from) + " -> " + std::to_string(to));
  return out;
}

Matrix sector_deform(const Matrix& F, int m, double kappa, const CarRep& R) {
  const auto bad = homogeneity_violations(F, m, R);
  if (!bad.empty()) {
    std::string msg = "sector_deform: operator is not homogeneous of charge degree " + std::to_string(m) +
                      "; offending sectors:";
    for (const auto& s : bad) msg += " " + s;
    throw PreconditionError(msg);
  }
  Matrix out = Matrix::Zero(R.dim(), R.dim());
  for (Index b = 0; b < R.dim(); ++b) {
    const int n = R.charge(b);
    for (Index a = 0; a < R.dim(); ++a)
      if (F(a, b) != cplx(0.0))
        out(a, b) = std::polar(1.0, kappa * (n * R.boost(a) - (n + m) * R.boost(b))) * F(a, b);
  }
  return out;
}

double deformed_vacuum_check(const Matrix& F, int m, double kappa, const CarRep& R) {
  if (R.charge(0) != 0 || R.boost(0) != 0.0)
    throw PreconditionError("deformed_vacuum_check: vacuum is not invariant under the generators");
  const Matrix D = sector_deform(F, m, kappa, R);
  return (D.col(0) - F.col(0)).norm();
}

FixedPointReport fixed_point_derivative(const Matrix& A, const CarRep& R, double tol) {
  const auto bad = homogeneity_violations(A, 0, R);
  if (!bad.empty()) throw PreconditionError("fixed_point_derivative: operator is not gauge invariant");
  FixedPointReport r;
  r.derivative = Matrix::Zero(R.dim(), R.dim());
  for (Index b = 0; b < R.dim(); ++b)
    for (Index a = 0; a < R.dim(); ++a) {
      const cplx kA = (R.boost(a) - R.boost(b)) * A(a, b);
      r.derivative(a, b) = cplx(0.0, R.charge(b)) * kA;
      if (R.charge(b) != 0) r.commutator_off_zero = std::max(r.commutator_off_zero, std::abs(kA));
    }
  r.derivative_norm = spectral::max_abs(r.derivative);
  const double h = 1e-6;
  const Matrix fd = (sector_deform(A, 0, h, R) - sector_deform(A, 0, -h, R)) / (2.0 * h);
  r.finite_difference_error = spectral::max_abs(Matrix(fd - r.derivative));
  r.derivative_zero = r.derivative_norm <= tol;
  r.commutes_off_zero = r.commutator_off_zero <= tol;
  return r;
}

// ---------------------------------------------------------------- states

void QuasifreeSpec::validate(const SelfdualSpace& h, double tol) const {
  if (S.rows() != h.dim() || S.cols() != h.dim()) throw StructuralError("QuasifreeSpec: S has the wrong dimension");
  if (spectral::max_abs(Matrix(S - S.adjoint())) > tol) throw PreconditionError("QuasifreeSpec: S is not self-adjoint");
  const Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.eigenvalues().minCoeff() < -tol || es.eigenvalues().maxCoeff() > 1.0 + tol)
    throw PreconditionError("QuasifreeSpec: spectrum of S outside [0, 1]");
  if (spectral::max_abs(Matrix(h.conjugated(S) - (Matrix::Identity(h.dim(), h.dim()) - S))) > tol)
    throw PreconditionError("QuasifreeSpec: c S c differs from 1 - S");
}

cplx quasifree_moments(const QuasifreeSpec& S, const std::vector<Vector>& fs, const SelfdualSpace& h) {
  S.validate(h);
  const int n = static_cast<int>(fs.size());
  if (n % 2) return 0.0;
  for (const auto& f : fs) require_dim(f, h, "quasifree_moments");
  const auto& set = wick::enumerate_pairings(n / 2, wick::Statistics::fermi);
  return wick::assemble_npoint(set, [&](int i, int j) {
    return h.form(fs[static_cast<std::size_t>(i)], S.S * fs[static_cast<std::size_t>(j)]);
  });
}

cplx fock_moment(const std::vector<Vector>& fs, const CarRep& R) {
  Vector v = Vector::Zero(R.dim());
  v[0] = 1.0;
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) v = R.b_operator(*it) * v;
  return v[0];
}

double b_norm_formula(const Vector& f, const SelfdualSpace& h) {
  require_dim(f, h, "b_norm_formula");
  const double n2 = f.squaredNorm();
  const double c = std::abs(f.dot(h.conjugate(f)));
  return std::sqrt(0.5 * (n2 + std::sqrt(std::max(0.0, n2 * n2 - c * c))));
}

FourPointResult deformed_car_fourpoint(const std::vector<Vector>& fs, double kappa, const CarRep& R) {
  if (fs.size() != 4) throw PreconditionError("deformed_car_fourpoint: needs exactly four vectors");
  const SelfdualSpace& h = R.space();
  const Matrix P = R.projection();
  auto w2 = [&](const Vector& a, const Vector& b) { return h.form(a, P * b); };
  const spectral::DeformationMatrix dm(kappa);

  FourPointResult r;
  r.closed = w2(fs[0], fs[1]) * w2(fs[2], fs[3]) + w2(fs[0], fs[3]) * w2(fs[1], fs[2]);
  const auto spec = R.one_particle_spectrum();
  for (const auto& mj : spec) {
    const Vector f3 = R.one_particle_projection(mj) * fs[2];
    if (f3.isZero(0.0)) continue;
    for (const auto& ml : spec) {
      const Vector f4 = R.one_particle_projection(ml) * fs[3];
      if (f4.isZero(0.0)) continue;
      r.closed -= std::polar(1.0, 2.0 * dm.phase(mj, ml)) * w2(fs[0], f3) * w2(fs[1], f4);
    }
  }

  const auto lam = R.joint_eigenvalues();
  const Matrix B2 = spectral::warp(R.b_operator(fs[1]), lam, dm);
  const Matrix B3 = spectral::warp(R.b_operator(fs[2]), lam, dm);
  Vector v = Vector::Zero(R.dim());
  v[0] = 1.0;
  v = R.b_operator(fs[0]) * (B2 * (B3 * (R.b_operator(fs[3]) * v)));
  r.brute = v[0];
  r.abs_diff = std::abs(r.closed - r.brute);
  return r;
}

}  // namespace warpfield::car
