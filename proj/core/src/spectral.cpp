#include "warpfield/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "warpfield/errors.hpp"

namespace warpfield::spectral {

JointSpectrumRep::JointSpectrumRep(std::vector<Vec2> eigenvalues, std::vector<std::string> labels)
    : eigenvalues_(std::move(eigenvalues)), labels_(std::move(labels)) {
  if (eigenvalues_.empty()) throw StructuralError("JointSpectrumRep: dim must be positive");
  if (!labels_.empty() && labels_.size() != eigenvalues_.size())
    throw StructuralError("JointSpectrumRep: label count differs from dim");
  for (const auto& l : eigenvalues_)
    if (!l.allFinite()) throw StructuralError("JointSpectrumRep: non-finite eigenvalue");
}

Eigen::VectorXcd JointSpectrumRep::unitary_diagonal(const Vec2& v) const {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(dim()));
  for (std::size_t a = 0; a < dim(); ++a) d[static_cast<Eigen::Index>(a)] = std::polar(1.0, v.dot(eigenvalues_[a]));
  return d;
}

Matrix JointSpectrumRep::unitary(const Vec2& v) const {
  return unitary_diagonal(v).asDiagonal();
}

double JointSpectrumRep::spectral_diameter() const {
  Vec2 lo = eigenvalues_.front(), hi = eigenvalues_.front();
  for (const auto& l : eigenvalues_) {
    lo = lo.cwiseMin(l);
    hi = hi.cwiseMax(l);
  }
  return (hi - lo).maxCoeff();
}

JointSpectrumRep JointSpectrumRep::rescaled(const Eigen::Matrix2d& N) const {
  if (std::abs(N.determinant()) == 0.0) throw PreconditionError("rescaled: N must be invertible");
  std::vector<Vec2> ev;
  ev.reserve(dim());
  for (const auto& l : eigenvalues_) ev.emplace_back(N * l);
  return JointSpectrumRep(std::move(ev), labels_);
}

Operator::Operator(RepPtr rep, Matrix matrix) : rep_(std::move(rep)), matrix_(std::move(matrix)) {
  if (!rep_) throw StructuralError("Operator: missing representation");
  const auto n = static_cast<Eigen::Index>(rep_->dim());
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw StructuralError("Operator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                          std::to_string(matrix_.cols()) + " but rep.dim is " + std::to_string(n));
}

namespace {
void require_same_rep(const Operator& a, const Operator& b, const char* where) {
  if (a.rep() != b.rep() && a.rep()->eigenvalues() != b.rep()->eigenvalues())
    throw StructuralError(std::string(where) + ": operators live on different representations");
}
}  // namespace

Operator operator*(const Operator& a, const Operator& b) {
  require_same_rep(a, b, "operator*");
  return Operator(a.rep(), a.matrix() * b.matrix());
}
Operator operator+(const Operator& a, const Operator& b) {
  require_same_rep(a, b, "operator+");
  return Operator(a.rep(), a.matrix() + b.matrix());
}
Operator operator-(const Operator& a, const Operator& b) {
  require_same_rep(a, b, "operator-");
  return Operator(a.rep(), a.matrix() - b.matrix());
}

Eigen::Matrix2d DeformationMatrix::standard_theta() {
  Eigen::Matrix2d t;
  t << 0.0, 1.0, -1.0, 0.0;
  return t;
}

DeformationMatrix::DeformationMatrix(double kappa) : theta_(standard_theta()), kappa_(kappa) {}

DeformationMatrix::DeformationMatrix(const Eigen::Matrix2d& theta, double kappa)
    : theta_(theta), kappa_(kappa) {
  if ((theta_ + theta_.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw StructuralError("theta antisymmetry violated");
}

DeformationMatrix::DeformationMatrix(const Eigen::Matrix2d& theta, double kappa, bool)
    : theta_(theta), kappa_(kappa) {}

DeformationMatrix DeformationMatrix::unchecked(const Eigen::Matrix2d& theta, double kappa) {
  return DeformationMatrix(theta, kappa, true);
}

DeformationMatrix DeformationMatrix::with_kappa(double kappa) const {
  return DeformationMatrix(theta_, kappa, true);
}

Matrix warp(const Matrix& F, const std::vector<Vec2>& lambda, const DeformationMatrix& d) {
  const auto n = static_cast<Eigen::Index>(lambda.size());
  if (F.rows() != n || F.cols() != n) throw StructuralError("warp: dimension mismatch");
  std::vector<Vec2> tl(lambda.size());
  for (std::size_t b = 0; b < lambda.size(); ++b) tl[b] = d.theta() * lambda[b];
  Matrix out(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      const cplx v = F(a, b);
      out(a, b) = v == cplx(0.0) ? v : v * std::polar(1.0, d.kappa() * lambda[a].dot(tl[b]));
    }
  return out;
}

SparseMatrix warp(const SparseMatrix& F, const std::vector<Vec2>& lambda, const DeformationMatrix& d) {
  const auto n = static_cast<Eigen::Index>(lambda.size());
  if (F.rows() != n || F.cols() != n) throw StructuralError("warp: dimension mismatch");
  SparseMatrix out = F;
  out.makeCompressed();
  for (Eigen::Index b = 0; b < out.outerSize(); ++b) {
    const Vec2 tl = d.theta() * lambda[b];
    for (SparseMatrix::InnerIterator it(out, b); it; ++it)
      it.valueRef() *= std::polar(1.0, d.kappa() * lambda[it.row()].dot(tl));
  }
  return out;
}

Operator warp(const Operator& F, const DeformationMatrix& d) {
  return Operator(F.rep(), warp(F.matrix(), F.rep()->eigenvalues(), d));
}

Operator rieffel_product(const Operator& F, const Operator& G, const DeformationMatrix& d) {
  require_same_rep(F, G, "rieffel_product");
  const auto& lam = F.rep()->eigenvalues();
  const auto n = static_cast<Eigen::Index>(lam.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      cplx s = 0.0;
      const double ab = d.phase(lam[a], lam[b]);
      for (Eigen::Index c = 0; c < n; ++c) {
        const cplx fg = F.matrix()(a, c) * G.matrix()(c, b);
        if (fg == cplx(0.0)) continue;
        s += fg * std::polar(1.0, d.phase(lam[a], lam[c]) + d.phase(lam[c], lam[b]) - ab);
      }
      out(a, b) = s;
    }
  return Operator(F.rep(), std::move(out));
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const SparseMatrix& m) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

CommutantReport check_commutant_property(const Operator& F, const Operator& G,
                                         const DeformationMatrix& d, double tol) {
  require_same_rep(F, G, "check_commutant_property");
  const auto& lam = F.rep()->eigenvalues();
  const auto n = static_cast<Eigen::Index>(lam.size());

  // U(v)FU(v)^-1 = sum_delta exp(i v.delta) F^(delta), one component per spectral shift delta.
  auto key = [](const Vec2& v) { return std::make_pair(v[0], v[1]); };
  std::map<std::pair<double, double>, Matrix> parts;
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      if (F.matrix()(a, b) == cplx(0.0)) continue;
      auto& p = parts.try_emplace(key(lam[a] - lam[b]), Matrix::Zero(n, n)).first->second;
      p(a, b) = F.matrix()(a, b);
    }

  CommutantReport r;
  for (const auto& [shift, part] : parts) {
    (void)shift;
    r.hypothesis_norm = std::max(r.hypothesis_norm, max_abs(Matrix(part * G.matrix() - G.matrix() * part)));
  }
  const Matrix Fp = warp(F.matrix(), lam, d);
  const Matrix Gm = warp(G.matrix(), lam, d.with_kappa(-d.kappa()));
  r.deformed_norm = max_abs(Matrix(Fp * Gm - Gm * Fp));
  r.hypothesis_holds = r.hypothesis_norm <= tol;
  r.conclusion_holds = r.deformed_norm <= tol;
  if (!r.hypothesis_holds)
    r.verdict = "hypothesis violated";
  else
    r.verdict = r.conclusion_holds ? "deformed pair commutes" : "conclusion violated";
  return r;
}

}  // namespace warpfield::spectral
