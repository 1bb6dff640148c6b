#include "warpfield/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "warpfield/errors.hpp"

namespace warpfield::geometry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Vector4 eta4_apply(const Vector4& v) { return Vector4(v[0], -v[1], -v[2], -v[3]); }

double mdot(const Vector4& a, const Vector4& b) { return a[0] * b[0] - a.tail<3>().dot(b.tail<3>()); }

// Lambda^{-1} = eta Lambda^T eta for Lambda in O(1,n).
template <class M>
M lorentz_inverse(const M& L) {
  M eta = M::Identity();
  for (Eigen::Index i = 1; i < eta.rows(); ++i) eta(i, i) = -1.0;
  return eta * L.transpose() * eta;
}

template <class M>
void require_lorentz(const M& L, const char* where) {
  M eta = M::Identity();
  for (Eigen::Index i = 1; i < eta.rows(); ++i) eta(i, i) = -1.0;
  const double defect = (L.transpose() * eta * L - eta).cwiseAbs().maxCoeff();
  if (!(defect <= 1e-9 * std::max(1.0, L.cwiseAbs().maxCoeff() * L.cwiseAbs().maxCoeff())))
    throw PreconditionError(std::string(where) + ": matrix is not a Lorentz transformation (defect " +
                            std::to_string(defect) + ")");
  if (L(0, 0) < 1.0 - 1e-9) throw PreconditionError(std::string(where) + ": not orthochronous");
  if (L.determinant() < 0.0) throw PreconditionError(std::string(where) + ": not proper");
}

// Rotation by pi about (e2 + e3)/sqrt(2): swaps e2 and e3, reverses e1.
Matrix4 flip_matrix() {
  Matrix4 R = Matrix4::Zero();
  R(0, 0) = 1.0;
  R(1, 1) = -1.0;
  R(2, 3) = 1.0;
  R(3, 2) = 1.0;
  return R;
}

bool reference_wedge(double x0, double x1) { return x1 > std::abs(x0); }

Eigen::Matrix3d rotation3(const Eigen::Vector3d& e) {
  const double angle = e.norm();
  if (angle == 0.0) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, e / angle).toRotationMatrix();
}

Eigen::Matrix3d rotation_taking(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  const Eigen::Vector3d a = from.normalized(), b = to.normalized();
  const double c = a.dot(b);
  if (c > 1.0 - 1e-15) return Eigen::Matrix3d::Identity();
  if (c < -1.0 + 1e-15) {
    Eigen::Vector3d axis = a.cross(Eigen::Vector3d::UnitX());
    if (axis.norm() < 1e-6) axis = a.cross(Eigen::Vector3d::UnitY());
    return Eigen::AngleAxisd(std::numbers::pi, axis.normalized()).toRotationMatrix();
  }
  return Eigen::Quaterniond::FromTwoVectors(a, b).toRotationMatrix();
}

// Lambda = [f0 f1 f2 f3] for the wedge whose edge is generated by xi and whose
// orientation makes det[e0, xi1, xi2, f1] > 0.
Matrix4 lorentz_from_pair(const Vector4& xi1, const Vector4& xi2) {
  auto sdot = [](const Vector4& a, const Vector4& b) { return -mdot(a, b); };
  const double n1 = sdot(xi1, xi1);
  if (!(n1 > 0.0)) throw PreconditionError("KillingPair: generator is not spacelike");
  const Vector4 f2 = xi1 / std::sqrt(n1);
  Vector4 r = xi2 - sdot(xi2, f2) * f2;
  const double n2 = sdot(r, r);
  if (!(n2 > 1e-24 * sdot(xi2, xi2)))
    throw PreconditionError("KillingPair: generators are not independent spacelike vectors");
  const Vector4 f3 = r / std::sqrt(n2);
  const Vector4 e0 = Vector4::UnitX();
  Vector4 f0 = e0 - sdot(e0, f2) * f2 - sdot(e0, f3) * f3;
  f0 /= std::sqrt(mdot(f0, f0));
  // Spacelike unit vector orthogonal to f0, f2, f3: eta times the generalized cross product.
  Eigen::Matrix<double, 3, 4> rows;
  rows.row(0) = eta4_apply(f0).transpose();
  rows.row(1) = eta4_apply(f2).transpose();
  rows.row(2) = eta4_apply(f3).transpose();
  Eigen::FullPivLU<Eigen::Matrix<double, 3, 4>> lu(rows);
  Vector4 f1 = lu.kernel().col(0);
  f1 /= std::sqrt(-mdot(f1, f1));
  Matrix4 orient;
  orient.col(0) = Vector4::UnitX();
  orient.col(1) = xi1;
  orient.col(2) = xi2;
  orient.col(3) = f1;
  if (orient.determinant() < 0.0) f1 = -f1;
  Matrix4 L;
  L.col(0) = f0;
  L.col(1) = f1;
  L.col(2) = f2;
  L.col(3) = f3;
  return L;
}

CanonicalForm canonical_minkowski(const Matrix4& L, const Vector4& y) {
  // Covector c with W0 = { c.x > 0 } maps to eta L eta c for W = L W0 + y.
  const Matrix4 Lit = lorentz_inverse(L).transpose();
  Vector4 cm = Lit * Vector4(-1, 1, 0, 0);
  Vector4 cp = Lit * Vector4(1, 1, 0, 0);
  cm /= -cm[0];
  cp /= cp[0];
  Eigen::Matrix<double, 2, 4> C;
  C.row(0) = cm.transpose();
  C.row(1) = cp.transpose();
  const Eigen::Matrix2d G = C * C.transpose();
  const Vector4 base = C.transpose() * G.ldlt().solve(C * y);
  return {cm, cp, base};
}

double scale_of(const Eigen::VectorXd& v) { return std::max(1.0, v.cwiseAbs().maxCoeff()); }

}  // namespace

std::string to_string(Backend b) {
  switch (b) {
    case Backend::minkowski4: return "minkowski4";
    case Backend::desitter5: return "desitter5";
    case Backend::frw: return "frw";
  }
  return "unknown";
}

Backend backend_from_string(const std::string& s) {
  if (s == "minkowski4") return Backend::minkowski4;
  if (s == "desitter5") return Backend::desitter5;
  if (s == "frw") return Backend::frw;
  throw StructuralError("unknown backend '" + s + "'");
}

std::string to_string(CausalRelation r) {
  switch (r) {
    case CausalRelation::timelike: return "timelike";
    case CausalRelation::spacelike: return "spacelike";
    case CausalRelation::null: return "null";
  }
  return "unknown";
}

std::string to_string(Inclusion i) {
  switch (i) {
    case Inclusion::equal: return "equal";
    case Inclusion::proper_subset: return "proper-subset";
    case Inclusion::complement_subset: return "complement-subset";
    case Inclusion::incomparable: return "incomparable";
  }
  return "unknown";
}

SpacetimePoint SpacetimePoint::minkowski(const Vector4& x) { return {Backend::minkowski4, x}; }

SpacetimePoint SpacetimePoint::desitter(const Vector5& x) {
  const double q = x[0] * x[0] - x.tail<4>().squaredNorm();
  if (std::abs(q + 1.0) > 1e-12)
    throw PreconditionError("de Sitter point off the hyperboloid: x.x = " + std::to_string(q));
  return {Backend::desitter5, x};
}

SpacetimePoint SpacetimePoint::frw_conformal(const Vector4& x) { return {Backend::frw, x}; }

Matrix4 minkowski_metric() { return Eigen::Vector4d(1, -1, -1, -1).asDiagonal(); }

Matrix5 desitter_ambient_metric() {
  Vector5 d;
  d << 1, -1, -1, -1, -1;
  return d.asDiagonal();
}

double interval(const SpacetimePoint& x, const SpacetimePoint& y) {
  if (x.backend != y.backend) throw StructuralError("causal_relation: mixed backends");
  if (x.coords.size() != y.coords.size()) throw StructuralError("causal_relation: dimension mismatch");
  const Eigen::VectorXd d = x.coords - y.coords;
  return d[0] * d[0] - d.tail(d.size() - 1).squaredNorm();
}

CausalRelation causal_relation(const SpacetimePoint& x, const SpacetimePoint& y) {
  const double s = interval(x, y);
  if (std::abs(s) < kNullTolerance) return CausalRelation::null;
  return s > 0.0 ? CausalRelation::timelike : CausalRelation::spacelike;
}

Matrix4 boost_x1(double s) {
  Matrix4 B = Matrix4::Identity();
  B(0, 0) = B(1, 1) = std::cosh(s);
  B(0, 1) = B(1, 0) = std::sinh(s);
  return B;
}

Matrix4 rotation(const Eigen::Vector3d& e) {
  Matrix4 R = Matrix4::Identity();
  R.bottomRightCorner<3, 3>() = rotation3(e);
  return R;
}

void KillingPair::validate() const {
  if (backend == Backend::desitter5)
    throw UnsupportedError("KillingPair: de Sitter edges are specified by ambient data");
  if (backend == Backend::frw && (xi1[0] != 0.0 || xi2[0] != 0.0))
    throw PreconditionError("KillingPair: frw generators must be spatial");
  (void)lorentz_from_pair(xi1, xi2);
}

// ---------------------------------------------------------------- FRW chart

FRWChart::FRWChart(std::function<double(double)> a, double t_min, double t_max, double t_ref,
                   std::string descriptor)
    : a_(std::move(a)), t_min_(t_min), t_max_(t_max), t_ref_(t_ref), descriptor_(std::move(descriptor)) {
  if (!a_) throw PreconditionError("FRWChart: missing scale factor");
  if (!(t_min_ < t_ref_ && t_ref_ < t_max_)) throw PreconditionError("FRWChart: t_ref must lie inside J");
  if (!(a_(t_ref_) > 0.0)) throw PreconditionError("FRWChart: scale factor must be positive");
  tau_lo_ = limit_toward(false);
  tau_hi_ = limit_toward(true);
}

FRWChart::FRWChart(std::function<double(double)> a, double t_min, double t_max, double t_ref,
                   std::string descriptor, Exact exact)
    : a_(std::move(a)),
      tau_exact_(std::move(exact.tau)),
      t_min_(t_min),
      t_max_(t_max),
      t_ref_(t_ref),
      descriptor_(std::move(descriptor)),
      tau_lo_(exact.tau_lo),
      tau_hi_(exact.tau_hi) {
  if (!(t_min_ < t_ref_ && t_ref_ < t_max_)) throw PreconditionError("FRWChart: t_ref must lie inside J");
}

namespace {

double integrate_inverse(const std::function<double(double)>& a, double lo, double hi) {
  auto f = [&a](double s) { return 1.0 / a(s); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 12, 1e-15);
}

}  // namespace

// Conformal time at the ends of J, accumulated over dyadic pieces; infinite
// when the partial sums do not settle.
double FRWChart::limit_toward(bool up) const {
  const double bound = up ? t_max_ : t_min_;
  double v = 0.0, prev_t = t_ref_, step = 1.0;
  for (int k = 0; k < 1100; ++k) {
    const double t = std::isinf(bound) ? t_ref_ + (up ? step : -step)
                                       : bound - (bound - t_ref_) * std::exp2(-k - 1);
    step *= 2.0;
    if (!(t > t_min_ && t < t_max_) || t == prev_t || !std::isfinite(t)) break;
    double piece;
    try {
      piece = integrate_inverse(a_, std::min(prev_t, t), std::max(prev_t, t));
    } catch (...) {
      break;
    }
    v += up ? piece : -piece;
    prev_t = t;
    if (!std::isfinite(v) || std::abs(v) > 1e15) return up ? kInf : -kInf;
    if (k > 8 && std::abs(piece) <= 1e-14 * std::max(1.0, std::abs(v))) return v;
  }
  return up ? kInf : -kInf;
}

std::shared_ptr<const FRWChart> FRWChart::power(double amplitude, double exponent, double t_ref) {
  if (!(amplitude > 0.0)) throw PreconditionError("FRWChart::power: amplitude must be positive");
  const double q = 1.0 - exponent;
  Exact ex;
  if (q == 0.0) {
    ex = {[=](double t) { return std::log(t / t_ref) / amplitude; }, -kInf, kInf};
  } else {
    const double c = std::pow(t_ref, q);
    ex.tau = [=](double t) { return (std::pow(t, q) - c) / (amplitude * q); };
    ex.tau_lo = q > 0.0 ? -c / (amplitude * q) : -kInf;
    ex.tau_hi = q > 0.0 ? kInf : -c / (amplitude * q);
  }
  std::shared_ptr<FRWChart> ch(new FRWChart([=](double t) { return amplitude * std::pow(t, exponent); }, 0.0, kInf,
                                            t_ref, "power", std::move(ex)));
  ch->amplitude_ = amplitude;
  ch->exponent_ = exponent;
  return ch;
}

std::shared_ptr<const FRWChart> FRWChart::exponential(double rate, double t_ref) {
  Exact ex;
  if (rate == 0.0) {
    ex = {[=](double t) { return t - t_ref; }, -kInf, kInf};
  } else {
    const double c = std::exp(-rate * t_ref) / rate;
    ex.tau = [=](double t) { return c - std::exp(-rate * t) / rate; };
    ex.tau_lo = rate > 0.0 ? -kInf : c;
    ex.tau_hi = rate > 0.0 ? c : kInf;
  }
  std::shared_ptr<FRWChart> ch(new FRWChart([=](double t) { return std::exp(rate * t); }, -kInf, kInf, t_ref,
                                            "exponential", std::move(ex)));
  ch->amplitude_ = 1.0;
  ch->exponent_ = rate;
  return ch;
}

double FRWChart::scale(double t) const {
  if (!(t > t_min_ && t < t_max_)) throw RangeError("FRWChart: t=" + std::to_string(t) + " outside J");
  return a_(t);
}

bool FRWChart::full_line() const { return std::isinf(t_min_) && std::isinf(t_max_); }

double FRWChart::tau(double t) const {
  if (!(t > t_min_ && t < t_max_)) throw RangeError("FRWChart: t=" + std::to_string(t) + " outside J");
  if (t == t_ref_) return 0.0;
  if (tau_exact_) return tau_exact_(t);
  const double v = integrate_inverse(a_, std::min(t, t_ref_), std::max(t, t_ref_));
  return t > t_ref_ ? v : -v;
}

double FRWChart::t_of_tau(double target) const {
  if (!std::isfinite(target)) throw RangeError("FRWChart: non-finite conformal time");
  if (target == 0.0) return t_ref_;
  // Bracket by stepping toward the boundary of J.
  const bool up = target > 0.0;
  double inner = t_ref_, outer = t_ref_;
  double step = 1.0;
  bool found = false;
  for (int k = 0; k < 400; ++k) {
    double next;
    if (up)
      next = std::isinf(t_max_) ? t_ref_ + step : t_max_ - (t_max_ - t_ref_) * std::exp2(-k - 1);
    else
      next = std::isinf(t_min_) ? t_ref_ - step : t_min_ + (t_ref_ - t_min_) * std::exp2(-k - 1);
    step *= 2.0;
    if (!(next > t_min_ && next < t_max_) || next == outer) break;
    outer = next;
    const double v = tau(outer);
    if (up ? v >= target : v <= target) {
      found = true;
      break;
    }
    inner = outer;
  }
  if (!found) throw RangeError("FRWChart: conformal time " + std::to_string(target) + " outside tau(J)");
  double lo = std::min(inner, outer), hi = std::max(inner, outer);
  auto g = [&](double t) { return tau(t) - target; };
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, g(lo), g(hi), tol, iters);
  return 0.5 * (r.first + r.second);
}

bool FRWChart::contains_tau(double v) const { return v > tau_lo_ && v < tau_hi_; }

SpacetimePoint FRWChart::point(double t, const Eigen::Vector3d& x) const {
  return SpacetimePoint::frw_conformal(Vector4(tau(t), x[0], x[1], x[2]));
}

// ---------------------------------------------------------------- wedges

double CanonicalForm::distance(const CanonicalForm& o) const {
  if (l_minus.size() != o.l_minus.size()) return kInf;
  return std::max({(l_minus - o.l_minus).cwiseAbs().maxCoeff(), (l_plus - o.l_plus).cwiseAbs().maxCoeff(),
                   (base - o.base).cwiseAbs().maxCoeff()});
}

void Wedge::build_canonical() {
  if (backend_ == Backend::desitter5) {
    const Matrix5 hit = lorentz_inverse(ambient_).transpose();
    Vector5 cm0 = Vector5::Zero(), cp0 = Vector5::Zero();
    cm0[0] = -1;
    cm0[1] = 1;
    cp0[0] = 1;
    cp0[1] = 1;
    Vector5 cm = hit * cm0, cp = hit * cp0;
    cm /= -cm[0];
    cp /= cp[0];
    canonical_ = {cm, cp, Eigen::VectorXd::Zero(5)};
    return;
  }
  canonical_ = canonical_minkowski(lorentz_, translation_);
}

Wedge Wedge::minkowski(const Matrix4& lorentz, const Vector4& translation) {
  require_lorentz(lorentz, "Wedge::minkowski");
  Wedge w;
  w.backend_ = Backend::minkowski4;
  w.lorentz_ = lorentz;
  w.translation_ = translation;
  w.cosmic_base_ = translation;
  w.build_canonical();
  return w;
}

Wedge Wedge::minkowski_reference() { return minkowski(Matrix4::Identity(), Vector4::Zero()); }

Wedge Wedge::minkowski_from_killing_pair(const KillingPair& xi, const Vector4& base) {
  if (xi.backend != Backend::minkowski4) throw StructuralError("Wedge: Killing pair backend mismatch");
  return minkowski(lorentz_from_pair(xi.xi1, xi.xi2), base);
}

Wedge Wedge::desitter(const Matrix5& h) {
  require_lorentz(h, "Wedge::desitter");
  Wedge w;
  w.backend_ = Backend::desitter5;
  w.ambient_ = h;
  w.build_canonical();
  return w;
}

Wedge Wedge::desitter_reference() { return desitter(Matrix5::Identity()); }

Wedge Wedge::frw(std::shared_ptr<const FRWChart> chart, const KillingPair& xi, const Vector4& cosmic_base) {
  if (!chart) throw PreconditionError("Wedge::frw: missing chart");
  if (xi.backend != Backend::frw) throw StructuralError("Wedge: Killing pair backend mismatch");
  xi.validate();
  Wedge w;
  w.backend_ = Backend::frw;
  w.lorentz_ = lorentz_from_pair(xi.xi1, xi.xi2);
  w.cosmic_base_ = cosmic_base;
  w.translation_ = Vector4(chart->tau(cosmic_base[0]), cosmic_base[1], cosmic_base[2], cosmic_base[3]);
  w.chart_ = std::move(chart);
  w.build_canonical();
  return w;
}

KillingPair Wedge::killing_pair() const {
  if (backend_ == Backend::desitter5) throw UnsupportedError("Wedge: de Sitter wedges carry no Killing pair");
  return {backend_, lorentz_.col(2), lorentz_.col(3)};
}

bool Wedge::contains(const SpacetimePoint& x) const {
  if (x.backend != backend_) throw StructuralError("wedge_membership: mixed backends");
  if (backend_ == Backend::desitter5) {
    const Vector5 v = lorentz_inverse(ambient_) * Vector5(x.coords);
    return reference_wedge(v[0], v[1]);
  }
  if (backend_ == Backend::frw && !chart_->contains_tau(x.coords[0])) return false;
  const Vector4 v = lorentz_inverse(lorentz_) * (Vector4(x.coords) - translation_);
  return reference_wedge(v[0], v[1]);
}

bool Wedge::closure_contains(const SpacetimePoint& x, double tol) const {
  if (x.backend != backend_) throw StructuralError("wedge_membership: mixed backends");
  const Eigen::VectorXd d = x.coords - canonical_.base;
  const double s = tol * scale_of(x.coords);
  return canonical_.l_minus.dot(d) >= -s && canonical_.l_plus.dot(d) >= -s;
}

bool wedge_membership(const Wedge& W, const SpacetimePoint& x) { return W.contains(x); }

Wedge causal_complement(const Wedge& W) {
  switch (W.backend()) {
    case Backend::minkowski4: return Wedge::minkowski(W.lorentz() * flip_matrix(), W.translation());
    case Backend::desitter5: return Wedge::desitter(W.ambient() * desitter_reflection());
    case Backend::frw: {
      const Matrix4 L = W.lorentz() * flip_matrix();
      return Wedge::frw(W.chart(), {Backend::frw, L.col(2), L.col(3)}, W.cosmic_base());
    }
  }
  throw StructuralError("causal_complement: unknown backend");
}

bool same_wedge(const Wedge& a, const Wedge& b, double tol) {
  return a.backend() == b.backend() && a.canonical().distance(b.canonical()) <= tol;
}

// ---------------------------------------------------------------- sampling

double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

std::vector<SpacetimePoint> halton_points(Backend backend, const SamplingBox& box, std::size_t count,
                                          const FRWChart* chart) {
  static constexpr unsigned primes[5] = {2, 3, 5, 7, 11};
  std::vector<SpacetimePoint> out;
  out.reserve(count);
  for (std::size_t i = 1; out.size() < count && i < 50 * count + 100; ++i) {
    Vector4 u;
    for (int k = 0; k < 4; ++k) u[k] = 2.0 * radical_inverse(i, primes[k]) - 1.0;
    if (backend == Backend::desitter5) {
      const Vector4 c = box.center.size() >= 4 ? Vector4(box.center.head<4>()) : Vector4::Zero();
      const Vector4 x = c + box.half_width * u;
      const double r2 = 1.0 + x[0] * x[0] - x.tail<3>().squaredNorm();
      if (r2 < 0.0) continue;
      const double x4 = (radical_inverse(i, primes[4]) < 0.5 ? -1.0 : 1.0) * std::sqrt(r2);
      Vector5 p;
      p << x[0], x[1], x[2], x[3], x4;
      out.push_back({Backend::desitter5, p});
      continue;
    }
    const Vector4 x = Vector4(box.center) + box.half_width * u;
    if (backend == Backend::frw) {
      if (chart && !chart->contains_tau(x[0])) continue;
      out.push_back(SpacetimePoint::frw_conformal(x));
    } else {
      out.push_back(SpacetimePoint::minkowski(x));
    }
  }
  return out;
}

SamplingBox default_box(const Wedge& w1, const Wedge& w2) {
  if (w1.backend() == Backend::desitter5) return {Eigen::VectorXd::Zero(5), 3.0};
  const Eigen::VectorXd c = 0.5 * (w1.canonical().base + w2.canonical().base);
  const double d = (w1.canonical().base - w2.canonical().base).norm();
  return {c, 2.0 + 2.0 * d};
}

SampleEvidence sample_relation(const Wedge& w1, const Wedge& w2, std::size_t count,
                               std::optional<SamplingBox> box) {
  if (w1.backend() != w2.backend()) throw StructuralError("wedge_inclusion: mixed backends");
  const SamplingBox b = box ? *box : default_box(w1, w2);
  const Wedge w2c = causal_complement(w2);
  SampleEvidence e;
  for (const auto& x : halton_points(w1.backend(), b, count, w1.chart().get())) {
    const bool in1 = w1.contains(x), in2 = w2.contains(x), in2c = w2c.contains(x);
    ++e.samples;
    e.in_w1 += in1;
    e.w1_not_w2 += in1 && !in2;
    e.w2_not_w1 += in2 && !in1;
    e.w1_not_w2c += in1 && !in2c;
    e.w2c_not_w1 += in2c && !in1;
  }
  return e;
}

bool evidence_confirms(Inclusion verdict, const SampleEvidence& e) {
  switch (verdict) {
    case Inclusion::equal: return e.w1_not_w2 == 0 && e.w2_not_w1 == 0;
    case Inclusion::proper_subset:
      return (e.w1_not_w2 == 0 && e.w2_not_w1 > 0) || (e.w2_not_w1 == 0 && e.w1_not_w2 > 0);
    case Inclusion::complement_subset: return e.w1_not_w2c == 0;
    case Inclusion::incomparable: return e.w1_not_w2 > 0 && e.w2_not_w1 > 0 && e.w1_not_w2c > 0;
  }
  return false;
}

Inclusion analytic_inclusion(const Wedge& w1, const Wedge& w2) {
  if (w1.backend() != w2.backend()) throw StructuralError("wedge_inclusion: mixed backends");
  if (w1.backend() == Backend::frw && w1.chart() != w2.chart())
    throw StructuralError("wedge_inclusion: frw wedges on different charts");
  if (same_wedge(w1, w2)) return Inclusion::equal;
  const Wedge w2c = causal_complement(w2);
  if (w1.backend() == Backend::desitter5)
    return same_wedge(w1, w2c) ? Inclusion::complement_subset : Inclusion::incomparable;

  // Edge generators agree up to N in GL(2): xi2 = xi1 N.
  const KillingPair a = w1.killing_pair(), b = w2.killing_pair();
  Eigen::Matrix<double, 4, 2> X, Y;
  X << a.xi1, a.xi2;
  Y << b.xi1, b.xi2;
  const Eigen::Matrix2d N = X.colPivHouseholderQr().solve(Y);
  const double residual = (X * N - Y).cwiseAbs().maxCoeff();
  if (residual > 1e-9 * std::max(1.0, Y.cwiseAbs().maxCoeff())) return Inclusion::incomparable;

  const SpacetimePoint p1{w1.backend(), w1.canonical().base};
  const SpacetimePoint p2{w2.backend(), w2.canonical().base};
  if (N.determinant() > 0.0) {
    if (w2.closure_contains(p1, 1e-10) || w1.closure_contains(p2, 1e-10)) return Inclusion::proper_subset;
    return Inclusion::incomparable;
  }
  return w2c.closure_contains(p1, 1e-10) ? Inclusion::complement_subset : Inclusion::incomparable;
}

Inclusion wedge_inclusion(const Wedge& w1, const Wedge& w2, const InclusionOptions& opt) {
  const Inclusion v = analytic_inclusion(w1, w2);
  if (opt.validate) {
    const SampleEvidence e = sample_relation(w1, w2, opt.samples);
    if (!evidence_confirms(v, e))
      throw DiagnosticError("wedge_inclusion: sampling contradicts analytic verdict " + to_string(v),
                            {static_cast<double>(e.w1_not_w2), static_cast<double>(e.w2_not_w1),
                             static_cast<double>(e.w1_not_w2c)});
  }
  return v;
}

// ---------------------------------------------------------------- coherent families

bool CoherentKey::operator==(const CoherentKey& o) const {
  return backend == o.backend && std::abs(s - o.s) <= 1e-9 && (e - o.e).cwiseAbs().maxCoeff() <= 1e-12;
}

CoherentKey coherent_family_key(const Wedge& W) {
  switch (W.backend()) {
    case Backend::desitter5:
      throw UnsupportedError("coherent_family_key: de Sitter wedges form a single transitive family");
    case Backend::frw: return {Backend::frw, 0.0, Eigen::Vector3d::Zero()};
    case Backend::minkowski4: break;
  }
  // Spatial parts of the normalized null covectors are unit vectors n1, n2 with
  // n1.n2 = (1 - u)/(1 + u), u = sin^2(phi) sinh^2(s); the representative has phi = pi/2.
  const Eigen::Vector3d n1 = W.canonical().l_minus.tail<3>().normalized();
  const Eigen::Vector3d n2 = W.canonical().l_plus.tail<3>().normalized();
  const double c = std::clamp(n1.dot(n2), -1.0, 1.0);
  const double u = (1.0 - c) / (1.0 + c);
  return {Backend::minkowski4, std::asinh(std::sqrt(u)), Eigen::Vector3d(0, 0, std::numbers::pi / 2)};
}

MinkowskiDecomposition minkowski_decomposition(const Wedge& W) {
  if (W.backend() != Backend::minkowski4) throw UnsupportedError("minkowski_decomposition: minkowski4 only");
  const CoherentKey k = coherent_family_key(W);
  const Wedge rep = Wedge::minkowski(boost_x1(k.s) * rotation(k.e), Vector4::Zero());
  const Eigen::Vector3d m1 = rep.canonical().l_minus.tail<3>().normalized();
  const Eigen::Vector3d m2 = rep.canonical().l_plus.tail<3>().normalized();
  const Eigen::Vector3d n1 = W.canonical().l_minus.tail<3>().normalized();
  const Eigen::Vector3d n2 = W.canonical().l_plus.tail<3>().normalized();
  Eigen::Matrix3d R;
  if ((m1 - m2).norm() < 1e-12 || (n1 - n2).norm() < 1e-12) {
    R = rotation_taking(m1, n1);
  } else {
    auto frame = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
      Eigen::Matrix3d F;
      F.col(0) = (a + b).normalized();
      F.col(1) = (a - b).normalized();
      F.col(2) = F.col(0).cross(F.col(1));
      return F;
    };
    R = frame(n1, n2) * frame(m1, m2).transpose();
  }
  return {R, k.s, k.e, Vector4(W.canonical().base)};
}

// ---------------------------------------------------------------- flows

SpacetimePoint Isometry::apply(const SpacetimePoint& x) const {
  return {x.backend, L * x.coords + shift};
}

Matrix5 desitter_reference_boost(double t) {
  Matrix5 B = Matrix5::Identity();
  B(0, 0) = B(1, 1) = std::cosh(kTwoPi * t);
  B(0, 1) = B(1, 0) = std::sinh(kTwoPi * t);
  return B;
}

Matrix5 desitter_reflection() {
  Vector5 d;
  d << 1, -1, -1, -1, -1;
  return d.asDiagonal();
}

Isometry boost_flow(const Wedge& W, double t) {
  switch (W.backend()) {
    case Backend::desitter5: {
      const Matrix5 L = W.ambient() * desitter_reference_boost(t) * lorentz_inverse(W.ambient());
      return {L, Eigen::VectorXd::Zero(5)};
    }
    case Backend::minkowski4: {
      const Matrix4 B = desitter_reference_boost(t).topLeftCorner<4, 4>();
      const Matrix4 L = W.lorentz() * B * lorentz_inverse(W.lorentz());
      return {L, W.translation() - L * W.translation()};
    }
    case Backend::frw: break;
  }
  throw UnsupportedError("boost_flow: frw spacetimes carry no boost isometries");
}

// ---------------------------------------------------------------- edges

Edge edge_of(const Wedge& W) {
  Edge e{W.backend(), Vector4::Zero(), {}, Matrix5::Identity()};
  switch (W.backend()) {
    case Backend::desitter5: e.ambient = W.ambient(); break;
    case Backend::minkowski4:
      e.base = W.canonical().base;
      e.xi = W.killing_pair();
      break;
    case Backend::frw:
      e.base = W.cosmic_base();
      e.xi = W.killing_pair();
      break;
  }
  return e;
}

FlatEdge frw_edge_image(const Edge& E, const FRWChart& chart) {
  if (E.backend != Backend::frw) throw StructuralError("frw_edge_image: edge is not on the frw backend");
  if (chart.full_line()) throw PreconditionError("frw_edge_image: the cosmic-time interval must not be the whole line");
  if (E.xi.xi1[0] != 0.0 || E.xi.xi2[0] != 0.0)
    throw PreconditionError("frw_edge_image: generators must be spatial");
  return {chart.tau(E.base[0]), E.base.tail<3>(), E.xi.xi1.tail<3>(), E.xi.xi2.tail<3>()};
}

Edge frw_edge_from_flat(const FlatEdge& F, const FRWChart& chart) {
  if (chart.full_line()) throw PreconditionError("frw_edge_from_flat: the cosmic-time interval must not be the whole line");
  Edge e{Backend::frw, Vector4::Zero(), {}, Matrix5::Identity()};
  e.base << chart.t_of_tau(F.tau), F.base;
  e.xi = {Backend::frw, Vector4(0, F.dir1[0], F.dir1[1], F.dir1[2]), Vector4(0, F.dir2[0], F.dir2[1], F.dir2[2])};
  return e;
}

Matrix4 AdmissibleMetric::at(double t, double x) const {
  const double e0 = std::exp(2 * f0(t, x)), e1 = std::exp(2 * f1(t, x));
  const double e2 = std::exp(2 * f2(t, x)), e3 = std::exp(2 * f3(t, x));
  const double qq = q ? q(t, x) : 0.0;
  Matrix4 g = Matrix4::Zero();
  g(0, 0) = e0;
  g(1, 1) = -e1;
  g(2, 2) = -e2 - e3 * qq * qq;
  g(2, 3) = g(3, 2) = e3 * qq;
  g(3, 3) = -e3;
  return g;
}

bool AdmissibleMetric::validates(const KillingPair& xi,
                                 const std::vector<std::pair<double, double>>& samples) const {
  for (const Vector4* v : {&xi.xi1, &xi.xi2})
    if ((*v)[0] != 0.0 || (*v)[1] != 0.0) return false;
  const double det = xi.xi1[2] * xi.xi2[3] - xi.xi1[3] * xi.xi2[2];
  if (std::abs(det) <= 1e-14 * std::max(1.0, xi.xi1.norm() * xi.xi2.norm())) return false;
  for (const auto& [t, x] : samples) {
    const Matrix4 g = at(t, x);
    if (!(xi.xi1.dot(g * xi.xi1) < 0.0) || !(xi.xi2.dot(g * xi.xi2) < 0.0)) return false;
  }
  return true;
}

}  // namespace warpfield::geometry
