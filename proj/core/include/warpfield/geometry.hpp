#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace warpfield::geometry {

enum class Backend { minkowski4, desitter5, frw };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

using Vector4 = Eigen::Vector4d;
using Vector5 = Eigen::Matrix<double, 5, 1>;
using Matrix4 = Eigen::Matrix4d;
using Matrix5 = Eigen::Matrix<double, 5, 5>;

inline constexpr double kNullTolerance = 1e-12;
inline constexpr double kCanonicalTolerance = 1e-10;

// minkowski4: (x0, x1, x2, x3). desitter5: ambient (x0..x4) with x.x = -1.
// frw: conformal chart (tau, x, y, z); use FRWChart::point for cosmic time input.
struct SpacetimePoint {
  Backend backend;
  Eigen::VectorXd coords;

  static SpacetimePoint minkowski(const Vector4& x);
  static SpacetimePoint desitter(const Vector5& x);  // throws PreconditionError off the hyperboloid
  static SpacetimePoint frw_conformal(const Vector4& x);
};

enum class CausalRelation { timelike, spacelike, null };
std::string to_string(CausalRelation r);

// Flat (ambient) interval (x-y).(x-y) with signature (+,-,...,-).
double interval(const SpacetimePoint& x, const SpacetimePoint& y);
CausalRelation causal_relation(const SpacetimePoint& x, const SpacetimePoint& y);

Matrix4 minkowski_metric();
Matrix5 desitter_ambient_metric();

// Boost along x1 with rapidity s, and rotation by |e| about e.
Matrix4 boost_x1(double s);
Matrix4 rotation(const Eigen::Vector3d& e);

// Generators of a wedge edge. minkowski4: two spacelike 4-vectors.
// frw: two spatial directions (time component zero).
struct KillingPair {
  Backend backend = Backend::minkowski4;
  Vector4 xi1 = Vector4(0, 0, 1, 0);
  Vector4 xi2 = Vector4(0, 0, 0, 1);

  KillingPair flipped() const { return {backend, xi2, xi1}; }
  void validate() const;
};

// Scale factor a(t) > 0 on J = (t_min, t_max); conformal time tau(t) = int_{t_ref}^t ds / a(s).
class FRWChart {
 public:
  FRWChart(std::function<double(double)> a, double t_min, double t_max, double t_ref,
           std::string descriptor = "custom");

  // a(t) = amplitude * t^exponent on (0, inf).
  static std::shared_ptr<const FRWChart> power(double amplitude, double exponent, double t_ref = 1.0);
  // a(t) = exp(rate * t) on the whole line.
  static std::shared_ptr<const FRWChart> exponential(double rate, double t_ref = 0.0);

  double scale(double t) const;
  double tau(double t) const;       // throws RangeError outside J
  double t_of_tau(double tau) const;  // inverse, throws RangeError outside tau(J)
  bool full_line() const;
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double t_ref() const { return t_ref_; }
  const std::string& descriptor() const { return descriptor_; }
  double amplitude() const { return amplitude_; }
  double exponent() const { return exponent_; }

  SpacetimePoint point(double t, const Eigen::Vector3d& x) const;
  bool contains_tau(double tau) const;
  double tau_lower() const { return tau_lo_; }
  double tau_upper() const { return tau_hi_; }

 private:
  struct Exact {
    std::function<double(double)> tau;
    double tau_lo, tau_hi;
  };
  FRWChart(std::function<double(double)> a, double t_min, double t_max, double t_ref, std::string descriptor,
           Exact exact);
  double limit_toward(bool up) const;

  std::function<double(double)> a_;
  std::function<double(double)> tau_exact_;
  double t_min_, t_max_, t_ref_;
  std::string descriptor_;
  double amplitude_ = 0.0, exponent_ = 0.0;
  double tau_lo_ = 0.0, tau_hi_ = 0.0;
};

// Pair of outward null covectors, each scaled to unit |time component|
// (l_minus has time component -1, l_plus has +1), and the edge point
// closest to the origin. W = { x : l_minus.(x - base) > 0, l_plus.(x - base) > 0 }.
struct CanonicalForm {
  Eigen::VectorXd l_minus;
  Eigen::VectorXd l_plus;
  Eigen::VectorXd base;

  double distance(const CanonicalForm& o) const;
};

class Wedge {
 public:
  static Wedge minkowski(const Matrix4& lorentz, const Vector4& translation);
  static Wedge minkowski_reference();
  static Wedge minkowski_from_killing_pair(const KillingPair& xi, const Vector4& base);
  static Wedge desitter(const Matrix5& h);
  static Wedge desitter_reference();
  // Edge through the cosmic-chart point (t, x, y, z) generated by spatial xi.
  static Wedge frw(std::shared_ptr<const FRWChart> chart, const KillingPair& xi,
                   const Vector4& cosmic_base);

  Backend backend() const { return backend_; }
  // minkowski4 and frw (conformal chart) data.
  const Matrix4& lorentz() const { return lorentz_; }
  const Vector4& translation() const { return translation_; }
  // desitter5 data.
  const Matrix5& ambient() const { return ambient_; }
  const std::shared_ptr<const FRWChart>& chart() const { return chart_; }
  // Cosmic-chart base point for frw; equals translation() for minkowski4.
  const Vector4& cosmic_base() const { return cosmic_base_; }

  KillingPair killing_pair() const;
  const CanonicalForm& canonical() const { return canonical_; }

  bool contains(const SpacetimePoint& x) const;
  bool closure_contains(const SpacetimePoint& x, double tol = kNullTolerance) const;

 private:
  Wedge() = default;
  void build_canonical();

  Backend backend_ = Backend::minkowski4;
  Matrix4 lorentz_ = Matrix4::Identity();
  Vector4 translation_ = Vector4::Zero();
  Vector4 cosmic_base_ = Vector4::Zero();
  Matrix5 ambient_ = Matrix5::Identity();
  std::shared_ptr<const FRWChart> chart_;
  CanonicalForm canonical_;
};

bool wedge_membership(const Wedge& W, const SpacetimePoint& x);
Wedge causal_complement(const Wedge& W);
bool same_wedge(const Wedge& a, const Wedge& b, double tol = kCanonicalTolerance);

// Relation of W1 to W2: W1 = W2, W1 a proper subset of W2, W1 contained in W2',
// or none of these.
enum class Inclusion { equal, proper_subset, complement_subset, incomparable };
std::string to_string(Inclusion i);

struct SamplingBox {
  Eigen::VectorXd center;
  double half_width = 4.0;
};

struct SampleEvidence {
  std::size_t samples = 0;
  std::size_t in_w1 = 0;
  std::size_t w1_not_w2 = 0;
  std::size_t w2_not_w1 = 0;
  std::size_t w1_not_w2c = 0;
  std::size_t w2c_not_w1 = 0;
};

// Low-discrepancy points: radical inverses in the first primes.
double radical_inverse(std::size_t index, unsigned base);
std::vector<SpacetimePoint> halton_points(Backend backend, const SamplingBox& box, std::size_t count,
                                          const FRWChart* chart = nullptr);

SampleEvidence sample_relation(const Wedge& w1, const Wedge& w2, std::size_t count,
                               std::optional<SamplingBox> box = std::nullopt);
SamplingBox default_box(const Wedge& w1, const Wedge& w2);

// True when the sample evidence is consistent with the verdict.
bool evidence_confirms(Inclusion verdict, const SampleEvidence& e);

struct InclusionOptions {
  std::size_t samples = 10000;
  bool validate = true;
};

// Analytic verdict; throws DiagnosticError when sampling contradicts it.
Inclusion wedge_inclusion(const Wedge& w1, const Wedge& w2, const InclusionOptions& opt = {});
Inclusion analytic_inclusion(const Wedge& w1, const Wedge& w2);

struct CoherentKey {
  Backend backend;
  double s = 0.0;
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  bool operator==(const CoherentKey& o) const;
};

CoherentKey coherent_family_key(const Wedge& W);

// W = R Lambda_1(s) Lambda_e W0 + y with the representative e = (0, 0, pi/2), s >= 0.
struct MinkowskiDecomposition {
  Eigen::Matrix3d R;
  double s;
  Eigen::Vector3d e;
  Vector4 y;
};
MinkowskiDecomposition minkowski_decomposition(const Wedge& W);

// x -> L x + shift.
struct Isometry {
  Eigen::MatrixXd L;
  Eigen::VectorXd shift;
  SpacetimePoint apply(const SpacetimePoint& x) const;
};

// h Lambda_{W0}(t) h^{-1} with the reference boost cosh(2 pi t), sinh(2 pi t).
Isometry boost_flow(const Wedge& W, double t);
Matrix5 desitter_reference_boost(double t);
Matrix5 desitter_reflection();

struct Edge {
  Backend backend;
  Vector4 base;  // cosmic chart for frw
  KillingPair xi;
  Matrix5 ambient = Matrix5::Identity();
};
Edge edge_of(const Wedge& W);

// Image of an frw edge under the conformal embedding: the plane
// { (tau, base + s1 dir1 + s2 dir2) } in a constant-tau slice.
struct FlatEdge {
  double tau;
  Eigen::Vector3d base;
  Eigen::Vector3d dir1;
  Eigen::Vector3d dir2;
};
FlatEdge frw_edge_image(const Edge& E, const FRWChart& chart);
Edge frw_edge_from_flat(const FlatEdge& F, const FRWChart& chart);

// Metric of the form g = e^{2f0}dt^2 - e^{2f1}dx^2 - e^{2f2}dy^2 - e^{2f3}(dz - q dy)^2
// with coefficients depending on (t, x) only. Used for metric evaluation and
// Killing-pair validation, not for wedge membership.
struct AdmissibleMetric {
  std::function<double(double, double)> f0, f1, f2, f3, q;
  Matrix4 at(double t, double x) const;
  // The pair must be constant combinations of d/dy, d/dz, linearly independent
  // and spacelike at each sample (t, x).
  bool validates(const KillingPair& xi, const std::vector<std::pair<double, double>>& samples) const;
};

}  // namespace warpfield::geometry
