#include "warpfield/scalar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "warpfield/errors.hpp"

namespace warpfield::scalar {

namespace {

void require_grid(const MassShellFunction& f, const GridPtr& g, const char* where) {
  if (f.grid != g && !(f.grid && g && f.grid.get() == g.get()))
    throw StructuralError(std::string(where) + ": grid mismatch");
}

int find_node(const std::vector<Eigen::Vector3d>& nodes, const Eigen::Vector3d& p) {
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if ((nodes[k] - p).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, p.cwiseAbs().maxCoeff()))
      return static_cast<int>(k);
  return -1;
}

}  // namespace

MassShellGrid::MassShellGrid(double mass, std::vector<Eigen::Vector3d> nodes, std::vector<double> weights)
    : mass_(mass), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (!(mass_ > 0.0)) throw PreconditionError("MassShellGrid: mass must be positive");
  if (nodes_.empty()) throw PreconditionError("MassShellGrid: no nodes");
  if (nodes_.size() != weights_.size()) throw StructuralError("MassShellGrid: node and weight counts differ");
  for (double w : weights_)
    if (!(w > 0.0)) throw PreconditionError("MassShellGrid: weights must be positive");
  for (const auto& p : nodes_) energies_.push_back(std::sqrt(p.squaredNorm() + mass_ * mass_));
  std::map<std::array<double, 3>, int> exact;
  for (std::size_t j = 0; j < nodes_.size(); ++j)
    exact.emplace(std::array<double, 3>{nodes_[j][0] + 0.0, nodes_[j][1] + 0.0, nodes_[j][2] + 0.0}, static_cast<int>(j));
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const Eigen::Vector3d m = -nodes_[j];
    const auto hit = exact.find({m[0] + 0.0, m[1] + 0.0, m[2] + 0.0});
    const int k = hit != exact.end() ? hit->second : find_node(nodes_, m);
    partners_.push_back(k >= 0 && std::abs(weights_[static_cast<std::size_t>(k)] - weights_[j]) <=
                                          1e-14 * weights_[j]
                            ? k
                            : -1);
  }
}

std::shared_ptr<const MassShellGrid> MassShellGrid::cubic(double mass, int K, double dp) {
  if (K < 0 || !(dp > 0.0)) throw PreconditionError("MassShellGrid::cubic: need K >= 0 and dp > 0");
  std::vector<Eigen::Vector3d> nodes;
  std::vector<double> weights;
  auto axis_weight = [&](int i) { return (K > 0 && std::abs(i) == K) ? 0.5 * dp : dp; };
  for (int i = -K; i <= K; ++i)
    for (int j = -K; j <= K; ++j)
      for (int k = -K; k <= K; ++k) {
        const Eigen::Vector3d p(i * dp, j * dp, k * dp);
        nodes.push_back(p);
        weights.push_back(axis_weight(i) * axis_weight(j) * axis_weight(k) /
                          (2.0 * std::sqrt(p.squaredNorm() + mass * mass)));
      }
  return std::make_shared<const MassShellGrid>(mass, std::move(nodes), std::move(weights));
}

std::shared_ptr<const MassShellGrid> MassShellGrid::symmetric_pairs(double mass,
                                                                     const std::vector<Eigen::Vector3d>& half,
                                                                     const std::vector<double>& weights) {
  if (half.size() != weights.size()) throw StructuralError("MassShellGrid: node and weight counts differ");
  std::vector<Eigen::Vector3d> nodes(half);
  std::vector<double> w(weights);
  for (std::size_t k = 0; k < half.size(); ++k) {
    if (half[k].isZero()) throw PreconditionError("MassShellGrid::symmetric_pairs: p = 0 is its own partner");
    nodes.push_back(-half[k]);
    w.push_back(weights[k]);
  }
  return std::make_shared<const MassShellGrid>(mass, std::move(nodes), std::move(w));
}

std::shared_ptr<const MassShellGrid> MassShellGrid::custom(double mass, std::vector<Eigen::Vector3d> nodes,
                                                            std::vector<double> weights) {
  return std::make_shared<const MassShellGrid>(mass, std::move(nodes), std::move(weights));
}

Eigen::Vector4d MassShellGrid::momentum4(int j) const {
  const auto& p = node(j);
  return {energy(j), p[0], p[1], p[2]};
}

bool MassShellGrid::inversion_closed() const {
  return std::all_of(partners_.begin(), partners_.end(), [](int k) { return k >= 0; });
}

std::vector<int> MassShellGrid::automorphism(const Eigen::Matrix3d& r) const {
  std::vector<int> perm(nodes_.size());
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const int k = find_node(nodes_, r * nodes_[j]);
    if (k < 0 || std::abs(weights_[static_cast<std::size_t>(k)] - weights_[j]) > 1e-14 * weights_[j])
      throw PreconditionError("MassShellGrid: rotation does not map the grid to itself");
    perm[j] = k;
  }
  return perm;
}

MassShellFunction::MassShellFunction(GridPtr g, Eigen::VectorXcd a, std::optional<geometry::Wedge> s)
    : grid(std::move(g)), amp(std::move(a)), support(std::move(s)) {
  if (!grid) throw StructuralError("MassShellFunction: missing grid");
  if (amp.size() != grid->size()) throw StructuralError("MassShellFunction: amplitude length differs from node count");
}

MassShellFunction MassShellFunction::gaussian(GridPtr g, const Eigen::Vector3d& p0, double sigma,
                                              const Eigen::Vector4d& x) {
  Eigen::VectorXcd a(g->size());
  for (int j = 0; j < g->size(); ++j) {
    const double m = (g->node(j) - p0).squaredNorm();
    const double phase = g->energy(j) * x[0] - g->node(j).dot(x.tail<3>());
    a[j] = std::polar(std::exp(-m / (2.0 * sigma * sigma)), phase);
  }
  return {std::move(g), std::move(a)};
}

MassShellFunction MassShellFunction::node(GridPtr g, int j, cplx value) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(g->size());
  a[j] = value;
  return {std::move(g), std::move(a)};
}

MassShellFunction translated(const MassShellFunction& f, const Eigen::Vector4d& y) {
  Eigen::VectorXcd a = f.amp;
  for (int j = 0; j < f.grid->size(); ++j)
    a[j] *= std::polar(1.0, f.grid->energy(j) * y[0] - f.grid->node(j).dot(y.tail<3>()));
  return {f.grid, std::move(a)};
}

MassShellFunction rotated(const MassShellFunction& f, const Eigen::Matrix3d& r) {
  const std::vector<int> perm = f.grid->automorphism(r);
  Eigen::VectorXcd a(f.amp.size());
  for (std::size_t j = 0; j < perm.size(); ++j) a[perm[j]] = f.amp[static_cast<Index>(j)];
  return {f.grid, std::move(a)};
}

cplx inner_product_m(const MassShellFunction& f, const MassShellFunction& g) {
  require_grid(g, f.grid, "inner_product_m");
  cplx s = 0.0;
  for (int j = 0; j < f.grid->size(); ++j) s += f.grid->weight(j) * std::conj(f.amp[j]) * g.amp[j];
  return s;
}

MassShellFunction apply_complex_structure(const MassShellFunction& f) {
  return {f.grid, cplx(0.0, 1.0) * f.amp, f.support};
}

// ---------------------------------------------------------------- Fock space

std::size_t TruncatedFock::dimension(int modes, int max_total) {
  // C(modes + N, N) with overflow guard.
  long double r = 1.0L;
  for (int k = 1; k <= max_total; ++k) r = r * static_cast<long double>(modes + k) / k;
  if (r > 1e15L) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(std::llround(static_cast<double>(r)));
}

TruncatedFock::TruncatedFock(GridPtr grid, int max_total, bool doubled, std::size_t max_dim)
    : grid_(std::move(grid)), max_total_(max_total), doubled_(doubled) {
  if (!grid_) throw StructuralError("TruncatedFock: missing grid");
  if (max_total_ < 0 || max_total_ > 255) throw PreconditionError("TruncatedFock: N out of range");
  modes_ = grid_->size() * (doubled_ ? 2 : 1);
  const std::size_t d = dimension(modes_, max_total_);
  if (d > max_dim)
    throw ResourceError("TruncatedFock: dimension " + std::to_string(d) + " exceeds limit " + std::to_string(max_dim));
  dim_ = static_cast<Index>(d);

  const auto M = static_cast<std::size_t>(modes_);
  occ_.reserve(d * M);
  totals_.reserve(d);
  // Lexicographic enumeration: odometer over (n_0, ..., n_{M-1}) with bounded sum.
  std::vector<int> cur(M, 0);
  int sum = 0;
  while (true) {
    for (int v : cur) occ_.push_back(static_cast<std::uint8_t>(v));
    totals_.push_back(sum);
    // Increment the last position that can grow; reset everything after it.
    int pos = modes_ - 1;
    if (sum < max_total_) {
      ++cur[static_cast<std::size_t>(pos)];
      ++sum;
      continue;
    }
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == 0) --pos;
    if (pos <= 0) break;
    sum -= cur[static_cast<std::size_t>(pos)];
    cur[static_cast<std::size_t>(pos)] = 0;
    ++cur[static_cast<std::size_t>(pos - 1)];
    ++sum;
  }
  if (totals_.size() != d) throw StructuralError("TruncatedFock: enumeration count mismatch");

  std::map<std::vector<std::uint8_t>, std::int32_t> index;
  for (std::size_t a = 0; a < d; ++a)
    index.emplace(std::vector<std::uint8_t>(occ_.begin() + static_cast<std::ptrdiff_t>(a * M),
                                            occ_.begin() + static_cast<std::ptrdiff_t>((a + 1) * M)),
                  static_cast<std::int32_t>(a));
  lower_.assign(d * M, -1);
  raise_.assign(d * M, -1);
  std::vector<std::uint8_t> key(M);
  for (std::size_t a = 0; a < d; ++a) {
    std::copy_n(occ_.begin() + static_cast<std::ptrdiff_t>(a * M), M, key.begin());
    for (std::size_t j = 0; j < M; ++j) {
      if (key[j] > 0) {
        --key[j];
        lower_[a * M + j] = index.at(key);
        ++key[j];
      }
      if (totals_[a] < max_total_) {
        ++key[j];
        raise_[a * M + j] = index.at(key);
        --key[j];
      }
    }
  }
}

std::vector<int> TruncatedFock::occupation(Index a) const {
  std::vector<int> r(static_cast<std::size_t>(modes_));
  for (int j = 0; j < modes_; ++j) r[static_cast<std::size_t>(j)] = occupation(a, j);
  return r;
}

std::optional<Index> TruncatedFock::index_of(const std::vector<int>& occupation) const {
  if (static_cast<int>(occupation.size()) != modes_) return std::nullopt;
  Index a = 0;
  for (int j = 0; j < modes_; ++j)
    for (int k = 0; k < occupation[static_cast<std::size_t>(j)]; ++k) {
      a = raised(a, j);
      if (a < 0) return std::nullopt;
    }
  return a;
}

SparseMatrix TruncatedFock::ladder(const Eigen::VectorXcd& lower, const Eigen::VectorXcd& raise) const {
  if ((lower.size() != 0 && lower.size() != modes_) || (raise.size() != 0 && raise.size() != modes_))
    throw StructuralError("TruncatedFock::ladder: coefficient length differs from mode count");
  std::vector<Eigen::Triplet<cplx>> t;
  for (Index a = 0; a < dim_; ++a)
    for (int j = 0; j < modes_; ++j) {
      const int n = occupation(a, j);
      if (lower.size() && lower[j] != cplx(0.0) && n > 0)
        t.emplace_back(lowered(a, j), a, lower[j] * std::sqrt(static_cast<double>(n)));
      if (raise.size() && raise[j] != cplx(0.0) && raised(a, j) >= 0)
        t.emplace_back(raised(a, j), a, raise[j] * std::sqrt(static_cast<double>(n + 1)));
    }
  SparseMatrix m(dim_, dim_);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix TruncatedFock::mode_lowering(int mode) const {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(modes_);
  c[mode] = 1.0;
  return ladder(c, {});
}

std::vector<Index> TruncatedFock::protected_states(int depth) const {
  std::vector<Index> r;
  for (Index a = 0; a < dim_; ++a)
    if (total(a) <= max_total_ - depth) r.push_back(a);
  return r;
}

SparseMatrix TruncatedFock::selector(const std::vector<Index>& states) const {
  SparseMatrix S(dim_, static_cast<Index>(states.size()));
  std::vector<Eigen::Triplet<cplx>> t;
  for (std::size_t k = 0; k < states.size(); ++k) t.emplace_back(states[k], static_cast<Index>(k), 1.0);
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

Eigen::VectorXcd TruncatedFock::vacuum() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
  v[0] = 1.0;
  return v;
}

SparseMatrix annihilation(const MassShellFunction& phi, const TruncatedFock& F) {
  require_grid(phi, F.grid(), "annihilation");
  if (F.doubled()) throw PreconditionError("annihilation: vacuum ladder needs an undoubled Fock space");
  Eigen::VectorXcd c(F.modes());
  for (int j = 0; j < F.modes(); ++j) c[j] = std::sqrt(F.grid()->weight(j)) * std::conj(phi.amp[j]);
  return F.ladder(c, {});
}

SparseMatrix creation(const MassShellFunction& phi, const TruncatedFock& F) {
  return SparseMatrix(annihilation(phi, F).adjoint());
}

SparseMatrix vacuum_field(const MassShellFunction& f, const TruncatedFock& F) {
  const SparseMatrix a = annihilation(f, F);
  return (a + SparseMatrix(a.adjoint())) * (1.0 / std::sqrt(2.0));
}

double max_abs_columns(const SparseMatrix& A, const std::vector<Index>& cols) {
  double r = 0.0;
  for (Index c : cols)
    for (SparseMatrix::InnerIterator it(A, c); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

double identity_residual(const SparseMatrix& A, cplx c, const std::vector<Index>& cols) {
  double r = 0.0;
  for (Index col : cols) {
    bool diag_seen = false;
    for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
      const cplx expect = it.row() == col ? c : cplx(0.0);
      if (it.row() == col) diag_seen = true;
      r = std::max(r, std::abs(it.value() - expect));
    }
    if (!diag_seen) r = std::max(r, std::abs(c));
  }
  return r;
}

}  // namespace warpfield::scalar
