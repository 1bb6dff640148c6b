#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "warpfield/geometry.hpp"
#include "warpfield/spectral.hpp"

namespace warpfield::scalar {

using spectral::cplx;
using spectral::SparseMatrix;
using Index = Eigen::Index;

// Momenta p_j on the mass shell with weights w_j approximating d^3p / (2 eps_p).
class MassShellGrid {
 public:
  MassShellGrid(double mass, std::vector<Eigen::Vector3d> nodes, std::vector<double> weights);

  // {-K..K}^3 dp with product trapezoid weights divided by 2 eps.
  static std::shared_ptr<const MassShellGrid> cubic(double mass, int K, double dp);
  // The given nodes together with their negatives, sharing weights.
  static std::shared_ptr<const MassShellGrid> symmetric_pairs(double mass, const std::vector<Eigen::Vector3d>& half,
                                                               const std::vector<double>& weights);
  static std::shared_ptr<const MassShellGrid> custom(double mass, std::vector<Eigen::Vector3d> nodes,
                                                      std::vector<double> weights);

  double mass() const { return mass_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const Eigen::Vector3d& node(int j) const { return nodes_.at(static_cast<std::size_t>(j)); }
  double weight(int j) const { return weights_.at(static_cast<std::size_t>(j)); }
  double energy(int j) const { return energies_.at(static_cast<std::size_t>(j)); }
  // (eps_j, p_j)
  Eigen::Vector4d momentum4(int j) const;
  // Index of -p_j, or -1.
  int partner(int j) const { return partners_.at(static_cast<std::size_t>(j)); }
  bool inversion_closed() const;
  // Node index of r p_j for an orthogonal r mapping the grid to itself; throws otherwise.
  std::vector<int> automorphism(const Eigen::Matrix3d& r) const;

 private:
  double mass_;
  std::vector<Eigen::Vector3d> nodes_;
  std::vector<double> weights_;
  std::vector<double> energies_;
  std::vector<int> partners_;
};

using GridPtr = std::shared_ptr<const MassShellGrid>;

// Values of the on-shell restriction of a test function at the grid nodes.
struct MassShellFunction {
  GridPtr grid;
  Eigen::VectorXcd amp;
  std::optional<geometry::Wedge> support;

  MassShellFunction(GridPtr g, Eigen::VectorXcd a, std::optional<geometry::Wedge> s = std::nullopt);

  // exp(-|p - p0|^2 / (2 sigma^2)) translated to x.
  static MassShellFunction gaussian(GridPtr g, const Eigen::Vector3d& p0, double sigma,
                                    const Eigen::Vector4d& x = Eigen::Vector4d::Zero());
  static MassShellFunction node(GridPtr g, int j, cplx value = 1.0);
};

// f_y(p) = exp(i p.y) f(p) with the Minkowski product.
MassShellFunction translated(const MassShellFunction& f, const Eigen::Vector4d& y);
// f_r(p) = f(r^{-1} p) for a grid automorphism r.
MassShellFunction rotated(const MassShellFunction& f, const Eigen::Matrix3d& r);

cplx inner_product_m(const MassShellFunction& f, const MassShellFunction& g);
MassShellFunction apply_complex_structure(const MassShellFunction& f);

// Bosonic Fock space truncated to total occupation <= N. Modes are the grid
// nodes, or particle nodes followed by hole nodes when doubled. Basis states are
// ordered lexicographically by occupation vector; index 0 is the vacuum.
class TruncatedFock {
 public:
  TruncatedFock(GridPtr grid, int max_total, bool doubled = false, std::size_t max_dim = 4'000'000);

  const GridPtr& grid() const { return grid_; }
  int max_total() const { return max_total_; }
  bool doubled() const { return doubled_; }
  int modes() const { return modes_; }
  Index dim() const { return dim_; }

  int occupation(Index a, int mode) const { return occ_[static_cast<std::size_t>(a * modes_ + mode)]; }
  std::vector<int> occupation(Index a) const;
  int total(Index a) const { return totals_[static_cast<std::size_t>(a)]; }
  // Basis index after removing / adding one quantum in mode, or -1.
  Index lowered(Index a, int mode) const { return lower_[static_cast<std::size_t>(a * modes_ + mode)]; }
  Index raised(Index a, int mode) const { return raise_[static_cast<std::size_t>(a * modes_ + mode)]; }
  std::optional<Index> index_of(const std::vector<int>& occupation) const;

  // sum_j c_j b_j + sum_j d_j b_j^dagger; either vector may be empty.
  SparseMatrix ladder(const Eigen::VectorXcd& lower, const Eigen::VectorXcd& raise) const;
  SparseMatrix mode_lowering(int mode) const;

  // Basis states with total occupation <= N - depth.
  std::vector<Index> protected_states(int depth) const;
  // dim x k matrix selecting the protected basis vectors as columns.
  SparseMatrix selector(const std::vector<Index>& states) const;
  Eigen::VectorXcd vacuum() const;

  static std::size_t dimension(int modes, int max_total);

 private:
  GridPtr grid_;
  int max_total_;
  bool doubled_;
  int modes_;
  Index dim_ = 0;
  std::vector<std::uint8_t> occ_;
  std::vector<int> totals_;
  std::vector<std::int32_t> lower_, raise_;
};

SparseMatrix annihilation(const MassShellFunction& phi, const TruncatedFock& F);
SparseMatrix creation(const MassShellFunction& phi, const TruncatedFock& F);
SparseMatrix vacuum_field(const MassShellFunction& f, const TruncatedFock& F);

// max |A(:, cols)| computed column by column.
double max_abs_columns(const SparseMatrix& A, const std::vector<Index>& cols);
// A - c * 1 restricted to the given columns.
double identity_residual(const SparseMatrix& A, cplx c, const std::vector<Index>& cols);

}  // namespace warpfield::scalar
