#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "warpfield/errors.hpp"
#include "warpfield/spectral.hpp"

namespace warpfield::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double g0 = std::exp(-1.0 / t);
  const double g1 = std::exp(-1.0 / (1.0 - t));
  return g0 / (g0 + g1);
}

// Symmetric trapezoid grid x_m = m h, m = -M..M, holding only m >= 0.
struct HalfGrid {
  double h = 0.0;
  std::vector<double> weight;  // chi(eps x_m) h, m = 0..M
  std::size_t nodes() const { return 2 * weight.size() - 1; }
};

HalfGrid make_grid(const CutoffSpec& c, double eps, double bandwidth) {
  const double R = c.extent(eps);
  double h = kTwoPi / (bandwidth * c.quadrature.oversampling);
  auto M = static_cast<std::size_t>(std::ceil(R / h));
  const auto min_half = static_cast<std::size_t>(std::max(1, c.quadrature.min_nodes / 2));
  if (M < min_half) {
    M = min_half;
    h = R / static_cast<double>(M);
  }
  HalfGrid g;
  g.h = h;
  g.weight.resize(M + 1);
  for (std::size_t m = 0; m <= M; ++m) g.weight[m] = c.profile(eps * h * static_cast<double>(m)) * h;
  return g;
}

// K(x) = sum_y w_y exp(i (beta - x) y), real because the grid and weights are even.
std::vector<double> inner_sum(const HalfGrid& gy, const HalfGrid& gx, double beta) {
  const std::size_t M = gx.weight.size() - 1;
  std::vector<double> K(2 * M + 1);
  for (std::size_t i = 0; i < K.size(); ++i) {
    const double x = (static_cast<double>(i) - static_cast<double>(M)) * gx.h;
    const cplx step = std::polar(1.0, (beta - x) * gy.h);
    cplx z = step;
    double s = gy.weight[0];
    for (std::size_t m = 1; m < gy.weight.size(); ++m) {
      s += 2.0 * gy.weight[m] * z.real();
      z *= step;
    }
    K[i] = s;
  }
  return K;
}

cplx outer_sum(const HalfGrid& gx, const std::vector<double>& K, double alpha) {
  const std::size_t M = gx.weight.size() - 1;
  const cplx step = std::polar(1.0, alpha * gx.h);
  cplx zp = 1.0;
  cplx s = gx.weight[0] * K[M];
  for (std::size_t m = 1; m <= M; ++m) {
    zp *= step;
    s += gx.weight[m] * (zp * K[M + m] + std::conj(zp) * K[M - m]);
  }
  return s / kTwoPi;
}

}  // namespace

void CutoffSpec::validate() const {
  if (epsilons.empty()) throw PreconditionError("CutoffSpec: empty epsilon sequence");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw PreconditionError("CutoffSpec: epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw PreconditionError("CutoffSpec: epsilons must be strictly decreasing");
  }
  if (quadrature.min_nodes < 3) throw PreconditionError("CutoffSpec: min_nodes < 3");
  if (!(quadrature.oversampling >= 1.0)) throw PreconditionError("CutoffSpec: oversampling < 1");
  if (quadrature.extent_scale < 0.0) throw PreconditionError("CutoffSpec: negative extent");
  if (profile(0.0) != 1.0) throw PreconditionError("CutoffSpec: cutoff value at origin must be 1");
}

double CutoffSpec::extent(double eps) const {
  double s = quadrature.extent_scale;
  if (s == 0.0) s = kind == CutoffKind::compact_bump ? 2.0 : 6.5;
  return s / eps;
}

double CutoffSpec::profile(double u) const {
  const double a = std::abs(u);
  if (kind == CutoffKind::gaussian) return std::exp(-a * a);
  // Plateau of height 1 on [0,1], smooth descent to 0 at 2.
  return 1.0 - smooth_step(a - 1.0);
}

cplx oscillatory_kernel(double a, double b, double eps, const CutoffSpec& c) {
  c.validate();
  const double R = c.extent(eps);
  const HalfGrid gy = make_grid(c, eps, R + std::abs(b) + 10.0);
  const HalfGrid gx = make_grid(c, eps, R + std::abs(a) + 10.0);
  return outer_sum(gx, inner_sum(gy, gx, b), a);
}

OscillatoryResult warp_oscillatory(const Operator& F, const DeformationMatrix& d, const CutoffSpec& c) {
  c.validate();
  const auto& lam = F.rep()->eigenvalues();
  const auto n = static_cast<Eigen::Index>(lam.size());

  const double diam = F.rep()->spectral_diameter();
  if (c.extent(c.epsilons.back()) < 4.0 * diam)
    throw PreconditionError("warp_oscillatory: quadrature extent " +
                            std::to_string(c.extent(c.epsilons.back())) +
                            " does not cover 4x the spectral diameter " + std::to_string(diam));

  // Per axis k the integral factorizes into 2D kernels I(alpha_k, beta_k) with
  // alpha = -kappa theta (lambda_a - lambda_b) and beta = lambda_b.
  std::vector<Vec2> alpha(static_cast<std::size_t>(n * n));
  double amax = 0.0, bmax = 0.0;
  for (Eigen::Index b = 0; b < n; ++b) {
    bmax = std::max(bmax, lam[b].cwiseAbs().maxCoeff());
    for (Eigen::Index a = 0; a < n; ++a) {
      const Vec2 al = -d.kappa() * (d.theta() * (lam[a] - lam[b]));
      alpha[static_cast<std::size_t>(b * n + a)] = al;
      if (F.matrix()(a, b) != cplx(0.0)) amax = std::max(amax, al.cwiseAbs().maxCoeff());
    }
  }

  const Matrix exact = warp(F.matrix(), lam, d);
  ConvergenceReport report;
  Matrix current = Matrix::Zero(n, n);
  for (double eps : c.epsilons) {
    const double R = c.extent(eps);
    const HalfGrid gy = make_grid(c, eps, R + bmax + 10.0);
    const HalfGrid gx = make_grid(c, eps, R + amax + 10.0);

    std::map<double, std::vector<double>> K;
    std::map<std::pair<double, double>, cplx> I;
    auto kernel = [&](double al, double be) -> cplx {
      auto key = std::make_pair(al, be);
      auto it = I.find(key);
      if (it != I.end()) return it->second;
      auto kit = K.find(be);
      if (kit == K.end()) kit = K.emplace(be, inner_sum(gy, gx, be)).first;
      const cplx v = outer_sum(gx, kit->second, al);
      I.emplace(key, v);
      return v;
    };

    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index a = 0; a < n; ++a) {
        const cplx f = F.matrix()(a, b);
        if (f == cplx(0.0)) {
          current(a, b) = 0.0;
          continue;
        }
        const Vec2& al = alpha[static_cast<std::size_t>(b * n + a)];
        current(a, b) = f * kernel(al[0], lam[b][0]) * kernel(al[1], lam[b][1]);
      }
    report.epsilons.push_back(eps);
    report.residuals.push_back(max_abs(Matrix(current - exact)));
    report.nodes_x.push_back(gx.nodes());
    report.nodes_y.push_back(gy.nodes());
  }

  for (std::size_t i = 1; i < report.residuals.size(); ++i)
    if (report.residuals[i] > report.residuals[i - 1] + c.monotone_tolerance)
      throw DiagnosticError("warp_oscillatory: non-monotone convergence at epsilon " +
                                std::to_string(report.epsilons[i]),
                            report.residuals);

  return {Operator(F.rep(), current), std::move(report)};
}

}  // namespace warpfield::spectral
