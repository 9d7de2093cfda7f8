#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"
#include "numeric.hpp"
#include "quadrature.hpp"

namespace wrji {

enum class KernelType
{
  gaussian,
  epanechnikov,
};

//! Symmetric second-order kernel K with its distribution function W.
struct KernelSpec
{
  KernelType type = KernelType::gaussian;

  static KernelSpec gaussian() { return { KernelType::gaussian }; }
  static KernelSpec epanechnikov() { return { KernelType::epanechnikov }; }

  std::string name() const { return type == KernelType::gaussian ? "gaussian" : "epanechnikov"; }

  double K(double u) const
  {
    if (type == KernelType::gaussian)
      return num::normal_pdf(u);
    return std::fabs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
  }

  double W(double u) const
  {
    if (type == KernelType::gaussian)
      return num::normal_cdf(u);
    if (u <= -1.0)
      return 0.0;
    if (u >= 1.0)
      return 1.0;
    return 0.5 + 0.75 * u - 0.25 * u * u * u;
  }

  //! Half-width of the kernel support (infinite for the Gaussian).
  double radius() const { return type == KernelType::gaussian ? inf : 1.0; }

  //! (K * K)(u), the self-convolution.
  double self_convolution(double u) const
  {
    if (type == KernelType::gaussian)
      return std::exp(-0.25 * u * u) * (0.5 * std::numbers::inv_sqrtpi);
    const double a = std::fabs(u);
    if (a >= 2.0)
      return 0.0;
    return 3.0 / 160.0 * (2.0 - a) * (2.0 - a) * (2.0 - a) * (a * a + 6.0 * a + 4.0);
  }
};

//! Sorted finite observations.
class Sample
{
public:
  Sample() = default;
  explicit Sample(std::vector<double> values)
    : x_(std::move(values))
  {
    require(!x_.empty(), ErrorCode::degenerate_sample, "sample: no observations");
    for (double v : x_)
      require(std::isfinite(v), ErrorCode::invalid_parameter, "sample: values must be finite");
    std::stable_sort(x_.begin(), x_.end());
  }

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& values() const { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }
  double min() const { return x_.front(); }
  double max() const { return x_.back(); }
  double spread() const { return x_.back() - x_.front(); }
  double mean() const { return std::accumulate(x_.begin(), x_.end(), 0.0) / static_cast<double>(x_.size()); }
  double sd() const
  {
    if (x_.size() < 2)
      return 0.0;
    const double m = mean();
    double ss = 0.0;
    for (double v : x_)
      ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x_.size() - 1));
  }

private:
  std::vector<double> x_;
};

struct BandwidthRule
{
  enum Kind
  {
    fixed,
    cv_pdf, //!< least-squares cross-validation for every bandwidth
    cv_cdf, //!< cdf cross-validation for every bandwidth
    cv,     //!< cv_pdf for densities, cv_cdf for survival functions
  } kind = cv;
  double h = 0.0;

  static BandwidthRule Fixed(double h)
  {
    require(h > 0 && std::isfinite(h), ErrorCode::invalid_parameter, "bandwidth must be positive");
    return { fixed, h };
  }
  static BandwidthRule CvPdf() { return { cv_pdf, 0.0 }; }
  static BandwidthRule CvCdf() { return { cv_cdf, 0.0 }; }
  static BandwidthRule Cv() { return { cv, 0.0 }; }
};

enum class EstimatorMode
{
  ecdf,   //!< empirical survival normalizers
  kernel, //!< kernel-smoothed survival normalizers
};

inline const char* to_string(EstimatorMode m)
{
  return m == EstimatorMode::ecdf ? "ecdf" : "kernel";
}

// ---------------------------------------------------------------------------

inline double kde_pdf(const Sample& s, const KernelSpec& k, double h, double x)
{
  require(h > 0, ErrorCode::invalid_parameter, "kde_pdf: h must be positive");
  double acc = 0.0;
  for (double xi : s.values())
    acc += k.K((x - xi) / h);
  return acc / (static_cast<double>(s.size()) * h);
}

//! Fraction of observations strictly greater than t.
inline double ecdf_sf(const Sample& s, double t)
{
  const auto& v = s.values();
  auto it = std::upper_bound(v.begin(), v.end(), t);
  return static_cast<double>(v.end() - it) / static_cast<double>(v.size());
}

//! 1 - (1/n) sum W((t - X_i)/h), evaluated as (1/n) sum W((X_i - t)/h).
inline double kernel_sf(const Sample& s, const KernelSpec& k, double h, double t)
{
  require(h > 0, ErrorCode::invalid_parameter, "kernel_sf: h must be positive");
  double acc = 0.0;
  for (double xi : s.values())
    acc += k.W((xi - t) / h);
  return acc / static_cast<double>(s.size());
}

namespace detail {

// 2 Psi(z) - z - |z| for the standard normal, Psi(z) = z Phi(z) + phi(z);
// even in z and negligible beyond |z| = 9.
inline double psi_excess(double z)
{
  const double a = std::fabs(z);
  return 2.0 * (num::normal_pdf(a) - a * 0.5 * std::erfc(a * std::numbers::sqrt2 * 0.5));
}

//! For each i: sum over j != i of |x_j - x_i| / c + psi_excess((x_j - x_i) / c).
inline std::vector<double> psi_pair_sums(const std::vector<double>& x, double c)
{
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(n, 0.0);
  const double cut = 9.0 * c;
  for (std::size_t i = 0; i < n; ++i) {
    const double below = static_cast<double>(i) * x[i] - prefix[i];
    const double above = (prefix[n] - prefix[i + 1]) - static_cast<double>(n - i - 1) * x[i];
    out[i] += (below + above) / c;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && x[j] - x[i] < cut; ++j) {
      const double e = psi_excess((x[j] - x[i]) / c);
      out[i] += e;
      out[j] += e;
    }
  }
  return out;
}

inline void require_spread(const Sample& s, const char* who)
{
  require(s.size() >= 2, ErrorCode::degenerate_sample, std::string(who) + ": need at least two observations");
  require(s.sd() > 0.0, ErrorCode::degenerate_sample, std::string(who) + ": sample has zero spread");
}

//! Minimizes score over [lo, hi]: log-spaced scan, then golden section in
//! log h between the neighbours of the best scan point.
template <typename S>
double minimize_bandwidth(S&& score, double lo, double hi)
{
  const int grid = 30;
  const double llo = std::log(lo), lhi = std::log(hi);
  int best = 0;
  double best_v = inf;
  for (int i = 0; i <= grid; ++i) {
    const double v = score(std::exp(llo + (lhi - llo) * i / grid));
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double a = llo + (lhi - llo) * std::max(0, best - 1) / grid;
  const double b = llo + (lhi - llo) * std::min(grid, best + 1) / grid;
  auto [lh, v] = num::golden_section_min([&](double l) { return score(std::exp(l)); }, a, b, 1e-4);
  return v <= best_v ? std::exp(lh) : std::exp(llo + (lhi - llo) * best / grid);
}

} // namespace detail

//! Search interval for the cross-validated bandwidths.
inline std::pair<double, double> bandwidth_search_range(const Sample& s)
{
  const double sd = s.sd();
  return { 0.05 * sd * std::pow(static_cast<double>(s.size()), -0.2), 5.0 * sd };
}

//! LSCV(h) = int f_n^2 - (2/n) sum_i f_{n,-i}(X_i).
inline double lscv_score(const Sample& s, const KernelSpec& k, double h)
{
  const auto& x = s.values();
  const std::size_t n = x.size();
  const double nn = static_cast<double>(n);
  const double cut = k.type == KernelType::gaussian ? 13.0 * h : 2.0 * h;
  double conv = 0.0; // sum over i < j of (K*K)(d/h)
  double loo = 0.0;  // sum over i < j of K(d/h)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && x[j] - x[i] < cut; ++j) {
      const double u = (x[j] - x[i]) / h;
      conv += k.self_convolution(u);
      loo += k.K(u);
    }
  }
  const double int_f2 = (nn * k.self_convolution(0.0) + 2.0 * conv) / (nn * nn * h);
  const double cv_term = 2.0 * (2.0 * loo) / (nn * (nn - 1.0) * h);
  return int_f2 - cv_term;
}

//! (1/n) sum_i int (I(x >= X_i) - F_{h,-i}(x))^2 dx by composite quadrature
//! over [min - pad, max + pad].
inline double cvcdf_score_quadrature(const Sample& s, const KernelSpec& k, double h, double pad)
{
  const auto& x = s.values();
  const std::size_t n = x.size();
  const double m = static_cast<double>(n - 1);
  double total = 0.0;
  quad::Options qo;
  qo.abs_tol = 1e-12;
  qo.rel_tol = 1e-10;
  for (std::size_t i = 0; i < n; ++i) {
    auto loo = [&](double u) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i)
          acc += k.W((u - x[j]) / h);
      const double r = (u >= x[i] ? 1.0 : 0.0) - acc / m;
      return r * r;
    };
    const double brk[] = { x[i] };
    total += quad::integrate_finite(loo, s.min() - pad, s.max() + pad, brk, qo).value;
  }
  return total / static_cast<double>(n);
}

//! Same score in closed form for the Gaussian kernel (integrated over the
//! whole line); falls back to quadrature for other kernels.
inline double cvcdf_score(const Sample& s, const KernelSpec& k, double h)
{
  if (k.type != KernelType::gaussian)
    return cvcdf_score_quadrature(s, k, h, 4.0 * bandwidth_search_range(s).second);
  const auto& x = s.values();
  const std::size_t n = x.size();
  const double nn = static_cast<double>(n);
  const double m = nn - 1.0;
  const double psi0 = num::normal_pdf(0.0);
  const double c2 = h * std::numbers::sqrt2;
  const auto B = detail::psi_pair_sums(x, h);  // T1_i + T2_i
  const auto A = detail::psi_pair_sums(x, c2); // row_i + col_i - 2 Psi(0)
  double S = nn * psi0;
  for (double a : A)
    S += 0.5 * a;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s_minus = S - A[i] - psi0;
    total += h / (m * m) * (m * B[i] - std::numbers::sqrt2 * s_minus);
  }
  return total / nn;
}

inline double cv_bandwidth_pdf(const Sample& s, const KernelSpec& k = {})
{
  detail::require_spread(s, "cv_bandwidth_pdf");
  auto [lo, hi] = bandwidth_search_range(s);
  return detail::minimize_bandwidth([&](double h) { return lscv_score(s, k, h); }, lo, hi);
}

inline double cv_bandwidth_cdf(const Sample& s, const KernelSpec& k = {})
{
  detail::require_spread(s, "cv_bandwidth_cdf");
  auto [lo, hi] = bandwidth_search_range(s);
  return detail::minimize_bandwidth([&](double h) { return cvcdf_score(s, k, h); }, lo, hi);
}

// ---------------------------------------------------------------------------

//! Bandwidths used by one estimate: density (h_f) and survival (h_F) for
//! each sample.
struct Bandwidths
{
  double pdf_x = 0.0;
  double pdf_y = 0.0;
  double cdf_x = 0.0;
  double cdf_y = 0.0;
};

struct EstimatorConfig
{
  EstimatorMode mode = EstimatorMode::kernel;
  KernelSpec kx{};
  KernelSpec ky{};
  BandwidthRule rule = BandwidthRule::Cv();
};

inline Bandwidths resolve_bandwidths(const Sample& sx, const Sample& sy, const KernelSpec& kx, const KernelSpec& ky,
                                     const BandwidthRule& rule)
{
  auto floor = [](const Sample& s, double h) { return std::max(h, 1e-6 * s.spread()); };
  Bandwidths b;
  switch (rule.kind) {
    case BandwidthRule::fixed:
      b = { rule.h, rule.h, rule.h, rule.h };
      break;
    case BandwidthRule::cv_pdf:
      b.pdf_x = b.cdf_x = cv_bandwidth_pdf(sx, kx);
      b.pdf_y = b.cdf_y = cv_bandwidth_pdf(sy, ky);
      break;
    case BandwidthRule::cv_cdf:
      b.pdf_x = b.cdf_x = cv_bandwidth_cdf(sx, kx);
      b.pdf_y = b.cdf_y = cv_bandwidth_cdf(sy, ky);
      break;
    case BandwidthRule::cv:
      b.pdf_x = cv_bandwidth_pdf(sx, kx);
      b.pdf_y = cv_bandwidth_pdf(sy, ky);
      b.cdf_x = cv_bandwidth_cdf(sx, kx);
      b.cdf_y = cv_bandwidth_cdf(sy, ky);
      break;
  }
  b.pdf_x = floor(sx, b.pdf_x);
  b.cdf_x = floor(sx, b.cdf_x);
  b.pdf_y = floor(sy, b.pdf_y);
  b.cdf_y = floor(sy, b.cdf_y);
  return b;
}

//! Upper integration limit: largest observation plus five density bandwidths.
inline double estimator_upper_limit(const Sample& sx, const Sample& sy, const Bandwidths& b)
{
  return std::max(sx.max(), sy.max()) + 5.0 * std::max(b.pdf_x, b.pdf_y);
}

//! int_t^U x f_n(x) g_n(x) dx
inline double kde_product_moment(const Sample& sx, const Sample& sy, const KernelSpec& kx, const KernelSpec& ky,
                                 double hx, double hy, double t, double U)
{
  if (!(U > t))
    return 0.0;
  const double nx = static_cast<double>(sx.size()), ny = static_cast<double>(sy.size());
  if (kx.type == KernelType::gaussian && ky.type == KernelType::gaussian) {
    // phi_h(x-a) phi_g(x-b) = N(a-b; 0, h^2+g^2) N(x; mu, s^2)
    const double s2 = hx * hx + hy * hy;
    const double s = hx * hy / std::sqrt(s2);
    const double wa = hy * hy / s2, wb = hx * hx / s2;
    const double cut = 38.0 * std::sqrt(s2);
    double acc = 0.0;
    const auto& yv = sy.values();
    for (double a : sx.values()) {
      auto first = std::lower_bound(yv.begin(), yv.end(), a - cut);
      for (auto it = first; it != yv.end() && *it < a + cut; ++it) {
        const double b = *it;
        const double d = a - b;
        const double w = std::exp(-0.5 * d * d / s2) / std::sqrt(2.0 * std::numbers::pi * s2);
        if (w == 0.0)
          continue;
        const double mu = a * wa + b * wb;
        const double lo = (t - mu) / s, hi = (U - mu) / s;
        double mass;
        if (lo > 0.0)
          mass = 0.5 * (std::erfc(lo / std::numbers::sqrt2) - std::erfc(hi / std::numbers::sqrt2));
        else
          mass = 0.5 * (std::erfc(-hi / std::numbers::sqrt2) - std::erfc(-lo / std::numbers::sqrt2));
        acc += w * (mu * mass + s * (num::normal_pdf(lo) - num::normal_pdf(hi)));
      }
    }
    return acc / (nx * ny);
  }
  std::vector<double> breaks;
  for (double a : sx.values())
    for (double r : { -hx * kx.radius(), hx * kx.radius() })
      if (std::isfinite(r))
        breaks.push_back(a + r);
  for (double b : sy.values())
    for (double r : { -hy * ky.radius(), hy * ky.radius() })
      if (std::isfinite(r))
        breaks.push_back(b + r);
  quad::Options qo;
  qo.abs_tol = 1e-10;
  qo.rel_tol = 1e-8;
  return quad::integrate_finite([&](double u) { return u * kde_pdf(sx, kx, hx, u) * kde_pdf(sy, ky, hy, u); }, t, U,
                                breaks, qo)
    .value;
}

//! Plug-in estimate of the weighted residual inaccuracy at t with the given
//! bandwidths.
inline double estimate_wrji(const Sample& sx, const Sample& sy, double t, EstimatorMode mode, const KernelSpec& kx,
                            const KernelSpec& ky, const Bandwidths& b)
{
  double nx, ny;
  if (mode == EstimatorMode::ecdf) {
    nx = ecdf_sf(sx, t);
    ny = ecdf_sf(sy, t);
    require(nx > 0.0 && ny > 0.0, ErrorCode::no_data_beyond_t, "estimate_wrji: no data beyond t");
  } else {
    nx = kernel_sf(sx, kx, b.cdf_x, t);
    ny = kernel_sf(sy, ky, b.cdf_y, t);
    require(nx > 1e-12 && ny > 1e-12, ErrorCode::no_data_beyond_t, "estimate_wrji: smoothed survival vanishes at t");
  }
  const double U = estimator_upper_limit(sx, sy, b);
  const double num = kde_product_moment(sx, sy, kx, ky, b.pdf_x, b.pdf_y, t, U);
  return -0.5 * num / (nx * ny);
}

inline double estimate_wrji(const Sample& sx, const Sample& sy, double t, EstimatorMode mode, const KernelSpec& kx,
                            const KernelSpec& ky, const BandwidthRule& rule)
{
  return estimate_wrji(sx, sy, t, mode, kx, ky, resolve_bandwidths(sx, sy, kx, ky, rule));
}

inline double estimate_wrji(const Sample& sx, const Sample& sy, double t, const EstimatorConfig& cfg = {})
{
  return estimate_wrji(sx, sy, t, cfg.mode, cfg.kx, cfg.ky, cfg.rule);
}

} // namespace wrji
