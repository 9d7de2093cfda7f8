#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "distributions.hpp"
#include "error.hpp"
#include "numeric.hpp"

namespace wrji {

struct QuadResult
{
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

namespace quad {

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> xgk = {
  0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
  0.207784955007898467600689403773245, 0.000000000000000000000000000000000
};
inline constexpr std::array<double, 8> wgk = {
  0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
  0.204432940075298892414161999234649, 0.209482141084727828012999174891714
};
inline constexpr std::array<double, 4> wg = {
  0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
  0.381830050505118944950369775488975, 0.417959183673469387755102040816327
};

struct Segment
{
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
Segment kronrod15(F& f_raw, double a, double b)
{
  // on tiny panels a node can round onto an endpoint, where an integrable
  // singularity may sit; such a node contributes nothing
  auto f = [&](double x) {
    const double v = f_raw(x);
    return (!std::isfinite(v) && (x <= a || x >= b)) ? 0.0 : v;
  };
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * wgk[7];
  double resg = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += wgk[j] * (f1 + f2);
    if (j % 2 == 1)
      resg += wg[j / 2] * (f1 + f2);
  }
  const double value = resk * h;
  double err = std::fabs((resk - resg) * h);
  // QUADPACK-style error rescaling is skipped; the raw difference is a
  // conservative estimate for the smooth integrands used here.
  if (!std::isfinite(value))
    return { a, b, value, inf };
  return { a, b, value, err };
}

} // namespace detail

struct Options
{
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 4000;
};

//! Adaptive Gauss-Kronrod integration of f over the finite interval [lo, hi],
//! split first at the given interior breakpoints.
template <typename F>
QuadResult integrate_finite(F&& f, double lo, double hi, std::span<const double> breaks, const Options& opt)
{
  if (hi == lo)
    return { 0.0, 0.0, 1 };
  double sign = 1.0;
  if (hi < lo) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  std::size_t evals = 0;
  auto counted = [&](double x) {
    ++evals;
    return f(x);
  };

  std::vector<double> pts{ lo };
  for (double b : breaks)
    if (b > lo && b < hi)
      pts.push_back(b);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<detail::Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  int non_finite = 0;
  auto add = [&](const detail::Segment& s) {
    if (std::isfinite(s.value)) {
      total += s.value;
      total_err += s.error;
    } else {
      ++non_finite;
    }
    heap.push_back(s);
    std::push_heap(heap.begin(), heap.end());
  };
  auto resum = [&] {
    total = 0.0;
    total_err = 0.0;
    for (const auto& s : heap) {
      if (std::isfinite(s.value)) {
        total += s.value;
        total_err += s.error;
      }
    }
  };
  auto remove = [&](const detail::Segment& s) {
    if (std::isfinite(s.value)) {
      total -= s.value;
      total_err -= s.error;
    } else {
      --non_finite;
    }
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    add(detail::kronrod15(counted, pts[i], pts[i + 1]));

  for (std::size_t splits = 0;; ++splits) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
    if (non_finite == 0 && total_err <= target) {
      resum();
      if (total_err <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total)))
        break;
    }
    if (splits >= opt.max_subdivisions) {
      if (non_finite > 0)
        fail(ErrorCode::divergent_integral, "integrate: integrand is not finite");
      throw QuadratureError("integrate: subdivision limit reached", sign * total, total_err);
    }
    auto worst = heap.front();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      if (non_finite > 0)
        fail(ErrorCode::divergent_integral, "integrate: integrand is not finite");
      throw QuadratureError("integrate: interval underflow", sign * total, total_err);
    }
    std::pop_heap(heap.begin(), heap.end());
    heap.pop_back();
    remove(worst);
    add(detail::kronrod15(counted, worst.a, mid));
    add(detail::kronrod15(counted, mid, worst.b));
    if (splits % 512 == 511)
      resum();
  }
  return { sign * total, std::max(total_err, 0.0), evals };
}

//! Integrates f over [lo, hi]; hi may be +infinity, in which case the range
//! is mapped onto [0, 1) by x = lo + u/(1-u).
template <typename F>
QuadResult integrate(F&& f, double lo, double hi, double tol = 1e-10, std::span<const double> breaks = {})
{
  require(tol > 0, ErrorCode::invalid_parameter, "integrate: tol must be positive");
  Options opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  if (std::isfinite(hi))
    return integrate_finite(f, lo, hi, breaks, opt);

  require(std::isfinite(lo), ErrorCode::invalid_parameter, "integrate: lower limit must be finite");
  // x = lo + u / (1 - u) maps [0, 1) onto [lo, inf)
  auto mapped = [&](double u) {
    const double w = 1.0 - u;
    const double x = lo + u / w;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (w * w);
  };
  std::vector<double> ubreaks;
  for (double b : breaks)
    if (b > lo)
      ubreaks.push_back((b - lo) / (1.0 + (b - lo)));
  return integrate_finite(mapped, 0.0, 1.0, ubreaks, opt);
}

//! Upper end of the integration range for integrands weighted by `dist`:
//! quantile(1 - eps), or the support end when it is finite.
inline double truncate_upper(const Distribution& dist, double eps)
{
  require(eps > 0 && eps < 1, ErrorCode::invalid_parameter, "truncate_upper: eps must lie in (0, 1)");
  const double hi = dist.support().hi;
  if (std::isfinite(hi))
    return std::min(hi, dist.quantile(1.0 - eps));
  return dist.quantile(1.0 - eps);
}

//! Smallest convenient x >= t with sf(x) <= eps * sf(t). Used to truncate
//! residual integrals relative to the conditional law beyond t.
inline double residual_upper(const Distribution& dist, double t, double eps)
{
  const auto [lo, hi] = dist.support();
  if (std::isfinite(hi))
    return hi;
  const double start = std::max(t, lo);
  const double target = eps * dist.sf(start);
  if (target >= 1e-13) {
    // the quantile can round to the end of the support; search on sf then
    const double q = dist.quantile(1.0 - target);
    if (std::isfinite(q))
      return std::max(start, q);
  }
  double step = std::max(1.0, std::fabs(start)) * 0.25;
  double x = start + step;
  while (dist.sf(x) > target) {
    step *= 2.0;
    x = start + step;
    require(step < 1e300, ErrorCode::divergent_integral, "residual_upper: tail does not vanish");
  }
  return x;
}

} // namespace quad
} // namespace wrji
