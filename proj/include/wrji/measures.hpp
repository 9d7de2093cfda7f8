#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "distributions.hpp"
#include "error.hpp"
#include "quadrature.hpp"

namespace wrji {

enum class Route
{
  closed_form,
  quadrature,
};

inline const char* to_string(Route r)
{
  return r == Route::closed_form ? "closed_form" : "quadrature";
}

struct MeasureValue
{
  double value = 0.0;
  Route route = Route::quadrature;
  double abs_error = 0.0;
};

struct MeasureOptions
{
  double tol = 1e-10;
  //! When false every measure is evaluated by quadrature.
  bool allow_closed_form = true;
  //! Relative tail mass discarded when truncating infinite ranges.
  double tail_eps = 1e-12;
};

namespace detail {

inline void require_survival(const Distribution& d, double t, const char* who)
{
  require(std::isfinite(t), ErrorCode::domain_error, std::string(who) + ": t must be finite");
  require(d.sf(t) >= 1e-300, ErrorCode::survival_zero_at_t,
          std::string(who) + ": survival of " + d.spec() + " is zero at t");
}

inline std::vector<double> merged_breaks(std::initializer_list<const Distribution*> ds)
{
  std::vector<double> out;
  for (const auto* d : ds) {
    auto b = d->breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

//! Integral of h over [t, end of common support), truncated where the tail of
//! every listed distribution beyond t has become negligible.
template <typename H>
QuadResult residual_integral(H&& h, double t, std::initializer_list<const Distribution*> ds, const MeasureOptions& opt)
{
  double lo = t;
  double hi = inf;
  for (const auto* d : ds) {
    lo = std::max(lo, d->support().lo);
    hi = std::min(hi, d->support().hi);
  }
  if (!(hi > lo))
    return { 0.0, 0.0, 1 };
  auto breaks = merged_breaks(ds);
  if (!std::isfinite(hi)) {
    double upper = lo;
    for (const auto* d : ds) {
      double u = quad::residual_upper(*d, lo, opt.tail_eps);
      breaks.push_back(u);
      upper = std::max(upper, u);
    }
    hi = upper;
    // help the first pass find mass concentrated near the lower end
    for (double frac : { 1.0 / 256, 1.0 / 64, 1.0 / 16, 1.0 / 4 })
      breaks.push_back(lo + frac * (hi - lo));
  }
  quad::Options qo;
  qo.abs_tol = opt.tol;
  qo.rel_tol = opt.tol;
  return quad::integrate_finite(h, lo, hi, breaks, qo);
}

// ---------------------------------------------------------------------------
// Closed-form registry for the weighted residual inaccuracy of a pair.

struct Canon
{
  enum Kind
  {
    exponential,
    weibull2,
    lindley,
    uniform_phr, // sf ((d-x)/(d-c))^g on (c, d): p = {c, d, g}
    power,
  } kind;
  std::vector<double> p;
};

inline std::vector<Canon> canonical_forms(const Distribution& d)
{
  double g = 1.0;
  Distribution base = d;
  if (auto ph = as_phr(d)) {
    g = ph->gamma;
    base = ph->base;
    if (base.family() == Family::phr)
      return {};
  }
  switch (base.family()) {
    case Family::exponential:
      return { { Canon::exponential, { g * base.param("rate") } } };
    case Family::weibull:
      if (base.param("shape") == 2.0)
        return { { Canon::weibull2, { g * base.param("rate") } } };
      return {};
    case Family::lindley:
      if (g == 1.0)
        return { { Canon::lindley, { base.param("lambda") } } };
      return {};
    case Family::uniform: {
      double c = base.param("c"), dd = base.param("d");
      std::vector<Canon> out{ { Canon::uniform_phr, { c, dd, g } } };
      if (c == 0.0 && dd == 1.0 && g == 1.0)
        out.push_back({ Canon::power, { 1.0 } });
      return out;
    }
    case Family::power_unit:
      if (g == 1.0) {
        double k = base.param("k");
        std::vector<Canon> out{ { Canon::power, { k } } };
        if (k == 1.0)
          out.push_back({ Canon::uniform_phr, { 0.0, 1.0, 1.0 } });
        return out;
      }
      return {};
    default:
      return {};
  }
}

inline std::optional<double> closed_pair(const Canon& a, const Canon& b, double t)
{
  if (a.kind == Canon::exponential && b.kind == Canon::exponential) {
    const double th = a.p[0], la = b.p[0], s = th + la;
    const double tt = std::max(t, 0.0);
    return -th * la * (tt * s + 1.0) / (2.0 * s * s);
  }
  if (a.kind == Canon::weibull2 && b.kind == Canon::weibull2) {
    const double th = a.p[0], la = b.p[0], s = th + la;
    const double tt = std::max(t, 0.0);
    return -th * la * (tt * tt * s + 1.0) / (s * s);
  }
  if (a.kind == Canon::exponential && b.kind == Canon::lindley) {
    const double th = a.p[0], la = b.p[0];
    const double tt = std::max(t, 0.0);
    const double q = tt * tt + tt;
    const double num = q * la * la + ((2.0 * q) * th + 2.0 * tt + 1.0) * la + q * th * th + (2.0 * tt + 1.0) * th + 2.0;
    return -th * la * la * num / (2.0 * std::pow(la + th, 3) * ((tt + 1.0) * la + 1.0));
  }
  if (a.kind == Canon::lindley && b.kind == Canon::lindley && a.p[0] == b.p[0]) {
    const double la = a.p[0];
    const double tt = std::max(t, 0.0);
    const double num = (4.0 * tt * tt * tt + 8.0 * tt * tt + 4.0 * tt) * la * la * la +
                       (6.0 * tt * tt + 8.0 * tt + 2.0) * la * la + (6.0 * tt + 4.0) * la + 3.0;
    const double den = 16.0 * std::pow((tt + 1.0) * la + 1.0, 2);
    return -num / den;
  }
  if (a.kind == Canon::uniform_phr && b.kind == Canon::uniform_phr && a.p[0] == b.p[0] && a.p[1] == b.p[1]) {
    const double c = a.p[0], d = a.p[1], g1 = a.p[2], g2 = b.p[2];
    const double s = g1 + g2 - 1.0;
    if (s <= 0.0)
      return std::nullopt;
    const double te = std::max(t, c);
    if (!(te < d))
      return std::nullopt;
    return -0.5 * g1 * g2 * (d / (s * (d - te)) - 1.0 / (s + 1.0));
  }
  if (a.kind == Canon::power && b.kind == Canon::power) {
    const double k1 = a.p[0], k2 = b.p[0];
    const double tt = std::clamp(t, 0.0, 1.0);
    if (!(tt < 1.0))
      return std::nullopt;
    const double num = k1 * k2 * (-std::expm1((k1 + k2) * std::log(tt))) / (k1 + k2);
    const double den = (-std::expm1(k1 * std::log(tt))) * (-std::expm1(k2 * std::log(tt)));
    return -0.5 * num / den;
  }
  return std::nullopt;
}

inline std::optional<double> closed_wrji(const Distribution& x, const Distribution& y, double t)
{
  const auto cx = canonical_forms(x);
  const auto cy = canonical_forms(y);
  for (const auto& a : cx) {
    for (const auto& b : cy) {
      if (auto v = closed_pair(a, b, t))
        return v;
      if (auto v = closed_pair(b, a, t))
        return v;
    }
  }
  return std::nullopt;
}

inline MeasureValue from_quad(const QuadResult& q, double scale)
{
  return { scale * q.value, Route::quadrature, std::fabs(scale) * q.abs_error_estimate };
}

} // namespace detail

//! True when the pair (x, y) has a registered closed form for the weighted
//! residual inaccuracy.
inline bool has_closed_form(const Distribution& x, const Distribution& y)
{
  return detail::closed_wrji(x, y, 0.0).has_value();
}

//! -1/2 int f^2
inline MeasureValue extropy(const Distribution& x, const MeasureOptions& opt = {})
{
  auto q = detail::residual_integral([&](double u) { double f = x.pdf(u); return f * f; }, x.support().lo,
                                     { &x }, opt);
  return detail::from_quad(q, -0.5);
}

//! -1/2 int_t (f / sf(t))^2
inline MeasureValue residual_extropy(const Distribution& x, double t, const MeasureOptions& opt = {})
{
  detail::require_survival(x, t, "residual_extropy");
  const double s = x.sf(t);
  auto q = detail::residual_integral([&](double u) { double f = x.pdf(u); return f * f; }, t, { &x }, opt);
  return detail::from_quad(q, -0.5 / (s * s));
}

//! -1/2 int_t x f g / (sf_X(t) sf_Y(t))
inline MeasureValue wrji(const Distribution& x, const Distribution& y, double t, const MeasureOptions& opt = {})
{
  detail::require_survival(x, t, "wrji");
  detail::require_survival(y, t, "wrji");
  if (opt.allow_closed_form) {
    if (auto v = detail::closed_wrji(x, y, t))
      return { *v, Route::closed_form, 0.0 };
  }
  const double s = x.sf(t) * y.sf(t);
  auto q = detail::residual_integral([&](double u) { return u * x.pdf(u) * y.pdf(u); }, t, { &x, &y }, opt);
  return detail::from_quad(q, -0.5 / s);
}

//! -1/2 int x f g
inline MeasureValue wji(const Distribution& x, const Distribution& y, const MeasureOptions& opt = {})
{
  const double lo = std::min(x.support().lo, y.support().lo);
  return wrji(x, y, lo, opt);
}

inline MeasureValue weighted_residual_extropy(const Distribution& x, double t, const MeasureOptions& opt = {})
{
  return wrji(x, x, t, opt);
}

inline MeasureValue weighted_extropy(const Distribution& x, const MeasureOptions& opt = {})
{
  return wji(x, x, opt);
}

//! Weighted residual discrimination of X about Y, as wrji - weighted residual
//! extropy of X.
inline MeasureValue wrdj(const Distribution& x, const Distribution& y, double t, const MeasureOptions& opt = {})
{
  auto a = wrji(x, y, t, opt);
  auto b = weighted_residual_extropy(x, t, opt);
  Route r = a.route == Route::closed_form && b.route == Route::closed_form ? Route::closed_form : Route::quadrature;
  return { a.value - b.value, r, a.abs_error + b.abs_error };
}

//! The same quantity from its own integral 1/2 int_t x f/F(t) (f/F(t) - g/G(t)).
inline MeasureValue wrdj_direct(const Distribution& x, const Distribution& y, double t, const MeasureOptions& opt = {})
{
  detail::require_survival(x, t, "wrdj");
  detail::require_survival(y, t, "wrdj");
  const double sx = x.sf(t), sy = y.sf(t);
  auto q = detail::residual_integral(
    [&](double u) {
      double f = x.pdf(u) / sx;
      return u * f * (f - y.pdf(u) / sy);
    },
    t, { &x }, opt);
  return detail::from_quad(q, 0.5);
}

//! 1/2 int x f (f - g)
inline MeasureValue weighted_discrimination(const Distribution& x, const Distribution& y, const MeasureOptions& opt = {})
{
  return wrdj(x, y, std::min(x.support().lo, y.support().lo), opt);
}

//! -1/2 int_0^t x f g / (F(t) G(t))
inline MeasureValue past_wji(const Distribution& x, const Distribution& y, double t, const MeasureOptions& opt = {})
{
  const double fx = x.cdf(t), gy = y.cdf(t);
  require(fx > 0 && gy > 0, ErrorCode::domain_error, "past_wji: cdf must be positive at t");
  const double lo = std::max(x.support().lo, y.support().lo);
  quad::Options qo;
  qo.abs_tol = opt.tol;
  qo.rel_tol = opt.tol;
  auto breaks = detail::merged_breaks({ &x, &y });
  auto q = quad::integrate_finite([&](double u) { return u * x.pdf(u) * y.pdf(u); }, lo, std::max(lo, t), breaks, qo);
  return detail::from_quad(q, -0.5 / (fx * gy));
}

//! Dynamic survival extropy -1/2 int_t (sf(x)/sf(t))^2 dx.
inline MeasureValue dynamic_survival_extropy(const Distribution& x, double t, const MeasureOptions& opt = {})
{
  detail::require_survival(x, t, "dynamic_survival_extropy");
  const double s = x.sf(t);
  auto q = detail::residual_integral([&](double u) { double v = x.sf(u); return v * v; }, t, { &x }, opt);
  return detail::from_quad(q, -0.5 / (s * s));
}

//! Cumulative residual extropy -1/2 int sf^2.
inline MeasureValue crj(const Distribution& x, const MeasureOptions& opt = {})
{
  return dynamic_survival_extropy(x, x.support().lo, opt);
}

//! Mean residual life int_t sf / sf(t).
inline double mrl(const Distribution& x, double t, const MeasureOptions& opt = {})
{
  detail::require_survival(x, t, "mrl");
  auto q = detail::residual_integral([&](double u) { return x.sf(u); }, t, { &x }, opt);
  double v = q.value / x.sf(t);
  const double lo = x.support().lo;
  if (t < lo)
    v += lo - t;
  return v;
}

//! E[X | X > t]
inline double vitality(const Distribution& x, double t, const MeasureOptions& opt = {})
{
  detail::require_survival(x, t, "vitality");
  auto q = detail::residual_integral([&](double u) { return u * x.pdf(u); }, t, { &x }, opt);
  return q.value / x.sf(t);
}

//! Weighted extropy of phi(X) through -1/2 int f^2 phi / phi'.
inline MeasureValue wji_of_transform(const Distribution& x, const MonotoneMap& phi, const MeasureOptions& opt = {})
{
  require(phi.value && phi.derivative, ErrorCode::invalid_parameter, "wji_of_transform: map needs value and derivative");
  const auto [lo, hi0] = x.support();
  const double hi = std::isfinite(hi0) ? hi0 : quad::truncate_upper(x, 1e-9);
  double prev = phi.value(lo);
  for (int i = 1; i <= 256; ++i) {
    const double u = lo + (hi - lo) * i / 256.0;
    const double v = phi.value(u);
    const double dv = phi.derivative(i == 256 ? std::nextafter(u, lo) : u);
    require(v > prev && dv > 0.0, ErrorCode::not_monotone, "wji_of_transform: map is not strictly increasing");
    prev = v;
  }
  auto q = detail::residual_integral(
    [&](double u) {
      double f = x.pdf(u);
      return f == 0.0 ? 0.0 : f * f * phi.value(u) / phi.derivative(u);
    },
    lo, { &x }, opt);
  return detail::from_quad(q, -0.5);
}

//! Weighted residual inaccuracy between `base` and its PHR-derived law.
inline MeasureValue wrji_phr_closed(const Distribution& base, double gamma, double t, const MeasureOptions& opt = {})
{
  PhrPair pair(base, gamma);
  if (base.family() == Family::uniform)
    require(t < base.param("d"), ErrorCode::survival_zero_at_t, "wrji_phr_closed: t must be below d");
  return wrji(base, pair.derived(), t, opt);
}

// ---------------------------------------------------------------------------

struct RelationConstants
{
  double a;  //!< 1 / (sf_X(t) sf_Y(t))
  double c;  //!< 1/2 int_0^t x f g
  double k1; //!< same as a
  double k2; //!< F(t) G(t) / (sf_X(t) sf_Y(t))
};

//! Constants with wrji(t) = a (wji + c) = k1 wji - k2 past_wji.
inline RelationConstants wrji_relation_constants(const Distribution& x, const Distribution& y, double t,
                                                 const MeasureOptions& opt = {})
{
  detail::require_survival(x, t, "wrji_relation_constants");
  detail::require_survival(y, t, "wrji_relation_constants");
  const double s = x.sf(t) * y.sf(t);
  const double lo = std::max(x.support().lo, y.support().lo);
  quad::Options qo;
  qo.abs_tol = opt.tol;
  qo.rel_tol = opt.tol;
  auto breaks = detail::merged_breaks({ &x, &y });
  double c = 0.0;
  if (t > lo)
    c = 0.5 * quad::integrate_finite([&](double u) { return u * x.pdf(u) * y.pdf(u); }, lo, t, breaks, qo).value;
  return { 1.0 / s, c, 1.0 / s, x.cdf(t) * y.cdf(t) / s };
}

// ---------------------------------------------------------------------------

struct BoundCheck
{
  std::string name;
  bool lower = true;       //!< true: bound <= wrji, false: wrji <= bound
  bool applicable = false; //!< false means skipped
  double value = 0.0;
  bool holds = false;
  std::string condition;
};

struct BoundSuite
{
  double t = 0.0;
  double wrji = 0.0;
  std::optional<double> gamma;
  std::vector<BoundCheck> bounds;

  const BoundCheck& get(const std::string& name) const
  {
    for (const auto& b : bounds)
      if (b.name == name)
        return b;
    fail(ErrorCode::invalid_parameter, "no bound named " + name);
  }
};

namespace detail {

//! Exponent g with sf_Y = sf_X^g, when the pair is recognisably PHR.
inline std::optional<double> detect_phr(const Distribution& x, const Distribution& y)
{
  if (auto p = as_phr(y); p && p->base.spec() == x.spec())
    return p->gamma;
  if (auto p = as_phr(x); p && p->base.spec() == y.spec())
    return 1.0 / p->gamma;
  if (x.spec() == y.spec())
    return 1.0;
  auto cx = canonical_forms(x);
  auto cy = canonical_forms(y);
  for (const auto& a : cx) {
    for (const auto& b : cy) {
      if (a.kind != b.kind)
        continue;
      if (a.kind == Canon::exponential || a.kind == Canon::weibull2)
        return b.p[0] / a.p[0];
      if (a.kind == Canon::uniform_phr && a.p[0] == b.p[0] && a.p[1] == b.p[1])
        return b.p[2] / a.p[2];
    }
  }
  return std::nullopt;
}

inline double upper_for_grid(const Distribution& d, double t)
{
  const double hi = d.support().hi;
  if (std::isfinite(hi))
    return hi;
  return quad::residual_upper(d, t, 1e-9);
}

inline bool nonincreasing_on_grid(const std::function<double(double)>& h, double a, double b)
{
  const int n = 200;
  double prev = h(a);
  for (int i = 1; i < n; ++i) {
    const double x = a + (b - a) * i / n;
    const double v = h(x);
    if (v > prev * (1.0 + 1e-9) + 1e-300)
      return false;
    prev = v;
  }
  return true;
}

// int_t x sf^{g-1}; -inf flags a divergent integral
inline double weighted_sf_power_integral(const Distribution& x, double g, double t, const MeasureOptions& opt)
{
  const auto [lo, hi] = x.support();
  const double a = std::max(t, lo);
  if (!std::isfinite(hi) && g <= 1.0)
    return inf;
  try {
    if (std::isfinite(hi)) {
      quad::Options qo;
      qo.abs_tol = opt.tol;
      qo.rel_tol = opt.tol;
      return quad::integrate_finite(
               [&](double u) {
                 double s = x.sf(u);
                 return s == 0.0 ? (g == 1.0 ? u : 0.0) : u * std::pow(s, g - 1.0);
               },
               a, hi, x.breakpoints(), qo)
        .value;
    }
    return detail::residual_integral([&](double u) { return u * std::pow(x.sf(u), g - 1.0); }, a, { &x }, opt).value;
  } catch (const Error&) {
    return inf;
  }
}

} // namespace detail

//! Evaluates the lower and upper bounds for the weighted residual inaccuracy
//! exactly as stated, each with its applicability condition.
inline BoundSuite bound_suite(const Distribution& x, const Distribution& y, double t, const MeasureOptions& opt = {})
{
  BoundSuite out;
  out.t = t;
  const double j = wrji(x, y, t, opt).value;
  out.wrji = j;
  out.gamma = detail::detect_phr(x, y);
  const double sx = x.sf(t), sy = y.sf(t);
  const double slack = 1e-9 * std::max(1.0, std::fabs(j));

  auto add = [&](std::string name, bool lower, bool applicable, double value, std::string cond) {
    BoundCheck b;
    b.name = std::move(name);
    b.lower = lower;
    b.applicable = applicable;
    b.value = applicable ? value : std::nan("");
    b.condition = std::move(cond);
    if (applicable)
      b.holds = lower ? (value <= j + slack) : (j <= value + slack);
    out.bounds.push_back(std::move(b));
  };

  const double wji_xy = wji(x, y, opt).value;
  const bool phr = out.gamma.has_value();
  const double g = phr ? *out.gamma : std::nan("");

  // -(g/2) int_t x hazard_F^2
  {
    double v = std::nan("");
    if (phr) {
      try {
        const double a = std::max(t, x.support().lo);
        const double hi = x.support().hi;
        auto h2 = [&](double u) {
          if (x.sf(u) <= 0.0)
            return inf;
          double hz = x.hazard(u);
          return u * hz * hz;
        };
        double integral;
        if (std::isfinite(hi)) {
          integral = quad::integrate(h2, a, hi, opt.tol, x.breakpoints()).value;
        } else {
          // a hazard that does not vanish makes x hazard^2 non-integrable
          const double far = quad::residual_upper(x, a, 1e-12);
          const double tail = h2(far) * far;
          integral = tail > 1e-6 ? inf : quad::integrate(h2, a, inf, opt.tol, x.breakpoints()).value;
        }
        v = -0.5 * g * integral;
      } catch (const Error&) {
        v = -inf;
      }
    }
    add("hazard_lower", true, phr, v, "PHR model");
  }

  add("survival_product_lower", true, true, sx * sy * wji_xy, "any pair");

  {
    const auto m = x.mode_density_sup();
    const bool ok = phr && m.bounded;
    double v = std::nan("");
    if (ok) {
      const double a1 = -g / (2.0 * std::pow(sx, g + 1.0)) * detail::weighted_sf_power_integral(x, g, t, opt);
      v = a1 * m.value * m.value;
    }
    add("mode_lower", true, ok, v, "PHR model, bounded density");
  }

  {
    const double lo = std::max(t, y.support().lo);
    const double hi = detail::upper_for_grid(y, lo);
    bool decreasing = hi > lo && detail::nonincreasing_on_grid(
                                   [&](double u) { return y.sf(u) > 0 ? y.hazard(u) : 0.0; }, lo,
                                   std::isfinite(y.support().hi) ? lo + 0.999 * (hi - lo) : hi);
    double v = decreasing ? -0.5 * y.hazard(std::max(t, y.support().lo)) * vitality(x, t, opt) : std::nan("");
    add("vitality_lower", true, decreasing, v, "hazard of Y decreasing");
  }

  {
    double v = std::nan("");
    bool lower = true;
    if (phr) {
      v = g * weighted_residual_extropy(x, t, opt).value;
      lower = g > 1.0;
    }
    add("gamma_extropy", lower, phr, v, "PHR model; lower bound if gamma > 1, upper otherwise");
  }

  add("phr_upper", false, phr, phr ? wji_xy / std::pow(sx, g + 1.0) : std::nan(""), "PHR model");

  add("inverse_survival_lower", true, true, wji_xy / (sx * sy), "any pair");

  {
    const double lo = x.support().lo;
    const double hi = detail::upper_for_grid(x, lo);
    const double f0 = x.pdf(lo);
    bool ok = phr && std::isfinite(f0) && f0 <= 1.0 &&
              detail::nonincreasing_on_grid([&](double u) { return x.pdf(u); }, lo, hi);
    double v = std::nan("");
    if (ok)
      v = -g / (2.0 * std::pow(sx, g + 1.0)) * detail::weighted_sf_power_integral(x, g, t, opt);
    add("decreasing_density_lower", true, ok, v, "PHR model, decreasing density with f(0) <= 1");
  }
  return out;
}

} // namespace wrji
