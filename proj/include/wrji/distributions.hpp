#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

#include "error.hpp"
#include "numeric.hpp"

namespace wrji {

enum class Family
{
  exponential,
  weibull,
  lindley,
  uniform,
  beta,
  power_unit,
  log_logistic,
  apll,
  exll,
  gee,
  eeg,
  gamma,
  piecewise,
  phr,
  transformed,
};

struct Support
{
  double lo;
  double hi;
};

//! Supremum of the density; `bounded` is false when the density blows up.
struct DensitySup
{
  double value;
  bool bounded;
  double argmax;
};

//! Strictly increasing differentiable map with its inverse.
struct MonotoneMap
{
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> inverse;
};

class Distribution;

namespace detail {

inline std::string format_number(double v)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class Law
{
public:
  virtual ~Law() = default;

  virtual Family family() const = 0;
  virtual std::string name() const = 0;
  virtual std::vector<std::pair<std::string, double>> params() const = 0;
  virtual Support support() const = 0;

  // The following are only called with x inside the support.
  virtual double pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual double sf(double x) const { return 1.0 - cdf(x); }
  virtual double hazard(double x) const { return pdf(x) / sf(x); }

  virtual double quantile(double u) const { return quantile_by_root(u); }
  virtual std::vector<double> breakpoints() const { return {}; }
  virtual DensitySup density_sup() const { return numeric_density_sup(); }
  virtual std::string spec() const
  {
    std::string s = name() + "(";
    bool first = true;
    for (const auto& [k, v] : params()) {
      if (!first)
        s += ",";
      s += k + "=" + format_number(v);
      first = false;
    }
    return s + ")";
  }

  double quantile_by_root(double u) const
  {
    auto [lo, hi] = support();
    if (!std::isfinite(hi)) {
      double step = 1.0;
      hi = std::max(lo, 0.0) + step;
      while (cdf(hi) < u) {
        lo = hi;
        step *= 2.0;
        hi += step;
        require(step < 1e300, ErrorCode::domain_error, "quantile: bracket expansion failed");
      }
    }
    // tolerance 1e-10 in x or 1e-14 in u
    return num::find_root([&](double x) { return cdf(x) - u; }, lo, hi, 1e-10, 1e-14);
  }

  DensitySup numeric_density_sup() const
  {
    auto [lo, hi] = support();
    double a = std::isfinite(lo) ? lo : quantile(1e-9);
    double b = std::isfinite(hi) ? hi : quantile(1.0 - 1e-9);
    const int grid = 800;
    double best = -1.0;
    double best_x = a;
    for (int i = 1; i < grid; ++i) {
      double x = a + (b - a) * i / grid;
      double v = pdf(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    const double cell = (b - a) / grid;
    double l = std::max(a, best_x - cell);
    double r = std::min(b, best_x + cell);
    auto [xm, neg] = num::golden_section_min([&](double x) { return -pdf(x); }, l, r, 1e-10 * std::max(1.0, std::fabs(best_x)));
    if (-neg > best) {
      best = -neg;
      best_x = xm;
    }
    // probe the support ends for a blow-up
    for (double end : { a, b }) {
      double prev = best;
      bool growing = true;
      for (double d : { 1e-6, 1e-9, 1e-12 }) {
        double x = end == a ? a + d * (b - a) : b - d * (b - a);
        double v = pdf(x);
        if (!(v > prev * 1.5)) {
          growing = false;
          break;
        }
        prev = v;
      }
      if (growing)
        return { inf, false, end };
      double v = pdf(end == a ? a + 1e-12 * (b - a) : b - 1e-12 * (b - a));
      if (v > best) {
        best = v;
        best_x = end;
      }
    }
    return { best, true, best_x };
  }
};

// ---------------------------------------------------------------------------

class Exponential final : public Law
{
public:
  explicit Exponential(double rate)
    : rate_(rate)
  {
    require(rate > 0 && std::isfinite(rate), ErrorCode::invalid_parameter, "exp: rate must be positive");
  }
  Family family() const override { return Family::exponential; }
  std::string name() const override { return "exp"; }
  std::vector<std::pair<std::string, double>> params() const override { return { { "rate", rate_ } }; }
  Support support() const override { return { 0.0, inf }; }
  double pdf(double x) const override { return rate_ * std::exp(-rate_ * x); }
  double cdf(double x) const override { return -std::expm1(-rate_ * x); }
  double sf(double x) const override { return std::exp(-rate_ * x); }
  double hazard(double) const override { return rate_; }
  double quantile(double u) const override { return -std::log1p(-u) / rate_; }
  DensitySup density_sup() const override { return { rate_, true, 0.0 }; }

private:
  double rate_;
};

//! Survival function exp(-rate * x^shape).
class Weibull final : public Law
{
public:
  Weibull(double rate, double shape)
    : rate_(rate)
    , shape_(shape)
  {
    require(rate > 0 && shape > 0, ErrorCode::invalid_parameter, "weibull: rate and shape must be positive");
  }
  Family family() const override { return Family::weibull; }
  std::string name() const override { return "weibull"; }
  std::vector<std::pair<std::string, double>> params() const override
  {
    return { { "rate", rate_ }, { "shape", shape_ } };
  }
  Support support() const override { return { 0.0, inf }; }
  double pdf(double x) const override
  {
    if (x == 0.0)
      return shape_ == 1.0 ? rate_ : (shape_ < 1.0 ? inf : 0.0);
    double xk = std::pow(x, shape_);
    double e = std::exp(-rate_ * xk);
    return e == 0.0 ? 0.0 : rate_ * shape_ * xk / x * e;
  }
  double cdf(double x) const override { return -std::expm1(-rate_ * std::pow(x, shape_)); }
  double sf(double x) const override { return std::exp(-rate_ * std::pow(x, shape_)); }
  double hazard(double x) const override
  {
    if (x == 0.0)
      return shape_ == 1.0 ? rate_ : (shape_ < 1.0 ? inf : 0.0);
    return rate_ * shape_ * std::pow(x, shape_ - 1.0);
  }
  double quantile(double u) const override { return std::pow(-std::log1p(-u) / rate_, 1.0 / shape_); }
  DensitySup density_sup() const override
  {
    if (shape_ < 1.0)
      return { inf, false, 0.0 };
    if (shape_ == 1.0)
      return { rate_, true, 0.0 };
    double m = std::pow((shape_ - 1.0) / (rate_ * shape_), 1.0 / shape_);
    return { pdf(m), true, m };
  }

private:
  double rate_, shape_;
};

class Lindley final : public Law
{
public:
  explicit Lindley(double lambda)
    : lambda_(lambda)
  {
    require(lambda > 0, ErrorCode::invalid_parameter, "lindley: lambda must be positive");
  }
  Family family() const override { return Family::lindley; }
  std::string name() const override { return "lindley"; }
  std::vector<std::pair<std::string, double>> params() const override { return { { "lambda", lambda_ } }; }
  Support support() const override { return { 0.0, inf }; }
  double pdf(double x) const override
  {
    return lambda_ * lambda_ / (lambda_ + 1.0) * (1.0 + x) * std::exp(-lambda_ * x);
  }
  double sf(double x) const override
  {
    return (1.0 + lambda_ / (lambda_ + 1.0) * x) * std::exp(-lambda_ * x);
  }
  double cdf(double x) const override { return 1.0 - sf(x); }
  double quantile(double u) const override
  {
    const double l = lambda_;
    double arg = (l + 1.0) * (u - 1.0) * std::exp(-(l + 1.0));
    double w = boost::math::lambert_wm1(arg);
    return -1.0 - 1.0 / l - w / l;
  }
  DensitySup density_sup() const override
  {
    if (lambda_ < 1.0) {
      double m = (1.0 - lambda_) / lambda_;
      return { pdf(m), true, m };
    }
    return { pdf(0.0), true, 0.0 };
  }

private:
  double lambda_;
};

class Uniform final : public Law
{
public:
  Uniform(double c, double d)
    : c_(c)
    , d_(d)
  {
    require(c < d, ErrorCode::invalid_parameter, "uniform: need c < d");
  }
  Family family() const override { return Family::uniform; }
  std::string name() const override { return "uniform"; }
  std::vector<std::pair<std::string, double>> params() const override { return { { "c", c_ }, { "d", d_ } }; }
  Support support() const override { return { c_, d_ }; }
  double pdf(double) const override { return 1.0 / (d_ - c_); }
  double cdf(double x) const override { return (x - c_) / (d_ - c_); }
  double sf(double x) const override { return (d_ - x) / (d_ - c_); }
  double hazard(double x) const override { return 1.0 / (d_ - x); }
  double quantile(double u) const override { return c_ + u * (d_ - c_); }
  DensitySup density_sup() const override { return { 1.0 / (d_ - c_), true, c_ }; }

private:
  double c_, d_;
};

class Beta final : public Law
{
public:
  Beta(double a, double b)
    : a_(a)
    , b_(b)
  {
    require(a > 0 && b > 0, ErrorCode::invalid_parameter, "beta: shapes must be positive");
  }
  Family family() const override { return Family::beta; }
  std::string name() const override { return "beta"; }
  std::vector<std::pair<std::string, double>> params() const override
  {
    return { { "alpha", a_ }, { "beta", b_ } };
  }
  Support support() const override { return { 0.0, 1.0 }; }
  double pdf(double x) const override
  {
    if (x <= 0.0)
      return a_ < 1.0 ? inf : (a_ == 1.0 ? b_ : 0.0);
    if (x >= 1.0)
      return b_ < 1.0 ? inf : (b_ == 1.0 ? a_ : 0.0);
    return boost::math::ibeta_derivative(a_, b_, x);
  }
  double cdf(double x) const override { return boost::math::ibeta(a_, b_, std::clamp(x, 0.0, 1.0)); }
  double sf(double x) const override { return boost::math::ibetac(a_, b_, std::clamp(x, 0.0, 1.0)); }
  double quantile(double u) const override { return boost::math::ibeta_inv(a_, b_, u); }
  DensitySup density_sup() const override
  {
    if (a_ < 1.0 || b_ < 1.0)
      return { inf, false, a_ < 1.0 ? 0.0 : 1.0 };
    if (a_ == 1.0 && b_ == 1.0)
      return { 1.0, true, 0.5 };
    if (a_ == 1.0)
      return { b_, true, 0.0 };
    if (b_ == 1.0)
      return { a_, true, 1.0 };
    double m = (a_ - 1.0) / (a_ + b_ - 2.0);
    return { pdf(m), true, m };
  }

private:
  double a_, b_;
};

//! cdf x^k on (0, 1).
class PowerOnUnit final : public Law
{
public:
  explicit PowerOnUnit(double k)
    : k_(k)
  {
    require(k > 0, ErrorCode::invalid_parameter, "power: k must be positive");
  }
  Family family() const override { return Family::power_unit; }
  std::string name() const override { return "power"; }
  std::vector<std::pair<std::string, double>> params() const override { return { { "k", k_ } }; }
  Support support() const override { return { 0.0, 1.0 }; }
  double pdf(double x) const override
  {
    if (x == 0.0)
      return k_ == 1.0 ? 1.0 : (k_ < 1.0 ? inf : 0.0);
    return k_ * std::pow(x, k_ - 1.0);
  }
  double cdf(double x) const override { return std::pow(x, k_); }
  double sf(double x) const override { return -std::expm1(k_ * std::log(x)); }
  double quantile(double u) const override { return std::pow(u, 1.0 / k_); }
  DensitySup density_sup() const override
  {
    if (k_ < 1.0)
      return { inf, false, 0.0 };
    return { k_, true, 1.0 };
  }

private:
  double k_;
};

namespace ll {
// log-logistic cdf, sf and pdf with shape alpha and scale lambda
inline double cdf(double x, double alpha, double lambda)
{
  return 1.0 / (1.0 + std::pow(lambda / x, alpha));
}
inline double sf(double x, double alpha, double lambda)
{
  return 1.0 / (1.0 + std::pow(x / lambda, alpha));
}
inline double pdf(double x, double alpha, double lambda)
{
  if (x == 0.0)
    return alpha == 1.0 ? 1.0 / lambda : (alpha < 1.0 ? inf : 0.0);
  double z = std::pow(x / lambda, alpha);
  if (std::isinf(z))
    return 0.0;
  return alpha / x * z / ((1.0 + z) * (1.0 + z));
}
inline double quantile(double u, double alpha, double lambda)
{
  return lambda * std::pow(u / (1.0 - u), 1.0 / alpha);
}
} // namespace ll

class LogLogistic final : public Law
{
public:
  LogLogistic(double alpha, double lambda)
    : alpha_(alpha)
    , lambda_(lambda)
  {
    require(alpha > 0 && lambda > 0, ErrorCode::invalid_parameter, "loglogistic: alpha, lambda must be positive");
  }
  Family family() const override { return Family::log_logistic; }
  std::string name() const override { return "loglogistic"; }
  std::vector<std::pair<std::string, double>> params() const override
  {
    return { { "alpha", alpha_ }, { "lambda", lambda_ } };
  }
  Support support() const override { return { 0.0, inf }; }
  double pdf(double x) const override { return ll::pdf(x, alpha_, lambda_); }
  double cdf(double x) const override { return ll::cdf(x, alpha_, lambda_); }
  double sf(double x) const override { return ll::sf(x, alpha_, lambda_); }
  double quantile(double u) const override { return ll::quantile(u, alpha_, lambda_); }
  DensitySup density_sup() const override
  {
    if (alpha_ < 1.0)
      return { inf, false, 0.0 };
    if (alpha_ == 1.0)
      return { 1.0 / lambda_, true, 0.0 };
    double m = lambda_ * std::pow((alpha_ - 1.0) / (alpha_ + 1.0), 1.0 / alpha_);
    return { pdf(m), true, m };
  }

private:
  double alpha_, lambda_;
};

//! Alpha power transform of the log-logistic: F = (a^G - 1) / (a - 1).
class Apll final : public Law
{
public:
  Apll(double alpha, double lambda, double a)
    : alpha_(alpha)
    , lambda_(lambda)
    , a_(a)
  {
    require(alpha > 0 && lambda > 0 && a > 0 && a != 1.0, ErrorCode::invalid_parameter,
            "apll: need alpha, lambda > 0 and a > 0, a != 1");
  }
  Family family() const override { return Family::apll; }
  std::string name() const override { return "apll"; }
  std::vector<std::pair<std::string, double>> params() const override
  {
    return { { "alpha", alpha_ }, { "lambda", lambda_ }, { "a", a_ } };
  }
  Support support() const override { return { 0.0, inf }; }
  double pdf(double x) const override
  {
    double g = ll::pdf(x, alpha_, lambda_);
    double G = ll::cdf(x, alpha_, lambda_);
    return std::log(a_) * std::pow(a_, G) * g / (a_ - 1.0);
  }
  double cdf(double x) const override
  {
    return std::expm1(ll::cdf(x, alpha_, lambda_) * std::log(a_)) / (a_ - 1.0);
  }
  double sf(double x) const override
  {
    // (a - a^G) / (a - 1) = a (1 - a^{-(1-G)}) / (a - 1)
    double sbar = ll::sf(x, alpha_, lambda_);
    return -a_ * std::expm1(-sbar * std::log(a_)) / (a_ - 1.0);
  }
  double quantile(double u) const override
  {
    double G = std::log1p(u * (a_ - 1.0)) / std::log(a_);
    return ll::quantile(G, alpha_, lambda_);
  }

private:
  double alpha_, lambda_, a_;
};

//! Extended log-logistic: sf = ((1 - G) / (1 - (1 - a) G))^a.
class Exll final : public Law
{
public:
  Exll(double alpha, double lambda, double a)
    : alpha_(alpha)
    , lambda_(lambda)
    , a_(a)
  {
    require(alpha > 0 && lambda > 0 && a > 0, ErrorCode::invalid_parameter, "exll: parameters must be positive");
  }
  Family family() const override { return Family::exll; }
  std::string name() const override { return "exll"; }
  std::vector<std::pair<std::string, double>> params() const override
  {
    return { { "alpha", alpha_ }, { "lambda", lambda_ }, { "a", a_ } };
  }
  Support support() const override { return { 0.0, inf }; }
  double pdf(double x) const override
  {
    double G = ll::cdf(x, alpha_, lambda_);
    double g = ll::pdf(x, alpha_, lambda_);
    double den = 1.0 - (1.0 - a_) * G;
    double r = ll::sf(x, alpha_, lambda_) / den;
    return a_ * a_ * std::pow(r, a_ - 1.0) / (den * den) * g;
  }
  double sf(double x) const override
  {
    double G = ll::cdf(x, alpha_, lambda_);
    return std::pow(ll::sf(x, alpha_, lambda_) / (1.0 - (1.0 - a_) * G), a_);
  }
  double cdf(double x) const override
  {
    double G = ll::cdf(x, alpha_, lambda_);
    return -std::expm1(a_ * std::log(ll::sf(x, alpha_, lambda_) / (1.0 - (1.0 - a_) * G)));
  }
  double quantile(double u) const override
  {
    double r = std::exp(std::log1p(-u) / a_);
    double G = (1.0 - r) / (1.0 - r * (1.0 - a_));
    return ll::quantile(G, alpha_, lambda_);
  }

private:
  double alpha_, lambda_, a_;
};

//! Gamma exponentiated-exponential with density
//! a th / Gamma(l) e^{-th x} (1 - e^{-th x})^{a-1} (-a log(1 - e^{-th x}))^{l-1}.
class Gee final : public Law
{
public:
  Gee(double lambda, double alpha, double theta)
    : lambda_(lambda)
    , alpha_(alpha)
    , theta_(theta)
  {
    require(lambda > 0 && alpha > 0 && theta > 0, ErrorCode::invalid_parameter, "gee: parameters must be positive");
  }
  Family family() const override { return Family::gee; }
  std::string name() const override { return "gee"; }
  std::vector<std::pair<std::string, double>> params() const override
  {
    return { { "lambda", lambda_ }, { "alpha", alpha_ }, { "theta", theta_ } };
  }
  Support support() const override { return { 0.0, inf }; }
  double pdf(double x) const override
  {
    if (x <= 0.0)
      return pdf(1e-300);
    double l1 = std::log1p(-std::exp(-theta_ * x)); // log(1 - e^{-th x}) < 0
    double u = -alpha_ * l1;
    if (u <= 0.0)
      return 0.0;
    double lp = std::log(alpha_ * theta_) - std::lgamma(lambda_) - theta_ * x + (alpha_ - 1.0) * l1 +
                (lambda_ - 1.0) * std::log(u);
    return std::exp(lp);
  }
  double cdf(double x) const override
  {
    double u = transformed(x);
    if (u <= 0.0)
      return 1.0;
    return boost::math::gamma_q(lambda_, u);
  }
  double sf(double x) const override
  {
    double u = transformed(x);
    if (u <= 0.0)
      return 0.0;
    return boost::math::gamma_p(lambda_, u);
  }
  double quantile(double p) const override
  {
    double u = boost::math::gamma_q_inv(lambda_, p);
    return -std::log(-std::expm1(-u / alpha_)) / theta_;
  }

private:
  double transformed(double x) const
  {
    if (x <= 0.0)
      return inf;
    return -alpha_ * std::log1p(-std::exp(-theta_ * x));
  }
  double lambda_, alpha_, theta_;
};

//! Exponential-exponential geometric.
class Eeg final : public Law
{
public:
  Eeg(double alpha, double theta, double p)
    : alpha_(alpha)
    , theta_(theta)
    , p_(p)
  {
    require(alpha > 0 && theta > 0 && p > 0 && p < 1, ErrorCode::invalid_parameter,
            "eeg: need alpha, theta > 0 and 0 < p < 1");
  }
  Family family() const override { return Family::eeg; }
  std::string name() const override { return "eeg"; }
  std::vector<std::pair<std::string, double>> params() const override
  {
    return { { "alpha", alpha_ }, { "theta", theta_ }, { "p", p_ } };
  }
  Support support() const override { return { 0.0, inf }; }
  double pdf(double x) const override
  {
    double e = std::exp(-theta_ * x);
    double base = -std::expm1(-theta_ * x);
    double v = std::pow(base, alpha_);
    double den = 1.0 - p_ + p_ * v;
    if (x == 0.0)
      return alpha_ == 1.0 ? theta_ / (1.0 - p_) : (alpha_ < 1.0 ? inf : 0.0);
    return alpha_ * theta_ * (1.0 - p_) * e * std::pow(base, alpha_ - 1.0) / (den * den);
  }
  double cdf(double x) const override
  {
    double v = std::pow(-std::expm1(-theta_ * x), alpha_);
    return v / (1.0 - p_ + p_ * v);
  }
  double sf(double x) const override
  {
    double lv = alpha_ * std::log(-std::expm1(-theta_ * x));
    double one_minus_v = -std::expm1(lv);
    double v = std::exp(lv);
    return (1.0 - p_) * one_minus_v / (1.0 - p_ + p_ * v);
  }
  double quantile(double u) const override
  {
    double v = u * (1.0 - p_) / (1.0 - p_ * u);
    return -std::log1p(-std::pow(v, 1.0 / alpha_)) / theta_;
  }

private:
  double alpha_, theta_, p_;
};

class Gamma final : public Law
{
public:
  Gamma(double shape, double rate)
    : shape_(shape)
    , rate_(rate)
  {
    require(shape > 0 && rate > 0, ErrorCode::invalid_parameter, "gamma: shape and rate must be positive");
  }
  Family family() const override { return Family::gamma; }
  std::string name() const override { return "gamma"; }
  std::vector<std::pair<std::string, double>> params() const override
  {
    return { { "shape", shape_ }, { "rate", rate_ } };
  }
  Support support() const override { return { 0.0, inf }; }
  double pdf(double x) const override
  {
    if (x == 0.0)
      return shape_ == 1.0 ? rate_ : (shape_ < 1.0 ? inf : 0.0);
    return rate_ * boost::math::gamma_p_derivative(shape_, rate_ * x);
  }
  double cdf(double x) const override { return boost::math::gamma_p(shape_, rate_ * x); }
  double sf(double x) const override { return boost::math::gamma_q(shape_, rate_ * x); }
  double quantile(double u) const override { return boost::math::gamma_p_inv(shape_, u) / rate_; }
  DensitySup density_sup() const override
  {
    if (shape_ < 1.0)
      return { inf, false, 0.0 };
    double m = (shape_ - 1.0) / rate_;
    return { pdf(m), true, m };
  }

private:
  double shape_, rate_;
};

//! cdf given by one polynomial (ascending coefficients) per segment
//! [breaks[i], breaks[i+1]).
class Piecewise final : public Law
{
public:
  Piecewise(std::string label, std::vector<double> breaks, std::vector<std::vector<double>> cdf_polys)
    : label_(std::move(label))
    , breaks_(std::move(breaks))
    , polys_(std::move(cdf_polys))
  {
    require(breaks_.size() >= 2 && polys_.size() + 1 == breaks_.size(), ErrorCode::invalid_parameter,
            "piecewise: need k+1 breakpoints for k segments");
    require(std::is_sorted(breaks_.begin(), breaks_.end()) &&
              std::adjacent_find(breaks_.begin(), breaks_.end()) == breaks_.end(),
            ErrorCode::invalid_parameter, "piecewise: breakpoints must be strictly increasing");
    require(std::fabs(eval(polys_.front(), breaks_.front())) < 1e-12, ErrorCode::invalid_parameter,
            "piecewise: cdf must start at 0");
    require(std::fabs(eval(polys_.back(), breaks_.back()) - 1.0) < 1e-12, ErrorCode::invalid_parameter,
            "piecewise: cdf must end at 1");
    for (std::size_t i = 1; i < polys_.size(); ++i) {
      require(std::fabs(eval(polys_[i - 1], breaks_[i]) - eval(polys_[i], breaks_[i])) < 1e-12,
              ErrorCode::invalid_parameter, "piecewise: cdf must be continuous at breakpoints");
    }
    for (std::size_t i = 0; i < polys_.size(); ++i) {
      for (int j = 0; j <= 64; ++j) {
        double x = breaks_[i] + (breaks_[i + 1] - breaks_[i]) * j / 64.0;
        require(eval_derivative(polys_[i], x) >= -1e-12, ErrorCode::invalid_parameter,
                "piecewise: cdf must be nondecreasing");
      }
    }
  }
  Family family() const override { return Family::piecewise; }
  std::string name() const override { return "piecewise"; }
  std::vector<std::pair<std::string, double>> params() const override { return {}; }
  std::string spec() const override { return "piecewise(fixture=" + label_ + ")"; }
  Support support() const override { return { breaks_.front(), breaks_.back() }; }
  double pdf(double x) const override { return std::max(0.0, eval_derivative(polys_[segment(x)], x)); }
  double cdf(double x) const override
  {
    if (x >= breaks_.back())
      return 1.0;
    return std::clamp(eval(polys_[segment(x)], x), 0.0, 1.0);
  }
  std::vector<double> breakpoints() const override
  {
    return std::vector<double>(breaks_.begin() + 1, breaks_.end() - 1);
  }

private:
  std::size_t segment(double x) const
  {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t i = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return std::min(i, polys_.size() - 1);
  }
  static double eval(const std::vector<double>& c, double x)
  {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
      v = v * x + *it;
    return v;
  }
  static double eval_derivative(const std::vector<double>& c, double x)
  {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;)
      v = v * x + static_cast<double>(k) * c[k];
    return v;
  }

  std::string label_;
  std::vector<double> breaks_;
  std::vector<std::vector<double>> polys_;
};

} // namespace detail

//! Immutable handle to a lifetime law. Cheap to copy; safe to share across
//! threads.
class Distribution
{
public:
  explicit Distribution(std::shared_ptr<const detail::Law> law)
    : law_(std::move(law))
  {}

  static Distribution exponential(double rate) { return make<detail::Exponential>(rate); }
  static Distribution weibull(double rate, double shape) { return make<detail::Weibull>(rate, shape); }
  static Distribution lindley(double lambda) { return make<detail::Lindley>(lambda); }
  static Distribution uniform(double c, double d) { return make<detail::Uniform>(c, d); }
  static Distribution beta(double a, double b) { return make<detail::Beta>(a, b); }
  static Distribution power_unit(double k) { return make<detail::PowerOnUnit>(k); }
  static Distribution log_logistic(double alpha, double lambda) { return make<detail::LogLogistic>(alpha, lambda); }
  static Distribution apll(double alpha, double lambda, double a) { return make<detail::Apll>(alpha, lambda, a); }
  static Distribution exll(double alpha, double lambda, double a) { return make<detail::Exll>(alpha, lambda, a); }
  static Distribution gee(double lambda, double alpha, double theta) { return make<detail::Gee>(lambda, alpha, theta); }
  static Distribution eeg(double alpha, double theta, double p) { return make<detail::Eeg>(alpha, theta, p); }
  static Distribution gamma(double shape, double rate) { return make<detail::Gamma>(shape, rate); }
  static Distribution piecewise(std::string label, std::vector<double> breaks, std::vector<std::vector<double>> polys)
  {
    return make<detail::Piecewise>(std::move(label), std::move(breaks), std::move(polys));
  }
  static Distribution phr(const Distribution& base, double gamma);
  static Distribution transformed(const Distribution& base, MonotoneMap map);

  Family family() const { return law_->family(); }
  std::string name() const { return law_->name(); }
  std::vector<std::pair<std::string, double>> params() const { return law_->params(); }
  double param(const std::string& key) const
  {
    for (const auto& [k, v] : law_->params())
      if (k == key)
        return v;
    fail(ErrorCode::invalid_parameter, "no parameter '" + key + "' in " + spec());
  }
  //! Canonical `family(key=value,...)` string.
  std::string spec() const { return law_->spec(); }
  Support support() const { return law_->support(); }
  std::vector<double> breakpoints() const { return law_->breakpoints(); }
  const detail::Law& law() const { return *law_; }

  double pdf(double x) const
  {
    auto [lo, hi] = law_->support();
    if (x < lo || x > hi)
      return 0.0;
    return law_->pdf(x);
  }
  double cdf(double x) const
  {
    auto [lo, hi] = law_->support();
    if (x <= lo)
      return 0.0;
    if (x >= hi)
      return 1.0;
    return law_->cdf(x);
  }
  double sf(double x) const
  {
    auto [lo, hi] = law_->support();
    if (x <= lo)
      return 1.0;
    if (x >= hi)
      return 0.0;
    return law_->sf(x);
  }
  double hazard(double x) const
  {
    double s = sf(x);
    require(s > 0.0, ErrorCode::domain_error, "hazard: survival is zero at x");
    auto [lo, hi] = law_->support();
    if (x < lo)
      return 0.0;
    return law_->hazard(x);
  }
  double quantile(double u) const
  {
    require(u > 0.0 && u < 1.0, ErrorCode::domain_error, "quantile: u must lie in (0, 1)");
    return law_->quantile(u);
  }
  //! Supremum of the density over the support.
  DensitySup mode_density_sup() const { return law_->density_sup(); }

  std::vector<double> sample(std::size_t n, std::mt19937_64& gen) const
  {
    std::vector<double> out(n);
    for (auto& v : out)
      v = law_->quantile(num::open_uniform(gen));
    return out;
  }
  //! i.i.d. inverse-cdf draws; identical seeds give identical output.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const
  {
    std::mt19937_64 gen(seed);
    return sample(n, gen);
  }

private:
  template <typename L, typename... Args>
  static Distribution make(Args&&... args)
  {
    return Distribution(std::make_shared<const L>(std::forward<Args>(args)...));
  }

  std::shared_ptr<const detail::Law> law_;
};

namespace detail {

//! Law with survival base_sf^gamma.
class Phr final : public Law
{
public:
  Phr(Distribution base, double gamma)
    : base_(std::move(base))
    , gamma_(gamma)
  {
    require(gamma > 0 && std::isfinite(gamma), ErrorCode::invalid_parameter, "phr: gamma must be positive");
  }
  Family family() const override { return Family::phr; }
  std::string name() const override { return "phr"; }
  std::vector<std::pair<std::string, double>> params() const override { return { { "gamma", gamma_ } }; }
  std::string spec() const override
  {
    return "phr(base=" + base_.spec() + ",gamma=" + format_number(gamma_) + ")";
  }
  Support support() const override { return base_.support(); }
  double pdf(double x) const override
  {
    double s = base_.sf(x);
    if (gamma_ == 1.0)
      return base_.pdf(x);
    // past the point where sf underflows the density is zero as well
    if (s <= 0.0)
      return 0.0;
    return gamma_ * base_.pdf(x) * std::pow(s, gamma_ - 1.0);
  }
  double sf(double x) const override { return std::pow(base_.sf(x), gamma_); }
  double cdf(double x) const override { return -std::expm1(gamma_ * std::log(base_.sf(x))); }
  double hazard(double x) const override { return gamma_ * base_.law().hazard(x); }
  double quantile(double u) const override
  {
    // sf_base(x) = (1 - u)^{1/gamma}
    double v = -std::expm1(std::log1p(-u) / gamma_);
    if (v <= 0.0)
      return base_.support().lo;
    if (v >= 1.0)
      return base_.support().hi;
    return base_.quantile(v);
  }
  std::vector<double> breakpoints() const override { return base_.breakpoints(); }

  const Distribution& base() const { return base_; }
  double gamma() const { return gamma_; }

private:
  Distribution base_;
  double gamma_;
};

//! Law of phi(X) for a strictly increasing map phi.
class Transformed final : public Law
{
public:
  Transformed(Distribution base, MonotoneMap map)
    : base_(std::move(base))
    , map_(std::move(map))
  {}
  Family family() const override { return Family::transformed; }
  std::string name() const override { return "transformed"; }
  std::vector<std::pair<std::string, double>> params() const override { return {}; }
  std::string spec() const override { return "transformed(base=" + base_.spec() + ",map=" + map_.name + ")"; }
  Support support() const override
  {
    auto [lo, hi] = base_.support();
    return { map_.value(lo), std::isfinite(hi) ? map_.value(hi) : inf };
  }
  double pdf(double y) const override
  {
    double x = map_.inverse(y);
    return base_.pdf(x) / map_.derivative(x);
  }
  double cdf(double y) const override { return base_.cdf(map_.inverse(y)); }
  double sf(double y) const override { return base_.sf(map_.inverse(y)); }
  double quantile(double u) const override { return map_.value(base_.quantile(u)); }
  std::vector<double> breakpoints() const override
  {
    auto b = base_.breakpoints();
    for (auto& v : b)
      v = map_.value(v);
    return b;
  }

private:
  Distribution base_;
  MonotoneMap map_;
};

} // namespace detail

inline Distribution Distribution::phr(const Distribution& base, double gamma)
{
  return Distribution(std::make_shared<const detail::Phr>(base, gamma));
}

inline Distribution Distribution::transformed(const Distribution& base, MonotoneMap map)
{
  return Distribution(std::make_shared<const detail::Transformed>(base, std::move(map)));
}

//! A base law and the law whose survival is the base survival to the power gamma.
struct PhrPair
{
  Distribution base;
  double gamma;

  PhrPair(Distribution b, double g)
    : base(std::move(b))
    , gamma(g)
  {
    require(g > 0 && std::isfinite(g), ErrorCode::invalid_parameter, "phr: gamma must be positive");
  }

  Distribution derived() const { return Distribution::phr(base, gamma); }
};

//! If `d` is a PHR-derived law, its base and exponent.
inline std::optional<PhrPair> as_phr(const Distribution& d)
{
  if (d.family() != Family::phr)
    return std::nullopt;
  const auto& p = static_cast<const detail::Phr&>(d.law());
  return PhrPair(p.base(), p.gamma());
}

namespace fixtures {

//! F_X = x^2/2 on [0,1), (x^2+2)/6 on [1,2).
inline Distribution piecewise_x()
{
  return Distribution::piecewise("ex32_x", { 0.0, 1.0, 2.0 }, { { 0.0, 0.0, 0.5 }, { 2.0 / 6.0, 0.0, 1.0 / 6.0 } });
}

//! G_Y = (x^2+x)/4 on [0,1), x/2 on [1,2).
inline Distribution piecewise_y()
{
  return Distribution::piecewise("ex32_y", { 0.0, 1.0, 2.0 }, { { 0.0, 0.25, 0.25 }, { 0.0, 0.5 } });
}

} // namespace fixtures

} // namespace wrji
