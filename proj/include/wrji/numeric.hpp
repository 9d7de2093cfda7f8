#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <utility>

#include "error.hpp"

namespace wrji {

inline constexpr double inf = std::numeric_limits<double>::infinity();

namespace num {

inline double normal_pdf(double z)
{
  return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

inline double normal_cdf(double z)
{
  return 0.5 * std::erfc(-z * (0.5 * std::numbers::sqrt2));
}

//! Antiderivative of the standard normal cdf: z Phi(z) + phi(z).
inline double normal_cdf_integral(double z)
{
  if (z > 40.0)
    return z;
  if (z < -40.0)
    return 0.0;
  return z * normal_cdf(z) + normal_pdf(z);
}

//! Root of f on [lo, hi] where f(lo) and f(hi) differ in sign.
//! Bisection with secant acceleration; stops when the bracket is below
//! x_tol or |f| below f_tol.
template <typename F>
double find_root(F&& f, double lo, double hi, double x_tol = 1e-10, double f_tol = 1e-14)
{
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  require((flo < 0) != (fhi < 0), ErrorCode::domain_error, "find_root: bracket does not straddle a root");
  for (int it = 0; it < 400; ++it) {
    double mid = 0.5 * (lo + hi);
    // secant proposal, accepted only when it stays strictly inside the bracket
    double sec = lo - flo * (hi - lo) / (fhi - flo);
    double x = (sec > lo && sec < hi && (it % 3 != 2)) ? sec : mid;
    double fx = f(x);
    if (std::fabs(fx) <= f_tol)
      return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= x_tol * std::max(1.0, std::fabs(lo)))
      return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

//! Golden-section minimization of a unimodal function on [a, b].
template <typename F>
std::pair<double, double> golden_section_min(F&& f, double a, double b, double tol)
{
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  return { x, f(x) };
}

//! SplitMix64 step, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

//! Seed for stream `stream` of replication `rep` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t rep, std::uint64_t stream)
{
  return splitmix64(splitmix64(splitmix64(master) ^ rep) ^ (stream * 0xd1b54a32d192ed03ULL));
}

//! Uniform draw on the open interval (0, 1) with 53 random bits.
inline double open_uniform(std::mt19937_64& gen)
{
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace num
} // namespace wrji
