#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "distributions.hpp"
#include "estimators.hpp"
#include "measures.hpp"
#include "numeric.hpp"

namespace wrji {

struct McConfig
{
  Distribution x = Distribution::exponential(1.0);
  Distribution y = Distribution::exponential(2.0);
  std::vector<double> t_grid;
  std::vector<std::size_t> n_grid;
  std::size_t replications = 1000;
  std::uint64_t seed = 20240607;
  std::vector<EstimatorMode> modes{ EstimatorMode::ecdf, EstimatorMode::kernel };
  KernelSpec kernel{};
  BandwidthRule rule = BandwidthRule::Cv();
  unsigned threads = 1;
  //! Share of failed replications above which a cell is flagged invalid.
  double max_failure_rate = 0.01;
};

struct McCell
{
  double t = 0.0;
  std::size_t n = 0;
  EstimatorMode mode = EstimatorMode::ecdf;
  double truth = 0.0;
  double bias = 0.0;
  double mse = 0.0;
  std::size_t used = 0;
  std::size_t failures = 0;
  bool valid = true;
};

struct SimulationReport
{
  std::string x_spec;
  std::string y_spec;
  std::size_t replications = 0;
  std::vector<McCell> cells;

  const McCell& cell(double t, std::size_t n, EstimatorMode mode) const
  {
    for (const auto& c : cells)
      if (c.t == t && c.n == n && c.mode == mode)
        return c;
    fail(ErrorCode::invalid_parameter, "simulation report has no such cell");
  }
};

//! Seeds of replication `rep` at sample size n: stream 2n draws the X sample,
//! stream 2n+1 the Y sample.
inline std::pair<std::uint64_t, std::uint64_t> replication_seeds(std::uint64_t master, std::size_t rep, std::size_t n)
{
  return { num::derive_seed(master, rep, 2 * static_cast<std::uint64_t>(n)),
           num::derive_seed(master, rep, 2 * static_cast<std::uint64_t>(n) + 1) };
}

inline SimulationReport run_mc(const McConfig& cfg)
{
  require(cfg.replications >= 1, ErrorCode::invalid_parameter, "run_mc: need at least one replication");
  require(!cfg.t_grid.empty() && !cfg.n_grid.empty() && !cfg.modes.empty(), ErrorCode::invalid_parameter,
          "run_mc: empty grid");
  for (std::size_t n : cfg.n_grid)
    require(n >= 2, ErrorCode::invalid_parameter, "run_mc: sample sizes must be at least 2");

  std::vector<double> truth;
  for (double t : cfg.t_grid)
    truth.push_back(wrji(cfg.x, cfg.y, t).value);

  const std::size_t nt = cfg.t_grid.size(), nm = cfg.modes.size();
  SimulationReport report;
  report.x_spec = cfg.x.spec();
  report.y_spec = cfg.y.spec();
  report.replications = cfg.replications;

  for (std::size_t n : cfg.n_grid) {
    // estimates[rep][t * nm + mode], NaN marks a failed replication
    std::vector<std::vector<double>> est(cfg.replications, std::vector<double>(nt * nm, std::nan("")));
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        auto [sx_seed, sy_seed] = replication_seeds(cfg.seed, r, n);
        Sample sx(cfg.x.sample(n, sx_seed));
        Sample sy(cfg.y.sample(n, sy_seed));
        Bandwidths bw;
        try {
          bw = resolve_bandwidths(sx, sy, cfg.kernel, cfg.kernel, cfg.rule);
        } catch (const Error&) {
          continue;
        }
        for (std::size_t i = 0; i < nt; ++i) {
          for (std::size_t m = 0; m < nm; ++m) {
            try {
              est[r][i * nm + m] = estimate_wrji(sx, sy, cfg.t_grid[i], cfg.modes[m], cfg.kernel, cfg.kernel, bw);
            } catch (const Error&) {
            }
          }
        }
      }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.replications)));
    if (threads == 1) {
      work(0, cfg.replications);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (cfg.replications + threads - 1) / threads;
      for (unsigned k = 0; k < threads; ++k) {
        const std::size_t b = k * chunk, e = std::min(cfg.replications, b + chunk);
        if (b < e)
          pool.emplace_back(work, b, e);
      }
      for (auto& th : pool)
        th.join();
    }

    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t m = 0; m < nm; ++m) {
        McCell c;
        c.t = cfg.t_grid[i];
        c.n = n;
        c.mode = cfg.modes[m];
        c.truth = truth[i];
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t r = 0; r < cfg.replications; ++r) {
          const double v = est[r][i * nm + m];
          if (std::isnan(v)) {
            ++c.failures;
            continue;
          }
          const double e = v - truth[i];
          sum += e;
          sum2 += e * e;
          ++c.used;
        }
        if (c.used > 0) {
          c.bias = sum / static_cast<double>(c.used);
          c.mse = sum2 / static_cast<double>(c.used);
        } else {
          c.bias = c.mse = std::nan("");
        }
        c.valid = c.used > 0 && static_cast<double>(c.failures) <= cfg.max_failure_rate * static_cast<double>(cfg.replications);
        report.cells.push_back(c);
      }
    }
  }
  return report;
}

namespace detail {

inline std::string fmt(double v)
{
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace detail

//! CSV with rows keyed (t, n, metric) and one column per assigned law and
//! estimator, in the layout of a bias/MSE table.
inline std::string emit_table(const std::vector<SimulationReport>& reports)
{
  std::ostringstream os;
  os << "t,n,metric";
  std::vector<std::pair<std::size_t, EstimatorMode>> columns;
  std::vector<std::pair<double, std::size_t>> keys;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    std::vector<EstimatorMode> modes;
    for (const auto& c : reports[r].cells) {
      if (std::find(modes.begin(), modes.end(), c.mode) == modes.end())
        modes.push_back(c.mode);
      std::pair<double, std::size_t> k{ c.t, c.n };
      if (std::find(keys.begin(), keys.end(), k) == keys.end())
        keys.push_back(k);
    }
    for (auto m : modes) {
      columns.emplace_back(r, m);
      os << "," << '"' << reports[r].y_spec << ' ' << (m == EstimatorMode::ecdf ? "Jn" : "Jh") << '"';
    }
  }
  os << "\n";
  std::sort(keys.begin(), keys.end());
  for (const auto& [t, n] : keys) {
    for (int metric = 0; metric < 2; ++metric) {
      os << detail::fmt(t) << "," << n << "," << (metric == 0 ? "bias" : "mse");
      for (const auto& [r, m] : columns) {
        os << ",";
        for (const auto& c : reports[r].cells) {
          if (c.t == t && c.n == n && c.mode == m) {
            os << detail::fmt(metric == 0 ? c.bias : c.mse);
            break;
          }
        }
      }
      os << "\n";
    }
  }
  return os.str();
}

inline std::string emit_table(const SimulationReport& report)
{
  return emit_table(std::vector<SimulationReport>{ report });
}

} // namespace wrji
