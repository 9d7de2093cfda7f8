// Command-line front end: measures, curves, estimators, bandwidths,
// simulation, fitting and model comparison. CSV on stdout by default,
// --json for JSON. Exit status: 0 ok, 1 computation error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <wrji/wrji.hpp>

using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240607;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::string num(double v)
{
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json jnum(double v)
{
  if (std::isfinite(v))
    return v;
  return nullptr;
}

// "a:b:step", "a,b,c" or a single value; endpoints included within 1e-12
std::vector<double> parse_grid(const std::string& s)
{
  auto to_d = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size())
      wrji::fail(wrji::ErrorCode::parse_error, "bad number '" + part + "' in grid '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');)
      parts.push_back(p);
    if (parts.size() != 3)
      wrji::fail(wrji::ErrorCode::parse_error, "grid '" + s + "' must be start:stop:step");
    const double a = to_d(parts[0]), b = to_d(parts[1]), h = to_d(parts[2]);
    if (!(h > 0) || b < a)
      wrji::fail(wrji::ErrorCode::parse_error, "grid '" + s + "' needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / h + 1e-12 / h * std::max(1.0, std::fabs(b)))) + 1;
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(a + static_cast<double>(i) * h);
    return out;
  }
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');)
    out.push_back(to_d(p));
  if (out.empty())
    wrji::fail(wrji::ErrorCode::parse_error, "empty grid");
  return out;
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, sep);)
    if (!p.empty())
      out.push_back(p);
  return out;
}

std::vector<double> read_values(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    wrji::fail(wrji::ErrorCode::unreadable_file, "cannot open '" + path + "'");
  std::vector<double> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    try {
      v.push_back(std::stod(line.substr(first)));
    } catch (const std::exception&) {
      wrji::fail(wrji::ErrorCode::unreadable_file, path + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  if (v.empty())
    wrji::fail(wrji::ErrorCode::unreadable_file, "'" + path + "' holds no values");
  return v;
}

// "file:column" with a header name or a 0-based index
std::vector<double> read_csv_column(const std::string& spec)
{
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos)
    wrji::fail(wrji::ErrorCode::parse_error, "--csv expects file:column");
  const std::string path = spec.substr(0, colon), col = spec.substr(colon + 1);
  std::ifstream in(path);
  if (!in)
    wrji::fail(wrji::ErrorCode::unreadable_file, "cannot open '" + path + "'");
  std::string line;
  std::vector<double> v;
  std::optional<std::size_t> index;
  if (!col.empty() && col.find_first_not_of("0123456789") == std::string::npos)
    index = std::stoul(col);
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');)
      cells.push_back(c);
    if (header) {
      header = false;
      if (!index) {
        for (std::size_t i = 0; i < cells.size(); ++i)
          if (cells[i] == col)
            index = i;
        if (!index)
          wrji::fail(wrji::ErrorCode::unreadable_file, "column '" + col + "' not found in '" + path + "'");
        continue;
      }
      try {
        if (*index < cells.size())
          (void)std::stod(cells[*index]);
      } catch (const std::exception&) {
        continue; // header row
      }
    }
    if (*index >= cells.size())
      wrji::fail(wrji::ErrorCode::unreadable_file, "short row in '" + path + "'");
    try {
      v.push_back(std::stod(cells[*index]));
    } catch (const std::exception&) {
      wrji::fail(wrji::ErrorCode::unreadable_file, "non-numeric cell '" + cells[*index] + "' in '" + path + "'");
    }
  }
  if (v.empty())
    wrji::fail(wrji::ErrorCode::unreadable_file, "no values in '" + spec + "'");
  return v;
}

struct DataSource
{
  std::string file;
  std::string csv;
  std::string dataset;

  void add(CLI::App* app, const std::string& prefix, const std::string& what)
  {
    auto* f = app->add_option("--" + prefix + "data", file, what + ": text file, one value per line");
    auto* c = app->add_option("--" + prefix + "csv", csv, what + ": CSV file:column");
    auto* d = app->add_option("--" + prefix + "dataset", dataset, what + ": bundled dataset name");
    f->excludes(c)->excludes(d);
    c->excludes(d);
  }

  bool given() const { return !file.empty() || !csv.empty() || !dataset.empty(); }

  std::vector<double> load() const
  {
    if (!file.empty())
      return read_values(file);
    if (!csv.empty())
      return read_csv_column(csv);
    if (!dataset.empty())
      return wrji::dataset(dataset).values;
    wrji::fail(wrji::ErrorCode::invalid_parameter, "no data given");
  }
};

wrji::KernelSpec parse_kernel(const std::string& s)
{
  if (s == "gaussian")
    return wrji::KernelSpec::gaussian();
  if (s == "epanechnikov")
    return wrji::KernelSpec::epanechnikov();
  wrji::fail(wrji::ErrorCode::invalid_parameter, "unknown kernel '" + s + "'");
}

wrji::BandwidthRule parse_rule(const std::string& s, double h)
{
  if (s == "cv")
    return wrji::BandwidthRule::Cv();
  if (s == "cv-pdf")
    return wrji::BandwidthRule::CvPdf();
  if (s == "cv-cdf")
    return wrji::BandwidthRule::CvCdf();
  if (s == "fixed")
    return wrji::BandwidthRule::Fixed(h);
  wrji::fail(wrji::ErrorCode::invalid_parameter, "unknown bandwidth rule '" + s + "'");
}

std::vector<wrji::EstimatorMode> parse_modes(const std::string& s)
{
  if (s == "ecdf")
    return { wrji::EstimatorMode::ecdf };
  if (s == "kernel")
    return { wrji::EstimatorMode::kernel };
  if (s == "both")
    return { wrji::EstimatorMode::ecdf, wrji::EstimatorMode::kernel };
  wrji::fail(wrji::ErrorCode::invalid_parameter, "unknown estimator mode '" + s + "'");
}

// ---------------------------------------------------------------------------
// measure / curve

const std::vector<std::string> kKinds{
  "extropy",     "weighted_extropy", "residual_extropy",         "weighted_residual_extropy",
  "wji",         "wrji",             "wrdj",                     "weighted_discrimination",
  "past_wji",    "crj",              "dynamic_survival_extropy", "mrl",
  "vitality",    "wrji_phr",
};

struct MeasureArgs
{
  std::string kind;
  std::string x, y;
  double gamma = 1.0;
  bool quadrature = false;
  double tol = 1e-10;
};

bool needs_y(const std::string& k)
{
  return k == "wji" || k == "wrji" || k == "wrdj" || k == "weighted_discrimination" || k == "past_wji";
}

bool needs_t(const std::string& k)
{
  return k == "residual_extropy" || k == "weighted_residual_extropy" || k == "wrji" || k == "wrdj" || k == "past_wji" ||
         k == "dynamic_survival_extropy" || k == "mrl" || k == "vitality" || k == "wrji_phr";
}

wrji::MeasureValue evaluate(const MeasureArgs& a, const wrji::Distribution& x, const std::optional<wrji::Distribution>& y,
                            double t)
{
  wrji::MeasureOptions opt;
  opt.tol = a.tol;
  opt.allow_closed_form = !a.quadrature;
  const std::string& k = a.kind;
  auto plain = [](double v) { return wrji::MeasureValue{ v, wrji::Route::quadrature, 0.0 }; };
  if (k == "extropy")
    return wrji::extropy(x, opt);
  if (k == "weighted_extropy")
    return wrji::weighted_extropy(x, opt);
  if (k == "residual_extropy")
    return wrji::residual_extropy(x, t, opt);
  if (k == "weighted_residual_extropy")
    return wrji::weighted_residual_extropy(x, t, opt);
  if (k == "wji")
    return wrji::wji(x, *y, opt);
  if (k == "wrji")
    return wrji::wrji(x, *y, t, opt);
  if (k == "wrdj")
    return wrji::wrdj(x, *y, t, opt);
  if (k == "weighted_discrimination")
    return wrji::weighted_discrimination(x, *y, opt);
  if (k == "past_wji")
    return wrji::past_wji(x, *y, t, opt);
  if (k == "crj")
    return wrji::crj(x, opt);
  if (k == "dynamic_survival_extropy")
    return wrji::dynamic_survival_extropy(x, t, opt);
  if (k == "mrl")
    return plain(wrji::mrl(x, t, opt));
  if (k == "vitality")
    return plain(wrji::vitality(x, t, opt));
  if (k == "wrji_phr")
    return wrji::wrji_phr_closed(x, a.gamma, t, opt);
  wrji::fail(wrji::ErrorCode::invalid_parameter, "unknown measure kind '" + k + "'");
}

void add_measure_options(CLI::App* app, MeasureArgs& a)
{
  app->add_option("--kind", a.kind, "Measure")->required()->check(CLI::IsMember(kKinds));
  app->add_option("--x", a.x, "Distribution spec of X, e.g. exp(rate=1)")->required();
  app->add_option("--y", a.y, "Distribution spec of Y (two-distribution measures)");
  app->add_option("--gamma", a.gamma, "PHR exponent for wrji_phr")->check(CLI::PositiveNumber);
  app->add_flag("--quadrature", a.quadrature, "Skip closed forms and integrate numerically");
  app->add_option("--tol", a.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
}

std::optional<wrji::Distribution> load_y(const MeasureArgs& a)
{
  if (needs_y(a.kind)) {
    if (a.y.empty())
      throw UsageError("--y is required for --kind " + a.kind);
    return wrji::parse_distribution(a.y);
  }
  if (!a.y.empty())
    throw UsageError("--y: not used by --kind " + a.kind);
  return std::nullopt;
}

// ---------------------------------------------------------------------------

struct Output
{
  bool as_json = false;
};

void print_fit_table(const std::vector<wrji::FitReport>& fits, const Output& out)
{
  if (out.as_json) {
    json arr = json::array();
    for (const auto& f : fits) {
      json params = json::object();
      for (std::size_t i = 0; i < f.params.size(); ++i)
        params[f.names[i]] = f.params[i];
      arr.push_back({ { "family", wrji::to_string(f.family) },
                      { "parameters", params },
                      { "log_likelihood", jnum(f.log_likelihood) },
                      { "ks", f.ks },
                      { "p_value", f.p_value },
                      { "converged", f.converged } });
    }
    std::cout << arr.dump(2) << "\n";
    return;
  }
  std::cout << "family,quantity,value\n";
  for (const auto& f : fits) {
    const std::string fam = wrji::to_string(f.family);
    for (std::size_t i = 0; i < f.params.size(); ++i)
      std::cout << fam << "," << f.names[i] << "," << num(f.params[i]) << "\n";
    std::cout << fam << ",log_likelihood," << num(f.log_likelihood) << "\n";
    std::cout << fam << ",ks," << num(f.ks) << "\n";
    std::cout << fam << ",p_value," << num(f.p_value) << "\n";
  }
}

std::vector<wrji::SimulationReport> table1_reports(const std::string& block, std::size_t replications,
                                                   std::uint64_t seed, unsigned threads)
{
  std::vector<std::pair<wrji::Distribution, std::vector<wrji::Distribution>>> runs;
  std::vector<double> grid;
  if (block == "exp") {
    grid = { 0.01, 0.05, 0.10 };
    runs.push_back({ wrji::Distribution::exponential(1.0),
                     { wrji::Distribution::exponential(2.0), wrji::Distribution::exponential(5.0),
                       wrji::Distribution::exponential(7.0) } });
  } else if (block == "beta") {
    grid = { 0.01, 0.10, 0.30 };
    runs.push_back({ wrji::Distribution::beta(1.0, 1.0),
                     { wrji::Distribution::beta(1.0, 4.0), wrji::Distribution::beta(5.0, 3.0),
                       wrji::Distribution::beta(6.0, 6.0) } });
  } else {
    wrji::fail(wrji::ErrorCode::invalid_parameter, "unknown preset block '" + block + "' (exp or beta)");
  }
  std::vector<wrji::SimulationReport> out;
  for (const auto& [x, ys] : runs) {
    for (const auto& y : ys) {
      wrji::McConfig c;
      c.x = x;
      c.y = y;
      c.t_grid = grid;
      c.n_grid = { 30, 50 };
      c.replications = replications;
      c.seed = seed;
      c.threads = threads;
      out.push_back(wrji::run_mc(c));
    }
  }
  return out;
}

json report_json(const std::vector<wrji::SimulationReport>& reports)
{
  json arr = json::array();
  for (const auto& r : reports) {
    json cells = json::array();
    for (const auto& c : r.cells)
      cells.push_back({ { "t", c.t },
                        { "n", c.n },
                        { "mode", wrji::to_string(c.mode) },
                        { "truth", c.truth },
                        { "bias", jnum(c.bias) },
                        { "mse", jnum(c.mse) },
                        { "used", c.used },
                        { "failures", c.failures },
                        { "valid", c.valid } });
    arr.push_back({ { "x", r.x_spec }, { "y", r.y_spec }, { "replications", r.replications }, { "cells", cells } });
  }
  return arr;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Weighted residual extropy-inaccuracy measures: evaluation, estimation, simulation and fitting." };
  app.require_subcommand(1, 1);
  app.footer("Distribution specs: family(key=value,...), e.g. exp(rate=2), weibull(rate=1,shape=2),\n"
             "lindley(lambda=1), uniform(c=0,d=1), beta(alpha=5,beta=3), power(k=2),\n"
             "loglogistic(alpha=1.7,lambda=6.1), apll(alpha=,lambda=,a=), exll(alpha=,lambda=,a=),\n"
             "gee(lambda=,alpha=,theta=), eeg(alpha=,theta=,p=), gamma(shape=,rate=),\n"
             "phr(base=<spec>,gamma=g), piecewise(fixture=ex32_x|ex32_y).\n"
             "Time grids: start:stop:step (inclusive), a comma list, or one value.");

  Output out;
  std::uint64_t seed = kDefaultSeed;
  app.add_flag("--json", out.as_json, "Emit JSON instead of CSV");
  app.add_option("--seed", seed, "Master seed for every random draw")->capture_default_str();

  // measure
  MeasureArgs ma;
  double mt = 0.0;
  bool mt_given = false;
  auto* measure = app.add_subcommand("measure", "Evaluate one information measure");
  add_measure_options(measure, ma);
  auto* mt_opt = measure->add_option("--t", mt, "Time t");

  // curve
  MeasureArgs ca;
  std::string c_grid;
  auto* curve = app.add_subcommand("curve", "Evaluate a measure over a time grid");
  add_measure_options(curve, ca);
  curve->add_option("--t", c_grid, "Time grid start:stop:step")->required();

  // estimate
  DataSource ex_src, ey_src;
  std::string e_grid, e_mode = "both", e_rule = "cv", e_kernel = "gaussian";
  double e_h = 0.0;
  auto* estimate = app.add_subcommand("estimate", "Plug-in estimates of the weighted residual inaccuracy from two samples");
  ex_src.add(estimate, "x-", "Sample of X");
  ey_src.add(estimate, "y-", "Sample of Y");
  estimate->add_option("--t", e_grid, "Time grid")->required();
  estimate->add_option("--mode", e_mode, "ecdf, kernel or both")->check(CLI::IsMember({ "ecdf", "kernel", "both" }))->capture_default_str();
  estimate->add_option("--rule", e_rule, "cv, cv-pdf, cv-cdf or fixed")->check(CLI::IsMember({ "cv", "cv-pdf", "cv-cdf", "fixed" }))->capture_default_str();
  estimate->add_option("--bandwidth", e_h, "Bandwidth for --rule fixed")->check(CLI::PositiveNumber);
  estimate->add_option("--kernel", e_kernel, "gaussian or epanechnikov")->check(CLI::IsMember({ "gaussian", "epanechnikov" }))->capture_default_str();

  // bandwidth
  DataSource b_src;
  std::string b_kind = "both", b_kernel = "gaussian";
  auto* bandwidth = app.add_subcommand("bandwidth", "Cross-validated bandwidths of one sample");
  b_src.add(bandwidth, "", "Sample");
  bandwidth->add_option("--kind", b_kind, "pdf, cdf or both")->check(CLI::IsMember({ "pdf", "cdf", "both" }))->capture_default_str();
  bandwidth->add_option("--kernel", b_kernel, "gaussian or epanechnikov")->check(CLI::IsMember({ "gaussian", "epanechnikov" }))->capture_default_str();

  // simulate
  std::string s_x, s_grid, s_n, s_preset, s_mode = "both", s_rule = "cv";
  std::vector<std::string> s_y;
  std::size_t s_reps = 1000;
  unsigned s_threads = 1;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo bias and MSE of both estimators");
  auto* s_preset_opt = simulate->add_option("--preset", s_preset, "Bias/MSE table block: exp or beta")->check(CLI::IsMember({ "exp", "beta" }));
  auto* s_x_opt = simulate->add_option("--x", s_x, "True law");
  simulate->add_option("--y", s_y, "Assigned law (repeatable)");
  simulate->add_option("--t", s_grid, "Time grid");
  simulate->add_option("--n", s_n, "Comma-separated sample sizes");
  simulate->add_option("--replications,-R", s_reps, "Replications per cell")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--threads", s_threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--mode", s_mode, "ecdf, kernel or both")->check(CLI::IsMember({ "ecdf", "kernel", "both" }))->capture_default_str();
  simulate->add_option("--rule", s_rule, "cv, cv-pdf or cv-cdf")->check(CLI::IsMember({ "cv", "cv-pdf", "cv-cdf" }))->capture_default_str();
  s_preset_opt->excludes(s_x_opt);

  // fit
  DataSource f_src;
  std::string f_families;
  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fits with Kolmogorov-Smirnov statistics");
  f_src.add(fit, "", "Data");
  fit->add_option("--family", f_families, "Comma-separated families: ll,apll,exll,wei,gee,eeg")->required();

  // compare
  DataSource k_src;
  std::string k_actual, k_candidates, k_grid;
  auto* compare = app.add_subcommand("compare", "Parametric and estimated inaccuracy curves of fitted models");
  k_src.add(compare, "", "Data");
  compare->add_option("--actual", k_actual, "Family treated as the actual law")->required();
  compare->add_option("--candidates", k_candidates, "Comma-separated assigned families")->required();
  compare->add_option("--t", k_grid, "Time grid")->required();

  // datasets
  std::string d_name;
  auto* datasets = app.add_subcommand("datasets", "List bundled datasets or print one");
  datasets->add_option("--name", d_name, "Dataset to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  mt_given = mt_opt->count() > 0;

  try {
    if (*measure) {
      auto x = wrji::parse_distribution(ma.x);
      auto y = load_y(ma);
      if (needs_t(ma.kind) && !mt_given)
        throw UsageError("--t is required for --kind " + ma.kind);
      if (!needs_t(ma.kind) && mt_given)
        throw UsageError("--t: not used by --kind " + ma.kind);
      const auto v = evaluate(ma, x, y, mt);
      if (out.as_json) {
        json j{ { "kind", ma.kind }, { "x", x.spec() } };
        j["y"] = y ? json(y->spec()) : json(nullptr);
        j["t"] = needs_t(ma.kind) ? json(mt) : json(nullptr);
        j["value"] = jnum(v.value);
        j["route"] = wrji::to_string(v.route);
        j["abs_error"] = v.abs_error;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "kind,x,y,t,value,route\n"
                  << ma.kind << ",\"" << x.spec() << "\",\"" << (y ? y->spec() : "") << "\","
                  << (needs_t(ma.kind) ? num(mt) : "") << "," << num(v.value) << "," << wrji::to_string(v.route) << "\n";
      }
    } else if (*curve) {
      auto x = wrji::parse_distribution(ca.x);
      auto y = load_y(ca);
      if (!needs_t(ca.kind))
        throw UsageError(std::string("--kind: ") + ca.kind + " does not depend on t");
      const auto grid = parse_grid(c_grid);
      json rows = json::array();
      if (!out.as_json)
        std::cout << "t,value,route\n";
      for (double t : grid) {
        const auto v = evaluate(ca, x, y, t);
        if (out.as_json)
          rows.push_back({ { "t", t }, { "value", jnum(v.value) }, { "route", wrji::to_string(v.route) } });
        else
          std::cout << num(t) << "," << num(v.value) << "," << wrji::to_string(v.route) << "\n";
      }
      if (out.as_json)
        std::cout << json{ { "kind", ca.kind }, { "x", x.spec() }, { "y", y ? json(y->spec()) : json(nullptr) }, { "rows", rows } }.dump(2)
                  << "\n";
    } else if (*estimate) {
      if (!ex_src.given() || !ey_src.given())
        throw UsageError("estimate needs a sample for X and for Y");
      if (e_rule == "fixed" && !(e_h > 0))
        throw UsageError("--rule fixed needs --bandwidth");
      const wrji::Sample sx(ex_src.load()), sy(ey_src.load());
      const auto k = parse_kernel(e_kernel);
      const auto bw = wrji::resolve_bandwidths(sx, sy, k, k, parse_rule(e_rule, e_h));
      const auto modes = parse_modes(e_mode);
      const auto grid = parse_grid(e_grid);
      json rows = json::array();
      if (!out.as_json) {
        std::cout << "t";
        for (auto m : modes)
          std::cout << "," << wrji::to_string(m) << "_estimate";
        std::cout << ",note\n";
      }
      for (double t : grid) {
        std::vector<double> vals;
        std::string note;
        for (auto m : modes) {
          try {
            vals.push_back(wrji::estimate_wrji(sx, sy, t, m, k, k, bw));
          } catch (const wrji::Error& e) {
            vals.push_back(std::nan(""));
            note = wrji::to_string(e.code());
          }
        }
        if (out.as_json) {
          json r{ { "t", t } };
          for (std::size_t i = 0; i < modes.size(); ++i)
            r[std::string(wrji::to_string(modes[i])) + "_estimate"] = jnum(vals[i]);
          r["note"] = note;
          rows.push_back(r);
        } else {
          std::cout << num(t);
          for (double v : vals)
            std::cout << "," << num(v);
          std::cout << "," << note << "\n";
        }
      }
      if (out.as_json)
        std::cout << json{ { "bandwidths", { { "pdf_x", bw.pdf_x }, { "pdf_y", bw.pdf_y }, { "cdf_x", bw.cdf_x }, { "cdf_y", bw.cdf_y } } },
                           { "rows", rows } }
                       .dump(2)
                  << "\n";
    } else if (*bandwidth) {
      if (!b_src.given())
        throw UsageError("bandwidth needs --data, --csv or --dataset");
      const wrji::Sample s(b_src.load());
      const auto k = parse_kernel(b_kernel);
      json j{ { "n", s.size() }, { "kernel", k.name() } };
      if (!out.as_json)
        std::cout << "kind,h\n";
      if (b_kind != "cdf") {
        const double h = wrji::cv_bandwidth_pdf(s, k);
        j["pdf"] = h;
        if (!out.as_json)
          std::cout << "pdf," << num(h) << "\n";
      }
      if (b_kind != "pdf") {
        const double h = wrji::cv_bandwidth_cdf(s, k);
        j["cdf"] = h;
        if (!out.as_json)
          std::cout << "cdf," << num(h) << "\n";
      }
      if (out.as_json)
        std::cout << j.dump(2) << "\n";
    } else if (*simulate) {
      std::vector<wrji::SimulationReport> reports;
      if (!s_preset.empty()) {
        if (!s_y.empty() || !s_grid.empty() || !s_n.empty())
          throw UsageError("--preset: cannot be combined with --y, --t or --n");
        reports = table1_reports(s_preset, s_reps, seed, s_threads);
      } else {
        if (s_x.empty() || s_y.empty() || s_grid.empty() || s_n.empty())
          throw UsageError("simulate needs --preset, or --x, --y, --t and --n");
        const auto x = wrji::parse_distribution(s_x);
        std::vector<std::size_t> ns;
        for (const auto& p : split(s_n, ',')) {
          try {
            ns.push_back(std::stoul(p));
          } catch (const std::exception&) {
            wrji::fail(wrji::ErrorCode::parse_error, "bad sample size '" + p + "'");
          }
        }
        for (const auto& ys : s_y) {
          wrji::McConfig c;
          c.x = x;
          c.y = wrji::parse_distribution(ys);
          c.t_grid = parse_grid(s_grid);
          c.n_grid = ns;
          c.replications = s_reps;
          c.seed = seed;
          c.threads = s_threads;
          c.modes = parse_modes(s_mode);
          c.rule = parse_rule(s_rule, 0.0);
          reports.push_back(wrji::run_mc(c));
        }
      }
      if (out.as_json)
        std::cout << report_json(reports).dump(2) << "\n";
      else
        std::cout << wrji::emit_table(reports);
    } else if (*fit) {
      if (!f_src.given())
        throw UsageError("fit needs --data, --csv or --dataset");
      const auto data = f_src.load();
      std::vector<wrji::FitReport> fits;
      for (const auto& name : split(f_families, ','))
        fits.push_back(wrji::mle(wrji::parse_fit_family(name), data));
      print_fit_table(fits, out);
    } else if (*compare) {
      if (!k_src.given())
        throw UsageError("compare needs --data, --csv or --dataset");
      std::vector<wrji::FitFamily> cands;
      for (const auto& name : split(k_candidates, ','))
        cands.push_back(wrji::parse_fit_family(name));
      const auto rep =
        wrji::wrji_model_comparison(k_src.load(), wrji::parse_fit_family(k_actual), cands, parse_grid(k_grid), seed);
      if (out.as_json) {
        json rows = json::array();
        for (const auto& r : rep.rows)
          rows.push_back({ { "t", r.t },
                           { "model", r.model },
                           { "parametric", jnum(r.parametric) },
                           { "ecdf_estimate", jnum(r.ecdf_estimate) },
                           { "kernel_estimate", jnum(r.kernel_estimate) },
                           { "note", r.note } });
        std::cout << json{ { "actual", wrji::to_string(rep.actual.family) }, { "rows", rows } }.dump(2) << "\n";
      } else {
        std::cout << "t,model,parametric,ecdf_estimate,kernel_estimate,note\n";
        for (const auto& r : rep.rows)
          std::cout << num(r.t) << "," << r.model << "," << num(r.parametric) << "," << num(r.ecdf_estimate) << ","
                    << num(r.kernel_estimate) << "," << r.note << "\n";
      }
    } else if (*datasets) {
      if (d_name.empty()) {
        if (out.as_json) {
          json arr = json::array();
          for (const auto& n : wrji::dataset_names())
            arr.push_back({ { "name", n }, { "n", wrji::dataset(n).values.size() } });
          std::cout << arr.dump(2) << "\n";
        } else {
          std::cout << "name,n\n";
          for (const auto& n : wrji::dataset_names())
            std::cout << n << "," << wrji::dataset(n).values.size() << "\n";
        }
      } else {
        const auto d = wrji::dataset(d_name);
        if (out.as_json) {
          std::cout << json{ { "name", d.name }, { "values", d.as_printed } }.dump() << "\n";
        } else {
          std::cout << "value\n";
          for (double v : d.as_printed)
            std::cout << num(v) << "\n";
        }
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const wrji::Error& e) {
    std::cerr << json{ { "error", wrji::to_string(e.code()) }, { "message", e.what() } }.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{ { "error", "internal" }, { "message", e.what() } }.dump() << "\n";
    return 1;
  }
  return 0;
}
