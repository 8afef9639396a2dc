#include "fockchart/cli.hpp"

#include "fockchart/boundaries.hpp"
#include "fockchart/core_map.hpp"
#include "fockchart/geometry.hpp"
#include "fockchart/marginals.hpp"
#include "fockchart/numeric.hpp"
#include "fockchart/sampler.hpp"
#include "fockchart/tolerances.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace fockchart::cli {

namespace {

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> grid(double lo, double hi, int points, bool log_scale) {
  if (points < 2)
    throw std::invalid_argument("grid needs at least two points");
  if (log_scale && lo <= 0.0)
    throw std::invalid_argument("log grid requires a positive lower limit");
  std::vector<double> v(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) {
    if (log_scale)
      v[static_cast<size_t>(i)] =
          std::pow(10.0, std::log10(lo) +
                             (std::log10(hi) - std::log10(lo)) * i /
                                 (points - 1));
    else
      v[static_cast<size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  }
  return v;
}

std::pair<double, double> parse_range(const std::string &s) {
  const auto pos = s.find(':');
  if (pos == std::string::npos)
    throw std::invalid_argument("range must be written lo:hi");
  const double lo = std::stod(s.substr(0, pos));
  const double hi = std::stod(s.substr(pos + 1));
  if (!(lo < hi))
    throw std::invalid_argument("range must satisfy lo < hi");
  return {lo, hi};
}

void put(CsvTable &t, const std::string &key, const std::string &value) {
  t.meta.emplace_back(key, value);
}

void put(CsvTable &t, const std::string &key, double value, int precision) {
  t.meta.emplace_back(key, format_double(value, precision));
}

std::string feasible_str(bool f) { return f ? "1" : "0"; }

} // namespace

std::string format_double(double v, int precision) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  if (v == 0.0)
    v = 0.0; // flush negative zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

void write_csv(std::ostream &out, const CsvTable &t) {
  for (const auto &[k, v] : t.meta)
    out << "# " << k << "=" << v << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto &row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

CsvTable read_csv(std::istream &in) {
  CsvTable t;
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("malformed header line: " + line);
      t.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    if (!have_columns) {
      t.columns = cells;
      have_columns = true;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

void write_jsonl(std::ostream &out, const CsvTable &t) {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto &[k, v] : t.meta)
    meta[k] = v;
  out << nlohmann::json{{"meta", meta}}.dump() << "\n";
  for (const auto &row : t.rows) {
    nlohmann::json j = nlohmann::json::object();
    for (size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
      const std::string &cell = row[i];
      try {
        if (cell.find_first_of(".eE") == std::string::npos &&
            !cell.empty()) {
          size_t used = 0;
          const long long iv = std::stoll(cell, &used);
          if (used == cell.size()) {
            j[t.columns[i]] = iv;
            continue;
          }
        }
        size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used == cell.size() && std::isfinite(v)) {
          j[t.columns[i]] = v;
          continue;
        }
      } catch (const std::exception &) {
      }
      j[t.columns[i]] = cell;
    }
    out << j.dump() << "\n";
  }
}

void write_file_atomic(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path())
    fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw std::runtime_error("cannot open " + tmp.string());
    f << content;
    f.flush();
    if (!f)
      throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

CheckReport run_check(const std::vector<double> &tuple, int n,
                      bool n_infinite) {
  if (tuple.empty())
    throw std::invalid_argument("check: empty correlator tuple");
  for (double v : tuple)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument(
          "check: correlators must be finite and non-negative");

  CheckReport rep;
  const double n0 = tuple[0];
  const double g2 = tuple.size() > 1 ? tuple[1] : 0.0;

  if (n_infinite) {
    rep.physical = true;
    for (size_t i = 1; i < tuple.size(); ++i) {
      const int k = static_cast<int>(i) + 1;
      // only the coin-state floor survives in the untruncated space
      double lower = 0.0;
      if (n0 > 0.0) {
        const int m = static_cast<int>(std::floor(n0));
        lower = (num::falling_factorial(m, k) +
                 k * (n0 - m) * num::falling_factorial(m, k - 1)) /
                std::pow(n0, k);
      }
      if (tuple[i] < lower - tol::phys_eps * std::max(1.0, lower)) {
        rep.physical = false;
        rep.violation = "g" + std::to_string(k) +
                        " below its coin-state floor " +
                        format_double(lower, 12);
        break;
      }
    }
  } else {
    if (n < 1)
      throw std::invalid_argument("check: requires N >= 1");
    if (tuple.size() != static_cast<size_t>(n))
      throw std::invalid_argument(
          "check: tuple must hold n0, g2, ..., gN (" + std::to_string(n) +
          " values for N=" + std::to_string(n) + ")");
    GlauberPoint q;
    q.n0 = n0;
    q.g.assign(tuple.begin() + 1, tuple.end());
    q.g_defined = true;
    if (n0 == 0.0) {
      bool all_zero = true;
      for (double v : q.g)
        all_zero = all_zero && v == 0.0;
      rep.physical = all_zero;
      rep.p.assign(static_cast<size_t>(n) + 1, 0.0);
      rep.p[0] = 1.0;
      if (!all_zero)
        rep.violation = "zero population with nonzero correlators";
    } else {
      const FockDistribution p = fock_of(denormalize(q));
      rep.p = p.p;
      rep.physical = true;
      for (size_t i = 0; i < p.p.size(); ++i) {
        if (p.p[i] < -tol::phys_eps || p.p[i] > 1.0 + tol::phys_eps) {
          rep.physical = false;
          break;
        }
      }
      if (!rep.physical) {
        // name the tightest projected bound that fails, if any
        for (int k = 2; k <= n && rep.violation.empty(); ++k) {
          const BoundaryResult b = hn_gk_bounds(n0, k, Truncation(n));
          if (!b.feasible) {
            rep.violation = "population outside [0, N]";
            break;
          }
          const double gk = q.g_of(k);
          if (gk > b.upper + tol::phys_eps * std::max(1.0, b.upper))
            rep.violation = "g" + std::to_string(k) + " above its ceiling " +
                            format_double(b.upper, 12);
          else if (gk < b.lower - tol::phys_eps * std::max(1.0, b.lower))
            rep.violation = "g" + std::to_string(k) +
                            " below its coin-state floor " +
                            format_double(b.lower, 12);
        }
        if (rep.violation.empty())
          rep.violation = "joint constraint: a reconstructed occupation "
                          "weight leaves [0, 1]";
      }
    }
  }

  if (tuple.size() > 1) {
    if (g2 == 0.0)
      rep.flags.push_back("g2 = 0: single-quantum certificate; every "
                          "occupation above one quantum vanishes");
    else if (g2 < 0.5)
      rep.flags.push_back("g2 < 1/2: certifies at most two quanta on "
                          "average, not a single-quantum state");
    if (n0 > 1.0 && g2 < 0.5 && rep.physical)
      rep.flags.push_back("population above one with g2 < 1/2: allowed "
                          "region, the sub-1/2 criterion does not pin the "
                          "population");
  }
  return rep;
}

namespace {

CsvTable boundary_table(const RunConfig &cfg) {
  CsvTable t;
  const int bins = cfg.bins.empty() ? 200 : cfg.bins[0];
  put(t, "version", k_version);
  put(t, "command", "boundary");
  put(t, "n", std::to_string(cfg.n));
  put(t, "var", cfg.var);

  auto emit_1d = [&](const std::string &label, const std::vector<double> &xs,
                     auto bound_fn) {
    t.columns = {label, "lower", "upper", "feasible"};
    for (double x : xs) {
      const BoundaryResult r = bound_fn(x);
      t.rows.push_back({format_double(x, cfg.precision),
                        format_double(r.lower, cfg.precision),
                        format_double(r.upper, cfg.precision),
                        feasible_str(r.feasible)});
    }
  };

  if (cfg.var == "g2") {
    double lo = 0.0, hi = static_cast<double>(cfg.n);
    if (cfg.range)
      std::tie(lo, hi) = *cfg.range;
    const auto xs = grid(lo, hi, bins, cfg.log_axes);
    if (cfg.n == 3 && cfg.g3_fixed) {
      put(t, "g3", *cfg.g3_fixed, cfg.precision);
      emit_1d("n0", xs,
              [&](double n0) { return h3_g2_bounds(n0, *cfg.g3_fixed); });
    } else if (cfg.n == 2) {
      emit_1d("n0", xs, [](double n0) { return h2_g2_bounds(n0); });
    } else {
      emit_1d("n0", xs,
              [&](double n0) { return hn_gk_bounds(n0, 2, Truncation(cfg.n)); });
    }
  } else if (cfg.var == "g3" && cfg.n == 3 && cfg.n0_fixed) {
    put(t, "n0", *cfg.n0_fixed, cfg.precision);
    double lo = 0.0, hi = 4.0;
    if (cfg.range)
      std::tie(lo, hi) = *cfg.range;
    emit_1d("g2", grid(lo, hi, bins, cfg.log_axes),
            [&](double g2) { return h3_g3_bounds(*cfg.n0_fixed, g2); });
  } else if (cfg.var == "g3" && cfg.n == 3 && cfg.g2_fixed) {
    put(t, "g2", *cfg.g2_fixed, cfg.precision);
    double lo = 0.0, hi = 3.0;
    if (cfg.range)
      std::tie(lo, hi) = *cfg.range;
    emit_1d("n0", grid(lo, hi, bins, cfg.log_axes),
            [&](double n0) { return h3_g3_bounds(n0, *cfg.g2_fixed); });
  } else if (cfg.var == "g3" || cfg.var == "gk") {
    const int k = cfg.var == "g3" ? 3 : cfg.k;
    put(t, "k", std::to_string(k));
    double lo = 0.0, hi = static_cast<double>(cfg.n);
    if (cfg.range)
      std::tie(lo, hi) = *cfg.range;
    emit_1d("n0", grid(lo, hi, bins, cfg.log_axes),
            [&](double n0) { return hn_gk_bounds(n0, k, Truncation(cfg.n)); });
  } else if (cfg.var == "n0" && cfg.n == 2) {
    double lo = cfg.log_axes ? 1e-3 : 0.0, hi = cfg.log_axes ? 1e3 : 4.0;
    if (cfg.range)
      std::tie(lo, hi) = *cfg.range;
    t.columns = {"g2", "lower", "upper", "feasible"};
    for (double g2 : grid(lo, hi, bins, cfg.log_axes))
      t.rows.push_back({format_double(g2, cfg.precision), "0",
                        format_double(h2_n0_upper(g2), cfg.precision), "1"});
  } else if (cfg.var == "n0" && cfg.n == 3) {
    double lo = cfg.log_axes ? 1e-3 : 1e-2, hi = cfg.log_axes ? 1e3 : 2.0;
    double lo2 = lo, hi2 = hi;
    if (cfg.range)
      std::tie(lo, hi) = *cfg.range;
    if (cfg.range2)
      std::tie(lo2, hi2) = *cfg.range2;
    const int bins2 = cfg.bins.size() > 1 ? cfg.bins[1] : bins;
    t.columns = {"g2", "g3", "lower", "upper", "feasible"};
    for (double g2 : grid(lo, hi, bins, cfg.log_axes))
      for (double g3 : grid(lo2, hi2, bins2, cfg.log_axes))
        t.rows.push_back({format_double(g2, cfg.precision),
                          format_double(g3, cfg.precision), "0",
                          format_double(h3_n0_upper(g2, g3), cfg.precision),
                          "1"});
  } else {
    throw std::invalid_argument(
        "boundary: unsupported variable/fixed-value combination");
  }
  return t;
}

CsvTable density_table(const RunConfig &cfg) {
  if (cfg.plane.empty())
    throw std::invalid_argument("density: --plane is required");
  const auto comma = cfg.plane.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("density: plane must be written x,y");
  const std::string vx = cfg.plane.substr(0, comma);
  const std::string vy = cfg.plane.substr(comma + 1);

  auto default_range = [&](const std::string &v) -> std::pair<double, double> {
    if (v == "n0")
      return {0.0, static_cast<double>(cfg.n)};
    if (v == "g2")
      return {0.0, 4.0};
    if (v == "g3")
      return {0.0, 2.0};
    throw std::invalid_argument("density: unknown variable " + v);
  };

  std::function<double(double, double)> f;
  if (cfg.n == 2 && vx == "n0" && vy == "g2") {
    f = [](double n0, double g2) {
      GlauberPoint q;
      q.n0 = n0;
      q.g = {g2};
      return joint_density(q, Truncation(2)).value;
    };
  } else if (cfg.n == 3 && vx == "n0" && vy == "g2") {
    f = [](double x, double y) { return h3_reduced_n0_g2(x, y); };
  } else if (cfg.n == 3 && vx == "n0" && vy == "g3") {
    f = [](double x, double y) { return h3_reduced_n0_g3(x, y); };
  } else if (cfg.n == 3 && vx == "g2" && vy == "g3") {
    f = [](double x, double y) { return h3_joint_g2_g3(x, y); };
  } else {
    throw std::invalid_argument(
        "density: closed forms exist for N=2 plane n0,g2 and N=3 planes "
        "n0,g2 / n0,g3 / g2,g3");
  }

  auto [lo, hi] = cfg.range ? *cfg.range : default_range(vx);
  auto [lo2, hi2] = cfg.range2 ? *cfg.range2 : default_range(vy);
  const int bx = cfg.bins.empty() ? 100 : cfg.bins[0];
  const int by = cfg.bins.size() > 1 ? cfg.bins[1] : bx;

  CsvTable t;
  put(t, "version", k_version);
  put(t, "command", "density");
  put(t, "n", std::to_string(cfg.n));
  put(t, "plane", cfg.plane);
  t.columns = {vx, vy, "density"};
  for (double x : grid(lo, hi, bx, cfg.log_axes))
    for (double y : grid(lo2, hi2, by, cfg.log_axes))
      t.rows.push_back({format_double(x, cfg.precision),
                        format_double(y, cfg.precision),
                        format_double(f(x, y), cfg.precision)});
  return t;
}

CsvTable marginal_table(const RunConfig &cfg) {
  if (cfg.var.empty())
    throw std::invalid_argument("marginal: --var is required");
  std::function<double(double)> f;
  std::pair<double, double> def{0.0, static_cast<double>(cfg.n)};
  if (cfg.var == "n0") {
    if (cfg.n == 2)
      f = [](double x) { return h2_marginal_n0(x); };
    else if (cfg.n == 3)
      f = [](double x) { return h3_marginal_n0(x); };
    else
      f = [&](double x) { return irwin_hall_n0(x, Truncation(cfg.n)); };
  } else if (cfg.var == "g2" && cfg.n == 2) {
    f = [](double x) { return h2_marginal_g2(x); };
    def = {0.0, 4.0};
  } else if (cfg.var == "g2" && cfg.n == 3) {
    f = [](double x) { return h3_marginal_g2(x); };
    def = {0.0, 4.0};
  } else if (cfg.var == "g3" && cfg.n == 3) {
    f = [&](double x) { return h3_marginal_g3(x, cfg.quad_tol); };
    def = {0.0, 3.0};
  } else {
    throw std::invalid_argument("marginal: no closed form for var=" +
                                cfg.var + " at N=" + std::to_string(cfg.n) +
                                "; use the sampler");
  }
  auto [lo, hi] = cfg.range ? *cfg.range : def;
  const int bins = cfg.bins.empty() ? 200 : cfg.bins[0];
  CsvTable t;
  put(t, "version", k_version);
  put(t, "command", "marginal");
  put(t, "n", std::to_string(cfg.n));
  put(t, "var", cfg.var);
  put(t, "quad_tol", cfg.quad_tol, 6);
  t.columns = {cfg.var, "density"};
  for (double x : grid(lo, hi, bins, cfg.log_axes))
    t.rows.push_back({format_double(x, cfg.precision),
                      format_double(f(x), cfg.precision)});
  return t;
}

AxisSpec axis_for(const std::string &name, int n,
                  std::optional<std::pair<double, double>> range, int bins,
                  bool log_scale) {
  AxisSpec a;
  if (name == "n0") {
    a = population_axis(0.0, static_cast<double>(n), bins);
  } else if (name.size() >= 2 && name[0] == 'g') {
    const int k = std::stoi(name.substr(1));
    if (k < 2 || k > n)
      throw std::invalid_argument("axis " + name + " out of range for N=" +
                                  std::to_string(n));
    // thermal value k! anchors the interesting window
    a = correlator_axis(k, log_scale ? 1e-3 : 0.0,
                        4.0 * num::factorial(k), bins, log_scale);
  } else {
    throw std::invalid_argument("unknown axis variable " + name);
  }
  a.log_scale = log_scale;
  if (range) {
    a.lo = range->first;
    a.hi = range->second;
  }
  return a;
}

CsvTable histogram_to_table(const Histogram2D &h, const RunConfig &cfg) {
  CsvTable t;
  put(t, "version", k_version);
  put(t, "command", "sample");
  put(t, "n", std::to_string(cfg.n));
  put(t, "seed", std::to_string(cfg.seed));
  put(t, "count", std::to_string(cfg.count));
  put(t, "x", h.x.label());
  put(t, "y", h.y.label());
  put(t, "accepted", std::to_string(h.accepted));
  put(t, "outside", std::to_string(h.outside));
  t.columns = {h.x.label(), h.y.label(), "count", "density"};
  const auto ex = h.x.edges();
  const auto ey = h.y.edges();
  for (int i = 0; i < h.x.bins; ++i)
    for (int j = 0; j < h.y.bins; ++j) {
      const double cx = 0.5 * (ex[static_cast<size_t>(i)] +
                               ex[static_cast<size_t>(i) + 1]);
      const double cy = 0.5 * (ey[static_cast<size_t>(j)] +
                               ey[static_cast<size_t>(j) + 1]);
      t.rows.push_back({format_double(cx, cfg.precision),
                        format_double(cy, cfg.precision),
                        std::to_string(h.count(i, j)),
                        format_double(h.density(i, j), cfg.precision)});
    }
  return t;
}

CsvTable points_to_table(const SampleBatch &batch, const RunConfig &cfg) {
  CsvTable t;
  put(t, "version", k_version);
  put(t, "command", "sample");
  put(t, "n", std::to_string(cfg.n));
  put(t, "seed", std::to_string(cfg.seed));
  put(t, "count", std::to_string(cfg.count));
  put(t, "rejected", std::to_string(batch.rejected));
  t.columns = {"n0"};
  for (int k = 2; k <= batch.max_n; ++k)
    t.columns.push_back("g" + std::to_string(k));
  for (size_t i = 0; i < batch.size(); ++i) {
    std::vector<std::string> row;
    row.push_back(format_double(batch.n0[i], cfg.precision));
    const GlauberPoint q = batch.point(i);
    for (int k = 2; k <= batch.max_n; ++k)
      row.push_back(format_double(q.g_defined ? q.g_of(k)
                                              : std::nan(""),
                                  cfg.precision));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable sample_table(const RunConfig &cfg, SampleBatch &batch_out) {
  batch_out = sample_simplex(cfg.seed, Truncation(cfg.n), cfg.count,
                             cfg.threads);
  std::string hist = cfg.hist.empty() ? "n0,g2" : cfg.hist;
  const auto comma = hist.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("sample: --hist must be written x,y");
  const int bx = cfg.bins.empty() ? 60 : cfg.bins[0];
  const int by = cfg.bins.size() > 1 ? cfg.bins[1] : bx;
  const AxisSpec ax =
      axis_for(hist.substr(0, comma), cfg.n, cfg.range, bx, cfg.log_axes);
  const AxisSpec ay =
      axis_for(hist.substr(comma + 1), cfg.n, cfg.range2, by, cfg.log_axes);
  const Histogram2D h = histogram(batch_out, ax, ay);
  CsvTable t = histogram_to_table(h, cfg);
  put(t, "rejected", std::to_string(batch_out.rejected));
  put(t, "digest", std::to_string(batch_out.digest()));
  return t;
}

void emit(const CsvTable &table, const RunConfig &cfg,
          const std::string &path, std::ostream &fallback) {
  CsvTable stamped = table;
  put(stamped, "generated", timestamp_utc());
  std::ostringstream buf;
  if (cfg.format == Format::csv)
    write_csv(buf, stamped);
  else
    write_jsonl(buf, stamped);
  if (path.empty())
    fallback << buf.str();
  else
    write_file_atomic(path, buf.str());
}

} // namespace

CsvTable make_table(const RunConfig &cfg) {
  switch (cfg.command) {
  case Command::boundary:
    return boundary_table(cfg);
  case Command::density:
    return density_table(cfg);
  case Command::marginal:
    return marginal_table(cfg);
  case Command::sample: {
    SampleBatch batch;
    return sample_table(cfg, batch);
  }
  case Command::check:
    break;
  }
  throw std::logic_error("make_table: not a tabular command");
}

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  std::vector<char *> argv;
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "fockchart");
  argv.reserve(storage.size());
  for (auto &s : storage)
    argv.push_back(s.data());

  CLI::App app{"charting truncated oscillator spaces in intensity-correlator "
               "coordinates"};
  app.set_version_flag("--version", std::string("fockchart ") + k_version);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string range_str, range2_str, format_str = "csv", point_str;

  auto add_common = [&](CLI::App *sub, bool needs_out) {
    sub->add_option("--n", cfg.n, "truncation (maximum occupation)");
    sub->add_option("--bins", cfg.bins, "grid/bin counts")->delimiter(',');
    sub->add_option("--range", range_str, "axis range lo:hi");
    sub->add_option("--range2", range2_str, "second axis range lo:hi");
    sub->add_flag("--log", cfg.log_axes, "logarithmic axes");
    sub->add_option("--tol", cfg.quad_tol, "quadrature tolerance");
    sub->add_option("--precision", cfg.precision,
                    "significant digits in text output");
    sub->add_option("--format", format_str, "csv or jsonl");
    if (needs_out)
      sub->add_option("--out", cfg.out_path, "output path (default stdout)");
  };

  CLI::App *check = app.add_subcommand("check", "physicality of a tuple");
  check->add_option("--point", point_str, "n0,g2,...,gN")->required();
  check->add_option("--n", cfg.n, "truncation");
  check->add_flag("--ninf", cfg.n_infinite, "untruncated space");

  CLI::App *boundary =
      app.add_subcommand("boundary", "admissible intervals along a grid");
  boundary->add_option("--var", cfg.var, "bounded variable: g2,g3,gk,n0")
      ->required();
  boundary->add_option("--k", cfg.k, "correlator order for --var gk");
  boundary->add_option("--n0", cfg.n0_fixed, "fixed population");
  boundary->add_option("--g2", cfg.g2_fixed, "fixed g2");
  boundary->add_option("--g3", cfg.g3_fixed, "fixed g3");
  add_common(boundary, true);

  CLI::App *density =
      app.add_subcommand("density", "closed-form joint/reduced densities");
  density->add_option("--plane", cfg.plane, "x,y variables")->required();
  add_common(density, true);

  CLI::App *marginal =
      app.add_subcommand("marginal", "one-variable densities");
  marginal->add_option("--var", cfg.var, "n0, g2 or g3")->required();
  add_common(marginal, true);

  CLI::App *sample =
      app.add_subcommand("sample", "seeded uniform sampling and histograms");
  sample->add_option("--seed", cfg.seed, "RNG seed");
  sample->add_option("--count", cfg.count, "number of draws");
  sample->add_option("--threads", cfg.threads, "worker threads");
  sample->add_option("--hist", cfg.hist, "histogram variables x,y");
  sample->add_option("--points", cfg.points_path, "also dump raw points");
  add_common(sample, true);

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion &e) {
    out << app.version() << "\n";
    return exit_ok;
  } catch (const CLI::ParseError &e) {
    err << e.what() << "\n";
    return exit_malformed;
  }

  try {
    if (!range_str.empty())
      cfg.range = parse_range(range_str);
    if (!range2_str.empty())
      cfg.range2 = parse_range(range2_str);
    if (format_str == "jsonl")
      cfg.format = Format::jsonl;
    else if (format_str != "csv")
      throw std::invalid_argument("format must be csv or jsonl");
    if (cfg.precision < 1 || cfg.precision > 17)
      throw std::invalid_argument("precision must lie in [1, 17]");

    if (check->parsed()) {
      cfg.command = Command::check;
      std::vector<double> tuple;
      std::stringstream ss(point_str);
      std::string cell;
      while (std::getline(ss, cell, ','))
        tuple.push_back(std::stod(cell));
      const CheckReport rep = run_check(tuple, cfg.n, cfg.n_infinite);
      out << "verdict: " << (rep.physical ? "physical" : "unphysical")
          << "\n";
      if (!rep.p.empty()) {
        out << "P:";
        for (double v : rep.p)
          out << " " << format_double(v, cfg.precision);
        out << "\n";
      }
      if (!rep.violation.empty())
        out << "violated: " << rep.violation << "\n";
      for (const auto &f : rep.flags)
        out << "note: " << f << "\n";
      return rep.physical ? exit_ok : exit_unphysical;
    }

    if (boundary->parsed())
      cfg.command = Command::boundary;
    else if (density->parsed())
      cfg.command = Command::density;
    else if (marginal->parsed())
      cfg.command = Command::marginal;
    else if (sample->parsed())
      cfg.command = Command::sample;

    if (cfg.command == Command::sample) {
      SampleBatch batch;
      const CsvTable t = sample_table(cfg, batch);
      emit(t, cfg, cfg.out_path, out);
      if (!cfg.points_path.empty()) {
        const CsvTable pts = points_to_table(batch, cfg);
        emit(pts, cfg, cfg.points_path, out);
      }
      return exit_ok;
    }

    const CsvTable t = make_table(cfg);
    emit(t, cfg, cfg.out_path, out);
    return exit_ok;
  } catch (const QuadratureError &e) {
    err << "numerical failure: " << e.what()
        << " (value " << format_double(e.value, 12) << ", error estimate "
        << format_double(e.error_estimate, 12) << ")\n";
    return exit_numerical;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return exit_malformed;
  } catch (const std::domain_error &e) {
    err << "error: " << e.what() << "\n";
    return exit_malformed;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return exit_numerical;
  }
}

int run(int argc, char **argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i)
    args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

} // namespace fockchart::cli
