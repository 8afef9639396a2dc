#include "fockchart/sampler.hpp"

#include "fockchart/numeric.hpp"
#include "fockchart/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace fockchart {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double u01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t chunk_seed(uint64_t seed, uint64_t chunk) {
  uint64_t s = seed + 0x9E3779B97F4A7C15ULL * (chunk + 1);
  return num::splitmix64(s);
}

void fill_chunk(SampleBatch &batch, uint64_t chunk, uint64_t &rejected_out) {
  const int n = batch.max_n;
  const int dim = n + 1;
  const int ng = std::max(0, n - 1);
  const uint64_t begin = chunk * SampleBatch::kChunk;
  const uint64_t end =
      std::min(batch.requested, begin + SampleBatch::kChunk);
  std::mt19937_64 rng(chunk_seed(batch.seed, chunk));
  std::vector<double> p(static_cast<size_t>(dim));
  uint64_t rejected = 0;

  for (uint64_t i = begin; i < end; ++i) {
    // exponential spacings give an exactly uniform point of the simplex
    double sum = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double e = -std::log1p(-u01(rng));
      p[static_cast<size_t>(j)] = e;
      sum += e;
    }
    for (int j = 0; j < dim; ++j)
      p[static_cast<size_t>(j)] /= sum;

    double n0 = 0.0;
    for (int j = 1; j < dim; ++j)
      n0 += j * p[static_cast<size_t>(j)];
    batch.n0[i] = n0;

    double *row = batch.g.data() + i * static_cast<size_t>(ng);
    if (n0 < tol::n0_floor) {
      rejected++;
      batch.g_ok[i] = 0;
      for (int k = 0; k < ng; ++k)
        row[k] = kNaN;
      continue;
    }
    batch.g_ok[i] = 1;
    double scale = n0;
    for (int k = 2; k <= n; ++k) {
      scale *= n0;
      double gk = 0.0;
      for (int j = k; j < dim; ++j)
        gk += num::falling_factorial(j, k) * p[static_cast<size_t>(j)];
      row[k - 2] = gk / scale;
    }
  }
  rejected_out += rejected;
}

} // namespace

GlauberPoint SampleBatch::point(size_t i) const {
  GlauberPoint q;
  q.n0 = n0[i];
  const int ng = std::max(0, max_n - 1);
  q.g.assign(g.begin() + static_cast<long>(i * static_cast<size_t>(ng)),
             g.begin() + static_cast<long>((i + 1) * static_cast<size_t>(ng)));
  q.g_defined = g_ok[i] != 0;
  return q;
}

uint64_t SampleBatch::digest() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&h](const void *data, size_t bytes) {
    const unsigned char *p = static_cast<const unsigned char *>(data);
    for (size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix_bytes(&seed, sizeof(seed));
  mix_bytes(&max_n, sizeof(max_n));
  mix_bytes(&requested, sizeof(requested));
  mix_bytes(&rejected, sizeof(rejected));
  if (!n0.empty())
    mix_bytes(n0.data(), n0.size() * sizeof(double));
  if (!g.empty())
    mix_bytes(g.data(), g.size() * sizeof(double));
  if (!g_ok.empty())
    mix_bytes(g_ok.data(), g_ok.size());
  return h;
}

SampleBatch sample_simplex(uint64_t seed, Truncation N, uint64_t count,
                           int threads) {
  if (count < 1)
    throw std::invalid_argument("sample_simplex: count must be >= 1");
  if (threads < 1)
    threads = 1;
  SampleBatch batch;
  batch.seed = seed;
  batch.max_n = N.n();
  batch.requested = count;
  batch.n0.assign(count, 0.0);
  batch.g_ok.assign(count, 0);
  const size_t ng = static_cast<size_t>(std::max(0, N.n() - 1));
  batch.g.assign(count * ng, 0.0);

  const uint64_t nchunks = (count + SampleBatch::kChunk - 1) / SampleBatch::kChunk;
  if (threads == 1 || nchunks == 1) {
    uint64_t rejected = 0;
    for (uint64_t c = 0; c < nchunks; ++c)
      fill_chunk(batch, c, rejected);
    batch.rejected = rejected;
    return batch;
  }

  std::vector<uint64_t> rejected(static_cast<size_t>(threads), 0);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&batch, &rejected, t, threads, nchunks] {
      for (uint64_t c = static_cast<uint64_t>(t); c < nchunks;
           c += static_cast<uint64_t>(threads))
        fill_chunk(batch, c, rejected[static_cast<size_t>(t)]);
    });
  }
  for (auto &th : pool)
    th.join();
  batch.rejected = 0;
  for (uint64_t r : rejected)
    batch.rejected += r;
  return batch;
}

std::vector<double> AxisSpec::edges() const {
  if (bins < 1 || !(hi > lo))
    throw std::invalid_argument("AxisSpec: malformed axis");
  if (log_scale && lo <= 0.0)
    throw std::invalid_argument("AxisSpec: log axis requires lo > 0");
  std::vector<double> e(static_cast<size_t>(bins) + 1);
  if (log_scale) {
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i <= bins; ++i)
      e[static_cast<size_t>(i)] =
          std::pow(10.0, llo + (lhi - llo) * i / bins);
  } else {
    for (int i = 0; i <= bins; ++i)
      e[static_cast<size_t>(i)] = lo + (hi - lo) * i / bins;
  }
  e.front() = lo;
  e.back() = hi;
  return e;
}

std::string AxisSpec::label() const {
  if (var == Var::population)
    return "n0";
  return "g" + std::to_string(k);
}

AxisSpec population_axis(double lo, double hi, int bins) {
  AxisSpec a;
  a.var = AxisSpec::Var::population;
  a.lo = lo;
  a.hi = hi;
  a.bins = bins;
  return a;
}

AxisSpec correlator_axis(int k, double lo, double hi, int bins,
                         bool log_scale) {
  AxisSpec a;
  a.var = AxisSpec::Var::correlator;
  a.k = k;
  a.lo = lo;
  a.hi = hi;
  a.bins = bins;
  a.log_scale = log_scale;
  return a;
}

namespace {

int bin_index(const AxisSpec &a, double v) {
  // half-open cells; the exact upper edge counts as outside
  if (!(v >= a.lo) || !(v < a.hi))
    return -1;
  double frac;
  if (a.log_scale)
    frac = (std::log10(v) - std::log10(a.lo)) /
           (std::log10(a.hi) - std::log10(a.lo));
  else
    frac = (v - a.lo) / (a.hi - a.lo);
  int idx = static_cast<int>(frac * a.bins);
  if (idx >= a.bins)
    idx = a.bins - 1;
  return idx;
}

bool axis_value(const SampleBatch &batch, const AxisSpec &a, size_t i,
                double &out) {
  if (a.var == AxisSpec::Var::population) {
    out = batch.n0[i];
    return true;
  }
  if (!batch.g_ok[i])
    return false;
  if (a.k < 2 || a.k > batch.max_n)
    throw std::invalid_argument("histogram: correlator order out of range");
  out = batch.g[i * static_cast<size_t>(batch.max_n - 1) +
                static_cast<size_t>(a.k - 2)];
  return true;
}

} // namespace

uint64_t Histogram2D::count(int i, int j) const {
  return counts[static_cast<size_t>(i) * y.bins + j];
}

double Histogram2D::density(int i, int j) const {
  const std::vector<double> ex = x.edges();
  const std::vector<double> ey = y.edges();
  const double area = (ex[static_cast<size_t>(i) + 1] - ex[static_cast<size_t>(i)]) *
                      (ey[static_cast<size_t>(j) + 1] - ey[static_cast<size_t>(j)]);
  if (accepted == 0 || area <= 0.0)
    return 0.0;
  return static_cast<double>(count(i, j)) /
         (static_cast<double>(accepted) * area);
}

double Histogram1D::density(int i) const {
  const std::vector<double> ex = x.edges();
  const double w = ex[static_cast<size_t>(i) + 1] - ex[static_cast<size_t>(i)];
  if (accepted == 0 || w <= 0.0)
    return 0.0;
  return static_cast<double>(counts[static_cast<size_t>(i)]) /
         (static_cast<double>(accepted) * w);
}

Histogram2D histogram(const SampleBatch &batch, const AxisSpec &x,
                      const AxisSpec &y) {
  Histogram2D h;
  h.x = x;
  h.y = y;
  h.counts.assign(static_cast<size_t>(x.bins) * y.bins, 0);
  for (size_t i = 0; i < batch.size(); ++i) {
    double vx, vy;
    if (!axis_value(batch, x, i, vx) || !axis_value(batch, y, i, vy))
      continue;
    h.accepted++;
    const int bx = bin_index(x, vx);
    const int by = bin_index(y, vy);
    if (bx < 0 || by < 0) {
      h.outside++;
      continue;
    }
    h.counts[static_cast<size_t>(bx) * y.bins + by]++;
  }
  return h;
}

Histogram1D histogram(const SampleBatch &batch, const AxisSpec &x) {
  Histogram1D h;
  h.x = x;
  h.counts.assign(static_cast<size_t>(x.bins), 0);
  for (size_t i = 0; i < batch.size(); ++i) {
    double vx;
    if (!axis_value(batch, x, i, vx))
      continue;
    h.accepted++;
    const int bx = bin_index(x, vx);
    if (bx < 0) {
      h.outside++;
      continue;
    }
    h.counts[static_cast<size_t>(bx)]++;
  }
  return h;
}

namespace {

// Midpoint mass of `density` over each cell, subdivided in the axis scale.
std::vector<double> cell_masses(const AxisSpec &x, const AxisSpec &y,
                                const std::function<double(double, double)> &density,
                                int subcells) {
  const std::vector<double> ex = x.edges();
  const std::vector<double> ey = y.edges();
  std::vector<double> m(static_cast<size_t>(x.bins) * y.bins, 0.0);
  auto subedges = [subcells](double lo, double hi, bool log_scale) {
    std::vector<double> e(static_cast<size_t>(subcells) + 1);
    for (int s = 0; s <= subcells; ++s) {
      if (log_scale)
        e[static_cast<size_t>(s)] = std::pow(
            10.0, std::log10(lo) +
                      (std::log10(hi) - std::log10(lo)) * s / subcells);
      else
        e[static_cast<size_t>(s)] = lo + (hi - lo) * s / subcells;
    }
    return e;
  };
  for (int i = 0; i < x.bins; ++i) {
    const auto sx = subedges(ex[static_cast<size_t>(i)],
                             ex[static_cast<size_t>(i) + 1], x.log_scale);
    for (int j = 0; j < y.bins; ++j) {
      const auto sy = subedges(ey[static_cast<size_t>(j)],
                               ey[static_cast<size_t>(j) + 1], y.log_scale);
      double mass = 0.0;
      for (int a = 0; a < subcells; ++a) {
        const double wx = sx[static_cast<size_t>(a) + 1] - sx[static_cast<size_t>(a)];
        const double cx = 0.5 * (sx[static_cast<size_t>(a)] + sx[static_cast<size_t>(a) + 1]);
        for (int b = 0; b < subcells; ++b) {
          const double wy = sy[static_cast<size_t>(b) + 1] - sy[static_cast<size_t>(b)];
          const double cy = 0.5 * (sy[static_cast<size_t>(b)] + sy[static_cast<size_t>(b) + 1]);
          mass += density(cx, cy) * wx * wy;
        }
      }
      m[static_cast<size_t>(i) * y.bins + j] = mass;
    }
  }
  return m;
}

GoodnessOfFit pearson(const std::vector<uint64_t> &counts,
                      const std::vector<double> &masses, uint64_t accepted,
                      double min_expected) {
  GoodnessOfFit fit;
  std::vector<size_t> kept;
  for (size_t i = 0; i < counts.size(); ++i)
    if (masses[i] * static_cast<double>(accepted) >= min_expected)
      kept.push_back(i);
  if (kept.size() < 2) {
    fit.dof = 0;
    return fit;
  }
  double obs_total = 0.0, mass_total = 0.0;
  for (size_t i : kept) {
    obs_total += static_cast<double>(counts[i]);
    mass_total += masses[i];
  }
  fit.residuals.reserve(kept.size());
  for (size_t i : kept) {
    const double expected = obs_total * masses[i] / mass_total;
    const double r =
        (static_cast<double>(counts[i]) - expected) / std::sqrt(expected);
    fit.residuals.push_back(r);
    fit.chi2 += r * r;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  fit.dof = static_cast<long>(kept.size()) - 1;
  fit.z = (fit.chi2 - static_cast<double>(fit.dof)) /
          std::sqrt(2.0 * static_cast<double>(fit.dof));
  return fit;
}

} // namespace

GoodnessOfFit compare_to_density(const Histogram2D &h,
                                 const std::function<double(double, double)> &density,
                                 int subcells, double min_expected) {
  const std::vector<double> masses = cell_masses(h.x, h.y, density, subcells);
  return pearson(h.counts, masses, h.accepted, min_expected);
}

GoodnessOfFit compare_to_density(const Histogram1D &h,
                                 const std::function<double(double)> &density,
                                 int subcells, double min_expected) {
  AxisSpec dummy;
  dummy.var = AxisSpec::Var::population;
  dummy.lo = 0.0;
  dummy.hi = 1.0;
  dummy.bins = 1;
  const std::vector<double> masses = cell_masses(
      h.x, dummy, [&density](double x, double) { return density(x); },
      subcells);
  return pearson(h.counts, masses, h.accepted, min_expected);
}

} // namespace fockchart
