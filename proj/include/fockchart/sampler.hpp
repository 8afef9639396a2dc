#pragma once

#include "fockchart/core_map.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fockchart {

/// Uniform draws from the occupation simplex pushed forward to normalized
/// correlators. Storage is flat: row i of `g` holds (g2, ..., gN) for point
/// i, NaN when the draw fell below the population floor. Those degenerate
/// draws are counted in `rejected`, keep their population, and are skipped by
/// any histogram that bins a correlator axis.
///
/// Determinism: draw i belongs to chunk i/kChunk; each chunk is generated by
/// an independent engine seeded from (seed, chunk index), so the result is
/// bitwise identical for any thread count.
struct SampleBatch {
  static constexpr uint64_t kChunk = 1 << 16;

  uint64_t seed = 0;
  int max_n = 0;
  uint64_t requested = 0;
  std::vector<double> n0;
  std::vector<double> g;      // requested x (max_n - 1), row-major
  std::vector<uint8_t> g_ok;  // 1 when the g row is defined
  uint64_t rejected = 0;

  size_t size() const { return n0.size(); }
  GlauberPoint point(size_t i) const;
  uint64_t digest() const; // FNV-1a over the payload
};

SampleBatch sample_simplex(uint64_t seed, Truncation N, uint64_t count,
                           int threads = 1);

/// One histogram axis. `bins` equal-width cells between lo and hi, in log10
/// space when log_scale is set.
struct AxisSpec {
  enum class Var { population, correlator };
  Var var = Var::population;
  int k = 2; // correlator order when var == correlator
  double lo = 0.0;
  double hi = 1.0;
  int bins = 50;
  bool log_scale = false;

  std::vector<double> edges() const;
  std::string label() const;
};

AxisSpec population_axis(double lo, double hi, int bins);
AxisSpec correlator_axis(int k, double lo, double hi, int bins,
                         bool log_scale = false);

struct Histogram2D {
  AxisSpec x, y;
  std::vector<uint64_t> counts; // bins_x * bins_y, row-major in x
  uint64_t accepted = 0;        // points with all needed coordinates defined
  uint64_t outside = 0;         // accepted but off the axis ranges
  uint64_t count(int i, int j) const;
  double density(int i, int j) const; // count / (accepted * cell area)
};

struct Histogram1D {
  AxisSpec x;
  std::vector<uint64_t> counts;
  uint64_t accepted = 0;
  uint64_t outside = 0;
  double density(int i) const;
};

Histogram2D histogram(const SampleBatch &batch, const AxisSpec &x,
                      const AxisSpec &y);
Histogram1D histogram(const SampleBatch &batch, const AxisSpec &x);

/// Pearson test of a histogram against a target density. Expected cell
/// masses come from a midpoint subgrid of the density, are restricted to
/// cells with at least `min_expected` entries, and renormalized over that
/// set; dof is the number of compared cells minus one.
struct GoodnessOfFit {
  double chi2 = 0.0;
  long dof = 0;
  double z = 0.0; // (chi2 - dof) / sqrt(2 dof)
  double max_abs_residual = 0.0;
  std::vector<double> residuals; // per compared cell, (O-E)/sqrt(E)
  bool rejected(double nsigma = 3.0) const { return z > nsigma; }
};

GoodnessOfFit compare_to_density(const Histogram2D &h,
                                 const std::function<double(double, double)> &density,
                                 int subcells = 16, double min_expected = 5.0);
GoodnessOfFit compare_to_density(const Histogram1D &h,
                                 const std::function<double(double)> &density,
                                 int subcells = 32, double min_expected = 5.0);

} // namespace fockchart
