#include "fockchart/sampler.hpp"

#include "fockchart/geometry.hpp"
#include "fockchart/marginals.hpp"
#include "fockchart/tolerances.hpp"

#include "oracle_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace fockchart;

TEST_CASE("sampling is deterministic and thread-count independent") {
  const SampleBatch a = sample_simplex(42, Truncation(3), 200000, 1);
  const SampleBatch b = sample_simplex(42, Truncation(3), 200000, 1);
  CHECK(a.digest() == b.digest());
  const SampleBatch c = sample_simplex(42, Truncation(3), 200000, 3);
  CHECK(a.digest() == c.digest());
  const SampleBatch d = sample_simplex(43, Truncation(3), 200000, 1);
  CHECK(a.digest() != d.digest());
  CHECK(a.size() == 200000);
}

TEST_CASE("every draw is physical") {
  const SampleBatch batch = sample_simplex(7, Truncation(4), 20000, 2);
  for (size_t i = 0; i < batch.size(); i += 7) {
    const GlauberPoint q = batch.point(i);
    CHECK(is_physical(q, Truncation(4)));
  }
  CHECK(batch.rejected == 0); // vacuum-floor draws are measure-zero-rare
}

TEST_CASE("occupation marginals follow the flat-simplex law") {
  // each occupation weight of a uniform simplex point is Beta(1, N)
  const int n = 4;
  const uint64_t count = 20000;
  const SampleBatch batch = sample_simplex(99, Truncation(n), count, 1);
  // reconstruct the weights from the stored correlators
  std::vector<std::vector<double>> weights(static_cast<size_t>(n) + 1);
  for (size_t i = 0; i < batch.size(); ++i) {
    const FockDistribution p = fock_of(denormalize(batch.point(i)));
    for (int j = 0; j <= n; ++j)
      weights[static_cast<size_t>(j)].push_back(p.p[static_cast<size_t>(j)]);
  }
  // 3-sigma-equivalent KS threshold
  const double crit = 1.817 / std::sqrt(static_cast<double>(count));
  for (int j = 0; j <= n; ++j) {
    const double d = oracle::ks_statistic(
        weights[static_cast<size_t>(j)],
        [n](double x) { return 1.0 - std::pow(1.0 - x, n); });
    CHECK(d < crit);
  }
}

TEST_CASE("population histogram matches the sum-of-uniforms density") {
  for (int n = 2; n <= 8; ++n) {
    const SampleBatch batch =
        sample_simplex(1000 + static_cast<uint64_t>(n), Truncation(n), 100000, 2);
    const Histogram1D h =
        histogram(batch, population_axis(0.0, static_cast<double>(n), 40));
    const GoodnessOfFit fit = compare_to_density(
        h, [n](double x) { return irwin_hall_n0(x, Truncation(n)); });
    INFO("N=", n, " chi2=", fit.chi2, " dof=", fit.dof, " z=", fit.z);
    CHECK_FALSE(fit.rejected(3.0));
  }
}

TEST_CASE("pair correlator never exceeds its two-quanta ceiling") {
  const SampleBatch batch = sample_simplex(5, Truncation(2), 200000, 2);
  double worst = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) {
    const GlauberPoint q = batch.point(i);
    if (q.g_defined)
      worst = std::max(worst, q.g_of(2) * q.n0);
  }
  CHECK(worst <= 1.0 + 1e-9);
}

TEST_CASE("projected bounds and the moment chain hold on draws") {
  const SampleBatch batch = sample_simplex(17, Truncation(5), 20000, 2);
  for (size_t i = 0; i < batch.size(); i += 11) {
    const GlauberPoint q = batch.point(i);
    if (!q.g_defined)
      continue;
    CHECK(moment_chain_holds(denormalize(q), Truncation(5)));
    for (int k = 2; k <= 5; ++k) {
      const BoundaryResult b = hn_gk_bounds(q.n0, k, Truncation(5));
      REQUIRE(b.feasible);
      CHECK(q.g_of(k) >= b.lower - 1e-9 * std::max(1.0, b.lower));
      CHECK(q.g_of(k) <= b.upper + 1e-9 * std::max(1.0, b.upper));
    }
  }
}

TEST_CASE("two-quanta joint histogram matches the exact density") {
  const SampleBatch batch = sample_simplex(2016, Truncation(2), 400000, 2);
  const Histogram2D h = histogram(batch, population_axis(0.0, 2.0, 50),
                                  correlator_axis(2, 0.0, 3.0, 50));
  auto density = [](double n0, double g2) {
    GlauberPoint q;
    q.n0 = n0;
    q.g = {g2};
    return joint_density(q, Truncation(2)).value;
  };
  const GoodnessOfFit fit = compare_to_density(h, density);
  INFO("chi2=", fit.chi2, " dof=", fit.dof, " z=", fit.z);
  CHECK_FALSE(fit.rejected(3.0));

  SUBCASE("negative control: a wrong density is rejected") {
    auto wrong = [&density](double n0, double g2) {
      return density(n0, g2) > 0.0 ? n0 * n0 * n0 : 0.0;
    };
    const GoodnessOfFit bad = compare_to_density(h, wrong);
    CHECK(bad.rejected(3.0));
  }
}

TEST_CASE("histograms keep the accounting straight") {
  const SampleBatch batch = sample_simplex(3, Truncation(3), 50000, 1);
  const Histogram2D h = histogram(batch, population_axis(0.5, 2.0, 10),
                                  correlator_axis(2, 0.0, 1.0, 10));
  uint64_t total = 0;
  for (uint64_t c : h.counts)
    total += c;
  CHECK(total + h.outside == h.accepted);
  CHECK(h.accepted == batch.size() - batch.rejected);

  const Histogram1D h1 = histogram(batch, population_axis(0.0, 3.0, 20));
  uint64_t total1 = 0;
  for (uint64_t c : h1.counts)
    total1 += c;
  CHECK(total1 + h1.outside == h1.accepted);
  CHECK(h1.accepted == batch.size()); // population histograms keep all draws
}

TEST_CASE("log-binned axes") {
  const AxisSpec a = correlator_axis(2, 1e-2, 1e2, 8, true);
  const auto e = a.edges();
  CHECK(e.front() == doctest::Approx(1e-2));
  CHECK(e.back() == doctest::Approx(1e2));
  CHECK(e[4] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(correlator_axis(2, 0.0, 1.0, 4, true).edges(),
                  std::invalid_argument);
}

TEST_CASE("flat input yields a flat histogram") {
  // synthetic uniform points pushed through the comparison plumbing
  SampleBatch batch;
  batch.seed = 1;
  batch.max_n = 2;
  std::mt19937_64 rng(314159);
  const uint64_t count = 100000;
  batch.requested = count;
  batch.n0.resize(count);
  batch.g.resize(count);
  batch.g_ok.assign(count, 1);
  for (uint64_t i = 0; i < count; ++i) {
    batch.n0[i] = 2.0 * oracle::u01(rng);
    batch.g[i] = 3.0 * oracle::u01(rng);
  }
  const Histogram2D h = histogram(batch, population_axis(0.0, 2.0, 20),
                                  correlator_axis(2, 0.0, 3.0, 20));
  const GoodnessOfFit fit =
      compare_to_density(h, [](double, double) { return 1.0 / 6.0; });
  CHECK_FALSE(fit.rejected(3.0));
}
