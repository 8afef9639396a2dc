#include "fockchart/core_map.hpp"
#include "fockchart/tolerances.hpp"

#include "oracle_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fockchart;

TEST_CASE("moment matrix entries") {
  const Matrix m2 = moment_matrix(Truncation(2));
  const double expect2[3][3] = {{1, 1, 1}, {0, 1, 2}, {0, 0, 2}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(m2(r, c) == expect2[r][c]);

  const Matrix m0 = moment_matrix(Truncation(0));
  CHECK(m0.rows == 1);
  CHECK(m0(0, 0) == 1.0);

  const Matrix m3 = moment_matrix(Truncation(3));
  CHECK(m3(3, 0) == 0.0);
  CHECK(m3(3, 1) == 0.0);
  CHECK(m3(3, 2) == 0.0);
  CHECK(m3(3, 3) == 6.0); // 3 * 2 * 1
}

TEST_CASE("forward map on pinned states") {
  SUBCASE("pure two-quanta state") {
    const CorrelatorVector g = correlators_of(FockDistribution{{0, 0, 1}});
    CHECK(g.g_raw[0] == doctest::Approx(1.0));
    CHECK(g.g_raw[1] == doctest::Approx(2.0));
    CHECK(g.g_raw[2] == doctest::Approx(2.0));
  }
  SUBCASE("vacuum") {
    const CorrelatorVector g =
        correlators_of(FockDistribution{{1, 0, 0, 0}});
    CHECK(g.g_raw[0] == doctest::Approx(1.0));
    for (size_t i = 1; i < g.g_raw.size(); ++i)
      CHECK(g.g_raw[i] == 0.0);
  }
  SUBCASE("mixed state") {
    const CorrelatorVector g =
        correlators_of(FockDistribution{{0.25, 0.5, 0.25}});
    CHECK(g.g_raw[1] == doctest::Approx(1.0));
    CHECK(g.g_raw[2] == doctest::Approx(0.5));
  }
  SUBCASE("rejects bad normalization") {
    CHECK_THROWS_AS(correlators_of(FockDistribution{{0.5, 0.6}}),
                    std::invalid_argument);
  }
}

TEST_CASE("inverse map on pinned moment vectors") {
  SUBCASE("pure two-quanta moments") {
    const FockDistribution p = fock_of(CorrelatorVector{{1, 2, 2}});
    CHECK(p.p[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.p[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.p[2] == doctest::Approx(1.0));
  }
  SUBCASE("vacuum moments") {
    const FockDistribution p = fock_of(CorrelatorVector{{1, 0, 0, 0, 0}});
    CHECK(p.p[0] == doctest::Approx(1.0));
    for (size_t i = 1; i < p.p.size(); ++i)
      CHECK(p.p[i] == doctest::Approx(0.0));
  }
  SUBCASE("unit population, unit g2") {
    // direct evaluation of the two-quanta reconstruction
    const FockDistribution p = fock_of(CorrelatorVector{{1, 1, 1}});
    CHECK(p.p[0] == doctest::Approx(0.5));
    CHECK(p.p[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.p[2] == doctest::Approx(0.5));
  }
  SUBCASE("truncation mismatch throws") {
    CHECK_THROWS_AS(fock_of(CorrelatorVector{{1, 1, 1}}, Truncation(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("normalize / denormalize") {
  SUBCASE("fock |2> point") {
    const GlauberPoint q = normalize(CorrelatorVector{{1, 2, 2}});
    CHECK(q.n0 == doctest::Approx(2.0));
    CHECK(q.g_of(2) == doctest::Approx(0.5));
    const CorrelatorVector back = denormalize(q);
    CHECK(back.g_raw[0] == doctest::Approx(1.0));
    CHECK(back.g_raw[1] == doctest::Approx(2.0));
    CHECK(back.g_raw[2] == doctest::Approx(2.0));
  }
  SUBCASE("unit population is the identity") {
    const GlauberPoint q = normalize(CorrelatorVector{{1, 1, 1, 1}});
    CHECK(q.n0 == doctest::Approx(1.0));
    CHECK(q.g_of(2) == doctest::Approx(1.0));
    CHECK(q.g_of(3) == doctest::Approx(1.0));
    GlauberPoint w;
    w.n0 = 1.0;
    w.g = {0.7, 0.3};
    const CorrelatorVector g = denormalize(w);
    CHECK(g.g_raw[2] == doctest::Approx(0.7));
    CHECK(g.g_raw[3] == doctest::Approx(0.3));
  }
  SUBCASE("fractional population") {
    const GlauberPoint q = normalize(CorrelatorVector{{1, 0.5, 0.125}});
    CHECK(q.n0 == doctest::Approx(0.5));
    CHECK(q.g_of(2) == doctest::Approx(0.5));
    GlauberPoint w;
    w.n0 = 0.5;
    w.g = {2.0};
    const CorrelatorVector g = denormalize(w);
    CHECK(g.g_raw[2] == doctest::Approx(0.5));
  }
  SUBCASE("vacuum handling") {
    const GlauberPoint q = normalize(CorrelatorVector{{1, 0, 0}});
    CHECK(q.n0 == 0.0);
    CHECK_FALSE(q.g_defined);
    const CorrelatorVector g = denormalize(q);
    CHECK(g.g_raw[1] == 0.0);
    CHECK(g.g_raw[2] == 0.0);
    CHECK_THROWS_AS(normalize(CorrelatorVector{{1, 0, 0.5}}),
                    std::domain_error);
  }
}

TEST_CASE("normalization jacobian") {
  CHECK(normalization_jacobian(1.5, Truncation(2)) == doctest::Approx(2.25));
  CHECK(normalization_jacobian(1.0, Truncation(7)) == doctest::Approx(1.0));
  CHECK(normalization_jacobian(2.0, Truncation(3)) == doctest::Approx(32.0));
}

TEST_CASE("roundtrip identity over random states") {
  std::mt19937_64 rng(12345);
  for (int n = 1; n <= 20; ++n) {
    // Rounding the stored moments costs O(3^N) ulp worst-case on the way
    // back; for uniform draws the observed level crosses 1e-10 around
    // N = 14, so the assertion scales past that point.
    const double bound =
        std::max(tol::round_eps, std::ldexp(8e-15, n));
    for (int rep = 0; rep < 200; ++rep) {
      const FockDistribution p = oracle::random_fock(rng, n);
      const CorrelatorVector g = correlators_of(p);
      const FockDistribution back = fock_of(g);
      for (size_t i = 0; i < p.p.size(); ++i)
        CHECK(std::abs(back.p[i] - p.p[i]) < bound);
    }
  }
}

TEST_CASE("reverse roundtrip holds even for unphysical moment vectors") {
  // the inverse map is total: moments in, occupation weights out, and the
  // forward map must take them back regardless of physicality
  std::mt19937_64 rng(2718);
  for (int n = 1; n <= 12; ++n) {
    for (int rep = 0; rep < 100; ++rep) {
      CorrelatorVector g;
      g.g_raw.assign(static_cast<size_t>(n) + 1, 0.0);
      g.g_raw[0] = 1.0;
      double scale = 1.0;
      for (int k = 1; k <= n; ++k) {
        scale *= k;
        g.g_raw[static_cast<size_t>(k)] = oracle::u01(rng) * scale;
      }
      const CorrelatorVector back = correlators_of(fock_of(g));
      // same conditioning growth as the forward direction: rough moment
      // vectors reconstruct occupation weights with alternating blow-up
      const double bound = std::max(tol::round_eps, std::ldexp(1.5e-13, n));
      for (size_t k = 0; k < g.g_raw.size(); ++k)
        CHECK(std::abs(back.g_raw[k] - g.g_raw[k]) <=
              bound * std::max(1.0, std::abs(g.g_raw[k])));
    }
  }
}

TEST_CASE("explicit inverse agrees with the triangular solve") {
  std::mt19937_64 rng(777);
  for (int n = 1; n <= 20; ++n) {
    for (int rep = 0; rep < 100; ++rep) {
      const CorrelatorVector g =
          correlators_of(oracle::random_fock(rng, n));
      const FockDistribution a = fock_of(g);
      const FockDistribution b =
          oracle::solve_against_moment_matrix(g, Truncation(n));
      for (size_t i = 0; i < a.p.size(); ++i)
        CHECK(std::abs(a.p[i] - b.p[i]) < 1e-10);
    }
  }
}

TEST_CASE("truncation embedding leaves shared correlators fixed") {
  std::mt19937_64 rng(99);
  for (int n = 1; n <= 10; ++n) {
    FockDistribution p = oracle::random_fock(rng, n);
    const CorrelatorVector g = correlators_of(p);
    FockDistribution embedded = p;
    embedded.p.push_back(0.0);
    const CorrelatorVector ge = correlators_of(embedded);
    for (size_t k = 0; k < g.g_raw.size(); ++k)
      CHECK(ge.g_raw[k] == g.g_raw[k]);
  }
}

TEST_CASE("vanishing correlator truncates the state") {
  // a zero k-th moment forces every occupation above k-1 to vanish
  std::mt19937_64 rng(4321);
  for (int rep = 0; rep < 50; ++rep) {
    FockDistribution p = oracle::random_fock(rng, 6);
    for (int n = 3; n <= 6; ++n)
      p.p[static_cast<size_t>(n)] = 0.0;
    double sum = 0.0;
    for (double v : p.p)
      sum += v;
    for (double &v : p.p)
      v /= sum;
    const CorrelatorVector g = correlators_of(p);
    CHECK(g.g_raw[3] == doctest::Approx(0.0));
    const FockDistribution back = fock_of(g);
    for (int n = 3; n <= 6; ++n)
      CHECK(std::abs(back.p[static_cast<size_t>(n)]) < 1e-12);
  }
}

TEST_CASE("factorial chain holds for every forward image") {
  std::mt19937_64 rng(31);
  for (int n = 2; n <= 12; ++n)
    for (int rep = 0; rep < 100; ++rep) {
      const CorrelatorVector g =
          correlators_of(oracle::random_fock(rng, n));
      CHECK(moment_chain_holds(g, Truncation(n)));
    }
}
