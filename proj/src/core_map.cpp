#include "fockchart/core_map.hpp"

#include "fockchart/numeric.hpp"
#include "fockchart/tolerances.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fockchart {

Truncation::Truncation(int n) : n_(n) {
  if (n < 0)
    throw std::invalid_argument("Truncation: n must be >= 0");
}

GlauberPoint vacuum_point(Truncation N) {
  GlauberPoint q;
  q.n0 = 0.0;
  q.g_defined = false;
  if (N.n() >= 2)
    q.g.assign(static_cast<size_t>(N.n() - 1),
               std::numeric_limits<double>::quiet_NaN());
  return q;
}

Matrix moment_matrix(Truncation N) {
  Matrix m(N.dim(), N.dim());
  for (int k = 0; k <= N.n(); ++k)
    for (int n = k; n <= N.n(); ++n)
      m(k, n) = num::falling_factorial(n, k);
  return m;
}

CorrelatorVector correlators_of(const FockDistribution &p) {
  if (p.p.empty())
    throw std::invalid_argument("correlators_of: empty distribution");
  num::NeumaierSum norm;
  for (double v : p.p)
    norm.add(v);
  if (std::abs(norm.value() - 1.0) > tol::norm_eps)
    throw std::invalid_argument(
        "correlators_of: probabilities do not sum to 1");

  const int nmax = p.max_n();
  CorrelatorVector out;
  out.g_raw.assign(static_cast<size_t>(nmax) + 1, 0.0);
  out.g_raw[0] = 1.0;
  for (int k = 1; k <= nmax; ++k) {
    num::BasicNeumaierSum<long double> acc;
    for (int n = k; n <= nmax; ++n)
      acc.add(static_cast<long double>(num::falling_factorial(n, k)) *
              static_cast<long double>(p.p[static_cast<size_t>(n)]));
    out.g_raw[static_cast<size_t>(k)] = static_cast<double>(acc.value());
  }
  return out;
}

FockDistribution fock_of(const CorrelatorVector &g) {
  if (g.g_raw.empty())
    throw std::invalid_argument("fock_of: empty correlator vector");
  const int nmax = g.max_n();
  FockDistribution out;
  out.p.assign(static_cast<size_t>(nmax) + 1, 0.0);
  for (int i = 0; i <= nmax; ++i) {
    num::BasicNeumaierSum<long double> acc;
    for (int j = i; j <= nmax; ++j) {
      long double coeff;
      if (i <= 170 && j - i <= 170)
        coeff = 1.0L / (static_cast<long double>(num::factorial(i)) *
                        static_cast<long double>(num::factorial(j - i)));
      else
        coeff = std::exp(-num::log_factorial(i) - num::log_factorial(j - i));
      const long double term =
          static_cast<long double>(g.g_raw[static_cast<size_t>(j)]) * coeff;
      acc.add(((i + j) % 2 == 0) ? term : -term);
    }
    out.p[static_cast<size_t>(i)] = static_cast<double>(acc.value());
  }
  return out;
}

FockDistribution fock_of(const CorrelatorVector &g, Truncation N) {
  if (g.max_n() != N.n())
    throw std::invalid_argument("fock_of: truncation/vector size mismatch");
  return fock_of(g);
}

GlauberPoint normalize(const CorrelatorVector &g) {
  if (g.g_raw.empty())
    throw std::invalid_argument("normalize: empty correlator vector");
  const int nmax = g.max_n();
  const double n0 = nmax >= 1 ? g.g_raw[1] : 0.0;
  if (n0 < 0.0)
    throw std::invalid_argument("normalize: negative population");
  GlauberPoint q;
  q.n0 = n0;
  if (n0 == 0.0) {
    for (int k = 2; k <= nmax; ++k)
      if (g.g_raw[static_cast<size_t>(k)] > tol::phys_eps)
        throw std::domain_error(
            "normalize: zero population with nonzero higher moments");
    q.g_defined = false;
    if (nmax >= 2)
      q.g.assign(static_cast<size_t>(nmax - 1),
                 std::numeric_limits<double>::quiet_NaN());
    return q;
  }
  q.g_defined = true;
  double scale = n0;
  for (int k = 2; k <= nmax; ++k) {
    scale *= n0;
    q.g.push_back(g.g_raw[static_cast<size_t>(k)] / scale);
  }
  return q;
}

CorrelatorVector denormalize(const GlauberPoint &q) {
  if (q.n0 < 0.0)
    throw std::invalid_argument("denormalize: negative population");
  const int nmax = q.max_n();
  CorrelatorVector g;
  g.g_raw.assign(static_cast<size_t>(nmax) + 1, 0.0);
  g.g_raw[0] = 1.0;
  if (nmax < 1)
    return g;
  if (q.n0 == 0.0)
    return g; // vacuum: every moment vanishes
  if (!q.g_defined)
    throw std::invalid_argument(
        "denormalize: undefined correlators with nonzero population");
  g.g_raw[1] = q.n0;
  double scale = q.n0;
  for (int k = 2; k <= nmax; ++k) {
    scale *= q.n0;
    g.g_raw[static_cast<size_t>(k)] = scale * q.g_of(k);
  }
  return g;
}

double normalization_jacobian(double n0, Truncation N) {
  if (n0 < 0.0)
    throw std::invalid_argument("normalization_jacobian: negative population");
  if (N.n() < 1)
    throw std::invalid_argument("normalization_jacobian: requires N >= 1");
  const double exponent =
      (static_cast<double>(N.n()) * N.n() + N.n() - 2.0) / 2.0;
  if (n0 == 0.0)
    return exponent == 0.0 ? 1.0 : 0.0;
  return std::pow(n0, exponent);
}

} // namespace fockchart
