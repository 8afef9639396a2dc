#include "fockchart/marginals.hpp"

#include "fockchart/boundaries.hpp"
#include "fockchart/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fockchart {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double PiecewiseDensity1D::operator()(double x) const {
  if (pieces.empty())
    return 0.0;
  if (x < pieces.front().lo || (x == pieces.front().lo && !lo_closed))
    return 0.0;
  for (size_t i = 0; i < pieces.size(); ++i) {
    const bool last = i + 1 == pieces.size();
    if (x < pieces[i].hi || (last && hi_closed && x == pieces[i].hi))
      return pieces[i].f(x);
  }
  return 0.0;
}

std::vector<double> PiecewiseDensity1D::breakpoints() const {
  std::vector<double> b;
  for (size_t i = 0; i + 1 < pieces.size(); ++i)
    b.push_back(pieces[i].hi);
  return b;
}

double PiecewiseDensity1D::support_lo() const {
  return pieces.empty() ? 0.0 : pieces.front().lo;
}

double PiecewiseDensity1D::support_hi() const {
  return pieces.empty() ? 0.0 : pieces.back().hi;
}

num::QuadratureResult PiecewiseDensity1D::integrate(double abs_tol,
                                                    double rel_tol) const {
  num::QuadratureResult total;
  total.converged = true;
  for (const Piece &piece : pieces) {
    num::QuadratureResult r;
    if (std::isinf(piece.hi))
      r = num::integrate_half_infinite(piece.f, piece.lo, abs_tol, rel_tol);
    else
      r = num::integrate(piece.f, piece.lo, piece.hi, abs_tol, rel_tol);
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }
  return total;
}

double h2_marginal_n0(double n0) {
  if (n0 < 0.0 || n0 > 2.0)
    return 0.0;
  return n0 <= 1.0 ? n0 : 2.0 - n0;
}

double h2_marginal_g2(double g2) {
  if (g2 < 0.0)
    return 0.0;
  if (g2 > 0.5)
    return 1.0 / (3.0 * g2 * g2 * g2);
  if (g2 < 1e-4) {
    // 1 - sqrt(1-2x) - x = (x^2/2)(1 + x + 5x^2/4 + 7x^3/4 + ...), so the
    // branch reduces to (1 + x + 5x^2/4 + 7x^3/4)^(3/2) / 3.
    const double b = 1.0 + g2 * (1.0 + g2 * (1.25 + g2 * 1.75));
    return std::pow(b, 1.5) / 3.0;
  }
  const double a = 1.0 - std::sqrt(1.0 - 2.0 * g2) - g2;
  return std::sqrt(8.0 / 9.0) * std::pow(a, 1.5) / (g2 * g2 * g2);
}

double h3_marginal_n0(double n0) {
  if (n0 < 0.0 || n0 > 3.0)
    return 0.0;
  if (n0 <= 1.0)
    return 0.5 * n0 * n0;
  if (n0 <= 2.0)
    return -0.5 * (2.0 * n0 * n0 - 6.0 * n0 + 3.0);
  return 0.5 * (n0 * n0 - 6.0 * n0 + 9.0);
}

// The four closed-form branches integrate to 2/3 as printed in the source
// material; the n0-marginalization route (whose own g2-integral provably
// recovers the population marginal) fixes the overall factor at 3/2. The
// numbers below carry that factor.
double h3_marginal_g2(double g2) {
  if (g2 <= 0.0)
    return 0.0;
  const double g = g2;
  const double g4 = g * g * g * g;
  double v;
  if (g < 5e-3) {
    // the closed form loses ~1/g^4 digits to cancellation here
    return g / 10.0 + 5.0 * g * g / 24.0;
  }
  if (g <= 0.5) {
    const double s3 = std::sqrt(9.0 - 12.0 * g);
    const double s1 = std::sqrt(1.0 - 2.0 * g);
    v = (2.0 * g *
             ((-12.0 * s3 + 16.0 * s1 + 75.0) * g + 63.0 * s3 - 56.0 * s1 -
              190.0) -
         81.0 * s3 + 48.0 * s1 + 195.0) /
        (40.0 * g4);
  } else if (g <= 2.0 / 3.0) {
    const double s3 = std::sqrt(9.0 - 12.0 * g);
    const double s46 = std::sqrt(4.0 - 6.0 * g);
    v = (2.0 * g *
             (-3.0 * (4.0 * s3 - 16.0 * s46 + 75.0) * g + 63.0 * s3 -
              224.0 * s46 + 370.0) -
         81.0 * s3 + 256.0 * s46 - 271.0) /
        (40.0 * g4);
  } else if (g <= 0.75) {
    const double s3 = std::sqrt(9.0 - 12.0 * g);
    v = 3.0 * (2.0 * s3 * (21.0 - 4.0 * g) * g - 27.0 * s3 + 5.0) /
        (20.0 * g4);
  } else {
    v = 3.0 / (4.0 * g4);
  }
  return std::max(v, 0.0);
}

double h3_reduced_n0_g2(double n0, double g2) {
  if (n0 <= 0.0 || n0 > 3.0 || g2 < 0.0)
    return 0.0;
  const BoundaryResult pair = hn_gk_bounds(n0, 2, Truncation(3));
  if (!pair.feasible || g2 < pair.lower || g2 > pair.upper)
    return 0.0;
  const double t1 = 3.0 / n0 - 3.0 / (n0 * n0);
  const double t2 = 1.0 / n0;
  const double n2 = n0 * n0;
  const double n3 = n2 * n0;
  const double n4 = n3 * n0;
  double v;
  if (g2 < t1) {
    if (g2 <= t2)
      v = 3.0 * n2 - 3.0 * n3 + 1.5 * g2 * n4;
    else
      v = 3.0 * n2 - 2.0 * n3 + 0.5 * g2 * n4;
  } else {
    if (g2 < t2)
      v = 0.5 * g2 * n4;
    else
      v = n3 - 0.5 * g2 * n4;
  }
  return std::max(v, 0.0);
}

double h3_reduced_n0_g3(double n0, double g3) {
  if (n0 <= 0.0 || n0 > 3.0 || g3 < 0.0)
    return 0.0;
  const double la = 1.0 / n0 - 0.5 * n0 * g3;
  const double lb = 2.0 / (n0 * n0) - 1.0 / n0 + n0 * g3 / 6.0;
  const double len = std::min(la, lb);
  if (len <= 0.0)
    return 0.0;
  return 0.5 * std::pow(n0, 5) * len;
}

double irwin_hall_n0(double x, Truncation N) {
  const int n = N.n();
  if (n < 1)
    throw std::invalid_argument("irwin_hall_n0: requires N >= 1");
  if (x <= 0.0 || x >= static_cast<double>(n))
    return (n == 1 && x == 0.0) ? 1.0 : 0.0;
  num::NeumaierSum acc;
  for (int k = 0; k <= n; ++k) {
    const double d = x - k;
    const double sgn = d >= 0.0 ? 1.0 : -1.0; // breakpoints take the right branch
    // (x-k)^(N-1) sgn(x-k) = |x-k|^(N-1) sgn(x-k)^N
    const double mag = std::pow(std::abs(d), n - 1);
    const double term =
        num::binomial(n, k) * mag * (n % 2 == 1 ? sgn : 1.0);
    acc.add((k % 2 == 0) ? term : -term);
  }
  return acc.value() / (2.0 * num::factorial(n - 1));
}

double h3_joint_g2_g3(double g2, double g3) {
  const double u = h3_n0_upper(g2, g3);
  return std::pow(u, 6) / 12.0;
}

namespace {

// Breakpoints of n0 -> h3_reduced_n0_g3(n0, g3): zeros of either interval
// length and their crossing, located by scan + bisection.
std::vector<double> g3_slice_breakpoints(double g3) {
  auto la = [g3](double n0) { return 1.0 / n0 - 0.5 * n0 * g3; };
  auto lb = [g3](double n0) {
    return 2.0 / (n0 * n0) - 1.0 / n0 + n0 * g3 / 6.0;
  };
  std::vector<std::function<double(double)>> fns = {
      la, lb, [&](double n0) { return la(n0) - lb(n0); }};
  std::vector<double> breaks;
  const int steps = 300;
  const double lo = 1e-9, hi = 3.0;
  for (const auto &fn : fns) {
    double prev_x = lo, prev_v = fn(lo);
    for (int i = 1; i <= steps; ++i) {
      const double x = lo + (hi - lo) * i / steps;
      const double v = fn(x);
      if ((prev_v > 0) != (v > 0))
        breaks.push_back(num::bisect_root(fn, prev_x, x, 1e-13));
      prev_x = x;
      prev_v = v;
    }
  }
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

} // namespace

num::QuadratureResult h3_marginal_g3_integral(double g3, double quad_tol) {
  num::QuadratureResult total;
  total.converged = true;
  if (g3 < 0.0)
    return total;
  const std::vector<double> breaks = g3_slice_breakpoints(g3);
  auto f = [g3](double n0) { return h3_reduced_n0_g3(n0, g3); };
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] - breaks[i] < 1e-12)
      continue;
    const num::QuadratureResult r =
        num::integrate(f, breaks[i], breaks[i + 1], quad_tol * 1e-3, quad_tol);
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }
  return total;
}

double h3_marginal_g3(double g3, double quad_tol) {
  if (quad_tol <= 0.0)
    throw std::invalid_argument("h3_marginal_g3: tolerance must be positive");
  const num::QuadratureResult r = h3_marginal_g3_integral(g3, quad_tol);
  if (!r.converged)
    throw QuadratureError("h3_marginal_g3: quadrature did not reach the "
                          "requested tolerance",
                          r.value, r.error);
  return r.value;
}

PiecewiseDensity1D h2_population_density() {
  PiecewiseDensity1D d;
  d.pieces.push_back({0.0, 1.0, [](double x) { return x; }});
  d.pieces.push_back({1.0, 2.0, [](double x) { return 2.0 - x; }});
  return d;
}

PiecewiseDensity1D h2_g2_density() {
  PiecewiseDensity1D d;
  d.pieces.push_back({0.0, 0.5, [](double x) { return h2_marginal_g2(x); }});
  d.pieces.push_back(
      {0.5, kInf, [](double x) { return 1.0 / (3.0 * x * x * x); }});
  return d;
}

PiecewiseDensity1D h3_population_density() {
  PiecewiseDensity1D d;
  d.pieces.push_back({0.0, 1.0, [](double x) { return 0.5 * x * x; }});
  d.pieces.push_back({1.0, 2.0, [](double x) {
    return -0.5 * (2.0 * x * x - 6.0 * x + 3.0);
  }});
  d.pieces.push_back(
      {2.0, 3.0, [](double x) { return 0.5 * (x * x - 6.0 * x + 9.0); }});
  return d;
}

PiecewiseDensity1D h3_g2_density() {
  PiecewiseDensity1D d;
  auto f = [](double x) { return h3_marginal_g2(x); };
  d.pieces.push_back({0.0, 0.5, f});
  d.pieces.push_back({0.5, 2.0 / 3.0, f});
  d.pieces.push_back({2.0 / 3.0, 0.75, f});
  d.pieces.push_back(
      {0.75, kInf, [](double x) { return 0.75 / (x * x * x * x); }});
  return d;
}

PiecewiseDensity1D irwin_hall_density(Truncation N) {
  PiecewiseDensity1D d;
  if (N.n() == 1) { // uniform; keeps the right endpoint off the jump
    d.pieces.push_back({0.0, 1.0, [](double) { return 1.0; }});
    return d;
  }
  for (int k = 0; k < N.n(); ++k)
    d.pieces.push_back({static_cast<double>(k), static_cast<double>(k + 1),
                        [N](double x) { return irwin_hall_n0(x, N); }});
  return d;
}

} // namespace fockchart
