#include "fockchart/boundaries.hpp"

#include "fockchart/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace fockchart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

BoundaryResult infeasible(BoundVar var, int k = 0) {
  BoundaryResult r;
  r.lower = kNaN;
  r.upper = kNaN;
  r.which_var = var;
  r.k = k;
  r.feasible = false;
  return r;
}

double floor_lower_bound(double n0, int k) {
  // [(m)_k + k (n0 - m) (m)_{k-1}] / n0^k, zero on m <= k-2.
  if (n0 <= 0.0)
    return 0.0;
  const int m = static_cast<int>(std::floor(n0));
  const double head = num::falling_factorial(m, k);
  const double tail = k * (n0 - m) * num::falling_factorial(m, k - 1);
  if (head == 0.0 && tail == 0.0)
    return 0.0;
  return (head + tail) / std::pow(n0, k);
}

double cubic(double x, double g2, double g3) {
  return 1.0 - x + 0.5 * g2 * x * x - g3 * x * x * x / 6.0;
}

double cubic_deriv(double x, double g2, double g3) {
  return -1.0 + g2 * x - 0.5 * g3 * x * x;
}

} // namespace

BoundaryResult h2_g2_bounds(double n0) {
  if (n0 < 0.0 || n0 > 2.0)
    return infeasible(BoundVar::g2);
  BoundaryResult r;
  r.which_var = BoundVar::g2;
  r.feasible = true;
  if (n0 == 0.0) {
    r.lower = 0.0;
    r.upper = kInf;
    return r;
  }
  const double m = std::floor(n0);
  r.lower = m * (2.0 * n0 - m - 1.0) / (n0 * n0);
  r.upper = 1.0 / n0;
  return r;
}

double h2_n0_upper(double g2) {
  if (g2 < 0.0)
    throw std::invalid_argument("h2_n0_upper: negative g2");
  if (g2 >= 0.5)
    return 1.0 / g2;
  if (g2 < 1e-6) {
    // series of (1 - sqrt(1 - 2x))/x, avoids the 0/0 at the origin
    return 1.0 + g2 * (0.5 + g2 * (0.5 + g2 * 0.625));
  }
  return (1.0 - std::sqrt(1.0 - 2.0 * g2)) / g2;
}

BoundaryResult h3_g2_bounds(double n0, double g3) {
  const BoundaryResult pair = hn_gk_bounds(n0, 3, Truncation(3));
  const double scale = std::max(1.0, std::abs(g3));
  if (!pair.feasible || g3 < pair.lower - tol::phys_eps * scale ||
      g3 > pair.upper + tol::phys_eps * scale)
    return infeasible(BoundVar::g2);
  BoundaryResult r;
  r.which_var = BoundVar::g2;
  r.feasible = true;
  if (n0 == 0.0) {
    r.lower = 0.0;
    r.upper = kInf;
    return r;
  }
  r.upper = 0.5 * n0 * g3 + 1.0 / n0;
  r.lower = std::max(n0 * g3, n0 * g3 / 3.0 + 2.0 / n0 - 2.0 / (n0 * n0));
  return r;
}

BoundaryResult h3_g3_bounds(double n0, double g2) {
  const BoundaryResult pair = hn_gk_bounds(n0, 2, Truncation(3));
  const double scale = std::max(1.0, std::abs(g2));
  if (!pair.feasible || g2 < pair.lower - tol::phys_eps * scale ||
      g2 > pair.upper + tol::phys_eps * scale)
    return infeasible(BoundVar::g3);
  BoundaryResult r;
  r.which_var = BoundVar::g3;
  r.feasible = true;
  if (n0 == 0.0) {
    r.lower = 0.0;
    r.upper = kInf;
    return r;
  }
  const double inv = 1.0 / n0;
  r.upper = std::min(g2 * inv,
                     3.0 * g2 * inv - 6.0 * inv * inv + 6.0 * inv * inv * inv);
  r.lower = std::max(0.0, 2.0 * g2 * inv - 2.0 * inv * inv);
  return r;
}

double aux_f0(double g2, double g3) {
  if (g2 < 0.0 || g3 < 0.0)
    throw std::invalid_argument("aux_f0: negative correlator");
  const double radicand = 6.0 * g2 * g2 * g2 * g3 * g3 -
                          3.0 * g2 * g2 * g3 * g3 -
                          18.0 * g2 * g3 * g3 * g3 + 9.0 * g3 * g3 * g3 * g3 +
                          8.0 * g3 * g3 * g3;
  if (radicand < 0.0)
    throw std::domain_error("aux_f0: negative radicand (three-real-root "
                            "regime, complex branch required)");
  return std::sqrt(radicand);
}

double aux_f1(double g2, double g3) {
  if (g2 < 0.0)
    throw std::invalid_argument("aux_f1: negative g2");
  if (g3 <= 0.0)
    throw std::invalid_argument("aux_f1: requires g3 > 0");

  using cplx = std::complex<double>;
  const double radicand = 6.0 * g2 * g2 * g2 * g3 * g3 -
                          3.0 * g2 * g2 * g3 * g3 -
                          18.0 * g2 * g3 * g3 * g3 + 9.0 * g3 * g3 * g3 * g3 +
                          8.0 * g3 * g3 * g3;
  const cplx f0 = std::sqrt(cplx(radicand, 0.0));
  const double shift = -g2 * g2 * g2 + 3.0 * g2 * g3 - 3.0 * g3 * g3;
  const cplx w = cplx(shift, 0.0) + f0;
  const double wscale =
      g2 * g2 * g2 + 3.0 * g2 * g3 + 3.0 * g3 * g3 + std::abs(f0);

  double x;
  if (std::abs(w) <= 1e-12 * wscale) {
    // The radical cancels the shift exactly when the depressed cubic has no
    // linear term (g2^2 = 2 g3); the closed form then divides zero by zero.
    x = g2 / g3 + std::cbrt(-2.0 * shift) / g3;
  } else {
    const cplx c0 = num::principal_cbrt(w);
    const cplx omega(-0.5, 0.5 * std::sqrt(3.0));
    const double q = 2.0 * g3 - g2 * g2;

    // Near the discriminant curve two roots collide and the imaginary part
    // of the colliding pair shrinks to rounding noise; the filter must stay
    // loose enough to keep them, the polish below removes the offset.
    double best = kInf;
    double best_im = kInf;
    double fallback = kNaN;
    for (int j = 0; j < 3; ++j) {
      cplx c = c0;
      if (j == 1)
        c *= omega;
      else if (j == 2)
        c *= omega * omega;
      const cplx root = (cplx(g2, 0.0) - c + cplx(q, 0.0) / c) / g3;
      const double re = root.real();
      const double im = std::abs(root.imag());
      if (im < best_im) {
        best_im = im;
        fallback = re;
      }
      if (im <= 1e-4 * std::max(1.0, std::abs(re)) && re > 0.0 && re < best)
        best = re;
    }
    x = std::isfinite(best) ? best : fallback;
    if (!std::isfinite(x))
      throw std::domain_error("aux_f1: no usable cube-root branch");
  }

  // The closed form loses accuracy for small g3 (terms ~1/g3 cancel) and
  // near root collisions; polish on the cubic itself. Plain Newton still
  // gains a binary digit per step on a double root.
  for (int it = 0; it < 14; ++it) {
    const double fx = cubic(x, g2, g3);
    const double dfx = cubic_deriv(x, g2, g3);
    if (fx == 0.0 || dfx == 0.0)
      break;
    const double step = fx / dfx;
    const double xn = x - step;
    if (!std::isfinite(xn) || xn <= 0.0)
      break;
    if (std::abs(cubic(xn, g2, g3)) < std::abs(fx))
      x = xn;
    else
      break;
    if (std::abs(step) <= 1e-15 * x)
      break;
  }
  return x;
}

double aux_f2(double g3) {
  if (g3 < 0.0)
    throw std::invalid_argument("aux_f2: negative g3");
  using cplx = std::complex<double>;
  const cplx shifted = std::pow(cplx(g3 - 2.0 / 9.0, 0.0), 1.5);
  const cplx v = cplx(-8748.0 * g3 * g3 - 4860.0 * g3 + 54.0, 0.0) +
                 8748.0 * shifted * std::sqrt(g3);
  const cplx c = num::principal_cbrt(v);
  const double cbrt2 = std::cbrt(2.0);
  const cplx term1 = c / (18.0 * cbrt2);
  const cplx term2 = cplx(324.0 * g3 + 9.0, 0.0) / (9.0 * cbrt2 * cbrt2 * c);
  return (term1 + term2).real() + 1.0 / 6.0;
}

double h3_n0_upper(double g2, double g3) {
  if (g2 < 0.0 || g3 < 0.0)
    throw std::invalid_argument("h3_n0_upper: negative correlator");
  if (g3 == 0.0)
    return h2_n0_upper(g2);
  if (g2 == 0.0)
    return 0.0; // a vanishing pair moment forbids any population here

  // The bound is the first zero crossing among the reconstructed occupation
  // weights: the two-quanta weight at g2/g3, the single-quantum weight at
  // the smaller quadratic root, the ground-state weight at the cubic root.
  double bound = g2 / g3;

  double disc = g2 * g2 - 2.0 * g3;
  const double disc_scale = g2 * g2 + 2.0 * g3;
  if (std::abs(disc) <= 1e-13 * disc_scale)
    disc = 0.0; // root collision: the quadratic root merges with g2/g3
  if (disc >= 0.0) {
    const double t = 2.0 * g3 / (g2 * g2);
    double r;
    if (t < 1e-4)
      r = (1.0 + t * (0.25 + t * (0.125 + t * 5.0 / 64.0))) / g2;
    else
      r = (g2 - std::sqrt(disc)) / g3;
    bound = std::min(bound, r);
  }

  // Past the crossover curve the quadratic root is the binding one and the
  // cubic never undercuts it; skipping the cubic there also avoids its
  // ill-conditioned root-collision vicinity (the crossover is exactly where
  // the cubic's two lower roots merge).
  const bool cubic_may_bind =
      (g3 <= 2.0 / 9.0) ? (g2 < aux_f2(g3) - 1e-9)
                        : (g2 < std::sqrt(2.0 * g3) - 1e-9);
  if (cubic_may_bind)
    bound = std::min(bound, aux_f1(g2, g3));
  return bound;
}

BoundaryResult hn_gk_bounds(double n0, int k, Truncation N) {
  if (k < 2 || k > N.n())
    throw std::invalid_argument("hn_gk_bounds: requires 2 <= k <= N");
  if (n0 < 0.0 || n0 > static_cast<double>(N.n()))
    return infeasible(BoundVar::gk, k);
  BoundaryResult r;
  r.which_var = (k == 2) ? BoundVar::g2 : (k == 3 ? BoundVar::g3 : BoundVar::gk);
  r.k = k;
  r.feasible = true;
  if (n0 == 0.0) {
    r.lower = 0.0;
    r.upper = kInf;
    return r;
  }
  r.upper = num::factorial(N.n() - 1) / num::factorial(N.n() - k) /
            std::pow(n0, k - 1);
  r.lower = floor_lower_bound(n0, k);
  return r;
}

FockDistribution coin_state(int mu, int nu, double n0, Truncation N) {
  if (mu < 0 || mu >= nu || nu > N.n())
    throw std::invalid_argument("coin_state: requires 0 <= mu < nu <= N");
  if (n0 < mu || n0 > nu)
    throw std::invalid_argument("coin_state: population outside [mu, nu]");
  FockDistribution p;
  p.p.assign(static_cast<size_t>(N.dim()), 0.0);
  const double span = nu - mu;
  p.p[static_cast<size_t>(mu)] = (nu - n0) / span;
  p.p[static_cast<size_t>(nu)] = (n0 - mu) / span;
  return p;
}

bool moment_chain_holds(const CorrelatorVector &g, Truncation N,
                        double slack) {
  if (g.max_n() != N.n())
    throw std::invalid_argument("moment_chain_holds: dimension mismatch");
  for (int k = 2; k <= N.n(); ++k) {
    const double lhs =
        num::factorial(N.n() - k + 1) * g.g_raw[static_cast<size_t>(k - 1)];
    const double rhs =
        num::factorial(N.n() - k) * g.g_raw[static_cast<size_t>(k)];
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (lhs < rhs - slack * scale)
      return false;
  }
  return true;
}

bool g2_ceiling_holds(const GlauberPoint &q, Truncation N, double slack) {
  if (N.n() < 2 || !q.g_defined || q.n0 == 0.0)
    return true;
  const double ceiling = (static_cast<double>(N.n()) - 1.0) / q.n0;
  return q.g_of(2) <= ceiling + slack * std::max(1.0, ceiling);
}

} // namespace fockchart
