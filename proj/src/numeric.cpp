#include "fockchart/numeric.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace fockchart::num {

namespace {

const std::array<double, 171> &factorial_table() {
  static const std::array<double, 171> table = [] {
    std::array<double, 171> t{};
    t[0] = 1.0;
    for (int i = 1; i <= 170; ++i)
      t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table;
}

} // namespace

double factorial(int n) {
  if (n < 0)
    throw std::invalid_argument("factorial: negative argument");
  if (n <= 170)
    return factorial_table()[static_cast<size_t>(n)];
  return std::exp(log_factorial(n));
}

double log_factorial(int n) {
  if (n < 0)
    throw std::invalid_argument("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double falling_factorial(int n, int k) {
  if (k < 0)
    throw std::invalid_argument("falling_factorial: negative order");
  if (n < k)
    return 0.0;
  double prod = 1.0;
  for (int p = 0; p < k; ++p)
    prod *= static_cast<double>(n - p);
  return prod;
}

double binomial(int n, int k) {
  if (k < 0 || k > n)
    return 0.0;
  if (n <= 170)
    return factorial(n) / (factorial(k) * factorial(n - k));
  return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

double superfactorial(int n) {
  if (n < 0)
    throw std::invalid_argument("superfactorial: negative argument");
  double prod = 1.0;
  for (int i = 2; i <= n; ++i)
    prod *= factorial(i);
  return prod;
}

double log_superfactorial(int n) {
  if (n < 0)
    throw std::invalid_argument("log_superfactorial: negative argument");
  double s = 0.0;
  for (int i = 2; i <= n; ++i)
    s += log_factorial(i);
  return s;
}

namespace {

struct SimpsonPanel {
  double value;
  double fa, fm, fb;
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

constexpr long kEvalBudget = 2'000'000;

void adapt(const std::function<double(double)> &f, double a, double b,
           double fa, double fm, double fb, double whole, double tol,
           int depth, int max_depth, QuadratureResult &out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  out.evaluations += 2;
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  // Give up splitting when the tree is too deep or the work budget is gone;
  // an unachievable tolerance (for instance one below the integrand's own
  // rounding noise) must end in an honest error estimate, not runaway
  // recursion.
  if (depth >= max_depth || out.evaluations > kEvalBudget) {
    out.value += left + right + delta / 15.0;
    out.error += std::abs(delta) / 15.0;
    out.converged = false;
    return;
  }
  const double noise_floor =
      5e-15 * (std::abs(left) + std::abs(right) + std::abs(whole));
  if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise_floor) {
    out.value += left + right + delta / 15.0;
    out.error += std::abs(delta) / 15.0;
    return;
  }
  adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth, out);
  adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth, out);
}

} // namespace

QuadratureResult integrate(const std::function<double(double)> &f, double a,
                           double b, double abs_tol, double rel_tol,
                           int max_depth) {
  QuadratureResult out;
  out.converged = true;
  if (a == b)
    return out;
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  out.evaluations = 3;
  const double whole = simpson(fa, fm, fb, b - a);
  // First pass with the absolute tolerance; tighten with a relative target
  // once a magnitude estimate exists.
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
  adapt(f, a, b, fa, fm, fb, whole, tol, 0, max_depth, out);
  if (out.error > std::max(abs_tol, rel_tol * std::abs(out.value)) * 1.5)
    out.converged = false;
  return out;
}

QuadratureResult integrate_half_infinite(const std::function<double(double)> &f,
                                         double a, double abs_tol,
                                         double rel_tol) {
  // x = a + t/(1-t), dx = dt/(1-t)^2, t in [0, 1)
  auto g = [&](double t) {
    const double om = 1.0 - t;
    const double x = a + t / om;
    return f(x) / (om * om);
  };
  // Keep away from t = 1 where the weight diverges; the truncation error is
  // the integrand tail past x ~ 1/eps, negligible for decaying densities.
  return integrate(g, 0.0, 1.0 - 1e-9, abs_tol, rel_tol);
}

double bisect_root(const std::function<double(double)> &f, double lo,
                   double hi, double x_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::invalid_argument("bisect_root: no sign change on bracket");
  while (hi - lo > x_tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0)
      return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double det_lu(const std::vector<double> &a, int n) {
  if (static_cast<int>(a.size()) != n * n)
    throw std::invalid_argument("det_lu: size mismatch");
  std::vector<long double> m(a.begin(), a.end());
  long double det = 1.0L;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    long double best = std::abs(m[static_cast<size_t>(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const long double v = std::abs(m[static_cast<size_t>(r) * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0L)
      return 0.0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c)
        std::swap(m[static_cast<size_t>(pivot) * n + c],
                  m[static_cast<size_t>(col) * n + c]);
      det = -det;
    }
    const long double d = m[static_cast<size_t>(col) * n + col];
    det *= d;
    for (int r = col + 1; r < n; ++r) {
      const long double factor = m[static_cast<size_t>(r) * n + col] / d;
      if (factor == 0.0L)
        continue;
      for (int c = col; c < n; ++c)
        m[static_cast<size_t>(r) * n + c] -=
            factor * m[static_cast<size_t>(col) * n + c];
    }
  }
  return static_cast<double>(det);
}

std::complex<double> principal_cbrt(std::complex<double> z) {
  if (z == std::complex<double>(0.0, 0.0))
    return {0.0, 0.0};
  return std::pow(z, 1.0 / 3.0);
}

uint64_t splitmix64(uint64_t &state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace fockchart::num
