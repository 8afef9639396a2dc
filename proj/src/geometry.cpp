#include "fockchart/geometry.hpp"

#include "fockchart/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace fockchart {

double simplex_volume(Truncation N) {
  return std::sqrt(static_cast<double>(N.n()) + 1.0) / num::factorial(N.n());
}

Matrix fundamental_form(Truncation N) {
  if (N.n() < 1)
    throw std::invalid_argument("fundamental_form: requires N >= 1");
  const int n = N.n();
  Matrix f(n, n);
  for (int k = 1; k <= n; ++k) {
    for (int kp = k; kp <= n; ++kp) {
      num::NeumaierSum acc;
      for (int i = 0; i <= std::min(k, kp); ++i) {
        const double d = num::factorial(i) * num::factorial(i) *
                         num::factorial(k - i) * num::factorial(kp - i);
        acc.add(1.0 / d);
      }
      const double sign = ((k + kp) % 2 == 0) ? 1.0 : -1.0;
      f(k - 1, kp - 1) = sign * acc.value();
      f(kp - 1, k - 1) = f(k - 1, kp - 1);
    }
  }
  return f;
}

double fundamental_form_sqrt_det(Truncation N) {
  const Matrix f = fundamental_form(N);
  const double det = num::det_lu(f.data, f.rows);
  return std::sqrt(std::abs(det));
}

bool is_physical(const GlauberPoint &q, Truncation N, double slack) {
  if (q.n0 == 0.0 && !q.g_defined)
    return true; // the vacuum
  if (q.max_n() != N.n())
    throw std::invalid_argument("is_physical: dimension mismatch");
  if (q.n0 < 0.0)
    return false;
  if (q.g_defined)
    for (double v : q.g)
      if (v < 0.0 || !std::isfinite(v))
        return false;
  const FockDistribution p = fock_of(denormalize(q));
  for (double v : p.p)
    if (v < -slack || v > 1.0 + slack)
      return false;
  return true;
}

DensityValue joint_density(const GlauberPoint &q, Truncation N) {
  if (N.n() < 1)
    throw std::invalid_argument("joint_density: requires N >= 1");
  DensityValue out;
  out.in_support = is_physical(q, N);
  if (!out.in_support)
    return out;
  const double exponent =
      (static_cast<double>(N.n()) * N.n() + N.n() - 2.0) / 2.0;
  if (q.n0 == 0.0) {
    out.value = exponent == 0.0 ? 1.0 : 0.0;
    return out;
  }
  if (N.n() <= 10)
    out.value = std::pow(q.n0, exponent) / num::superfactorial(N.n() - 1);
  else
    out.value = std::exp(exponent * std::log(q.n0) -
                         num::log_superfactorial(N.n() - 1));
  return out;
}

} // namespace fockchart
