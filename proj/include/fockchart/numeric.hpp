#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace fockchart::num {

/// n! as a double. Exact for n <= 22, correctly rounded through n = 170.
double factorial(int n);

/// log(n!)
double log_factorial(int n);

/// Falling factorial (n)_k = n (n-1) ... (n-k+1). Zero for integer n < k.
double falling_factorial(int n, int k);

double binomial(int n, int k);

/// Superfactorial sf(n) = prod_{i=0}^{n} i!. Overflows past n = 18; use the
/// log variant beyond that.
double superfactorial(int n);
double log_superfactorial(int n);

/// Compensated accumulation for sums with severe cancellation.
template <typename T = double> class BasicNeumaierSum {
public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

private:
  T sum_ = 0;
  T comp_ = 0;
};

using NeumaierSum = BasicNeumaierSum<double>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0; // estimate of the absolute error
  bool converged = false;
  long evaluations = 0;
};

/// Adaptive Simpson quadrature on [a, b].
QuadratureResult integrate(const std::function<double(double)> &f, double a,
                           double b, double abs_tol, double rel_tol,
                           int max_depth = 48);

/// Adaptive quadrature on [a, +inf) via the substitution x = a + t/(1-t).
QuadratureResult integrate_half_infinite(const std::function<double(double)> &f,
                                         double a, double abs_tol,
                                         double rel_tol);

/// Root of f on [lo, hi]; requires a sign change. Plain bisection.
double bisect_root(const std::function<double(double)> &f, double lo,
                   double hi, double x_tol);

/// Determinant of an n x n row-major matrix, LU with partial pivoting in
/// extended precision.
double det_lu(const std::vector<double> &a, int n);

/// Principal complex cube root.
std::complex<double> principal_cbrt(std::complex<double> z);

uint64_t splitmix64(uint64_t &state);

} // namespace fockchart::num
