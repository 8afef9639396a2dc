#pragma once

#include "fockchart/core_map.hpp"
#include "fockchart/numeric.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace fockchart {

/// A density made of contiguous analytic segments. At a shared endpoint the
/// right segment owns the value; outside the support the density is zero.
struct PiecewiseDensity1D {
  struct Piece {
    double lo = 0.0;
    double hi = 0.0; // +inf allowed on the last piece
    std::function<double(double)> f;
  };

  std::vector<Piece> pieces;
  bool lo_closed = true;
  bool hi_closed = true;

  double operator()(double x) const;
  std::vector<double> breakpoints() const; // interior junctions
  double support_lo() const;
  double support_hi() const;
  num::QuadratureResult integrate(double abs_tol = 1e-10,
                                  double rel_tol = 1e-9) const;
};

struct QuadratureError : std::runtime_error {
  double value;
  double error_estimate;
  QuadratureError(const std::string &msg, double v, double e)
      : std::runtime_error(msg), value(v), error_estimate(e) {}
};

/// Two-quanta space population density: n0 on [0,1], 2-n0 on (1,2].
double h2_marginal_n0(double n0);

/// Two-quanta space g2 density:
///   sqrt(8/9) (1 - sqrt(1-2g2) - g2)^(3/2) / g2^3   on [0, 1/2],
///   1/(3 g2^3)                                      beyond.
/// The first branch is evaluated by series below g2 = 1e-4 where the direct
/// form loses all digits to cancellation; the g2 -> 0 limit is 1/3.
double h2_marginal_g2(double g2);

/// Three-quanta space population density, three quadratic arcs on [0,3].
double h3_marginal_n0(double n0);

/// Three-quanta space g2 density, four closed-form branches with
/// breakpoints 1/2, 2/3, 3/4 and a 1/(2 g2^4) tail.
double h3_marginal_g2(double g2);

/// Density over (n0, g2) after integrating out g3: four polynomial branches
/// keyed on g2 against 3/n0 - 3/n0^2 and 1/n0, zero outside the projected
/// support.
double h3_reduced_n0_g2(double n0, double g2);

/// Density over (n0, g3) after integrating out g2: (n0^5/2) times the length
/// of the admissible g2 interval,
///   max(0, min(1/n0 - n0 g3/2,  2/n0^2 - 1/n0 + n0 g3/6)).
double h3_reduced_n0_g3(double n0, double g3);

/// Sum-of-uniforms density: the population of a uniformly sampled N-quanta
/// space follows it exactly.
double irwin_hall_n0(double x, Truncation N);

/// Density over (g2, g3): U(g2,g3)^6 / 12.
double h3_joint_g2_g3(double g2, double g3);

/// g3 density of the three-quanta space. No closed form exists; the joint
/// density is integrated over the population with panels aligned to the
/// breakpoints of the admissible-g2 length. Throws QuadratureError when the
/// requested relative tolerance is not met.
double h3_marginal_g3(double g3, double quad_tol = 1e-6);
num::QuadratureResult h3_marginal_g3_integral(double g3,
                                              double quad_tol = 1e-6);

PiecewiseDensity1D h2_population_density();
PiecewiseDensity1D h2_g2_density();
PiecewiseDensity1D h3_population_density();
PiecewiseDensity1D h3_g2_density();
PiecewiseDensity1D irwin_hall_density(Truncation N);

} // namespace fockchart
