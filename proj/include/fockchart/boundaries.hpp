#pragma once

#include "fockchart/core_map.hpp"
#include "fockchart/tolerances.hpp"

namespace fockchart {

enum class BoundVar { n0, g2, g3, gk };

/// Admissible interval for one correlator with the remaining coordinates
/// held fixed. `upper` may be +inf. When `feasible` is false the fixed
/// coordinates admit no physical completion and both limits are NaN.
struct BoundaryResult {
  double lower = 0.0;
  double upper = 0.0;
  BoundVar which_var = BoundVar::g2;
  int k = 0; // order of the correlator for which_var == gk
  bool feasible = false;
};

/// Two-quanta space: 1/n0 from above, floor(n0)(2 n0 - floor(n0) - 1)/n0^2
/// from below. Infeasible outside 0 <= n0 <= 2.
BoundaryResult h2_g2_bounds(double n0);

/// Largest population compatible with a given g2 in the two-quanta space:
/// (1 - sqrt(1 - 2 g2) theta(1 - 2 g2)) / g2, with value 1 in the g2 -> 0
/// limit.
double h2_n0_upper(double g2);

/// Three-quanta space, g2 range at fixed (n0, g3). Infeasible when the
/// (n0, g3) pair already violates its own projected bounds.
BoundaryResult h3_g2_bounds(double n0, double g3);

/// Three-quanta space, g3 range at fixed (n0, g2).
BoundaryResult h3_g3_bounds(double n0, double g2);

/// Radical entering the cubic discriminant for the three-quanta population
/// bound. Throws std::domain_error when the radicand is negative (the cubic
/// then has three real roots and the real-arithmetic form does not apply;
/// aux_f1 handles that regime in complex arithmetic).
double aux_f0(double g2, double g3);

/// Population at which the reconstructed ground-state weight crosses zero:
/// the smallest positive root of 1 - x + g2 x^2/2 - g3 x^3/6, obtained from
/// the closed cubic formula in complex arithmetic. Branch rule: of the three
/// cube-root candidates, every nearly-real one is a positive root and the
/// smallest is the first crossing; a Newton polish removes the cancellation
/// the closed form suffers for small g3 and near root collisions.
double aux_f1(double g2, double g3);

/// Crossover g2 below which the ground-state weight, rather than the
/// single-quantum weight, limits the population. Real part of the closed
/// form, principal branches throughout.
double aux_f2(double g3);

/// Population upper bound U(g2, g3) of the three-quanta space: the first
/// zero-crossing among the three reconstructed weights, i.e.
///   min( aux_f1,  (g2 - sqrt(g2^2 - 2 g3))/g3,  g2/g3 ),
/// the middle candidate only when real. g3 = 0 reduces to h2_n0_upper.
double h3_n0_upper(double g2, double g3);

/// General-N bounds for g^(k) at fixed population. Upper
/// (N-1)!/(N-k)! / n0^(k-1); lower [(m)_k + k (n0-m) (m)_{k-1}] / n0^k with
/// m = floor(n0), which vanishes iff m <= k-2 and is realized by the
/// (m, m+1) coin state.
BoundaryResult hn_gk_bounds(double n0, int k, Truncation N);

/// Diagonal weights of the two-level superposition mu/nu with mean
/// population n0: P_mu = (nu-n0)/(nu-mu), P_nu = (n0-mu)/(nu-mu).
FockDistribution coin_state(int mu, int nu, double n0, Truncation N);

/// Factorial moment chain (N-k+1)! G^(k-1) >= (N-k)! G^(k) for 2 <= k <= N.
bool moment_chain_holds(const CorrelatorVector &g, Truncation N,
                        double slack = tol::phys_eps);

/// g2 <= (N-1)/n0, with equality only on coin states through |0> and |N>.
bool g2_ceiling_holds(const GlauberPoint &q, Truncation N,
                      double slack = tol::phys_eps);

} // namespace fockchart
