#pragma once

#include "fockchart/core_map.hpp"
#include "fockchart/tolerances.hpp"

namespace fockchart {

/// Joint density of states at one point of correlator space. `value` is zero
/// whenever the point lies outside the image of the simplex, and inside the
/// support it depends on the point only through the population.
struct DensityValue {
  double value = 0.0;
  bool in_support = false;
};

/// Volume of the probability simplex over N+1 occupations: sqrt(N+1)/N!.
double simplex_volume(Truncation N);

/// First fundamental form of the inverse moment map. Constant because the map
/// is linear; entry (k,k') for 1 <= k,k' <= N is
///   (-1)^(k+k') sum_{i<=min(k,k')} 1 / (i!^2 (k-i)! (k'-i)!).
Matrix fundamental_form(Truncation N);

/// sqrt(|det F|), computed by pivoted LU in extended precision. Equals
/// sqrt(N+1)/sf(N) with sf the superfactorial.
double fundamental_form_sqrt_det(Truncation N);

/// Support test: reconstruct the occupation vector and demand every entry in
/// [-slack, 1+slack]. This is the authoritative indicator; the closed-form
/// boundary inequalities are cross-checks against it.
bool is_physical(const GlauberPoint &q, Truncation N,
                 double slack = tol::phys_eps);

/// n0^((N^2+N-2)/2) / sf(N-1) on the support, zero outside.
DensityValue joint_density(const GlauberPoint &q, Truncation N);

} // namespace fockchart
