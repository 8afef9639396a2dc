#pragma once

// Central tolerances. Input-hygiene thresholds are deliberately looser than
// the mathematical-identity ones.
namespace fockchart::tol {

inline constexpr double norm_eps = 1e-9;   // admission: sum of probabilities vs 1
inline constexpr double round_eps = 1e-10; // roundtrip identities
inline constexpr double phys_eps = 1e-12;  // slack on 0 <= P_n <= 1 support tests
inline constexpr double n0_floor = 1e-12;  // below this a draw counts as vacuum

} // namespace fockchart::tol
