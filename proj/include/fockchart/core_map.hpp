#pragma once

#include <vector>

namespace fockchart {

/// Maximum Fock occupation of a truncated oscillator space. The probability
/// simplex and the correlator vectors both have N+1 entries.
class Truncation {
public:
  explicit Truncation(int n);
  int n() const { return n_; }
  int dim() const { return n_ + 1; }

private:
  int n_;
};

/// Dense row-major matrix, only used for the small structural matrices here.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}
  double &operator()(int r, int c) {
    return data[static_cast<size_t>(r) * cols + c];
  }
  double operator()(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }
};

/// Occupation probabilities (P_0, ..., P_N). Values produced by the inverse
/// map may fall outside [0, 1]; that is data, not an error, and it is exactly
/// what the support test inspects.
struct FockDistribution {
  std::vector<double> p;
  int max_n() const { return static_cast<int>(p.size()) - 1; }
};

/// Coincidence moments (1, n0, G2, ..., GN). Entry 0 is identically one.
struct CorrelatorVector {
  std::vector<double> g_raw;
  int max_n() const { return static_cast<int>(g_raw.size()) - 1; }
  double n0() const { return g_raw[1]; }
};

/// Normalized correlators: mean population plus (g2, ..., gN).
/// The vacuum has no well-defined normalized correlators; `g_defined` is
/// false for that one point and the g entries hold NaN.
struct GlauberPoint {
  double n0 = 0.0;
  std::vector<double> g;
  bool g_defined = true;

  int max_n() const { return static_cast<int>(g.size()) + 1; }
  /// g^(k) for k >= 2.
  double g_of(int k) const { return g[static_cast<size_t>(k) - 2]; }
};

GlauberPoint vacuum_point(Truncation N);

/// Upper-triangular matrix of falling factorials M[k][n] = (n)_k mapping
/// probabilities to moments.
Matrix moment_matrix(Truncation N);

/// Forward map: G_k = sum_n n(n-1)...(n-k+1) P_n.
/// Rejects vectors whose entries do not sum to one within tol::norm_eps.
CorrelatorVector correlators_of(const FockDistribution &p);

/// Inverse map via the explicit alternating sum
///   P_i = sum_{j>=i} (-1)^(i+j) G_j / (i! (j-i)!),
/// evaluated with compensated summation. Total: never rejects a moment
/// vector, unphysical results are returned as-is.
FockDistribution fock_of(const CorrelatorVector &g);
FockDistribution fock_of(const CorrelatorVector &g, Truncation N);

/// (n0, G2/n0^2, ..., GN/n0^N). The vacuum maps to the undefined-g point.
GlauberPoint normalize(const CorrelatorVector &g);

/// Exact inverse of `normalize`; the vacuum yields all-zero moments.
CorrelatorVector denormalize(const GlauberPoint &q);

/// Volume factor n0^((N^2+N-2)/2) picked up when passing from raw to
/// normalized correlators.
double normalization_jacobian(double n0, Truncation N);

} // namespace fockchart
