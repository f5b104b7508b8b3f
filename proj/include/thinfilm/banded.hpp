#pragma once

#include <span>
#include <vector>

namespace thinfilm {

/// Square matrix with `lower` sub- and `upper` superdiagonals, stored
/// row-major by band. Entry (i, j) exists iff -lower <= j - i <= upper.
struct BandedMatrix {
  int n = 0;
  int lower = 0;
  int upper = 0;
  std::vector<double> data;

  BandedMatrix() = default;
  BandedMatrix(int n_, int lower_, int upper_)
      : n(n_), lower(lower_), upper(upper_),
        data(static_cast<std::size_t>(n_) * (lower_ + upper_ + 1), 0.0) {}

  int width() const { return lower + upper + 1; }
  bool in_band(int i, int j) const {
    return j - i >= -lower && j - i <= upper;
  }

  /// Band storage slot of (i, j); caller must ensure in_band(i, j).
  double& ref(int i, int j) {
    return data[static_cast<std::size_t>(i) * width() + (j - i + lower)];
  }
  /// Entry (i, j), zero outside the band.
  double at(int i, int j) const {
    if (i < 0 || j < 0 || i >= n || j >= n || !in_band(i, j)) return 0.0;
    return data[static_cast<std::size_t>(i) * width() + (j - i + lower)];
  }
  void add(int i, int j, double v) { ref(i, j) += v; }

  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<double> multiply_transpose(std::span<const double> x) const;
  BandedMatrix transposed() const;

  double max_abs() const;
};

/// LU factorization with partial pivoting of a banded matrix (LAPACK gbtrf
/// layout: `lower` extra superdiagonals absorb pivoting fill-in). Throws
/// SingularMatrixError on a vanishing pivot.
class BandedLU {
public:
  explicit BandedLU(const BandedMatrix& A);

  /// Solves A x = rhs using the stored factorization.
  std::vector<double> solve(std::span<const double> rhs) const;

private:
  int n_;
  int kl_;
  int ku_;
  std::vector<double> fac_;   // (2*kl + ku + 1) x n, column-major
  std::vector<int> pivot_;
};

/// One-shot solve with a residual guard: throws SingularMatrixError when the
/// factorization breaks down or the solution fails a backward-error check.
std::vector<double> solve_banded(const BandedMatrix& A,
                                 std::span<const double> rhs);

} // namespace thinfilm
