#pragma once

#include <span>
#include <vector>

namespace igabeam {

/// Square band matrix with LU factorization (partial pivoting) and solves,
/// backed by LAPACK dgbtrf/dgbtrs. Entries outside [-lower, +upper] of the
/// diagonal must be zero.
class BandedLU {
 public:
  BandedLU() = default;
  BandedLU(int size, int lower, int upper);

  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }

  void set_zero();
  void set(int i, int j, double value);
  void add(int i, int j, double value);
  double get(int i, int j) const;

  /// Factors in place. Throws std::runtime_error if the matrix is singular.
  void factor();
  bool factored() const { return factored_; }

  /// Solves A X = B for `nrhs` column-major right-hand sides of length size().
  void solve(std::span<double> rhs, int nrhs = 1) const;

 private:
  int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
  std::vector<double> ab_;
  std::vector<int> pivots_;
  bool factored_ = false;
};

}  // namespace igabeam
