#include "igabeam/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace igabeam {

BandedLU::BandedLU(int size, int lower, int upper)
    : n_(size), kl_(lower), ku_(upper), ldab_(2 * lower + upper + 1),
      ab_(static_cast<std::size_t>(ldab_) * size, 0.0), pivots_(static_cast<std::size_t>(size), 0) {
  if (size < 1 || lower < 0 || upper < 0) throw std::invalid_argument("invalid band matrix shape");
}

void BandedLU::set_zero() {
  std::fill(ab_.begin(), ab_.end(), 0.0);
  factored_ = false;
}

void BandedLU::set(int i, int j, double value) {
  if (j - i > ku_ || i - j > kl_) {
    if (value == 0.0) return;
    throw std::out_of_range("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside band");
  }
  ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_ + i - j] = value;
  factored_ = false;
}

void BandedLU::add(int i, int j, double value) {
  if (j - i > ku_ || i - j > kl_) {
    if (value == 0.0) return;
    throw std::out_of_range("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside band");
  }
  ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_ + i - j] += value;
  factored_ = false;
}

double BandedLU::get(int i, int j) const {
  if (j - i > ku_ || i - j > kl_) return 0.0;
  return ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_ + i - j];
}

void BandedLU::factor() {
  const lapack_int info = LAPACKE_dgbtrf_work(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(), ldab_, pivots_.data());
  if (info != 0)
    throw std::runtime_error("banded LU factorization failed (dgbtrf info = " + std::to_string(info) + ")");
  factored_ = true;
}

void BandedLU::solve(std::span<double> rhs, int nrhs) const {
  if (!factored_) throw std::logic_error("BandedLU::solve called before factor()");
  if (static_cast<int>(rhs.size()) != n_ * nrhs) throw std::invalid_argument("right-hand side size mismatch");
  const lapack_int info = LAPACKE_dgbtrs_work(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, nrhs, ab_.data(), ldab_,
                                               pivots_.data(), rhs.data(), n_);
  if (info != 0) throw std::runtime_error("banded solve failed (dgbtrs info = " + std::to_string(info) + ")");
}

}  // namespace igabeam
