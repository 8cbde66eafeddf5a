#pragma once

// Sparse operator in diagonal ("band") storage. All Hamiltonians of this
// model have a handful of bands: the diagonal, the two-photon pump at
// offsets +-2, and the atom-field couplings at offsets +-(N+1)+-1. Row k of
// band d couples amplitude k+d into row k, so the product is a set of
// contiguous complex multiply-accumulates.

#include "dce3/fock.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace dce3 {

class BandedOperator {
 public:
  struct Band {
    std::ptrdiff_t offset = 0;
    // coeff[k] multiplies x[k + offset]; length == dimension, zero outside the valid range.
    std::vector<cplx> coeff;
  };

  BandedOperator() = default;
  explicit BandedOperator(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  const std::vector<Band>& bands() const { return bands_; }

  // Accumulates value into element (row, col).
  void add(std::size_t row, std::size_t col, cplx value);
  cplx element(std::size_t row, std::size_t col) const;

  // y = scale * A x (accumulate=false) or y += scale * A x.
  void apply(std::span<const cplx> x, std::span<cplx> y, cplx scale = 1.0,
             bool accumulate = false) const;
  Ket apply(const Ket& x) const;

  BandedOperator adjoint() const;
  BandedOperator& operator+=(const BandedOperator& other);
  BandedOperator scaled(cplx factor) const;

  Eigen::MatrixXcd to_dense() const;
  // max |A - A^dagger| over all elements.
  double hermiticity_deviation() const;

 private:
  Band& band(std::ptrdiff_t offset);

  std::size_t dimension_ = 0;
  std::vector<Band> bands_;  // sorted by offset
};

}  // namespace dce3
