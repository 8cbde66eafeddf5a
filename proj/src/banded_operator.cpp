#include "dce3/banded_operator.hpp"

#include "dce3/error.hpp"
#include "dce3/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace dce3 {

BandedOperator::BandedOperator(std::size_t dimension) : dimension_(dimension) {}

BandedOperator::Band& BandedOperator::band(std::ptrdiff_t offset) {
  auto it = std::lower_bound(bands_.begin(), bands_.end(), offset,
                             [](const Band& b, std::ptrdiff_t o) { return b.offset < o; });
  if (it != bands_.end() && it->offset == offset) return *it;
  it = bands_.insert(it, Band{offset, std::vector<cplx>(dimension_, cplx{})});
  return *it;
}

void BandedOperator::add(std::size_t row, std::size_t col, cplx value) {
  if (row >= dimension_ || col >= dimension_) {
    throw IndexError(fmt::format("element ({}, {}) outside {}x{} operator", row, col, dimension_, dimension_));
  }
  const auto offset = static_cast<std::ptrdiff_t>(col) - static_cast<std::ptrdiff_t>(row);
  band(offset).coeff[row] += value;
}

cplx BandedOperator::element(std::size_t row, std::size_t col) const {
  const auto offset = static_cast<std::ptrdiff_t>(col) - static_cast<std::ptrdiff_t>(row);
  for (const Band& b : bands_) {
    if (b.offset == offset) return b.coeff[row];
  }
  return {};
}

void BandedOperator::apply(std::span<const cplx> x, std::span<cplx> y, cplx scale,
                           bool accumulate) const {
  if (x.size() != dimension_ || y.size() != dimension_) {
    throw DimensionError(fmt::format("operator of dimension {} applied to vectors of size {} -> {}",
                                     dimension_, x.size(), y.size()));
  }
  if (!accumulate) std::fill(y.begin(), y.end(), cplx{});
  const auto& k = kernels::active();
  const auto dim = static_cast<std::ptrdiff_t>(dimension_);
  for (const Band& b : bands_) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -b.offset);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(dim, dim - b.offset);
    if (hi <= lo) continue;
    k.cmul_acc(y.data() + lo, b.coeff.data() + lo, x.data() + lo + b.offset,
               static_cast<std::size_t>(hi - lo), scale);
  }
}

Ket BandedOperator::apply(const Ket& x) const {
  Ket y(x.size());
  apply(std::span<const cplx>(x.data(), static_cast<std::size_t>(x.size())),
        std::span<cplx>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

BandedOperator BandedOperator::adjoint() const {
  BandedOperator out(dimension_);
  for (const Band& b : bands_) {
    for (std::size_t row = 0; row < dimension_; ++row) {
      const auto col = static_cast<std::ptrdiff_t>(row) + b.offset;
      if (col < 0 || col >= static_cast<std::ptrdiff_t>(dimension_)) continue;
      if (b.coeff[row] != cplx{}) out.add(static_cast<std::size_t>(col), row, std::conj(b.coeff[row]));
    }
  }
  return out;
}

BandedOperator& BandedOperator::operator+=(const BandedOperator& other) {
  if (other.dimension_ != dimension_) {
    throw DimensionError("adding operators of different dimension");
  }
  for (const Band& b : other.bands_) {
    Band& mine = band(b.offset);
    for (std::size_t k = 0; k < dimension_; ++k) mine.coeff[k] += b.coeff[k];
  }
  return *this;
}

BandedOperator BandedOperator::scaled(cplx factor) const {
  BandedOperator out = *this;
  for (Band& b : out.bands_) {
    for (cplx& c : b.coeff) c *= factor;
  }
  return out;
}

Eigen::MatrixXcd BandedOperator::to_dense() const {
  const auto dim = static_cast<Eigen::Index>(dimension_);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const Band& b : bands_) {
    for (Eigen::Index row = 0; row < dim; ++row) {
      const Eigen::Index col = row + b.offset;
      if (col < 0 || col >= dim) continue;
      out(row, col) += b.coeff[static_cast<std::size_t>(row)];
    }
  }
  return out;
}

double BandedOperator::hermiticity_deviation() const {
  double worst = 0.0;
  for (const Band& b : bands_) {
    for (std::size_t row = 0; row < dimension_; ++row) {
      const auto col = static_cast<std::ptrdiff_t>(row) + b.offset;
      if (col < 0 || col >= static_cast<std::ptrdiff_t>(dimension_)) continue;
      const cplx mirror = element(static_cast<std::size_t>(col), row);
      worst = std::max(worst, std::abs(b.coeff[row] - std::conj(mirror)));
    }
  }
  return worst;
}

}  // namespace dce3
