#include "stmf/tropical.hpp"

#include <cmath>

#include "stmf/error.hpp"

namespace stmf {

Tropical::Tropical(double value) : value_(value), bottom_(false) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, "tropical value must be finite or the bottom element");
  }
}

Tropical trop_add(Tropical a, Tropical b) noexcept {
  if (a.bottom_) return b;
  if (b.bottom_) return a;
  return a.value_ >= b.value_ ? a : b;
}

Tropical trop_mul(Tropical a, Tropical b) {
  if (a.bottom_ || b.bottom_) return Tropical::zero();
  const double sum = a.value_ + b.value_;
  if (!std::isfinite(sum)) {
    throw Error(ErrorKind::InvalidArgument, "tropical product overflowed");
  }
  return Tropical(Tropical::Finite{}, sum);
}

bool trop_leq(Tropical z, Tropical w) noexcept { return trop_add(z, w) == w; }

}  // namespace stmf
