#pragma once

#include <compare>

namespace stmf {

/// An element of the max-plus semiring: a finite real or the bottom element
/// -inf. The bottom element is a separate flag rather than a floating-point
/// infinity so that reductions never see inf - inf.
class Tropical {
 public:
  /// Additive identity (-inf).
  static constexpr Tropical zero() noexcept { return Tropical(); }
  /// Multiplicative identity (0).
  static constexpr Tropical one() noexcept { return Tropical(Finite{}, 0.0); }

  constexpr Tropical() noexcept = default;
  /// Throws InvalidArgument for NaN or infinite input.
  explicit Tropical(double value);

  constexpr bool is_bottom() const noexcept { return bottom_; }
  /// Finite payload; 0 for the bottom element.
  constexpr double value() const noexcept { return value_; }

  friend constexpr bool operator==(Tropical a, Tropical b) noexcept {
    return a.bottom_ == b.bottom_ && (a.bottom_ || a.value_ == b.value_);
  }

 private:
  struct Finite {};
  constexpr Tropical(Finite, double v) noexcept : value_(v), bottom_(false) {}

  friend Tropical trop_add(Tropical, Tropical) noexcept;
  friend Tropical trop_mul(Tropical, Tropical);

  double value_ = 0.0;
  bool bottom_ = true;
};

/// a (+) b = max(a, b).
Tropical trop_add(Tropical a, Tropical b) noexcept;
/// a (x) b = a + b, with -inf absorbing.
Tropical trop_mul(Tropical a, Tropical b);
/// z <= w in the semiring order, i.e. z (+) w == w.
bool trop_leq(Tropical z, Tropical w) noexcept;

inline Tropical operator+(Tropical a, Tropical b) noexcept { return trop_add(a, b); }
inline Tropical operator*(Tropical a, Tropical b) { return trop_mul(a, b); }

}  // namespace stmf
