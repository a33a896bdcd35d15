#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <string>

namespace wsum {

// An element of the weight domain: an exact rational or the undefined
// value bottom. Bottom absorbs all four arithmetic operations (division
// additionally maps a zero divisor to bottom) and sits below every
// rational in the extended order.
//
// Immutable value type; safe to share across threads.
class LiftedRational {
 public:
  LiftedRational() : bottom_(true) {}
  LiftedRational(long num, long den = 1);
  explicit LiftedRational(mpq_class q);

  static LiftedRational bottom() { return LiftedRational(); }
  // Accepts "bot", "p/q", and plain integers, with optional leading '-'.
  static LiftedRational parse(const std::string& text);

  bool is_bottom() const { return bottom_; }
  bool is_zero() const { return !bottom_ && value_ == 0; }
  // pre: !is_bottom()
  const mpq_class& value() const;

  friend LiftedRational operator+(const LiftedRational& a, const LiftedRational& b);
  friend LiftedRational operator-(const LiftedRational& a, const LiftedRational& b);
  friend LiftedRational operator*(const LiftedRational& a, const LiftedRational& b);
  friend LiftedRational operator/(const LiftedRational& a, const LiftedRational& b);

  // Extended order: bottom <= x for all x; rationals compared exactly.
  bool leq(const LiftedRational& other) const;

  bool operator==(const LiftedRational& other) const;
  bool operator!=(const LiftedRational& other) const { return !(*this == other); }
  // Three-way compare in the extended order (bottom strictly smallest).
  int cmp(const LiftedRational& other) const;

  // "bot", "p/q" (reduced), or a bare integer string.
  std::string str() const;
  // Sum of the binary lengths of numerator and denominator; 0 for bottom.
  std::size_t bit_size() const;

 private:
  bool bottom_;
  mpq_class value_;  // canonical (reduced, positive denominator) when !bottom_
};

std::ostream& operator<<(std::ostream& os, const LiftedRational& w);

}  // namespace wsum
