#include "wsum/rational.hpp"

#include <cassert>
#include <ostream>

#include "wsum/errors.hpp"

namespace wsum {

LiftedRational::LiftedRational(long num, long den) : bottom_(false), value_(num, den) {
  if (den == 0) throw Error("rational with zero denominator");
  value_.canonicalize();
}

LiftedRational::LiftedRational(mpq_class q) : bottom_(false), value_(std::move(q)) {
  value_.canonicalize();
}

LiftedRational LiftedRational::parse(const std::string& text) {
  if (text == "bot") return bottom();
  if (text.empty()) throw Error("empty rational literal");
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return LiftedRational(mpq_class(mpz_class(text)));
    }
    mpz_class num(text.substr(0, slash));
    mpz_class den(text.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in literal: " + text);
    mpq_class q(num, den);
    return LiftedRational(std::move(q));
  } catch (const std::invalid_argument&) {
    throw Error("malformed rational literal: " + text);
  }
}

const mpq_class& LiftedRational::value() const {
  assert(!bottom_);
  return value_;
}

LiftedRational operator+(const LiftedRational& a, const LiftedRational& b) {
  if (a.bottom_ || b.bottom_) return LiftedRational::bottom();
  return LiftedRational(mpq_class(a.value_ + b.value_));
}

LiftedRational operator-(const LiftedRational& a, const LiftedRational& b) {
  if (a.bottom_ || b.bottom_) return LiftedRational::bottom();
  return LiftedRational(mpq_class(a.value_ - b.value_));
}

LiftedRational operator*(const LiftedRational& a, const LiftedRational& b) {
  if (a.bottom_ || b.bottom_) return LiftedRational::bottom();
  return LiftedRational(mpq_class(a.value_ * b.value_));
}

LiftedRational operator/(const LiftedRational& a, const LiftedRational& b) {
  if (a.bottom_ || b.bottom_ || b.value_ == 0) return LiftedRational::bottom();
  return LiftedRational(mpq_class(a.value_ / b.value_));
}

bool LiftedRational::leq(const LiftedRational& other) const {
  if (bottom_) return true;
  if (other.bottom_) return false;
  return value_ <= other.value_;
}

bool LiftedRational::operator==(const LiftedRational& other) const {
  if (bottom_ != other.bottom_) return false;
  return bottom_ || value_ == other.value_;
}

int LiftedRational::cmp(const LiftedRational& other) const {
  if (bottom_ && other.bottom_) return 0;
  if (bottom_) return -1;
  if (other.bottom_) return 1;
  return ::cmp(value_, other.value_);
}

std::string LiftedRational::str() const {
  if (bottom_) return "bot";
  return value_.get_str();
}

std::size_t LiftedRational::bit_size() const {
  if (bottom_) return 0;
  return mpz_sizeinbase(value_.get_num().get_mpz_t(), 2) +
         mpz_sizeinbase(value_.get_den().get_mpz_t(), 2);
}

std::ostream& operator<<(std::ostream& os, const LiftedRational& w) { return os << w.str(); }

}  // namespace wsum
