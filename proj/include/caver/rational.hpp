#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "caver/errors.hpp"

namespace caver {

/// Exact rational over int64, always normalized (gcd 1, denominator > 0).
/// Arithmetic throws on overflow instead of wrapping.
class Rational {
public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }
  explicit Rational(std::int64_t n) : num_(n), den_(1) {}

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(add(mul(a.num_, b.den_), mul(b.num_, a.den_)), mul(a.den_, b.den_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(add(mul(a.num_, b.den_), -mul(b.num_, a.den_)), mul(a.den_, b.den_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mul(a.num_, b.num_), mul(a.den_, b.den_));
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return mul(a.num_, b.den_) < mul(b.num_, a.den_);
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  /// "p/q" in lowest terms; integers print without the "/q" part.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts "p" or "p/q".
  static Rational parse(const std::string& text) {
    std::size_t pos = 0;
    auto slash = text.find('/');
    try {
      if (slash == std::string::npos) {
        std::int64_t n = std::stoll(text, &pos);
        if (pos != text.size()) fail(ErrorKind::InvalidInput, "not a rational: '" + text + "'");
        return Rational(n, 1);
      }
      std::int64_t n = std::stoll(text.substr(0, slash), &pos);
      if (pos != slash) fail(ErrorKind::InvalidInput, "not a rational: '" + text + "'");
      std::int64_t d = std::stoll(text.substr(slash + 1), &pos);
      if (pos != text.size() - slash - 1)
        fail(ErrorKind::InvalidInput, "not a rational: '" + text + "'");
      return Rational(n, d);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "not a rational: '" + text + "'");
    }
  }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
  void normalize() {
    if (den_ == 0) fail(ErrorKind::InvalidInput, "rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::InvalidInput, "rational overflow");
    return r;
  }
  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::InvalidInput, "rational overflow");
    return r;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace caver
