#pragma once

#include <compare>
#include <limits>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace rotor {

using BigInt = boost::multiprecision::cpp_int;

// Nonnegative integer of unbounded size, or +infinity.
class ExtendedCount {
 public:
  ExtendedCount() = default;
  ExtendedCount(std::uint64_t v) : value_(v) {}  // NOLINT(implicit)
  explicit ExtendedCount(BigInt v) : value_(std::move(v)) {
    if (value_ < 0) throw std::domain_error("ExtendedCount: negative value");
  }

  static ExtendedCount infinity() {
    ExtendedCount c;
    c.infinite_ = true;
    return c;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  const BigInt& value() const {
    if (infinite_) throw std::domain_error("ExtendedCount: infinite has no value");
    return value_;
  }

  std::optional<std::uint64_t> to_u64() const {
    if (infinite_ || value_ > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return static_cast<std::uint64_t>(value_);
  }

  std::string to_string() const { return infinite_ ? "inf" : value_.str(); }

  // Accepts a decimal literal, "inf" or "+inf".
  static ExtendedCount parse(std::string_view text) {
    if (text == "inf" || text == "+inf") return infinity();
    if (text.empty()) throw std::invalid_argument("ExtendedCount: empty literal");
    for (char ch : text)
      if (ch < '0' || ch > '9') throw std::invalid_argument("ExtendedCount: bad literal '" + std::string(text) + "'");
    return ExtendedCount(BigInt(std::string(text)));
  }

  ExtendedCount& operator+=(const ExtendedCount& o) {
    if (o.infinite_) infinite_ = true;
    if (!infinite_) value_ += o.value_;
    return *this;
  }

  // inf - finite = inf. A negative result or inf - inf throws.
  ExtendedCount& operator-=(const ExtendedCount& o) {
    if (o.infinite_) throw std::domain_error("ExtendedCount: subtracting infinity");
    if (infinite_) return *this;
    if (value_ < o.value_) throw std::domain_error("ExtendedCount: negative difference");
    value_ -= o.value_;
    return *this;
  }

  ExtendedCount& operator*=(const ExtendedCount& o) {
    bool zero = (!infinite_ && value_ == 0) || (!o.infinite_ && o.value_ == 0);
    if (infinite_ || o.infinite_) {
      if (zero) throw std::domain_error("ExtendedCount: infinity times zero");
      infinite_ = true;
      value_ = 0;
      return *this;
    }
    value_ *= o.value_;
    return *this;
  }

  // Floor division. inf / a = inf, a / inf = 0.
  ExtendedCount& operator/=(const ExtendedCount& o) {
    if (!o.infinite_ && o.value_ == 0) throw std::domain_error("ExtendedCount: division by zero");
    if (infinite_ && o.infinite_) throw std::domain_error("ExtendedCount: infinity over infinity");
    if (infinite_) return *this;
    value_ = o.infinite_ ? BigInt(0) : BigInt(value_ / o.value_);
    return *this;
  }

  ExtendedCount& operator%=(const ExtendedCount& o) {
    if (infinite_) throw std::domain_error("ExtendedCount: remainder of infinity");
    if (o.infinite_) return *this;
    if (o.value_ == 0) throw std::domain_error("ExtendedCount: remainder by zero");
    value_ %= o.value_;
    return *this;
  }

  ExtendedCount& operator++() {
    if (!infinite_) ++value_;
    return *this;
  }
  ExtendedCount& operator--() { return *this -= ExtendedCount(1); }

  friend ExtendedCount operator+(ExtendedCount a, const ExtendedCount& b) { return a += b; }
  friend ExtendedCount operator-(ExtendedCount a, const ExtendedCount& b) { return a -= b; }
  friend ExtendedCount operator*(ExtendedCount a, const ExtendedCount& b) { return a *= b; }
  friend ExtendedCount operator/(ExtendedCount a, const ExtendedCount& b) { return a /= b; }
  friend ExtendedCount operator%(ExtendedCount a, const ExtendedCount& b) { return a %= b; }

  friend bool operator==(const ExtendedCount& a, const ExtendedCount& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtendedCount& a, const ExtendedCount& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedCount& c) { return os << c.to_string(); }

 private:
  BigInt value_{0};
  bool infinite_ = false;
};

inline ExtendedCount pow2(unsigned e) {
  BigInt v = 1;
  v <<= e;
  return ExtendedCount(v);
}

}  // namespace rotor
