#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cmfuse {

// Exact non-negative rational, always in lowest terms with a positive
// denominator. Used for intermediate sums that may exceed 1 before clamping.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den == 0) throw std::domain_error("ratio with zero denominator");
    reduce();
  }

  static Ratio zero() { return Ratio{}; }
  static Ratio one() { return Ratio{1, 1}; }

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  friend Ratio operator+(const Ratio& a, const Ratio& b) {
    const std::uint64_t g = std::gcd(a.den_, b.den_);
    const unsigned __int128 lhs =
        static_cast<unsigned __int128>(a.num_) * (b.den_ / g);
    const unsigned __int128 rhs =
        static_cast<unsigned __int128>(b.num_) * (a.den_ / g);
    const unsigned __int128 den =
        static_cast<unsigned __int128>(a.den_ / g) * b.den_;
    return from_wide(lhs + rhs, den);
  }

  Ratio& operator+=(const Ratio& other) { return *this = *this + other; }

  friend Ratio operator/(const Ratio& a, std::uint64_t divisor) {
    if (divisor == 0) throw std::domain_error("ratio divided by zero");
    const std::uint64_t g = std::gcd(a.num_, divisor);
    return from_wide(a.num_ / g,
                     static_cast<unsigned __int128>(a.den_) * (divisor / g));
  }

  friend bool operator==(const Ratio& a, const Ratio& b) = default;

  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    const auto lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
    const auto rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static Ratio from_wide(unsigned __int128 num, unsigned __int128 den) {
    unsigned __int128 a = num, b = den;
    while (b != 0) {
      const auto t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr auto kMax = static_cast<unsigned __int128>(UINT64_MAX);
    if (num > kMax || den > kMax) throw std::overflow_error("ratio overflow");
    Ratio r;
    r.num_ = static_cast<std::uint64_t>(num);
    r.den_ = static_cast<std::uint64_t>(den);
    return r;
  }

  void reduce() {
    const std::uint64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Ratio& r) {
  return os << r.str();
}

// A similarity value in [0, 1]. Equality to one is exact: a score is a
// synonym verdict only when num == den.
class Score {
 public:
  Score() = default;
  Score(std::uint64_t num, std::uint64_t den) : Score(Ratio{num, den}) {}
  explicit Score(const Ratio& value) : value_(value) {
    if (value_ > Ratio::one()) {
      throw std::domain_error("score above 1: " + value_.str());
    }
  }

  static Score zero() { return Score{}; }
  static Score one() { return Score{Ratio::one()}; }
  static Score of(bool hit) { return hit ? one() : zero(); }

  // Saturates at 1.
  static Score clamped(const Ratio& value) {
    return value > Ratio::one() ? one() : Score{value};
  }

  // Parses "p/q" or "p".
  static Score parse(std::string_view text) {
    const auto slash = text.find('/');
    auto to_u64 = [&](std::string_view digits) {
      if (digits.empty()) throw std::invalid_argument("bad score: " + std::string(text));
      std::uint64_t v = 0;
      for (char c : digits) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad score: " + std::string(text));
        if (v > (UINT64_MAX - 9) / 10) throw std::invalid_argument("bad score: " + std::string(text));
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
      }
      return v;
    };
    if (slash == std::string_view::npos) return Score{Ratio{to_u64(text), 1}};
    return Score{Ratio{to_u64(text.substr(0, slash)), to_u64(text.substr(slash + 1))}};
  }

  const Ratio& value() const { return value_; }
  std::uint64_t num() const { return value_.num(); }
  std::uint64_t den() const { return value_.den(); }
  bool is_one() const { return value_.num() == value_.den(); }
  bool is_zero() const { return value_.is_zero(); }
  std::string str() const { return value_.str(); }

  friend bool operator==(const Score&, const Score&) = default;
  friend std::strong_ordering operator<=>(const Score& a, const Score& b) {
    return a.value_ <=> b.value_;
  }

 private:
  Ratio value_;
};

inline std::ostream& operator<<(std::ostream& os, const Score& s) {
  return os << s.str();
}

enum class Verdict { synonym, not_synonym };

inline Verdict verdict_of(const Score& s) {
  return s.is_one() ? Verdict::synonym : Verdict::not_synonym;
}

inline std::string_view to_string(Verdict v) {
  return v == Verdict::synonym ? "synonym" : "not_synonym";
}

}  // namespace cmfuse
