#pragma once

// Exact rational and extended-rational arithmetic.
//
// Every integral, measure and coefficient in the library is a Rational or an
// ExtendedRational.  Nothing is ever rounded.

#include <gmpxx.h>

#include <compare>
#include <climits>
#include <cstdint>
#include <memory>
#include <numeric>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace riesz {

/// Raised when an argument lies outside the domain of an operation
/// (foreign cells, negative scale factors in a cone, violated preconditions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the textual parsers.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arbitrary precision rational, always in lowest terms with a positive
/// denominator.  Values whose numerator and denominator fit in 64 bits are
/// kept inline; anything larger lives in a GMP rational.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : num_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : Rational(static_cast<long long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v) {  // NOLINT(google-explicit-constructor)
    if (v == kMin) assign(mpq_class(mpz_of(v)));
    else num_ = v;
  }
  Rational(unsigned long v) {  // NOLINT(google-explicit-constructor)
    if (v <= static_cast<unsigned long>(kMax)) num_ = static_cast<std::int64_t>(v);
    else assign(mpq_class(mpz_class(v)));
  }
  explicit Rational(const mpz_class& v) { assign(mpq_class(v)); }
  explicit Rational(mpq_class v) {
    v.canonicalize();
    assign(std::move(v));
  }

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    assign(std::move(q));
  }
  Rational(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    *this = reduce(den < 0 ? -static_cast<i128>(num) : num, den < 0 ? -static_cast<i128>(den) : den);
  }

  Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rational(Rational&& o) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) *this = Rational(o);
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept = default;
  ~Rational() = default;

  /// Parses "p", "p/q", "-p/q" or "+p/q".
  static Rational parse(std::string_view text) {
    std::string s(trim(text));
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    auto checked = [&](const std::string& part) {
      std::size_t i = (!part.empty() && part.front() == '-') ? 1 : 0;
      if (i == part.size()) throw ParseError("malformed rational '" + s + "'");
      for (; i < part.size(); ++i)
        if (part[i] < '0' || part[i] > '9')
          throw ParseError("malformed rational '" + s + "'");
      return mpz_class(part);
    };
    if (slash == std::string::npos) return Rational(checked(s));
    auto num = checked(trim(s.substr(0, slash)));
    auto den = checked(trim(s.substr(slash + 1)));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(num, den);
  }

  static Rational power_of_two(long exponent) {
    unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    if (e < 63) {
      Rational r = 1;
      (exponent >= 0 ? r.num_ : r.den_) = std::int64_t{1} << e;
      return r;
    }
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, e);
    return exponent >= 0 ? Rational(p) : Rational(mpz_class(1), p);
  }

  mpz_class numerator() const { return big_ ? mpz_class(big_->get_num()) : mpz_of(num_); }
  mpz_class denominator() const { return big_ ? mpz_class(big_->get_den()) : mpz_of(den_); }

  int sign() const { return big_ ? sgn(*big_) : (num_ > 0) - (num_ < 0); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

  /// "p" for integers, "p/q" otherwise.
  std::string str() const {
    if (!big_) return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    if (is_integer()) return big_->get_num().get_str();
    return big_->get_num().get_str() + "/" + big_->get_den().get_str();
  }

  double to_double() const { return to_mpq().get_d(); }

  Rational operator-() const {
    if (!big_) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    Rational r;
    r.assign(mpq_class(-*big_));
    return r;
  }

  Rational& operator+=(const Rational& o) {
    if (!big_ && !o.big_) {
      if (den_ == o.den_) return *this = reduce(static_cast<i128>(num_) + o.num_, den_);
      return *this = reduce(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                            static_cast<i128>(den_) * o.den_);
    }
    mpq_class r = to_mpq();
    r += o.to_mpq();
    assign(std::move(r));
    return *this;
  }
  Rational& operator-=(const Rational& o) { return *this += -o; }
  Rational& operator*=(const Rational& o) {
    if (!big_ && !o.big_)
      return *this = reduce(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
    mpq_class r = to_mpq();
    r *= o.to_mpq();
    assign(std::move(r));
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    if (!big_ && !o.big_) {
      i128 n = static_cast<i128>(num_) * o.den_, d = static_cast<i128>(den_) * o.num_;
      return *this = d < 0 ? reduce(-n, -d) : reduce(n, d);
    }
    mpq_class r = to_mpq();
    r /= o.to_mpq();
    assign(std::move(r));
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    return a.big_ && b.big_ && *a.big_ == *b.big_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c;
    if (!a.big_ && !b.big_) {
      i128 l = static_cast<i128>(a.num_) * b.den_, r = static_cast<i128>(b.num_) * a.den_;
      c = (l > r) - (l < r);
    } else {
      c = cmp(a.to_mpq(), b.to_mpq());
    }
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  using i128 = __int128;
  using u128 = unsigned __int128;
  static constexpr std::int64_t kMax = INT64_MAX;
  static constexpr std::int64_t kMin = INT64_MIN;

  static mpz_class mpz_of(i128 v) {
    u128 u = v < 0 ? -static_cast<u128>(v) : static_cast<u128>(v);
    mpz_class r(static_cast<unsigned long>(u >> 64));
    r <<= 64;
    r += static_cast<unsigned long>(u);
    return v < 0 ? mpz_class(-r) : r;
  }

  static u128 gcd(u128 a, u128 b) {
    while ((a >> 64) || (b >> 64)) {
      if (b == 0) return a;
      a %= b;
      std::swap(a, b);
    }
    return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  }

  // n / d with d > 0, reduced to lowest terms.
  static Rational reduce(i128 n, i128 d) {
    Rational r;
    if (n == 0) return r;
    u128 un = n < 0 ? -static_cast<u128>(n) : static_cast<u128>(n), ud = static_cast<u128>(d);
    u128 g = gcd(un, ud);
    if (g != 1) {
      un /= g;
      ud /= g;
    }
    if (un <= static_cast<u128>(kMax) && ud <= static_cast<u128>(kMax)) {
      r.num_ = n < 0 ? -static_cast<std::int64_t>(un) : static_cast<std::int64_t>(un);
      r.den_ = static_cast<std::int64_t>(ud);
      return r;
    }
    mpq_class q(mpz_of(n < 0 ? -static_cast<i128>(un) : static_cast<i128>(un)), mpz_of(static_cast<i128>(ud)));
    r.assign(std::move(q));
    return r;
  }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_of(num_), mpz_of(den_));
  }

  // q must be canonical.
  void assign(mpq_class q) {
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (n.fits_slong_p() && n != kMin && d.fits_slong_p()) {
      num_ = n.get_si();
      den_ = d.get_si();
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      big_ = std::make_unique<mpq_class>(std::move(q));
    }
  }

  static std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;  // set only when the value does not fit inline
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// A rational or one of the two infinities.
///
/// Addition of opposite infinities is undefined and reported as an empty
/// optional by ext_add; multiplication follows 0 * (+-inf) = 0.
class ExtendedRational {
 public:
  enum class Kind : std::uint8_t { minus_infinity, finite, plus_infinity };

  ExtendedRational() = default;
  ExtendedRational(Rational v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  ExtendedRational(int v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static ExtendedRational plus_infinity() { return ExtendedRational(Kind::plus_infinity); }
  static ExtendedRational minus_infinity() { return ExtendedRational(Kind::minus_infinity); }

  /// Accepts every Rational literal plus "inf", "+inf", "-inf".
  static ExtendedRational parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (c != ' ' && c != '\t') s.push_back(c);
    if (s == "inf" || s == "+inf" || s == "oo" || s == "+oo") return plus_infinity();
    if (s == "-inf" || s == "-oo") return minus_infinity();
    return ExtendedRational(Rational::parse(s));
  }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_plus_infinity() const { return kind_ == Kind::plus_infinity; }
  bool is_minus_infinity() const { return kind_ == Kind::minus_infinity; }

  const Rational& value() const {
    if (!is_finite()) throw DomainError("value() of an infinite extended rational");
    return value_;
  }

  int sign() const {
    switch (kind_) {
      case Kind::minus_infinity: return -1;
      case Kind::plus_infinity: return 1;
      case Kind::finite: break;
    }
    return value_.sign();
  }

  ExtendedRational operator-() const {
    switch (kind_) {
      case Kind::minus_infinity: return plus_infinity();
      case Kind::plus_infinity: return minus_infinity();
      case Kind::finite: break;
    }
    return ExtendedRational(-value_);
  }

  std::string str() const {
    switch (kind_) {
      case Kind::minus_infinity: return "-inf";
      case Kind::plus_infinity: return "inf";
      case Kind::finite: break;
    }
    return value_.str();
  }

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    return a.kind_ == b.kind_ && (!a.is_finite() || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (!a.is_finite()) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedRational& x) { return os << x.str(); }

 private:
  explicit ExtendedRational(Kind k) : kind_(k) {}

  Kind kind_ = Kind::finite;
  Rational value_;
};

/// Sum in the extended rationals; nullopt when the sum is +inf + (-inf).
inline std::optional<ExtendedRational> ext_add(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.is_finite() && b.is_finite()) return ExtendedRational(a.value() + b.value());
  if (a.is_finite()) return b;
  if (b.is_finite()) return a;
  if (a.kind() != b.kind()) return std::nullopt;
  return a;
}

/// Product in the extended rationals with 0 * (+-inf) = 0.
inline ExtendedRational ext_mul(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.is_finite() && b.is_finite()) return ExtendedRational(a.value() * b.value());
  int s = a.sign() * b.sign();
  if (s == 0) return ExtendedRational(0);
  return s > 0 ? ExtendedRational::plus_infinity() : ExtendedRational::minus_infinity();
}

}  // namespace riesz

template <>
struct std::hash<riesz::Rational> {
  std::size_t operator()(const riesz::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
