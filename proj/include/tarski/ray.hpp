#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>

#include "tarski/error.hpp"
#include "tarski/exact.hpp"
#include "tarski/rotation.hpp"

namespace tarski {

/**
 * A point of the unit sphere, held as a primitive integer direction.
 *
 * The ray (x, y, z) stands for (x, y, z) / |(x, y, z)|. Antipodes are distinct
 * rays; `axis()` picks the representative whose first nonzero coordinate is
 * positive when the pair {r, -r} is meant.
 */
class RationalRay {
 public:
  RationalRay() : v_{{Integer(0), Integer(0), Integer(1)}} {}

  RationalRay(Integer x, Integer y, Integer z) : v_{{std::move(x), std::move(y), std::move(z)}} {
    normalize();
  }
  explicit RationalRay(Vec3Z v) : v_(std::move(v)) { normalize(); }

  /// Direction of a nonzero rational vector.
  static RationalRay from_rational(const Vec3Q& q) {
    Integer l = 1;
    for (std::size_t i = 0; i < 3; ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q[i].get_den_mpz_t());
    Vec3Z v;
    for (std::size_t i = 0; i < 3; ++i) v[i] = q[i].get_num() * (l / q[i].get_den());
    return RationalRay(std::move(v));
  }

  const Integer& x() const noexcept { return v_[0]; }
  const Integer& y() const noexcept { return v_[1]; }
  const Integer& z() const noexcept { return v_[2]; }
  const Vec3Z& vec() const noexcept { return v_; }

  RationalRay antipode() const { return RationalRay(Vec3Z{{-v_[0], -v_[1], -v_[2]}}); }

  RationalRay axis() const {
    for (std::size_t i = 0; i < 3; ++i)
      if (v_[i] != 0) return v_[i] > 0 ? *this : antipode();
    return *this;
  }

  friend bool operator==(const RationalRay& p, const RationalRay& q) { return p.v_ == q.v_; }
  friend bool operator<(const RationalRay& p, const RationalRay& q) { return p.v_ < q.v_; }

 private:
  void normalize() {
    Integer g;
    mpz_gcd(g.get_mpz_t(), v_[0].get_mpz_t(), v_[1].get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v_[2].get_mpz_t());
    if (g == 0) throw PreconditionError("a ray needs a nonzero direction");
    if (g != 1)
      for (auto& c : v_.v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }

  Vec3Z v_;
};

inline std::string to_string(const RationalRay& r) { return to_string(r.vec()); }
inline std::ostream& operator<<(std::ostream& os, const RationalRay& r) { return os << to_string(r); }

/// Exact image of a ray under a rational linear map (must not send it to zero).
inline RationalRay apply(const Mat3Rational& m, const RationalRay& r) {
  Vec3Q q;
  for (std::size_t i = 0; i < 3; ++i) q[i] = Rational(r.vec()[i]);
  return RationalRay::from_rational(m * q);
}

/// Image under the rotation for one letter, using the integer matrix 5 * generator.
inline RationalRay apply(Letter l, const RationalRay& r) {
  return RationalRay(scaled_generator<Integer>(l) * r.vec());
}

/// Image under the rotation of a word, letters applied right to left.
inline RationalRay apply(WordView w, const RationalRay& r) {
  Vec3Z v = r.vec();
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = scaled_generator<Integer>(*it) * v;
  return RationalRay(std::move(v));
}

/// Parses "X,Y,Z" (decimal integers, not all zero).
inline RationalRay parse_ray(std::string_view text) {
  Vec3Z v;
  std::size_t start = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t comma = text.find(',', start);
    if ((i < 2) != (comma != std::string_view::npos)) throw ParseError("expected three comma-separated integers", start);
    const std::string part(text.substr(start, i < 2 ? comma - start : std::string_view::npos));
    if (part.empty() || v[i].set_str(part, 10) != 0) throw ParseError("expected an integer", start);
    start = comma + 1;
  }
  if (v[0] == 0 && v[1] == 0 && v[2] == 0) throw ParseError("the zero vector is not a ray", 0);
  return RationalRay(v);
}

}  // namespace tarski

template <>
struct std::hash<tarski::RationalRay> {
  std::size_t operator()(const tarski::RationalRay& r) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < 3; ++i)
      h = h * 1000003u + static_cast<std::size_t>(mpz_get_si(r.vec()[i].get_mpz_t()));
    return h;
  }
};
