#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "tarski/error.hpp"

/// Exact integer and rational linear algebra in three dimensions.
namespace tarski {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw PreconditionError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Integer& z) { return z.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "P/Q" or "P" with decimal integers.
inline Rational parse_rational(std::string_view text) {
  const std::string s(text);
  const auto slash = s.find('/');
  auto parse_int = [&](const std::string& part, std::size_t offset) {
    Integer z;
    if (part.empty() || z.set_str(part, 10) != 0) throw ParseError("expected an integer", offset);
    return z;
  };
  if (slash == std::string::npos) return Rational(parse_int(s, 0));
  const Integer num = parse_int(s.substr(0, slash), 0);
  const Integer den = parse_int(s.substr(slash + 1), slash + 1);
  if (den == 0) throw ParseError("zero denominator", slash + 1);
  return make_rational(num, den);
}

inline Integer pow5(unsigned n) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 5, n);
  return r;
}

inline int sign(const Integer& z) { return sgn(z); }

template <class T>
struct Vec3 {
  std::array<T, 3> v{};

  T& operator[](std::size_t i) { return v[i]; }
  const T& operator[](std::size_t i) const { return v[i]; }

  friend bool operator==(const Vec3& x, const Vec3& y) {
    return x.v[0] == y.v[0] && x.v[1] == y.v[1] && x.v[2] == y.v[2];
  }
  friend bool operator<(const Vec3& x, const Vec3& y) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (x.v[i] < y.v[i]) return true;
      if (y.v[i] < x.v[i]) return false;
    }
    return false;
  }
  friend Vec3 operator+(const Vec3& x, const Vec3& y) { return {{x[0] + y[0], x[1] + y[1], x[2] + y[2]}}; }
  friend Vec3 operator-(const Vec3& x, const Vec3& y) { return {{x[0] - y[0], x[1] - y[1], x[2] - y[2]}}; }
};

using Vec3Q = Vec3<Rational>;
using Vec3Z = Vec3<Integer>;

template <class T>
T dot(const Vec3<T>& x, const Vec3<T>& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

template <class T>
Vec3<T> cross(const Vec3<T>& x, const Vec3<T>& y) {
  return {{x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]}};
}

inline std::string to_string(const Vec3Q& x) {
  return "(" + to_string(x[0]) + "," + to_string(x[1]) + "," + to_string(x[2]) + ")";
}
inline std::string to_string(const Vec3Z& x) {
  return "(" + to_string(x[0]) + "," + to_string(x[1]) + "," + to_string(x[2]) + ")";
}

/// Row-major 3x3 matrix.
template <class T>
struct Mat3 {
  std::array<T, 9> m{};

  T& operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }

  static Mat3 identity() {
    Mat3 out;
    for (std::size_t i = 0; i < 3; ++i) out(i, i) = T(1);
    return out;
  }
  static Mat3 scalar(const T& s) {
    Mat3 out;
    for (std::size_t i = 0; i < 3; ++i) out(i, i) = s;
    return out;
  }

  friend bool operator==(const Mat3& x, const Mat3& y) {
    for (std::size_t i = 0; i < 9; ++i)
      if (!(x.m[i] == y.m[i])) return false;
    return true;
  }

  friend Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 out;
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c)
        out(r, c) = x(r, 0) * y(0, c) + x(r, 1) * y(1, c) + x(r, 2) * y(2, c);
    return out;
  }

  friend Vec3<T> operator*(const Mat3& x, const Vec3<T>& v) {
    Vec3<T> out;
    for (std::size_t r = 0; r < 3; ++r) out[r] = x(r, 0) * v[0] + x(r, 1) * v[1] + x(r, 2) * v[2];
    return out;
  }

  Mat3 transpose() const {
    Mat3 out;
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  T det() const {
    const Mat3& a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }

  Vec3<T> row(std::size_t r) const { return {{(*this)(r, 0), (*this)(r, 1), (*this)(r, 2)}}; }
};

using Mat3Rational = Mat3<Rational>;
using Mat3Integer = Mat3<Integer>;

/// Exact test for membership in SO(3): M^T M = I and det M = 1.
inline bool is_rotation(const Mat3Rational& m) {
  return m.transpose() * m == Mat3Rational::identity() && m.det() == 1;
}

inline std::string to_string(const Mat3Rational& m) {
  std::string s = "[";
  for (std::size_t r = 0; r < 3; ++r) {
    s += r ? "; " : "";
    for (std::size_t c = 0; c < 3; ++c) s += (c ? " " : "") + to_string(m(r, c));
  }
  return s + "]";
}

inline std::ostream& operator<<(std::ostream& os, const Mat3Rational& m) { return os << to_string(m); }

/// Raises a rotation to a nonnegative power by repeated squaring.
inline Mat3Rational power(Mat3Rational base, std::uint64_t k) {
  Mat3Rational out = Mat3Rational::identity();
  while (k) {
    if (k & 1) out = out * base;
    base = base * base;
    k >>= 1;
  }
  return out;
}

}  // namespace tarski

template <>
struct std::hash<tarski::Vec3Q> {
  std::size_t operator()(const tarski::Vec3Q& x) const noexcept {
    auto mix = [](std::size_t h, mpz_srcptr z) {
      const std::size_t low = mpz_size(z) ? static_cast<std::size_t>(mpz_getlimbn(z, 0)) : 0;
      return (h ^ low ^ static_cast<std::size_t>(z->_mp_size)) * 0x100000001b3ULL;
    };
    std::size_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < 3; ++i) h = mix(mix(h, x[i].get_num_mpz_t()), x[i].get_den_mpz_t());
    return h;
  }
};
