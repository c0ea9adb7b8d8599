#pragma once

#include <cstdint>
#include <string>
#include <type_traits>

#include "tarski/error.hpp"
#include "tarski/exact.hpp"
#include "tarski/word.hpp"

namespace tarski {

/// Rotation about the z-axis with cos = 3/5, sin = 4/5.
inline Mat3Rational sigma() {
  Mat3Rational m;
  m(0, 0) = Rational(3, 5), m(0, 1) = Rational(-4, 5);
  m(1, 0) = Rational(4, 5), m(1, 1) = Rational(3, 5);
  m(2, 2) = 1;
  return m;
}

/// Rotation about the x-axis with cos = 3/5, sin = 4/5.
inline Mat3Rational tau() {
  Mat3Rational m;
  m(0, 0) = 1;
  m(1, 1) = Rational(3, 5), m(1, 2) = Rational(-4, 5);
  m(2, 1) = Rational(4, 5), m(2, 2) = Rational(3, 5);
  return m;
}

/**
 * Five times the image of a letter under a -> sigma, b -> tau. These are the
 * integer matrices the whole exhaustive machinery multiplies.
 */
template <class Int>
Mat3<Int> scaled_generator(Letter l) {
  const int s = is_inverted(l) ? -1 : 1;
  Mat3<Int> g;
  if (generator(l) == Generator::a) {
    g(0, 0) = 3, g(0, 1) = -4 * s;
    g(1, 0) = 4 * s, g(1, 1) = 3;
    g(2, 2) = 5;
  } else {
    g(0, 0) = 5;
    g(1, 1) = 3, g(1, 2) = -4 * s;
    g(2, 1) = 4 * s, g(2, 2) = 3;
  }
  return g;
}

inline Mat3Rational generator_matrix(Letter l) {
  const Mat3<Integer> g = scaled_generator<Integer>(l);
  Mat3Rational out;
  for (std::size_t i = 0; i < 9; ++i) out.m[i] = make_rational(g.m[i], 5);
  return out;
}

/**
 * Longest word whose scaled product fits std::int64_t. Entries of 5^n M are
 * bounded by 5^n since M is orthogonal; a single product step sums three terms
 * of size at most 5^n, and 3 * 5^26 < 2^63.
 */
inline constexpr std::size_t kMaxInt64WordLength = 26;

template <class Int>
Int pow5_as(std::size_t n) {
  if constexpr (std::is_same_v<Int, Integer>) {
    return pow5(static_cast<unsigned>(n));
  } else {
    Int r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= 5;
    return r;
  }
}

/// 5^len(w) times the matrix of w, multiplied out left to right.
template <class Int>
Mat3<Int> scaled_word_matrix(WordView w) {
  Mat3<Int> m = Mat3<Int>::identity();
  for (Letter l : w) m = m * scaled_generator<Int>(l);
  return m;
}

/// Exact image of w under the homomorphism a -> sigma, b -> tau.
inline Mat3Rational word_to_matrix(WordView w) {
  const Mat3<Integer> scaled = scaled_word_matrix<Integer>(w);
  const Integer denom = pow5(static_cast<unsigned>(w.size()));
  Mat3Rational out;
  for (std::size_t i = 0; i < 9; ++i) out.m[i] = make_rational(scaled.m[i], denom);
  return out;
}
inline Mat3Rational word_to_matrix(const Word& w) { return word_to_matrix(w.letters()); }

/// The vector (a, b, c) / 5^n.
struct ScaledIntVec {
  Integer a, b, c;
  unsigned n = 0;

  friend bool operator==(const ScaledIntVec&, const ScaledIntVec&) = default;
};

inline std::string to_string(const ScaledIntVec& v) {
  return "(" + v.a.get_str() + "," + v.b.get_str() + "," + v.c.get_str() + ")/5^" + std::to_string(v.n);
}

/// Applies the letters right to left to (1,0,0), each as 5 * generator.
template <class Int>
Vec3<Int> scaled_e1_image(WordView w) {
  Vec3<Int> v{{Int(1), Int(0), Int(0)}};
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = scaled_generator<Int>(*it) * v;
  return v;
}

inline ScaledIntVec act_on_e1(WordView w) {
  const Vec3<Integer> v = scaled_e1_image<Integer>(w);
  return {v[0], v[1], v[2], static_cast<unsigned>(w.size())};
}
inline ScaledIntVec act_on_e1(const Word& w) { return act_on_e1(w.letters()); }

/**
 * Exact Rodrigues rotation about axis/|axis| by the angle with the given cosine
 * and sine. The axis must have a perfect-square squared norm so the unit axis is
 * rational.
 */
inline Mat3Rational rodrigues_rational(const Vec3Z& axis, const Rational& cos_theta,
                                       const Rational& sin_theta) {
  if (axis[0] == 0 && axis[1] == 0 && axis[2] == 0) throw PreconditionError("axis must be nonzero");
  if (cos_theta * cos_theta + sin_theta * sin_theta != 1)
    throw PreconditionError("cos^2 + sin^2 != 1",
                            to_string(cos_theta) + ", " + to_string(sin_theta));
  const Integer norm2 = dot(axis, axis);
  if (!mpz_perfect_square_p(norm2.get_mpz_t()))
    throw PreconditionError("axis squared norm is not a perfect square", to_string(axis));
  Integer norm;
  mpz_sqrt(norm.get_mpz_t(), norm2.get_mpz_t());

  Vec3Q k;
  for (std::size_t i = 0; i < 3; ++i) k[i] = make_rational(axis[i], norm);
  Mat3Rational cross_matrix;
  cross_matrix(0, 1) = -k[2], cross_matrix(0, 2) = k[1];
  cross_matrix(1, 0) = k[2], cross_matrix(1, 2) = -k[0];
  cross_matrix(2, 0) = -k[1], cross_matrix(2, 1) = k[0];

  Mat3Rational r;
  const Rational one_minus_cos = 1 - cos_theta;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      r(i, j) = (i == j ? cos_theta : Rational(0)) + sin_theta * cross_matrix(i, j) +
                one_minus_cos * k[i] * k[j];
  return r;
}

}  // namespace tarski
