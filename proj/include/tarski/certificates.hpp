#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tarski/certificate.hpp"
#include "tarski/error.hpp"
#include "tarski/exact.hpp"
#include "tarski/f2_paradox.hpp"
#include "tarski/orbit.hpp"
#include "tarski/ray.hpp"
#include "tarski/report.hpp"
#include "tarski/rotation.hpp"
#include "tarski/word.hpp"

/// Concrete certificates: N ~ Z, the circle, the ball minus a point, and the doubling paradoxes.
namespace tarski {

// ---------------------------------------------------------------------------
// N ~ Z

/// x -> (p*x + r) / q on int64, exact or an Error.
inline Transform<std::int64_t> affine_int(std::int64_t p, std::int64_t r, std::int64_t q) {
  if (p == 0 || q == 0) throw PreconditionError("affine map needs nonzero p and q");
  auto map = [](std::int64_t num_mul, std::int64_t add, std::int64_t den) {
    return [=](const std::int64_t& x) {
      const __int128 n = static_cast<__int128>(num_mul) * x + add;
      if (n % den != 0) throw CertificateError("point outside the domain of the affine map", std::to_string(x));
      const __int128 y = n / den;
      if (y > INT64_MAX || y < INT64_MIN) throw CertificateError("affine image overflows", std::to_string(x));
      return static_cast<std::int64_t>(y);
    };
  };
  return {"integer-affine",
          {{"map", "x -> (" + std::to_string(p) + "*x + " + std::to_string(r) + ")/" + std::to_string(q)}},
          map(p, r, q),
          map(q, -r, p)};
}

namespace detail {

inline std::vector<std::int64_t> int_range(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> v;
  for (std::int64_t x = lo; x <= hi; ++x) v.push_back(x);
  return v;
}

inline std::int64_t half_up(std::size_t k) { return static_cast<std::int64_t>((k + 1) / 2); }
inline std::int64_t half_down(std::size_t k) { return static_cast<std::int64_t>(k / 2); }

}  // namespace detail

/// {0, 1, 2, ...}; window(k) = {0..k}.
inline GroundSet<std::int64_t> naturals() {
  return {"N (with 0)", [](const std::int64_t& x) { return x >= 0; },
          [](std::size_t k) { return detail::int_range(0, static_cast<std::int64_t>(k)); }};
}

/// Z; window(k) = {-ceil(k/2) .. floor(k/2)}, the image of naturals().window(k).
inline GroundSet<std::int64_t> integers() {
  return {"Z", [](const std::int64_t&) { return true; },
          [](std::size_t k) { return detail::int_range(-detail::half_up(k), detail::half_down(k)); }};
}

enum class Parity { even, odd };

/// One half of N ~ Z: evens onto {0, 1, ...} by x/2, or odds onto {-1, -2, ...} by -(x+1)/2.
inline Certificate<std::int64_t> nat_z_part(Parity parity) {
  const bool even = parity == Parity::even;
  auto in_part = [even](const std::int64_t& x) { return x >= 0 && (x % 2 == 0) == even; };
  GroundSet<std::int64_t> source{even ? "even naturals" : "odd naturals", in_part, [in_part](std::size_t k) {
                                   std::vector<std::int64_t> v = detail::int_range(0, static_cast<std::int64_t>(k));
                                   std::erase_if(v, [&](std::int64_t x) { return !in_part(x); });
                                   return v;
                                 }};
  GroundSet<std::int64_t> target =
      even ? GroundSet<std::int64_t>{"nonnegative integers", [](const std::int64_t& y) { return y >= 0; },
                                     [](std::size_t k) { return detail::int_range(0, detail::half_down(k)); }}
           : GroundSet<std::int64_t>{"negative integers", [](const std::int64_t& y) { return y < 0; },
                                     [](std::size_t k) { return detail::int_range(-detail::half_up(k), -1); }};
  Certificate<std::int64_t> c{even ? "nat-z evens" : "nat-z odds", "integer affine maps", source, target, {}};
  c.pieces.push_back({even ? "evens" : "odds",
                      {source.description, in_part},
                      even ? affine_int(1, 0, 2) : affine_int(-1, -1, 2),
                      {target.description, target.membership}});
  return c;
}

/// N ~ Z: evens by x/2, odds by -(x+1)/2.
inline Certificate<std::int64_t> nat_z_certificate() {
  const Certificate<std::int64_t> evens = nat_z_part(Parity::even);
  const Certificate<std::int64_t> odds = nat_z_part(Parity::odd);
  Certificate<std::int64_t> c{"nat-z", "integer affine maps", naturals(), integers(), {}};
  c.pieces = {evens.pieces.front(), odds.pieces.front()};
  return c;
}

/// f(x) = x + 1 from N onto N \ {0}, and g(x) = x - 1 from N \ {0} onto N; input to bsb_combine.
struct ShiftInstance {
  Certificate<std::int64_t> f, g;
};

inline ShiftInstance nat_shift_instance() {
  auto positive = [](const std::int64_t& x) { return x >= 1; };
  GroundSet<std::int64_t> pos{"N \\ {0}", positive,
                              [](std::size_t k) { return detail::int_range(1, static_cast<std::int64_t>(k) + 1); }};
  ShiftInstance s{{"shift", "integer affine maps", naturals(), pos, {}}, {"unshift", "integer affine maps", pos, naturals(), {}}};
  s.f.pieces.push_back({"x+1", {"N", naturals().membership}, affine_int(1, 1, 1), {pos.description, positive}});
  s.g.pieces.push_back({"x-1", {pos.description, positive}, affine_int(1, -1, 1), {"N", naturals().membership}});
  return s;
}

// ---------------------------------------------------------------------------
// Rational plane rotations

/// cos = cn/d, sin = sn/d with a common denominator.
struct PlaneRotation {
  Rational cos, sin;
  Integer cn, sn, d;
};

inline PlaneRotation plane_rotation(const Rational& c, const Rational& s) {
  if (c * c + s * s != 1) throw PreconditionError("cos^2 + sin^2 != 1", to_string(c) + ", " + to_string(s));
  PlaneRotation r{c, s, 0, 0, 0};
  mpz_lcm(r.d.get_mpz_t(), c.get_den_mpz_t(), s.get_den_mpz_t());
  r.cn = c.get_num() * (r.d / c.get_den());
  r.sn = s.get_num() * (r.d / s.get_den());
  return r;
}

/// (a + bi)^k.
inline std::pair<Integer, Integer> gaussian_pow(Integer a, Integer b, std::uint64_t k) {
  Integer x = 1, y = 0;
  while (k) {
    if (k & 1) {
      Integer t = x * a - y * b;
      y = x * b + y * a;
      x = std::move(t);
    }
    Integer t = a * a - b * b;
    b = 2 * a * b;
    a = std::move(t);
    k >>= 1;
  }
  return {x, y};
}

/// R^k (1, 0), exactly.
inline std::pair<Rational, Rational> orbit_point(const PlaneRotation& r, std::uint64_t k) {
  auto [x, y] = gaussian_pow(r.cn, r.sn, k);
  Integer scale;
  mpz_pow_ui(scale.get_mpz_t(), r.d.get_mpz_t(), k);
  return {make_rational(x, scale), make_rational(y, scale)};
}

/// Smallest k in 1..max_k with R^k (1,0) = (1,0), by exact iteration on scaled integers.
inline std::optional<std::uint64_t> first_return(const PlaneRotation& r, std::uint64_t max_k) {
  Integer x = 1, y = 0, scale = 1;
  for (std::uint64_t k = 1; k <= max_k; ++k) {
    Integer nx = r.cn * x - r.sn * y;
    y = r.sn * x + r.cn * y;
    x = std::move(nx);
    scale *= r.d;
    if (y == 0 && x == scale) return k;
  }
  return std::nullopt;
}

inline VerificationReport order_check_report(const PlaneRotation& r, std::uint64_t max_k) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "order-check";
  report.set_param("cos", to_string(r.cos));
  report.set_param("sin", to_string(r.sin));
  report.set_param("K", std::to_string(max_k));
  const std::optional<std::uint64_t> k = first_return(r, max_k);
  report.items_checked = k ? *k : max_k;
  if (k) report.add_failure("k=" + std::to_string(*k), "R^k(1,0) = (1,0)");
  timer.stop(report);
  return report;
}

inline void require_infinite_order(const PlaneRotation& r, std::uint64_t max_k) {
  if (const auto k = first_return(r, max_k))
    throw CertificateError("rotation returns to (1,0)", "k=" + std::to_string(*k));
}

// ---------------------------------------------------------------------------
// S^1 ~ S^1 \ {(1,0)}

/// A circle point: R^index (1,0) on the orbit of (1,0), or an opaque tag for a point off it.
struct CirclePoint {
  enum class Kind : std::uint8_t { orbit, complement };
  Kind kind = Kind::orbit;
  std::uint64_t index = 0;

  friend auto operator<=>(const CirclePoint&, const CirclePoint&) = default;
};

inline std::string to_string(const CirclePoint& p) {
  return p.kind == CirclePoint::Kind::orbit ? "R^" + std::to_string(p.index) + "(1,0)"
                                            : "off-orbit#" + std::to_string(p.index);
}

/// Off-orbit tags placed in every window.
inline constexpr std::uint64_t kComplementSamples = 3;

namespace detail {

/// circle_certificate once the order check has passed.
inline Certificate<CirclePoint> circle_certificate_after_check(const Rational& cos_theta, const Rational& sin_theta,
                                                               std::uint64_t order_k) {
  const PlaneRotation rot = plane_rotation(cos_theta, sin_theta);
  using Kind = CirclePoint::Kind;
  auto window = [](std::uint64_t first) {
    return [first](std::size_t k) {
      std::vector<CirclePoint> v;
      for (std::uint64_t i = first; i <= k + first; ++i) v.push_back({Kind::orbit, i});
      for (std::uint64_t i = 0; i < kComplementSamples; ++i) v.push_back({Kind::complement, i});
      return v;
    };
  };
  // Indices up to order_k are known not to return; beyond that, compute.
  auto in_target = [rot, order_k](const CirclePoint& p) {
    if (p.kind == Kind::complement) return true;
    if (p.index == 0) return false;
    if (p.index <= order_k) return true;
    const auto [x, y] = orbit_point(rot, p.index);
    return !(x == 1 && y == 0);
  };
  const std::string angle = "(" + to_string(cos_theta) + ", " + to_string(sin_theta) + ")";
  Certificate<CirclePoint> c{"circle", "rotations of the plane by multiples of the angle " + angle,
                             {"S^1", [](const CirclePoint&) { return true; }, window(0)},
                             {"S^1 minus (1,0)", in_target, window(1)},
                             {}};
  Transform<CirclePoint> shift{"rotation",
                               {{"cos", to_string(cos_theta)}, {"sin", to_string(sin_theta)}, {"orbit_shift", "+1"}},
                               [](const CirclePoint& p) {
                                 if (p.kind != Kind::orbit) throw CertificateError("not an orbit point", to_string(p));
                                 return CirclePoint{Kind::orbit, p.index + 1};
                               },
                               [](const CirclePoint& p) {
                                 if (p.kind != Kind::orbit || p.index == 0)
                                   throw CertificateError("no orbit preimage", to_string(p));
                                 return CirclePoint{Kind::orbit, p.index - 1};
                               }};
  c.pieces.push_back({"orbit",
                      {"orbit of (1,0)", [](const CirclePoint& p) { return p.kind == Kind::orbit; }},
                      shift,
                      {"orbit of (1,0) minus (1,0)",
                       [](const CirclePoint& p) { return p.kind == Kind::orbit && p.index >= 1; }}});
  c.pieces.push_back({"rest",
                      {"off the orbit", [](const CirclePoint& p) { return p.kind == Kind::complement; }},
                      identity_transform<CirclePoint>(),
                      {"off the orbit", [](const CirclePoint& p) { return p.kind == Kind::complement; }}});
  return c;
}

}  // namespace detail

/**
 * S^1 ~ S^1 \ {(1,0)} for a rotation of infinite order: the orbit of (1,0) is
 * shifted one step, everything else stays. The order check up to `order_k`
 * runs first. Windows hold orbit indices 0..k (target 1..k+1) and the tags.
 */
inline Certificate<CirclePoint> circle_certificate(const Rational& cos_theta, const Rational& sin_theta,
                                                   std::uint64_t order_k = 100000) {
  require_infinite_order(plane_rotation(cos_theta, sin_theta), order_k);
  return detail::circle_certificate_after_check(cos_theta, sin_theta, order_k);
}

inline VerificationReport verify_circle(const Rational& cos_theta, const Rational& sin_theta, std::size_t window,
                                        std::uint64_t order_k, unsigned threads = 1) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "circle";
  report.set_param("cos", to_string(cos_theta));
  report.set_param("sin", to_string(sin_theta));
  report.set_param("window", std::to_string(window));
  report.set_param("order_check", std::to_string(order_k));
  report.set_metric("rotation", "rational angle in place of 1 radian; no-return checked exactly up to K");
  const PlaneRotation rot = plane_rotation(cos_theta, sin_theta);
  for (std::uint64_t k : {1, 2}) {
    const auto [x, y] = orbit_point(rot, k);
    report.set_metric("R^" + std::to_string(k) + "(1,0)", "(" + to_string(x) + "," + to_string(y) + ")");
  }
  VerificationReport order = order_check_report(rot, order_k);
  const bool order_ok = order.passed();
  report.sections.push_back(std::move(order));
  if (order_ok)
    report.sections.push_back(
        verify_certificate(detail::circle_certificate_after_check(cos_theta, sin_theta, order_k), window, threads));
  for (const VerificationReport& s : report.sections) report.items_checked += s.items_checked;
  timer.stop(report);
  return report;
}

// ---------------------------------------------------------------------------
// B^3 ~ B^3 \ {0}

namespace detail {

/**
 * Powers (3 + 4i)^k = X_k + i Y_k with 5^k, grown on demand. Since
 * 3 + 4i = (2 + i)^2 and 2 - i does not divide it, X_k and Y_k are never both
 * divisible by 5.
 */
class UnitPowers {
 public:
  struct Entry {
    Integer x, y, scale;
  };

  Entry at(std::uint64_t k) {
    if (k > kCacheLimit) {
      auto [x, y] = gaussian_pow(3, 4, k);
      return {x, y, pow5(static_cast<unsigned>(k))};
    }
    std::lock_guard lock(mutex_);
    while (powers_.size() <= k) {
      const Entry& e = powers_.back();
      powers_.push_back({3 * e.x - 4 * e.y, 4 * e.x + 3 * e.y, 5 * e.scale});
    }
    return powers_[k];
  }

 private:
  static constexpr std::uint64_t kCacheLimit = 1u << 20;
  std::mutex mutex_;
  std::deque<Entry> powers_{{Integer(1), Integer(0), Integer(1)}};
};

/**
 * num/den in lowest terms. Orbit denominators are 2^a 5^b, so those primes are
 * cancelled by trial division; a full gcd runs only when den has other factors.
 */
inline Rational fraction(Integer num, Integer den) {
  if (den == 0) throw PreconditionError("zero denominator");
  if (den < 0) num = -num, den = -den;
  Rational q;
  Integer rough = den;
  const mp_bitcnt_t e2 = mpz_scan1(rough.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(rough.get_mpz_t(), rough.get_mpz_t(), e2);
  std::size_t e5 = mpz_remove(rough.get_mpz_t(), rough.get_mpz_t(), Integer(5).get_mpz_t());
  if (rough != 1 || num == 0) {
    q.get_num() = std::move(num);
    q.get_den() = std::move(den);
    q.canonicalize();
    return q;
  }
  const mp_bitcnt_t twos = std::min<mp_bitcnt_t>(e2, mpz_scan1(num.get_mpz_t(), 0));
  mpz_tdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), twos);
  mpz_tdiv_q_2exp(den.get_mpz_t(), den.get_mpz_t(), twos);
  for (; e5 > 0 && mpz_divisible_ui_p(num.get_mpz_t(), 5); --e5) {
    mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), 5);
    mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), 5);
  }
  q.get_num() = std::move(num);
  q.get_den() = std::move(den);
  return q;
}

/// lcm of the three denominators; usually one of them is a multiple of the others.
inline Integer common_denominator(const Vec3Q& x) {
  const Integer* big = &x[0].get_den();
  for (std::size_t i = 1; i < 3; ++i)
    if (cmp(x[i].get_den(), *big) > 0) big = &x[i].get_den();
  bool divides = true;
  for (std::size_t i = 0; i < 3; ++i) divides = divides && mpz_divisible_p(big->get_mpz_t(), x[i].get_den_mpz_t());
  if (divides) return *big;
  Integer l = 1;
  for (std::size_t i = 0; i < 3; ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x[i].get_den_mpz_t());
  return l;
}

}  // namespace detail

/**
 * x -> c + M (x - c) for a rational rotation M and centre c. Each output
 * coordinate is formed over one common denominator and reduced once.
 */
class RigidMotion {
 public:
  RigidMotion(const Mat3Rational& m, const Vec3Q& centre) : matrix_(m), centre_(centre) {
    mden_ = 1;
    for (const Rational& q : m.m) mpz_lcm(mden_.get_mpz_t(), mden_.get_mpz_t(), q.get_den_mpz_t());
    for (std::size_t i = 0; i < 9; ++i) mnum_.m[i] = m.m[i].get_num() * (mden_ / m.m[i].get_den());
    cden_ = 1;
    for (std::size_t i = 0; i < 3; ++i) mpz_lcm(cden_.get_mpz_t(), cden_.get_mpz_t(), centre[i].get_den_mpz_t());
    for (std::size_t i = 0; i < 3; ++i) cnum_[i] = centre[i].get_num() * (cden_ / centre[i].get_den());
  }

  const Mat3Rational& matrix() const { return matrix_; }
  const Vec3Q& centre() const { return centre_; }
  RigidMotion inverse() const { return RigidMotion(matrix_.transpose(), centre_); }

  Vec3Q operator()(const Vec3Q& x) const {
    const Integer l = detail::common_denominator(x);
    // x - c = d / (l * cden)
    Vec3Z d;
    for (std::size_t j = 0; j < 3; ++j) d[j] = x[j].get_num() * (l / x[j].get_den()) * cden_ - cnum_[j] * l;
    const Integer den = mden_ * l * cden_;
    Vec3Q out;
    for (std::size_t i = 0; i < 3; ++i) {
      Integer num = cnum_[i] * mden_ * l;
      for (std::size_t j = 0; j < 3; ++j)
        if (mnum_(i, j) != 0) num += mnum_(i, j) * d[j];
      out[i] = detail::fraction(num, den);
    }
    return out;
  }

 private:
  Mat3Rational matrix_;
  Vec3Q centre_;
  Mat3Integer mnum_;
  Integer mden_, cden_;
  Vec3Z cnum_;
};

inline Transform<Vec3Q> rigid_transform(const RigidMotion& m) {
  return {"rigid-motion",
          {{"rotation", to_string(m.matrix())}, {"centre", to_string(m.centre())}},
          [m](const Vec3Q& x) { return m(x); },
          [inv = m.inverse()](const Vec3Q& x) { return inv(x); }};
}

/// |x|^2 <= 1, compared over a common denominator.
inline bool in_closed_ball(const Vec3Q& x) {
  Integer sq[3], den = 1;
  for (std::size_t i = 0; i < 3; ++i) {
    sq[i] = x[i].get_den() * x[i].get_den();
    den *= sq[i];
  }
  Integer lhs = 0;
  for (std::size_t i = 0; i < 3; ++i)
    if (x[i] != 0) lhs += x[i].get_num() * x[i].get_num() * (den / sq[i]);
  return lhs <= den;
}

/**
 * The circle through the origin used to absorb the hole: centre (1/2, 0, 0),
 * radius 1/2, in the plane z = 0. Its orbit is p_k = c + R^k (p_0 - c) with
 * p_0 = 0 and R the rotation about the vertical line through c by (3/5, 4/5).
 * In complex form p_k - c = -w^k / 2 with w = (3 + 4i)/5.
 */
class HoleCircle {
 public:
  HoleCircle() : powers_(std::make_shared<detail::UnitPowers>()) {}

  static Vec3Q centre() { return {{Rational(1, 2), Rational(0), Rational(0)}}; }

  /// Orbit points are recognised first; the general test is slower on them.
  bool contains(const Vec3Q& p) const { return orbit_index(p).has_value() || on_circle(p); }

  /// z = 0 and (x - 1/2)^2 + y^2 = 1/4; with x = a/b, y = c/d: (2a - b)^2 d^2 + 4 c^2 b^2 = b^2 d^2.
  static bool on_circle(const Vec3Q& p) {
    if (p[2] != 0) return false;
    const Integer &a = p[0].get_num(), &b = p[0].get_den(), &c = p[1].get_num(), &d = p[1].get_den();
    const Integer u = 2 * a - b;
    const Integer bd = b * d;
    return u * u * d * d + 4 * c * c * b * b == bd * bd;
  }

  Vec3Q point(std::uint64_t k) const {
    const detail::UnitPowers::Entry e = powers_->at(k);
    const Integer den = 2 * e.scale;
    return {{detail::fraction(e.scale - e.x, den), detail::fraction(-e.y, den), Rational(0)}};
  }

  /// k with p = p_k, if p is on the orbit. The lcm of the denominators of w^k is 5^k.
  std::optional<std::uint64_t> orbit_index(const Vec3Q& p) const {
    if (p[2] != 0) return std::nullopt;
    // u = -2 (p - c) = 1 - 2 p_x - 2i p_y
    const Rational ux = 1 - 2 * p[0];
    const Rational uy = -2 * p[1];
    const Integer& dmax = cmp(ux.get_den(), uy.get_den()) >= 0 ? ux.get_den() : uy.get_den();
    const std::size_t digits = mpz_sizeinbase(dmax.get_mpz_t(), 5);
    for (std::size_t k : {digits - 1, digits}) {
      const detail::UnitPowers::Entry e = powers_->at(k);
      if (e.scale != dmax) continue;
      if (ux.get_num() * e.scale == e.x * ux.get_den() && uy.get_num() * e.scale == e.y * uy.get_den()) return k;
      return std::nullopt;
    }
    return std::nullopt;
  }

  static RigidMotion motion() { return RigidMotion(sigma(), centre()); }

 private:
  std::shared_ptr<detail::UnitPowers> powers_;
};

/// Fixed sample points added to every ball window: off the circle, and on it but off the orbit.
inline std::vector<Vec3Q> ball_samples() {
  auto q = [](long n, long d) { return Rational(n, d); };
  return {
      {{q(0, 1), q(0, 1), q(1, 2)}},   {{q(1, 2), q(0, 1), q(0, 1)}}, {{q(0, 1), q(0, 1), q(-1, 1)}},
      {{q(1, 3), q(1, 3), q(1, 3)}},   {{q(-1, 1), q(0, 1), q(0, 1)}},
      {{q(1, 1), q(0, 1), q(0, 1)}},   {{q(9, 13), q(6, 13), q(0, 1)}},
  };
}

namespace detail {

inline Certificate<Vec3Q> ball_minus_point_after_check() {
  const HoleCircle circle;
  auto window = [circle](std::uint64_t first) {
    return [circle, first](std::size_t k) {
      std::vector<Vec3Q> v = ball_samples();
      for (std::uint64_t i = first; i <= k + first; ++i) v.push_back(circle.point(i));
      return v;
    };
  };
  const Vec3Q origin{};
  // The circle lies in the ball, so orbit points skip the general tests.
  auto in_ball = [circle](const Vec3Q& x) { return circle.orbit_index(x).has_value() || in_closed_ball(x); };
  auto off_circle = [circle](const Vec3Q& x) { return !circle.contains(x); };
  auto rest = [circle](const Vec3Q& x) { return !circle.orbit_index(x) && HoleCircle::on_circle(x); };
  Certificate<Vec3Q> c{"ball-minus-point", "rigid motions of R^3",
                       {"closed unit ball", in_ball, window(0)},
                       {"closed unit ball minus the origin",
                        [in_ball, origin](const Vec3Q& x) { return !(x == origin) && in_ball(x); }, window(1)},
                       {}};
  c.pieces.push_back({"off-circle", {"off the circle", off_circle}, identity_transform<Vec3Q>(),
                      {"off the circle", off_circle}});
  c.pieces.push_back({"orbit",
                      {"orbit p_k, k >= 0", [circle](const Vec3Q& x) { return circle.orbit_index(x).has_value(); }},
                      rigid_transform(HoleCircle::motion()),
                      {"orbit p_k, k >= 1", [circle](const Vec3Q& x) {
                         const auto k = circle.orbit_index(x);
                         return k && *k >= 1;
                       }}});
  c.pieces.push_back({"circle-rest", {"on the circle, off the orbit", rest}, identity_transform<Vec3Q>(),
                      {"on the circle, off the orbit", rest}});
  return c;
}

}  // namespace detail

/**
 * B^3 ~ B^3 \ {0} under rigid motions: the orbit p_0 = 0, p_1, ... of the hole
 * circle moves one step, all other points stay. Windows hold ball_samples()
 * followed by p_0..p_k (target p_1..p_{k+1}).
 */
inline Certificate<Vec3Q> ball_minus_point_certificate(std::uint64_t order_k = 100000) {
  require_infinite_order(plane_rotation(Rational(3, 5), Rational(4, 5)), order_k);
  return detail::ball_minus_point_after_check();
}

inline VerificationReport verify_ball_minus_point(std::size_t window, std::uint64_t order_k, unsigned threads = 1) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "ball-minus-point";
  report.set_param("window", std::to_string(window));
  report.set_param("order_check", std::to_string(order_k));
  const HoleCircle circle;
  report.set_metric("circle", "centre (1/2,0,0), radius 1/2, plane z=0");
  report.set_metric("p0", to_string(circle.point(0)));
  report.set_metric("p1", to_string(circle.point(1)));
  VerificationReport order = order_check_report(plane_rotation(Rational(3, 5), Rational(4, 5)), order_k);
  const bool order_ok = order.passed();
  report.sections.push_back(std::move(order));
  if (order_ok) {
    const Certificate<Vec3Q> cert = detail::ball_minus_point_after_check();
    if (cert.target.contains(circle.point(0))) report.add_failure(to_string(circle.point(0)), "origin lies in the target");
    report.set_metric("origin_image", to_string(apply_certificate(cert, circle.point(0))));
    report.sections.push_back(verify_certificate(cert, window, threads));
  }
  for (const VerificationReport& s : report.sections) report.items_checked += s.items_checked;
  timer.stop(report);
  return report;
}

// ---------------------------------------------------------------------------
// F2 is F2-paradoxical

/// w -> l w.
inline Transform<Word> left_multiply(Letter l) {
  return {"left-multiplication",
          {{"by", std::string(1, to_char(l))}},
          [l](const Word& w) { return concat(Word::of(l), w); },
          [l](const Word& w) { return concat(Word::of(inverse(l)), w); }};
}

inline GroundSet<Word> free_group_ground() {
  return {"F2", [](const Word&) { return true; }, [](std::size_t k) { return detail::sorted_unique(enumerate_ball(k)); }};
}

namespace detail {

inline Predicate<Word> word_piece(PieceLabel l) {
  return {std::string(to_string(l)), [l](const Word& w) { return piece_member(w.letters(), l); }};
}

/// x*L as a predicate: w with x^-1 w in L.
inline Predicate<Word> translated_piece(Letter x, PieceLabel l) {
  return {std::string(1, to_char(x)) + "*" + std::string(to_string(l)),
          [x, l](const Word& w) { return product_member(inverse(x), w.letters(), l); }};
}

inline Certificate<Word> half_certificate(PieceLabel whole, PieceLabel moved, PieceLabel kept, Letter by) {
  const GroundSet<Word> f2 = free_group_ground();
  const Predicate<Word> in_whole = word_piece(whole);
  GroundSet<Word> source{in_whole.description, in_whole.test, [f2, in_whole](std::size_t k) {
                           std::vector<Word> v = f2.window(k);
                           std::erase_if(v, [&](const Word& w) { return !in_whole(w); });
                           return v;
                         }};
  Certificate<Word> c{std::string(to_string(whole)) + " ~ F2", "F2 acting on itself by left multiplication",
                      source, f2, {}};
  c.pieces.push_back({std::string(to_string(moved)), word_piece(moved), left_multiply(by), translated_piece(by, moved)});
  c.pieces.push_back({std::string(to_string(kept)), word_piece(kept), identity_transform<Word>(), word_piece(kept)});
  return c;
}

}  // namespace detail

/// P1 = A1 + A2 ~ a A1 + A2 = F2 and P2 = B1 + B2 ~ b B1 + B2 = F2.
inline ParadoxCertificate<Word> f2_paradox_certificate() {
  return {free_group_ground(),
          detail::half_certificate(PieceLabel::P1, PieceLabel::A1, PieceLabel::A2, Letter::a),
          detail::half_certificate(PieceLabel::P2, PieceLabel::B1, PieceLabel::B2, Letter::b)};
}

// ---------------------------------------------------------------------------
// Finite-stage sphere and ball

/// Rotation of rays by the letter's generator.
inline Transform<RationalRay> letter_rotation(Letter l) {
  return {"rotation",
          {{"matrix", to_string(generator_matrix(l))}},
          [l](const RationalRay& r) { return apply(l, r); },
          [l](const RationalRay& r) { return apply(inverse(l), r); }};
}

namespace detail {

/// The truncated orbit as a lookup table ray -> word, windowed by word length.
struct OrbitTable {
  std::map<RationalRay, Word> word_of;
  std::vector<std::vector<RationalRay>> by_length;

  explicit OrbitTable(const OrbitBall& ball) : by_length(ball.radius + 1) {
    for (const auto& [w, r] : ball.entries) {
      word_of.emplace(r, w);
      by_length[w.length()].push_back(r);
    }
  }

  const Word* find(const RationalRay& r) const {
    auto it = word_of.find(r);
    return it == word_of.end() ? nullptr : &it->second;
  }

  std::vector<RationalRay> window(std::size_t k) const {
    std::vector<RationalRay> v;
    for (std::size_t len = 0; len <= std::min(k, by_length.size() - 1); ++len)
      v.insert(v.end(), by_length[len].begin(), by_length[len].end());
    return sorted_unique(std::move(v));
  }
};

inline Predicate<RationalRay> ray_piece(std::shared_ptr<const OrbitTable> t, PieceLabel l) {
  return {std::string(to_string(l)) + "M", [t, l](const RationalRay& r) {
            const Word* w = t->find(r);
            return w && piece_member(w->letters(), l);
          }};
}

inline Predicate<RationalRay> rotated_ray_piece(std::shared_ptr<const OrbitTable> t, Letter x, PieceLabel l) {
  return {std::string(1, to_char(x)) + "*" + std::string(to_string(l)) + "M", [t, x, l](const RationalRay& r) {
            const Word* w = t->find(apply(inverse(x), r));
            return w && piece_member(w->letters(), l);
          }};
}

}  // namespace detail

/**
 * Sphere paradox on the orbit ball of radius n: P1 M ~ M via sigma on A1 M and
 * P2 M ~ M via tau on B1 M. Tables reach radius n, so verify at window n-1.
 */
inline ParadoxCertificate<RationalRay> sphere_paradox_certificate(const OrbitBall& ball) {
  auto table = std::make_shared<const detail::OrbitTable>(ball);
  GroundSet<RationalRay> ground{"orbit of " + to_string(ball.seed) + " to radius " + std::to_string(ball.radius),
                                [table](const RationalRay& r) { return table->find(r) != nullptr; },
                                [table](std::size_t k) { return table->window(k); }};
  auto half = [&](PieceLabel whole, PieceLabel moved, PieceLabel kept, Letter by) {
    const Predicate<RationalRay> in_whole = detail::ray_piece(table, whole);
    GroundSet<RationalRay> source{in_whole.description, in_whole.test, [table, in_whole](std::size_t k) {
                                    std::vector<RationalRay> v = table->window(k);
                                    std::erase_if(v, [&](const RationalRay& r) { return !in_whole(r); });
                                    return v;
                                  }};
    Certificate<RationalRay> c{in_whole.description + " ~ M", "rotations generated by sigma, tau", source, ground, {}};
    c.pieces.push_back({std::string(to_string(moved)) + "M", detail::ray_piece(table, moved), letter_rotation(by),
                        detail::rotated_ray_piece(table, by, moved)});
    c.pieces.push_back({std::string(to_string(kept)) + "M", detail::ray_piece(table, kept),
                        identity_transform<RationalRay>(), detail::ray_piece(table, kept)});
    return c;
  };
  return {ground, half(PieceLabel::P1, PieceLabel::A1, PieceLabel::A2, Letter::a),
          half(PieceLabel::P2, PieceLabel::B1, PieceLabel::B2, Letter::b)};
}

/// sphere_pieces_finite plus the certificate-level check of the same stage.
inline VerificationReport sphere_paradox_report(const RationalRay& seed, std::size_t n, unsigned threads = 1) {
  SphereStage stage = sphere_pieces_finite(seed, n, threads);
  const ParadoxCertificate<RationalRay> pc = sphere_paradox_certificate(stage.ball);
  stage.report.sections.push_back(verify_paradox(pc, n - 1, threads));
  return std::move(stage.report);
}

/// A point r * x of the ball: radius label r and direction x.
struct RadialPoint {
  Rational r;
  RationalRay ray;

  friend bool operator==(const RadialPoint& p, const RadialPoint& q) { return p.r == q.r && p.ray == q.ray; }
  friend bool operator<(const RadialPoint& p, const RadialPoint& q) {
    if (p.r != q.r) return p.r < q.r;
    return p.ray < q.ray;
  }
};

inline std::string to_string(const RadialPoint& p) { return to_string(p.r) + "*" + to_string(p.ray); }

struct BallDoubling {
  ParadoxCertificate<RadialPoint> certificate;
  VerificationReport report;
};

/**
 * Finite-stage ball doubling: the sphere pieces of one orbit ball replicated on
 * each radius shell, rotations acting on the direction only. D is carried as an
 * explicitly empty piece. Verified at window n-1 like the sphere stage.
 */
inline BallDoubling ball_doubling_certificate(const RationalRay& seed, std::size_t n, std::vector<Rational> radii,
                                              unsigned threads = 1) {
  if (radii.empty()) throw PreconditionError("at least one radius is needed");
  std::set<Rational> distinct;
  for (const Rational& r : radii) {
    if (r <= 0 || r > 1) throw PreconditionError("radii must lie in (0, 1]", to_string(r));
    if (!distinct.insert(r).second) throw PreconditionError("radii must be distinct", to_string(r));
  }
  ReportTimer timer;
  BallDoubling out;
  VerificationReport& report = out.report;
  report.check = "ball-paradox";
  report.set_param("seed", to_string(seed));
  report.set_param("max_len", std::to_string(n));
  std::string radii_text;
  for (const Rational& r : distinct) radii_text += (radii_text.empty() ? "" : ",") + to_string(r);
  report.set_param("radii", radii_text);

  SphereStage stage = sphere_pieces_finite(seed, n, threads);
  if (!stage.report.passed()) throw PreconditionError("sphere stage does not pass", to_string(seed));
  auto table = std::make_shared<const detail::OrbitTable>(stage.ball);
  auto shells = std::make_shared<const std::vector<Rational>>(distinct.begin(), distinct.end());

  auto on_shell = [shells](const Rational& r) { return std::binary_search(shells->begin(), shells->end(), r); };
  GroundSet<RadialPoint> ground{"radial model: shells {" + radii_text + "} over the orbit ball",
                                [table, on_shell](const RadialPoint& p) { return on_shell(p.r) && table->find(p.ray); },
                                [table, shells](std::size_t k) {
                                  std::vector<RadialPoint> v;
                                  const std::vector<RationalRay> rays = table->window(k);
                                  for (const Rational& r : *shells)
                                    for (const RationalRay& x : rays) v.push_back({r, x});
                                  return v;
                                }};

  auto lift = [](const Predicate<RationalRay>& p, const Rational& r) -> Predicate<RadialPoint> {
    return {p.description + "@" + to_string(r), [t = p.test, r](const RadialPoint& q) { return q.r == r && t(q.ray); }};
  };
  auto lift_transform = [](const Transform<RationalRay>& t) -> Transform<RadialPoint> {
    return {t.kind, t.params, [f = t.forward](const RadialPoint& p) { return RadialPoint{p.r, f(p.ray)}; },
            [b = t.backward](const RadialPoint& p) { return RadialPoint{p.r, b(p.ray)}; }};
  };
  auto half = [&](PieceLabel whole, PieceLabel moved, PieceLabel kept, Letter by, bool with_d) {
    const Predicate<RationalRay> in_whole = detail::ray_piece(table, whole);
    GroundSet<RadialPoint> source{in_whole.description + " on every shell",
                                  [on_shell, t = in_whole.test](const RadialPoint& p) { return on_shell(p.r) && t(p.ray); },
                                  [g = ground.window, t = in_whole.test](std::size_t k) {
                                    std::vector<RadialPoint> v = g(k);
                                    std::erase_if(v, [&](const RadialPoint& p) { return !t(p.ray); });
                                    return v;
                                  }};
    Certificate<RadialPoint> c{in_whole.description + " ~ ball model", "rotations generated by sigma, tau", source,
                               ground, {}};
    for (const Rational& r : *shells) {
      c.pieces.push_back({std::string(to_string(moved)) + "M@" + to_string(r), lift(detail::ray_piece(table, moved), r),
                          lift_transform(letter_rotation(by)), lift(detail::rotated_ray_piece(table, by, moved), r)});
      c.pieces.push_back({std::string(to_string(kept)) + "M@" + to_string(r), lift(detail::ray_piece(table, kept), r),
                          identity_transform<RadialPoint>(), lift(detail::ray_piece(table, kept), r)});
      if (with_d)
        c.pieces.push_back({"D@" + to_string(r), always<RadialPoint>(false, "D (empty at finite stage)"),
                            identity_transform<RadialPoint>(), always<RadialPoint>(false, "D (empty at finite stage)")});
    }
    return c;
  };
  out.certificate = {ground, half(PieceLabel::P1, PieceLabel::A1, PieceLabel::A2, Letter::a, true),
                     half(PieceLabel::P2, PieceLabel::B1, PieceLabel::B2, Letter::b, false)};

  // Rotations keep the shell, and act on the direction exactly as on the sphere.
  FailureSink failures;
  std::uint64_t preserved = 0;
  const std::vector<RadialPoint> points = ground.window(n);
  for (const RadialPoint& p : points)
    for (Letter l : kLetters) {
      const RadialPoint q = lift_transform(letter_rotation(l)).forward(p);
      if (q.r == p.r && q.ray == apply(l, p.ray)) ++preserved;
      else failures.add(to_string(p), std::string("rotation by ") + to_char(l) + " moves it off its shell");
    }

  PieceLabel quarters[] = {PieceLabel::A1, PieceLabel::A2, PieceLabel::B1, PieceLabel::B2};
  std::uint64_t counts[4] = {};
  for (const RadialPoint& p : points)
    for (std::size_t i = 0; i < 4; ++i) counts[i] += detail::ray_piece(table, quarters[i])(p.ray);

  report.items_checked = points.size() * kLetters.size();
  report.absorb(failures);
  for (std::size_t i = 0; i < 4; ++i) report.set_metric(std::string(to_string(quarters[i])) + "M", counts[i]);
  report.set_metric("total_points", points.size());
  report.set_metric("shells", shells->size());
  report.set_metric("stage_points", ground.window(n - 1).size());
  report.set_metric("radius_preserving_moves", preserved);
  report.set_metric("D_piece", "empty at finite stage (single orbit of a seed outside D)");
  report.sections.push_back(std::move(stage.report));
  report.sections.push_back(verify_paradox(out.certificate, n - 1, threads));
  timer.stop(report);
  return out;
}

}  // namespace tarski

template <>
struct std::hash<tarski::CirclePoint> {
  std::size_t operator()(const tarski::CirclePoint& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.index) * 2 + (p.kind == tarski::CirclePoint::Kind::complement);
  }
};

template <>
struct std::hash<tarski::RadialPoint> {
  std::size_t operator()(const tarski::RadialPoint& p) const noexcept {
    const std::size_t r = static_cast<std::size_t>(mpz_get_si(p.r.get_num_mpz_t())) * 31 +
                          static_cast<std::size_t>(mpz_get_si(p.r.get_den_mpz_t()));
    return std::hash<tarski::RationalRay>{}(p.ray) ^ (r * 0x9e3779b97f4a7c15ULL);
  }
};
