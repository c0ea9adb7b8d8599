#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tarski/error.hpp"
#include "tarski/exact.hpp"
#include "tarski/parallel.hpp"
#include "tarski/ray.hpp"
#include "tarski/report.hpp"
#include "tarski/rotation.hpp"
#include "tarski/word.hpp"

namespace tarski {

/// Rank and (when the rank is 2) a spanning vector of the kernel of an integer 3x3 matrix.
struct IntegerKernel {
  int rank = 0;
  Vec3Z basis;
};

/**
 * For a 3x3 matrix of rank 2 the kernel is spanned by the cross product of any
 * two independent rows; all three row cross products vanish iff rank <= 1.
 */
inline IntegerKernel integer_kernel(const Mat3Integer& k) {
  IntegerKernel out;
  bool zero = true;
  for (const auto& x : k.m) zero = zero && x == 0;
  if (zero) return out;
  if (k.det() != 0) {
    out.rank = 3;
    return out;
  }
  const std::pair<int, int> kPairs[] = {{0, 1}, {0, 2}, {1, 2}};
  for (auto [i, j] : kPairs) {
    Vec3Z c = cross(k.row(i), k.row(j));
    if (c[0] != 0 || c[1] != 0 || c[2] != 0) {
      out.rank = 2;
      out.basis = std::move(c);
      return out;
    }
  }
  out.rank = 1;
  return out;
}

/// Antipodal pair of fixed points; `first` is the canonical axis representative.
using AntipodalPair = std::pair<RationalRay, RationalRay>;

/**
 * The two sphere points fixed by a nontrivial rotation, from the exact kernel of
 * M - I (denominators cleared first).
 */
inline AntipodalPair fixed_ray(const Mat3Rational& m) {
  if (m == Mat3Rational::identity()) throw PreconditionError("identity fixes everything");
  Integer l = 1;
  for (const auto& q : m.m) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  Mat3Integer k;
  for (std::size_t i = 0; i < 9; ++i) k.m[i] = m.m[i].get_num() * (l / m.m[i].get_den());
  for (std::size_t i = 0; i < 3; ++i) k(i, i) -= l;
  const IntegerKernel kernel = integer_kernel(k);
  if (kernel.rank != 2 || !is_rotation(m)) throw PreconditionError("not a nontrivial rotation");
  const RationalRay r = RationalRay(kernel.basis).axis();
  return {r, r.antipode()};
}

/// Points fixed by nontrivial words up to a length, with shortest witnesses.
struct FixedPointCensus {
  std::size_t max_len = 0;
  /// Every fixed point found, mapped to its shortlex-least fixing word.
  std::map<RationalRay, Word> witness;
  /// fixed_by_length[k]: number of points fixed by some word of length exactly k.
  std::vector<std::uint64_t> fixed_by_length;
  /// new_by_length[k]: points whose shortest fixing word has length k.
  std::vector<std::uint64_t> new_by_length;
};

namespace detail {

template <class Int>
Mat3Integer to_integer(const Mat3<Int>& m) {
  Mat3Integer out;
  for (std::size_t i = 0; i < 9; ++i) {
    if constexpr (std::is_same_v<Int, Integer>)
      out.m[i] = m.m[i];
    else
      out.m[i] = static_cast<long>(m.m[i]);
  }
  return out;
}

struct AxisHit {
  RationalRay axis;
  Word word;
};

template <class Int>
std::vector<AxisHit> axes_in_shard(const BallShard& shard, std::size_t n) {
  std::vector<AxisHit> hits;
  for_each_word_in_shard(shard, n, [&](WordView w) {
    if (w.empty()) return;
    Mat3Integer k = to_integer(scaled_word_matrix<Int>(w));
    const Integer scale = pow5(static_cast<unsigned>(w.size()));
    for (std::size_t i = 0; i < 3; ++i) k(i, i) -= scale;
    const IntegerKernel kernel = integer_kernel(k);
    if (kernel.rank != 2)
      throw Error("word " + to_string(w) + " does not act as a nontrivial rotation");
    hits.push_back({RationalRay(kernel.basis).axis(), Word(w)});
  });
  return hits;
}

}  // namespace detail

/**
 * Fixed points of every nontrivial word of length <= n, deduplicated exactly.
 * Both members of each antipodal pair are recorded.
 */
inline FixedPointCensus enumerate_fixed_rays(std::size_t n, unsigned threads = 1) {
  if (n < 1) throw PreconditionError("fixed-point enumeration needs max length >= 1");
  const auto shards = ball_shards(n);
  auto parts = parallel_map(shards.size(), threads, [&](std::size_t i) {
    return n <= kMaxInt64WordLength ? detail::axes_in_shard<std::int64_t>(shards[i], n)
                                    : detail::axes_in_shard<Integer>(shards[i], n);
  });

  FixedPointCensus census;
  census.max_len = n;
  census.fixed_by_length.assign(n + 1, 0);
  census.new_by_length.assign(n + 1, 0);
  std::vector<std::set<RationalRay>> by_length(n + 1);
  for (const auto& part : parts)
    for (const auto& hit : part) {
      for (const RationalRay& p : {hit.axis, hit.axis.antipode()}) {
        by_length[hit.word.length()].insert(p);
        auto [it, inserted] = census.witness.emplace(p, hit.word);
        if (!inserted && hit.word < it->second) it->second = hit.word;
      }
    }
  for (std::size_t k = 1; k <= n; ++k) census.fixed_by_length[k] = by_length[k].size();
  for (const auto& [ray, word] : census.witness) ++census.new_by_length[word.length()];
  return census;
}

/// {"max_len", "counts": [{"length", "fixed", "new"}], "points": [{"ray", "witness"}]}, integers as strings.
inline nlohmann::ordered_json to_json(const FixedPointCensus& census) {
  nlohmann::ordered_json j;
  j["max_len"] = std::to_string(census.max_len);
  j["counts"] = nlohmann::ordered_json::array();
  for (std::size_t k = 1; k <= census.max_len; ++k)
    j["counts"].push_back({{"length", std::to_string(k)},
                           {"fixed", std::to_string(census.fixed_by_length[k])},
                           {"new", std::to_string(census.new_by_length[k])}});
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& [ray, word] : census.witness)
    j["points"].push_back({{"ray", {ray.x().get_str(), ray.y().get_str(), ray.z().get_str()}}, {"witness", to_string(word)}});
  return j;
}

/// True iff the word's rotation fixes the ray, compared exactly in scaled integers.
inline bool word_fixes(WordView w, const RationalRay& r) {
  const Vec3Z image = scaled_word_matrix<Integer>(w) * r.vec();
  const Integer scale = pow5(static_cast<unsigned>(w.size()));
  return image[0] == scale * r.x() && image[1] == scale * r.y() && image[2] == scale * r.z();
}

/**
 * Report for a census: exact counts per length compared with the count
 * 4 * 3^(k-1) of words of length k, plus an exact re-check of every witness.
 */
inline VerificationReport fixed_points_report(const FixedPointCensus& census) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "fixed-points";
  report.set_param("max_len", std::to_string(census.max_len));
  FailureSink failures;
  for (const auto& [ray, word] : census.witness) {
    ++report.items_checked;
    if (!word_fixes(word.letters(), ray)) failures.add(to_string(ray), "not fixed by witness " + to_string(word));
  }
  report.absorb(failures);
  std::uint64_t cumulative = 0;
  for (std::size_t k = 1; k <= census.max_len; ++k) {
    cumulative += census.new_by_length[k];
    const std::uint64_t formula = sphere_size(static_cast<unsigned>(k));
    const std::string key = "D_" + std::to_string(k);
    report.set_metric(key, census.fixed_by_length[k]);
    report.set_metric(key + "_new", census.new_by_length[k]);
    report.set_metric(key + "_cumulative", cumulative);
    report.set_metric(key + "_vs_4*3^(k-1)",
                      census.fixed_by_length[k] == formula
                          ? "agrees (" + std::to_string(formula) + ")"
                          : "differs (formula " + std::to_string(formula) + ")");
  }
  report.set_metric("total_points", census.witness.size());
  timer.stop(report);
  return report;
}

/**
 * Finite-stage check that mu^k D and D are disjoint for 1 <= k <= max_power,
 * with D the exact fixed-point set of words up to length d_len.
 */
inline VerificationReport check_mu_disjointness(const Mat3Rational& mu, std::size_t d_len,
                                                std::size_t max_power, unsigned threads = 1) {
  if (d_len < 1 || max_power < 1) throw PreconditionError("d_len and max_power must be >= 1");
  if (!is_rotation(mu)) throw PreconditionError("mu is not a rotation", to_string(mu));
  ReportTimer timer;
  VerificationReport report;
  report.check = "mu-disjointness";
  report.set_param("d_len", std::to_string(d_len));
  report.set_param("powers", std::to_string(max_power));
  report.set_param("mu", to_string(mu));

  const FixedPointCensus census = enumerate_fixed_rays(d_len, threads);
  std::vector<RationalRay> points;
  points.reserve(census.witness.size());
  for (const auto& [ray, word] : census.witness) points.push_back(ray);

  auto parts = parallel_map(points.size(), threads, [&](std::size_t i) {
    FailureSink sink;
    RationalRay image = points[i];
    for (std::size_t k = 1; k <= max_power; ++k) {
      image = apply(mu, image);
      auto hit = census.witness.find(image);
      if (hit != census.witness.end())
        sink.add("k=" + std::to_string(k) + " " + to_string(points[i]),
                 "mu^" + std::to_string(k) + " maps it to " + to_string(image) + ", fixed by " +
                     to_string(hit->second));
    }
    return sink;
  });
  FailureSink failures;
  for (const auto& p : parts) failures.merge(p);
  report.items_checked = points.size() * max_power;
  report.absorb(failures);
  report.set_metric("D_points", points.size());
  timer.stop(report);
  return report;
}

}  // namespace tarski
