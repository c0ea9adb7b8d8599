#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tarski/error.hpp"
#include "tarski/f2_paradox.hpp"
#include "tarski/fixed_points.hpp"
#include "tarski/parallel.hpp"
#include "tarski/ray.hpp"
#include "tarski/report.hpp"
#include "tarski/rotation.hpp"
#include "tarski/word.hpp"

namespace tarski {

/// The truncated orbit {w * seed : |w| <= radius}, keyed by reduced word.
struct OrbitBall {
  RationalRay seed;
  std::size_t radius = 0;
  std::map<Word, RationalRay> entries;
};

/// Breadth-first: the entry for l*w is the generator for l applied to the entry for w.
inline OrbitBall orbit_ball(const RationalRay& seed, std::size_t n) {
  OrbitBall ball{seed, n, {}};
  ball.entries.emplace(Word::identity(), seed);
  std::vector<std::pair<Word, RationalRay>> frontier{{Word::identity(), seed}};
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<std::pair<Word, RationalRay>> next;
    next.reserve(frontier.size() * 3);
    for (const auto& [w, ray] : frontier)
      for (Letter l : kLetters) {
        if (!w.is_identity() && l == inverse(w[0])) continue;
        next.emplace_back(concat(Word::of(l), w), apply(l, ray));
      }
    for (const auto& [w, ray] : next) ball.entries.emplace(w, ray);
    frontier = std::move(next);
  }
  return ball;
}

/// Orbit ball dump: [{"word": ..., "ray": ["x", "y", "z"]}], integers as decimal strings.
inline nlohmann::ordered_json to_json(const OrbitBall& ball) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [w, r] : ball.entries)
    out.push_back({{"word", to_string(w)}, {"ray", {r.x().get_str(), r.y().get_str(), r.z().get_str()}}});
  return out;
}

struct FixedWitness {
  bool fixed = false;
  std::optional<Word> witness;
};

/**
 * Whether some nontrivial word of length <= n fixes x exactly; the witness is
 * the shortlex-least such word. `fixed == false` only means "not in D up to n".
 */
inline FixedWitness d_membership_cutoff(const RationalRay& x, std::size_t n, unsigned threads = 1) {
  if (n < 1) throw PreconditionError("D-membership cutoff needs n >= 1");
  const auto shards = ball_shards(n);
  auto parts = parallel_map(shards.size(), threads, [&](std::size_t si) -> std::optional<Word> {
    const BallShard& shard = shards[si];
    // Cursor prefixes hold 5^i times the product of the first i generators.
    std::optional<Word> best;
    auto check = [&](WordView w, const Mat3<std::int64_t>& scaled) -> bool {
      if (w.empty()) return false;
      const Integer scale = pow5(static_cast<unsigned>(w.size()));
      for (std::size_t r = 0; r < 3; ++r) {
        Integer acc = 0;
        for (std::size_t c = 0; c < 3; ++c) acc += Integer(static_cast<long>(scaled(r, c))) * x.vec()[c];
        if (acc != scale * x.vec()[r]) return false;
      }
      return true;
    };
    if (shard.short_words) {
      for (Letter l : kLetters)
        if (check(std::span(&l, 1), scaled_generator<std::int64_t>(l)))
          if (!best || Word::of(l) < *best) best = Word::of(l);
      return best;
    }
    if (n > kMaxInt64WordLength) {
      for (std::size_t len = 2; len <= n && !best; ++len)
        for (WordCursor c(len, shard.prefix); c.valid(); c.advance())
          if (word_fixes(c.word(), x)) {
            best = Word(c.word());
            break;
          }
      return best;
    }
    for (std::size_t len = 2; len <= n && !best; ++len) {
      WordCursor cursor(len, shard.prefix);
      std::vector<Mat3<std::int64_t>> prefix(len + 1, Mat3<std::int64_t>::identity());
      std::size_t changed = 0;
      while (cursor.valid()) {
        const WordView w = cursor.word();
        for (std::size_t i = changed; i < len; ++i)
          prefix[i + 1] = prefix[i] * scaled_generator<std::int64_t>(w[i]);
        if (check(w, prefix[len])) {
          best = Word(w);
          break;
        }
        changed = cursor.advance();
      }
    }
    return best;
  });
  FixedWitness out;
  for (const auto& p : parts)
    if (p && (!out.witness || *p < *out.witness)) out.witness = p;
  out.fixed = out.witness.has_value();
  return out;
}

/// Pairwise distinctness of the orbit ball, after confirming x is not fixed by any word of length <= 2n.
inline VerificationReport verify_freeness(const RationalRay& seed, std::size_t n, unsigned threads = 1) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "freeness";
  report.set_param("seed", to_string(seed));
  report.set_param("max_len", std::to_string(n));
  if (n > 0) {
    const FixedWitness pre = d_membership_cutoff(seed, 2 * n, threads);
    if (pre.fixed)
      throw PreconditionError("seed is fixed by a word of length <= " + std::to_string(2 * n),
                              to_string(*pre.witness));
    report.set_metric("d_cutoff_checked", 2 * n);
  }
  const OrbitBall ball = orbit_ball(seed, n);
  std::map<RationalRay, Word> seen;
  FailureSink failures;
  for (const auto& [w, r] : ball.entries) {
    ++report.items_checked;
    auto [it, inserted] = seen.emplace(r, w);
    if (!inserted) failures.add(to_string(w), "same ray " + to_string(r) + " as " + to_string(it->second));
  }
  report.absorb(failures);
  report.set_metric("distinct_rays", seen.size());
  report.set_metric("expected_rays", ball_size(static_cast<unsigned>(n)));
  if (seen.size() != ball_size(static_cast<unsigned>(n)) && failures.empty())
    report.add_failure("orbit", "orbit ball has " + std::to_string(ball.entries.size()) + " entries");
  timer.stop(report);
  return report;
}

enum class OrbitRelationKind { equal, disjoint_up_to_n };

struct OrbitRelation {
  OrbitRelationKind kind = OrbitRelationKind::disjoint_up_to_n;
  std::optional<Word> witness;
};

/// "equal" with the shortlex-least w, |w| <= n, such that w*x = y; otherwise inconclusive beyond n.
inline OrbitRelation orbit_relation_cutoff(const RationalRay& x, const RationalRay& y, std::size_t n) {
  const OrbitBall ball = orbit_ball(x, n);
  for (const auto& [w, r] : ball.entries)
    if (r == y) return {OrbitRelationKind::equal, w};
  return {};
}

/// The pieces A1*M, A2*M, B1*M, B2*M of one truncated orbit.
struct SpherePieces {
  std::set<RationalRay> a1x, a2x, b1x, b2x;
  std::map<RationalRay, Word> provenance;
};

struct SphereStage {
  OrbitBall ball;
  SpherePieces pieces;
  VerificationReport report;
};

inline const std::set<RationalRay>& piece_set(const SpherePieces& p, PieceLabel l) {
  switch (l) {
    case PieceLabel::A1: return p.a1x;
    case PieceLabel::A2: return p.a2x;
    case PieceLabel::B1: return p.b1x;
    case PieceLabel::B2: return p.b2x;
    default: throw Error("sphere pieces exist only for A1, A2, B1, B2");
  }
}

/**
 * Classifies every entry w*seed of the orbit ball by the piece of w, then checks
 * (i) the four ray sets are pairwise disjoint and (ii) on the ball of radius n-1,
 * every ray lies in exactly one of sigma*A1M, A2M and exactly one of tau*B1M, B2M.
 */
inline SphereStage sphere_pieces_finite(const RationalRay& seed, std::size_t n, unsigned threads = 1) {
  if (n < 1) throw PreconditionError("sphere stage needs n >= 1");
  SphereStage stage;
  VerificationReport freeness = verify_freeness(seed, n, threads);
  if (!freeness.passed())
    throw PreconditionError("orbit ball is not free at this radius", to_string(seed));

  ReportTimer timer;
  VerificationReport& report = stage.report;
  report.check = "sphere-paradox";
  report.set_param("seed", to_string(seed));
  report.set_param("max_len", std::to_string(n));
  stage.ball = orbit_ball(seed, n);
  SpherePieces& pieces = stage.pieces;
  constexpr PieceLabel kQuarter[] = {PieceLabel::A1, PieceLabel::A2, PieceLabel::B1, PieceLabel::B2};
  std::set<RationalRay>* sets[] = {&pieces.a1x, &pieces.a2x, &pieces.b1x, &pieces.b2x};
  FailureSink failures;
  for (const auto& [w, r] : stage.ball.entries) {
    pieces.provenance.emplace(r, w);
    int hits = 0;
    for (std::size_t k = 0; k < 4; ++k)
      if (piece_member(w.letters(), kQuarter[k])) {
        ++hits;
        sets[k]->insert(r);
      }
    if (hits != 1) failures.add(to_string(w), "word lies in " + std::to_string(hits) + " pieces");
  }

  std::uint64_t overlaps = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      for (const RationalRay& r : *sets[i])
        if (sets[j]->count(r)) {
          ++overlaps;
          failures.add(to_string(r), std::string(to_string(kQuarter[i])) + "M and " +
                                         std::string(to_string(kQuarter[j])) + "M share a ray");
        }

  std::uint64_t covered_a = 0, covered_b = 0, stage_rays = 0;
  for (const auto& [w, r] : stage.ball.entries) {
    if (w.length() + 1 > n) continue;
    ++stage_rays;
    const int a_hits = int(pieces.a1x.count(apply(Letter::a_inv, r))) + int(pieces.a2x.count(r));
    const int b_hits = int(pieces.b1x.count(apply(Letter::b_inv, r))) + int(pieces.b2x.count(r));
    if (a_hits == 1) ++covered_a;
    else failures.add(to_string(w), "ray " + to_string(r) + " covered " + std::to_string(a_hits) + " times by sigma*A1M + A2M");
    if (b_hits == 1) ++covered_b;
    else failures.add(to_string(w), "ray " + to_string(r) + " covered " + std::to_string(b_hits) + " times by tau*B1M + B2M");
  }

  // P1M and P2M partition the truncated orbit.
  std::set<RationalRay> all;
  for (auto* s : sets) all.insert(s->begin(), s->end());
  if (all.size() != stage.ball.entries.size())
    failures.add("P1M+P2M", "union has " + std::to_string(all.size()) + " rays, orbit ball has " +
                                std::to_string(stage.ball.entries.size()));

  report.items_checked = stage.ball.entries.size() + 2 * stage_rays;
  report.absorb(failures);
  report.set_metric("A1M", pieces.a1x.size());
  report.set_metric("A2M", pieces.a2x.size());
  report.set_metric("B1M", pieces.b1x.size());
  report.set_metric("B2M", pieces.b2x.size());
  report.set_metric("total_rays", pieces.a1x.size() + pieces.a2x.size() + pieces.b1x.size() + pieces.b2x.size());
  report.set_metric("piece_overlaps", overlaps);
  report.set_metric("stage_rays", stage_rays);
  report.set_metric("covered_by_a_side", covered_a);
  report.set_metric("covered_by_b_side", covered_b);
  report.set_metric("D_piece", "empty at finite stage (single orbit of a seed outside D)");
  report.sections.push_back(std::move(freeness));
  timer.stop(report);
  return stage;
}

}  // namespace tarski
