#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "tarski/parallel.hpp"
#include "tarski/report.hpp"
#include "tarski/word.hpp"

namespace tarski {

/**
 * Pieces of F2 used by the paradoxical decomposition.
 *
 *   Psi(x) = words beginning with letter x
 *   A1 = Psi(a^-1) + {a^k : k >= 0}      A2 = Psi(a) - {a^k : k >= 1}
 *   B1 = Psi(b^-1)                        B2 = Psi(b)
 *   P1 = A1 + A2                          P2 = B1 + B2
 */
enum class PieceLabel : std::uint8_t { psi_a, psi_a_inv, psi_b, psi_b_inv, A1, A2, B1, B2, P1, P2 };

inline std::string_view to_string(PieceLabel p) noexcept {
  constexpr std::string_view kNames[] = {"Psi(a)", "Psi(A)", "Psi(b)", "Psi(B)", "A1",
                                         "A2",     "B1",     "B2",     "P1",     "P2"};
  return kNames[static_cast<std::size_t>(p)];
}

/// Everything membership depends on: the first letter and whether the word is a power of a.
struct WordShape {
  bool identity = true;
  Letter first = Letter::a;
  bool power_of_a = true;
};

inline WordShape shape_of(WordView w) noexcept {
  if (w.empty()) return {};
  return {false, w.front(), is_power_of_a(w)};
}

/// Shape of the reduced product l * w, computed without materializing it.
inline WordShape shape_of_product(Letter l, WordView w) noexcept {
  if (!w.empty() && w.front() == inverse(l)) return shape_of(w.subspan(1));
  return {false, l, l == Letter::a && is_power_of_a(w)};
}

inline bool piece_member(const WordShape& s, PieceLabel p) noexcept {
  auto psi = [&](Letter x) { return !s.identity && s.first == x; };
  switch (p) {
    case PieceLabel::psi_a: return psi(Letter::a);
    case PieceLabel::psi_a_inv: return psi(Letter::a_inv);
    case PieceLabel::psi_b: return psi(Letter::b);
    case PieceLabel::psi_b_inv: return psi(Letter::b_inv);
    case PieceLabel::A1: return psi(Letter::a_inv) || s.power_of_a;
    case PieceLabel::A2: return psi(Letter::a) && !s.power_of_a;
    case PieceLabel::B1: return psi(Letter::b_inv);
    case PieceLabel::B2: return psi(Letter::b);
    case PieceLabel::P1: return psi(Letter::a_inv) || psi(Letter::a) || s.identity;
    case PieceLabel::P2: return psi(Letter::b_inv) || psi(Letter::b);
  }
  return false;
}

inline bool piece_member(WordView w, PieceLabel p) noexcept { return piece_member(shape_of(w), p); }

/// Membership of l * w in piece p; with l = a^-1 and p = A1 this decides w in a*A1.
inline bool product_member(Letter l, WordView w, PieceLabel p) noexcept {
  return piece_member(shape_of_product(l, w), p);
}

namespace detail {

template <std::size_t N>
struct PieceTally {
  std::array<std::uint64_t, N> counts{};
  std::uint64_t items = 0;
  FailureSink failures;
};

template <std::size_t N, class PerWord>
PieceTally<N> tally_ball(std::size_t n, unsigned threads, PerWord per_word) {
  const auto shards = ball_shards(n);
  auto parts = parallel_map(shards.size(), threads, [&](std::size_t i) {
    PieceTally<N> t;
    for_each_word_in_shard(shards[i], n, [&](WordView w) {
      ++t.items;
      per_word(w, t);
    });
    return t;
  });
  PieceTally<N> total;
  for (const auto& p : parts) {
    total.items += p.items;
    for (std::size_t k = 0; k < N; ++k) total.counts[k] += p.counts[k];
    total.failures.merge(p.failures);
  }
  return total;
}

}  // namespace detail

/// Every word of the ball lies in exactly one of {e}, Psi(a), Psi(a^-1), Psi(b), Psi(b^-1).
inline VerificationReport verify_psi_partition(std::size_t n, unsigned threads = 1) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "psi-partition";
  report.set_param("max_len", std::to_string(n));

  constexpr std::array<PieceLabel, 4> kPsi = {PieceLabel::psi_a, PieceLabel::psi_a_inv,
                                              PieceLabel::psi_b, PieceLabel::psi_b_inv};
  auto tally = detail::tally_ball<5>(n, threads, [&](WordView w, detail::PieceTally<5>& t) {
    const WordShape s = shape_of(w);
    int hits = s.identity ? 1 : 0;
    if (s.identity) ++t.counts[0];
    for (std::size_t k = 0; k < kPsi.size(); ++k)
      if (piece_member(s, kPsi[k])) {
        ++hits;
        ++t.counts[k + 1];
      }
    if (hits != 1) t.failures.add(to_string(w), "lies in " + std::to_string(hits) + " pieces");
  });

  report.items_checked = tally.items;
  report.absorb(tally.failures);
  report.set_metric("ball_size", tally.items);
  report.set_metric("expected_ball_size", ball_size(static_cast<unsigned>(n)));
  report.set_metric("count_e", tally.counts[0]);
  for (std::size_t k = 0; k < kPsi.size(); ++k)
    report.set_metric("count_" + std::string(to_string(kPsi[k])), tally.counts[k + 1]);
  if (tally.items != ball_size(static_cast<unsigned>(n)))
    report.add_failure("ball", "enumerated " + std::to_string(tally.items) + " words");
  timer.stop(report);
  return report;
}

/**
 * Exhaustive check of the paradoxical decomposition of F2 on the ball of radius n:
 * P1/P2 partition, A1/A2/B1/B2 partition, a*A1 + A2 = F2 and b*B1 + B2 = F2 as
 * disjoint unions. Image membership is decided exactly (w in a*A1 iff a^-1 w in A1).
 */
inline VerificationReport verify_f2_paradox(std::size_t n, unsigned threads = 1) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "f2-decomposition";
  report.set_param("max_len", std::to_string(n));

  constexpr std::array<PieceLabel, 6> kPieces = {PieceLabel::A1, PieceLabel::A2, PieceLabel::B1,
                                                 PieceLabel::B2, PieceLabel::P1, PieceLabel::P2};
  // counts: A1 A2 B1 B2 P1 P2 aA1 bB1
  auto tally = detail::tally_ball<8>(n, threads, [&](WordView w, detail::PieceTally<8>& t) {
    const WordShape s = shape_of(w);
    std::array<bool, 6> in{};
    for (std::size_t k = 0; k < kPieces.size(); ++k) {
      in[k] = piece_member(s, kPieces[k]);
      t.counts[k] += in[k];
    }
    const bool in_a_a1 = product_member(Letter::a_inv, w, PieceLabel::A1);
    const bool in_b_b1 = product_member(Letter::b_inv, w, PieceLabel::B1);
    t.counts[6] += in_a_a1;
    t.counts[7] += in_b_b1;

    if (in[4] == in[5]) t.failures.add(to_string(w), in[4] ? "in both P1 and P2" : "in neither P1 nor P2");
    const int quarter = in[0] + in[1] + in[2] + in[3];
    if (quarter != 1)
      t.failures.add(to_string(w), "lies in " + std::to_string(quarter) + " of A1, A2, B1, B2");
    if (in[0] + in[1] != static_cast<int>(in[4])) t.failures.add(to_string(w), "A1 + A2 != P1");
    if (in[2] + in[3] != static_cast<int>(in[5])) t.failures.add(to_string(w), "B1 + B2 != P2");
    if (in_a_a1 == in[1])
      t.failures.add(to_string(w), in_a_a1 ? "in both a*A1 and A2" : "in neither a*A1 nor A2");
    if (in_b_b1 == in[3])
      t.failures.add(to_string(w), in_b_b1 ? "in both b*B1 and B2" : "in neither b*B1 nor B2");
  });

  report.items_checked = tally.items;
  report.absorb(tally.failures);
  report.set_metric("ball_size", tally.items);
  report.set_metric("expected_ball_size", ball_size(static_cast<unsigned>(n)));
  constexpr const char* kNames[] = {"A1", "A2", "B1", "B2", "P1", "P2", "a*A1", "b*B1"};
  for (std::size_t k = 0; k < 8; ++k) report.set_metric(std::string("count_") + kNames[k], tally.counts[k]);
  if (tally.items != ball_size(static_cast<unsigned>(n)))
    report.add_failure("ball", "enumerated " + std::to_string(tally.items) + " words");
  timer.stop(report);
  return report;
}

/// Both exhaustive checks on the same ball.
inline VerificationReport free_paradox_report(std::size_t n, unsigned threads = 1) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "free-paradox";
  report.set_param("max_len", std::to_string(n));
  report.sections.push_back(verify_psi_partition(n, threads));
  report.sections.push_back(verify_f2_paradox(n, threads));
  report.items_checked = report.sections.back().items_checked;
  timer.stop(report);
  return report;
}

}  // namespace tarski
