#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tarski/error.hpp"
#include "tarski/exact.hpp"
#include "tarski/parallel.hpp"
#include "tarski/report.hpp"
#include "tarski/rotation.hpp"
#include "tarski/word.hpp"

namespace tarski {

enum class IndependenceMode { direct, five_adic, both };

inline std::string_view to_string(IndependenceMode m) noexcept {
  switch (m) {
    case IndependenceMode::direct: return "direct";
    case IndependenceMode::five_adic: return "five-adic";
    case IndependenceMode::both: return "both";
  }
  return "?";
}

namespace detail {

inline bool divisible_by_5(std::int64_t x) noexcept { return x % 5 == 0; }
inline bool divisible_by_5(const Integer& x) { return mpz_divisible_ui_p(x.get_mpz_t(), 5) != 0; }

inline bool recurrence_holds(std::int64_t bk, std::int64_t b1, std::int64_t b2) noexcept {
  return static_cast<__int128>(bk) == static_cast<__int128>(b1) * 6 - static_cast<__int128>(b2) * 25;
}
inline bool recurrence_holds(const Integer& bk, const Integer& b1, const Integer& b2) {
  return bk == 6 * b1 - 25 * b2;
}

template <class Int>
std::string int_text(const Int& x) {
  if constexpr (std::is_same_v<Int, Integer>)
    return x.get_str();
  else
    return std::to_string(x);
}

struct FiveAdicTally {
  std::uint64_t words = 0;
  std::uint64_t chains = 0;
  FailureSink failures;
};

/**
 * Depth-first over words ending in a^{+-1}, growing on the left. `suffix` holds
 * the current word reversed (suffix.back() is its first letter); `b1`, `b2` are
 * the middle coordinates of the one- and two-letter-shorter suffixes.
 */
template <class Int>
void five_adic_dfs(std::vector<Letter>& reversed, const Vec3<Int>& v, const Int& b1, const Int& b2,
                   std::size_t n, FiveAdicTally& t) {
  ++t.words;
  const std::size_t len = reversed.size();
  auto word_text = [&] {
    std::vector<Letter> w(reversed.rbegin(), reversed.rend());
    return to_string(WordView(w));
  };
  if (divisible_by_5(v[1])) t.failures.add(word_text(), "b = " + int_text(v[1]) + " is divisible by 5");
  if (len >= 2 && reversed[len - 1] == reversed[len - 2] && generator(reversed[len - 1]) == Generator::a) {
    ++t.chains;
    if (!recurrence_holds(v[1], b1, b2))
      t.failures.add(word_text(), "b_k = " + int_text(v[1]) + " but 6*b_{k-1} - 25*b_{k-2} = " +
                                      int_text(Int(6 * b1 - 25 * b2)));
  }
  if (len == n) return;
  for (Letter l : kLetters) {
    if (l == inverse(reversed.back())) continue;
    reversed.push_back(l);
    five_adic_dfs<Int>(reversed, scaled_generator<Int>(l) * v, v[1], b1, n, t);
    reversed.pop_back();
  }
}

template <class Int>
FiveAdicTally five_adic_run(std::size_t n, unsigned threads) {
  // Seeds: the two one-letter words, then one shard per two-letter suffix.
  struct Seed {
    std::vector<Letter> reversed;
    bool single;
  };
  std::vector<Seed> seeds;
  for (Letter last : {Letter::a, Letter::a_inv}) {
    seeds.push_back({{last}, true});
    if (n >= 2)
      for (Letter l : kLetters)
        if (l != inverse(last)) seeds.push_back({{last, l}, false});
  }
  auto parts = parallel_map(seeds.size(), threads, [&](std::size_t i) {
    FiveAdicTally t;
    std::vector<Letter> reversed = seeds[i].reversed;
    const Vec3<Int> e1{{Int(1), Int(0), Int(0)}};
    const Vec3<Int> v1 = scaled_generator<Int>(reversed[0]) * e1;
    if (seeds[i].single) {
      // Only the word itself; its extensions belong to the two-letter shards.
      five_adic_dfs<Int>(reversed, v1, Int(0), Int(0), 1, t);
    } else {
      const Vec3<Int> v2 = scaled_generator<Int>(reversed[1]) * v1;
      five_adic_dfs<Int>(reversed, v2, v1[1], Int(0), n, t);
    }
    return t;
  });
  FiveAdicTally total;
  for (const auto& p : parts) {
    total.words += p.words;
    total.chains += p.chains;
    total.failures.merge(p.failures);
  }
  return total;
}

}  // namespace detail

/**
 * For every reduced word of length 1..n ending in a or a^-1, the middle
 * coordinate b of 5^n w(1,0,0) is not divisible by 5, and whenever the word
 * starts with aa or a^-1 a^-1 its b obeys b_k = 6 b_{k-1} - 25 b_{k-2}
 * (the empty word contributes b_0 = 0).
 */
inline VerificationReport check_five_adic(std::size_t n, unsigned threads = 1) {
  if (n < 1) throw PreconditionError("five-adic check needs max length >= 1");
  ReportTimer timer;
  VerificationReport report;
  report.check = "five-adic";
  report.set_param("max_len", std::to_string(n));
  const auto tally = n <= kMaxInt64WordLength ? detail::five_adic_run<std::int64_t>(n, threads)
                                              : detail::five_adic_run<Integer>(n, threads);
  report.items_checked = tally.words;
  report.absorb(tally.failures);
  report.set_metric("words_ending_in_a", tally.words);
  report.set_metric("expected_words_ending_in_a", (ball_size(static_cast<unsigned>(n)) - 1) / 2);
  report.set_metric("recurrence_chains", tally.chains);
  if (tally.words != (ball_size(static_cast<unsigned>(n)) - 1) / 2)
    report.add_failure("enumeration", "visited " + std::to_string(tally.words) + " words");
  timer.stop(report);
  return report;
}

/**
 * Conjugate by sigma until the word ends in a^{+-1}: returns w itself when it
 * already does, otherwise the reduced form of a^-1 w a (never trivial for w != e).
 */
inline Word conjugate_to_end_in_a(const Word& w) {
  if (w.is_identity()) return w;
  if (generator(w.letters().back()) == Generator::a) return w;
  return concat(concat(Word::of(Letter::a_inv), w), Word::of(Letter::a));
}

namespace detail {

struct IndependenceTally {
  std::uint64_t words = 0;
  std::uint64_t direct_identities = 0;
  std::uint64_t five_adic_certified = 0;
  std::uint64_t conjugated = 0;
  std::uint64_t disagreements = 0;
  FailureSink failures;
};

template <class Int>
IndependenceTally independence_run(std::size_t n, IndependenceMode mode, unsigned threads) {
  const bool want_direct = mode != IndependenceMode::five_adic;
  const bool want_five = mode != IndependenceMode::direct;
  const bool five_fits_int64 = n + 2 <= kMaxInt64WordLength;
  const auto shards = ball_shards(n);

  auto parts = parallel_map(shards.size(), threads, [&](std::size_t si) {
    IndependenceTally t;
    const BallShard& shard = shards[si];
    std::vector<Letter> conj;
    auto visit = [&](WordView w, const Mat3<Int>* scaled) {
      if (w.empty()) return;
      ++t.words;
      bool direct_nontrivial = true;
      if (want_direct) {
        const Mat3<Int> target = Mat3<Int>::scalar(pow5_as<Int>(w.size()));
        direct_nontrivial = !(*scaled == target);
        if (!direct_nontrivial) {
          ++t.direct_identities;
          t.failures.add(to_string(w), "maps to the identity matrix");
        }
      }
      if (!want_five) return;
      conj.assign(w.begin(), w.end());
      if (generator(w.back()) == Generator::b) {
        ++t.conjugated;
        conj.push_back(Letter::a);
        if (conj.front() == Letter::a)
          conj.erase(conj.begin());
        else
          conj.insert(conj.begin(), Letter::a_inv);
      }
      const bool certified = five_fits_int64
                                 ? !divisible_by_5(scaled_e1_image<std::int64_t>(conj)[1])
                                 : !divisible_by_5(scaled_e1_image<Integer>(conj)[1]);
      if (certified) ++t.five_adic_certified;
      else t.failures.add(to_string(w), "five-adic invariant fails on conjugate " + to_string(WordView(conj)));
      if (want_direct && certified != direct_nontrivial) {
        ++t.disagreements;
        t.failures.add(to_string(w), "direct and five-adic modes disagree");
      }
    };

    if (shard.short_words) {
      for (std::size_t len = 1; len <= std::min<std::size_t>(n, 1); ++len)
        for_each_word_of_length(len, [&](WordView w) {
          const Mat3<Int> m = scaled_word_matrix<Int>(w);
          visit(w, &m);
        });
      return t;
    }
    for (std::size_t len = 2; len <= n; ++len) {
      WordCursor cursor(len, shard.prefix);
      // prefix[i] = 5^i * matrix of the first i letters.
      std::vector<Mat3<Int>> prefix(len + 1, Mat3<Int>::identity());
      std::size_t changed = 0;
      while (cursor.valid()) {
        const WordView w = cursor.word();
        if (want_direct)
          for (std::size_t i = changed; i < len; ++i) prefix[i + 1] = prefix[i] * scaled_generator<Int>(w[i]);
        visit(w, &prefix[len]);
        changed = cursor.advance();
      }
    }
    return t;
  });

  IndependenceTally total;
  for (const auto& p : parts) {
    total.words += p.words;
    total.direct_identities += p.direct_identities;
    total.five_adic_certified += p.five_adic_certified;
    total.conjugated += p.conjugated;
    total.disagreements += p.disagreements;
    total.failures.merge(p.failures);
  }
  return total;
}

}  // namespace detail

/**
 * No nontrivial reduced word of length <= n maps to the identity rotation.
 * direct: exact comparison of the word's matrix with I.
 * five-adic: conjugate by sigma so the word ends in a^{+-1}, then 5 does not
 * divide b, hence w(1,0,0) != (1,0,0). With `both`, the two verdicts must
 * agree word by word.
 */
inline VerificationReport verify_independence(std::size_t n, IndependenceMode mode, unsigned threads = 1) {
  if (n < 1) throw PreconditionError("independence check needs max length >= 1");
  ReportTimer timer;
  VerificationReport report;
  report.check = "independence";
  report.set_param("max_len", std::to_string(n));
  report.set_param("mode", std::string(to_string(mode)));
  const auto tally = n <= kMaxInt64WordLength ? detail::independence_run<std::int64_t>(n, mode, threads)
                                              : detail::independence_run<Integer>(n, mode, threads);
  report.items_checked = tally.words;
  report.absorb(tally.failures);
  report.set_metric("nontrivial_words", tally.words);
  report.set_metric("expected_nontrivial_words", ball_size(static_cast<unsigned>(n)) - 1);
  if (mode != IndependenceMode::five_adic) report.set_metric("identity_words", tally.direct_identities);
  if (mode != IndependenceMode::direct) {
    report.set_metric("five_adic_certified", tally.five_adic_certified);
    report.set_metric("conjugated_by_sigma", tally.conjugated);
  }
  if (mode == IndependenceMode::both) report.set_metric("mode_disagreements", tally.disagreements);
  if (tally.words != ball_size(static_cast<unsigned>(n)) - 1)
    report.add_failure("enumeration", "visited " + std::to_string(tally.words) + " words");
  timer.stop(report);
  return report;
}

}  // namespace tarski
