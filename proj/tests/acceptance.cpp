// Runs the nine acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tarski/tarski.hpp"

using namespace tarski;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string failures_of(const VerificationReport& r) {
  std::ostringstream os;
  os << r.check << " " << to_string(r.status());
  if (!r.failures.empty()) os << " (" << r.failures.front().witness << ": " << r.failures.front().detail << ")";
  if (r.inconclusive) os << " (" << r.inconclusive_reason << ")";
  return os.str();
}

Word random_word(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), letter(0, 3);
  std::vector<Letter> letters(len(rng));
  for (Letter& l : letters) l = kLetters[letter(rng)];
  return Word(WordView(letters.data(), letters.size()));
}

Outcome criterion1() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const VerificationReport r = free_paradox_report(14);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(r.passed(), failures_of(r));
  for (const VerificationReport& s : r.sections) o.require(s.metric("ball_size") == "9565937", s.check + " ball size");
  o.require(seconds <= 300, "took longer than 5 min");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("9565937 words, ") + std::to_string(seconds) + " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const VerificationReport r = verify_independence(12, IndependenceMode::both);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(r.passed(), failures_of(r));
  o.require(r.metric("nontrivial_words") == "1062880", "nontrivial words " + r.metric("nontrivial_words"));
  o.require(r.metric("identity_words") == "0", "identity words " + r.metric("identity_words"));
  o.require(r.metric("mode_disagreements") == "0", "disagreements " + r.metric("mode_disagreements"));
  o.require(seconds <= 120, "took longer than 2 min");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("1062880 words, ") + std::to_string(seconds) + " s";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const VerificationReport r = check_five_adic(12);
  o.require(r.passed(), failures_of(r));
  o.require(r.failure_count == 0, "failures");
  o.require(r.metric("words_ending_in_a") == r.metric("expected_words_ending_in_a"), "word count");
  o.detail = r.metric("words_ending_in_a") + " words ending in a or A, " + r.metric("recurrence_chains") + " chains";
  return o;
}

Outcome criterion4() {
  Outcome o;
  const FixedPointCensus census = enumerate_fixed_rays(2);
  const VerificationReport r = fixed_points_report(census);
  o.require(r.passed(), failures_of(r));
  o.require(census.fixed_by_length[1] == 4, "|D_1| = " + std::to_string(census.fixed_by_length[1]));
  for (const auto& [ray, word] : census.witness) o.require(word_fixes(word.letters(), ray), to_string(ray));
  o.require(!r.metric("D_2_vs_4*3^(k-1)").empty(), "no comparison for D_2");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("|D_1| = ") + r.metric("D_1") + ", |D_2| = " +
              r.metric("D_2") + " " + r.metric("D_2_vs_4*3^(k-1)");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const VerificationReport r = verify_freeness(parse_ray("1,2,3"), 6);
  o.require(r.passed(), failures_of(r));
  // 2*3^6 - 1 = 1457.
  o.require(r.metric("distinct_rays") == "1457", "distinct rays " + r.metric("distinct_rays"));
  o.detail += (o.detail.empty() ? "" : "; ") + r.metric("distinct_rays") + " = 2*3^6 - 1 distinct rays from (1,2,3)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const SphereStage stage = sphere_pieces_finite(parse_ray("1,2,3"), 6);
  const VerificationReport& r = stage.report;
  o.require(r.passed(), failures_of(r));
  o.require(r.metric("piece_overlaps") == "0", "overlaps");
  o.require(r.metric("stage_rays") == "485", "stage rays " + r.metric("stage_rays"));
  o.require(r.metric("covered_by_a_side") == "485", "a side " + r.metric("covered_by_a_side"));
  o.require(r.metric("covered_by_b_side") == "485", "b side " + r.metric("covered_by_b_side"));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("pieces ") + r.metric("A1M") + "/" + r.metric("A2M") + "/" +
              r.metric("B1M") + "/" + r.metric("B2M") + ", 485 rays covered on both sides";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const VerificationReport nat = verify_certificate(nat_z_certificate(), 1000000);
  o.require(nat.passed(), failures_of(nat));
  const VerificationReport circle = verify_circle(Rational(3, 5), Rational(4, 5), 10000, 100000);
  o.require(circle.passed(), failures_of(circle));
  const VerificationReport ball = verify_ball_minus_point(10000, 100000);
  o.require(ball.passed(), failures_of(ball));
  const BallDoubling doubling =
      ball_doubling_certificate(parse_ray("1,2,3"), 5, {Rational(1), Rational(1, 2), Rational(1, 3)});
  o.require(doubling.report.passed(), failures_of(doubling.report));
  if (o.ok) o.detail = "nat-z 10^6, circle K=10^5, ball-minus-point 10^4, ball doubling n=5";
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  int verified = 0;
  for (int i = 0; i < 200; ++i) {
    const oracle::BsbTables t = oracle::random_bsb(rng, size(rng));
    const BsbResult<std::string> r = solve_bsb_instance({t.a, t.b, t.f, t.g}, t.a.size());
    std::map<std::string, std::string> h;
    for (const std::string& x : t.a) h[x] = apply_certificate(r.certificate, x);
    if (r.report.passed() && oracle::is_bijection(h, t.a, t.b)) ++verified;
  }
  o.require(verified == 200, std::to_string(verified) + "/200 random instances");

  const ShiftInstance shift = nat_shift_instance();
  const BsbResult<std::int64_t> r = bsb_combine(shift.f, shift.g, 10);
  o.require(r.report.passed(), failures_of(r.report));
  o.require(r.c_window == std::vector<std::int64_t>{0, 2, 4, 6, 8, 10}, "C on [0,10]");
  for (std::int64_t k = 0; k < 5; ++k) {
    o.require(apply_certificate(r.certificate, 2 * k) == 2 * k + 1, "h(" + std::to_string(2 * k) + ")");
    o.require(apply_certificate(r.certificate, 2 * k + 1) == 2 * k, "h(" + std::to_string(2 * k + 1) + ")");
  }
  if (o.ok) o.detail = "200/200 random instances; shift C = {0,2,4,6,8,10}, 2k <-> 2k+1";
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(9);
  int laws = 0;
  for (int i = 0; i < 1000; ++i) {
    const Word u = random_word(rng, 12), v = random_word(rng, 12), w = random_word(rng, 12);
    const bool ok = (u * v) * w == u * (v * w) && u * Word::identity() == u && Word::identity() * u == u &&
                    u * invert(u) == Word::identity() && invert(u) * u == Word::identity();
    laws += ok;
    for (const Word& x : {u, v, w, u * v * w}) {
      const Mat3Rational m = word_to_matrix(x);
      o.require(m.transpose() * m == Mat3Rational::identity() && m.det() == 1, "not a rotation: " + to_string(x));
    }
  }
  o.require(laws == 1000, std::to_string(laws) + "/1000 triples");
  int homs = 0;
  for (int i = 0; i < 500; ++i) {
    const Word u = random_word(rng, 12), v = random_word(rng, 12);
    homs += word_to_matrix(u * v) == word_to_matrix(u) * word_to_matrix(v);
  }
  o.require(homs == 500, std::to_string(homs) + "/500 pairs");
  if (o.ok) o.detail = "1000 triples, 4000 matrices, 500 pairs";
  return o;
}

}  // namespace

int main() {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::cout << (o.ok ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << o.detail << std::endl;
  }
  return failed;
}
