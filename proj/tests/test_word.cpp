#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "tarski/word.hpp"

using namespace tarski;

namespace {

Word random_word(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> letter(0, 3);
  std::vector<Letter> raw(len(rng));
  for (auto& l : raw) l = static_cast<Letter>(letter(rng));
  return Word(raw);
}

std::string random_text(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> letter(0, 3);
  std::string s(len(rng), 'a');
  for (auto& c : s) c = "aAbB"[letter(rng)];
  return s;
}

}  // namespace

TEST(Word, ParsesLettersAndExponents) {
  EXPECT_EQ(to_string(parse_word("ab")), "ab");
  EXPECT_EQ(to_string(parse_word("a^3B")), "aaaB");
  EXPECT_EQ(to_string(parse_word("aA")), "e");
  EXPECT_EQ(to_string(parse_word("e")), "e");
  EXPECT_EQ(to_string(parse_word("")), "e");
  EXPECT_EQ(to_string(parse_word(" a b ")), "ab");
  EXPECT_EQ(to_string(parse_word("Aab")), "b");
}

TEST(Word, ParseErrorsCarryPosition) {
  try {
    parse_word("abx");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
  EXPECT_THROW(parse_word("^2"), ParseError);
  EXPECT_THROW(parse_word("a^"), ParseError);
  EXPECT_THROW(parse_word("a^0"), ParseError);
}

TEST(Word, ConcatCancelsAtSeam) {
  EXPECT_EQ(to_string(concat(parse_word("ab"), parse_word("Ba"))), "aa");
  EXPECT_EQ(to_string(concat(parse_word("ab"), parse_word("BA"))), "e");
  EXPECT_EQ(to_string(concat(parse_word("a"), parse_word("b"))), "ab");
}

TEST(Word, InvertReversesAndFlips) {
  EXPECT_EQ(to_string(invert(parse_word("ab"))), "BA");
  EXPECT_TRUE(invert(Word::identity()).is_identity());
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const Word w = random_word(rng, 12);
    EXPECT_EQ(invert(invert(w)), w);
    EXPECT_TRUE(concat(w, invert(w)).is_identity());
    EXPECT_TRUE(concat(invert(w), w).is_identity());
  }
}

TEST(Word, FirstLetterOfReducedForm) {
  EXPECT_FALSE(first_letter(Word::identity()).has_value());
  EXPECT_EQ(first_letter(parse_word("aB")), Letter::a);
  EXPECT_EQ(first_letter(parse_word("Aab")), Letter::b);
}

TEST(Word, ReductionIsConfluent) {
  // Any deletion order gives the leftmost-first oracle's answer.
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::string s = random_text(rng, 20);
    const std::string expected = oracle::show(oracle::reduce(s));
    EXPECT_EQ(to_string(parse_word(s)), expected) << s;
    std::string t = s;
    while (true) {
      std::vector<std::size_t> spots;
      for (std::size_t j = 0; j + 1 < t.size(); ++j)
        if (t[j + 1] == oracle::inverse_char(t[j])) spots.push_back(j);
      if (spots.empty()) break;
      t.erase(spots[std::uniform_int_distribution<std::size_t>(0, spots.size() - 1)(rng)], 2);
    }
    EXPECT_EQ(oracle::show(t), expected) << s;
  }
}

TEST(Word, GroupLawsOnRandomTriples) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const Word u = random_word(rng, 10), v = random_word(rng, 10), w = random_word(rng, 10);
    EXPECT_EQ(concat(concat(u, v), w), concat(u, concat(v, w)));
    EXPECT_EQ(concat(Word::identity(), w), w);
    EXPECT_EQ(concat(w, Word::identity()), w);
  }
}

TEST(Word, BallMatchesBruteForce) {
  for (std::size_t n = 0; n <= 6; ++n) {
    const std::set<std::string> expected = oracle::ball_by_brute_force(n);
    const std::vector<Word> ball = enumerate_ball(n);
    ASSERT_EQ(ball.size(), expected.size()) << n;
    EXPECT_EQ(ball.size(), ball_size(static_cast<unsigned>(n)));
    std::set<std::string> got;
    for (const Word& w : ball) {
      EXPECT_TRUE(is_reduced(w.letters()));
      got.insert(w.is_identity() ? "" : to_string(w));
    }
    EXPECT_EQ(got, expected);
  }
}

TEST(Word, BallSizesFromBruteForce) {
  // 2*3^n - 1 for n = 0..6, counted by the oracle.
  const std::uint64_t expected[] = {1, 5, 17, 53, 161, 485, 1457};
  for (unsigned n = 0; n <= 6; ++n) {
    EXPECT_EQ(oracle::ball_by_brute_force(n).size(), expected[n]);
    EXPECT_EQ(ball_size(n), expected[n]);
  }
  for (unsigned n = 1; n <= 6; ++n) EXPECT_EQ(sphere_size(n), expected[n] - expected[n - 1]);
}

TEST(Word, BallIsShortlexOrdered) {
  const std::vector<Word> ball = enumerate_ball(5);
  for (std::size_t i = 1; i < ball.size(); ++i) EXPECT_LT(ball[i - 1], ball[i]);
  EXPECT_EQ(to_string(ball[1]), "a");
  EXPECT_EQ(to_string(ball[2]), "A");
  EXPECT_EQ(to_string(ball[3]), "b");
  EXPECT_EQ(to_string(ball[4]), "B");
}

TEST(Word, CursorReportsChangedPosition) {
  const Letter prefix[] = {Letter::b};
  WordCursor c(3, prefix);
  ASSERT_TRUE(c.valid());
  EXPECT_EQ(to_string(c.word()), "baa");
  std::size_t count = 1;
  while (c.valid()) {
    const std::string before = to_string(c.word());
    const std::size_t changed = c.advance();
    if (!c.valid()) break;
    ++count;
    const std::string after = to_string(c.word());
    EXPECT_EQ(before.substr(0, changed), after.substr(0, changed));
    EXPECT_NE(before[changed], after[changed]);
  }
  EXPECT_EQ(count, 9u);
  const Letter bad[] = {Letter::a, Letter::a_inv};
  EXPECT_FALSE(WordCursor(3, bad).valid());
}

TEST(Word, CanonicalTextOrder) {
  EXPECT_TRUE(canonical_text_less("a", "A"));
  EXPECT_TRUE(canonical_text_less("A", "b"));
  EXPECT_TRUE(canonical_text_less("B", "aa"));
  EXPECT_FALSE(canonical_text_less("b", "b"));
}

TEST(Word, HashAgreesWithEquality) {
  std::hash<Word> h;
  EXPECT_EQ(h(parse_word("abAB")), h(parse_word("abaAAB")));
}
