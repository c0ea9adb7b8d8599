#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tarski/error.hpp"

/**
 * @brief Reduced words in the free group of rank two.
 *
 * Letters are stored as small codes ordered a < a^-1 < b < b^-1, so that the
 * inverse of a letter is obtained by flipping the lowest bit. That order is
 * also the one used by the shortlex comparison and every enumerator here.
 */
namespace tarski {

enum class Generator : std::uint8_t { a = 0, b = 1 };

enum class Letter : std::uint8_t { a = 0, a_inv = 1, b = 2, b_inv = 3 };

inline constexpr std::array<Letter, 4> kLetters = {Letter::a, Letter::a_inv, Letter::b,
                                                   Letter::b_inv};

constexpr Letter inverse(Letter l) noexcept {
  return static_cast<Letter>(static_cast<std::uint8_t>(l) ^ 1u);
}
constexpr Generator generator(Letter l) noexcept {
  return static_cast<Generator>(static_cast<std::uint8_t>(l) >> 1);
}
constexpr bool is_inverted(Letter l) noexcept { return (static_cast<std::uint8_t>(l) & 1u) != 0; }
constexpr Letter make_letter(Generator g, bool inverted) noexcept {
  return static_cast<Letter>((static_cast<std::uint8_t>(g) << 1) | (inverted ? 1u : 0u));
}
constexpr std::size_t index(Letter l) noexcept { return static_cast<std::size_t>(l); }

constexpr char to_char(Letter l) noexcept {
  constexpr char kChars[] = {'a', 'A', 'b', 'B'};
  return kChars[index(l)];
}

using WordView = std::span<const Letter>;

/// Number of reduced words of length at most n: 2*3^n - 1.
constexpr std::uint64_t ball_size(unsigned n) noexcept {
  std::uint64_t p = 1;
  for (unsigned i = 0; i < n; ++i) p *= 3;
  return 2 * p - 1;
}

/// Number of reduced words of length exactly n.
constexpr std::uint64_t sphere_size(unsigned n) noexcept {
  if (n == 0) return 1;
  std::uint64_t p = 4;
  for (unsigned i = 1; i < n; ++i) p *= 3;
  return p;
}

/// Shortlex order on letter sequences: shorter first, then lexicographic.
inline bool shortlex_less(WordView u, WordView v) noexcept {
  if (u.size() != v.size()) return u.size() < v.size();
  return std::lexicographical_compare(u.begin(), u.end(), v.begin(), v.end());
}

inline bool is_reduced(WordView w) noexcept {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == inverse(w[i - 1])) return false;
  return true;
}

/// True iff w is a^k for some k >= 0.
inline bool is_power_of_a(WordView w) noexcept {
  return std::all_of(w.begin(), w.end(), [](Letter l) { return l == Letter::a; });
}

/// An element of F2, always held in reduced form.
class Word {
 public:
  Word() = default;

  /// Freely reduces an arbitrary letter sequence.
  explicit Word(WordView letters) { append_reducing(letters); }
  Word(std::initializer_list<Letter> letters)
      : Word(WordView(letters.begin(), letters.size())) {}

  static Word identity() { return Word(); }
  static Word of(Letter l) { return Word({l}); }

  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  WordView letters() const noexcept { return letters_; }
  operator WordView() const noexcept { return letters_; }
  Letter operator[](std::size_t i) const noexcept { return letters_[i]; }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& u, const Word& v) noexcept {
    if (u.length() != v.length()) return u.length() <=> v.length();
    return std::lexicographical_compare_three_way(u.letters_.begin(), u.letters_.end(),
                                                  v.letters_.begin(), v.letters_.end());
  }

 private:
  friend Word concat(const Word& u, const Word& v);

  void append_reducing(WordView letters) {
    for (Letter l : letters) {
      if (!letters_.empty() && letters_.back() == inverse(l))
        letters_.pop_back();
      else
        letters_.push_back(l);
    }
  }

  std::vector<Letter> letters_;
};

/// Concatenation followed by free reduction; cancellation only happens at the seam.
inline Word concat(const Word& u, const Word& v) {
  Word out = u;
  out.append_reducing(v.letters());
  return out;
}

inline Word operator*(const Word& u, const Word& v) { return concat(u, v); }

inline Word invert(const Word& w) {
  std::vector<Letter> out(w.letters().rbegin(), w.letters().rend());
  for (Letter& l : out) l = inverse(l);
  return Word(out);
}

inline std::optional<Letter> first_letter(WordView w) noexcept {
  if (w.empty()) return std::nullopt;
  return w.front();
}

inline std::optional<Letter> last_letter(WordView w) noexcept {
  if (w.empty()) return std::nullopt;
  return w.back();
}

inline std::string to_string(WordView w) {
  if (w.empty()) return "e";
  std::string s;
  s.reserve(w.size());
  for (Letter l : w) s.push_back(to_char(l));
  return s;
}
inline std::string to_string(const Word& w) { return to_string(w.letters()); }

inline std::ostream& operator<<(std::ostream& os, const Word& w) { return os << to_string(w); }

/**
 * Parses the word syntax: letters a, b, A (= a^-1), B (= b^-1), whitespace,
 * and an optional `^k` (k a positive decimal integer) repeating the preceding
 * letter. A lone `e` denotes the identity so that rendered words parse back.
 */
inline Word parse_word(std::string_view text) {
  std::vector<Letter> raw;
  std::optional<Letter> previous;
  bool previous_is_identity = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    switch (c) {
      case 'a': previous = Letter::a; break;
      case 'A': previous = Letter::a_inv; break;
      case 'b': previous = Letter::b; break;
      case 'B': previous = Letter::b_inv; break;
      case 'e':
        previous.reset();
        previous_is_identity = true;
        ++i;
        continue;
      case '^': {
        if (!previous && !previous_is_identity) throw ParseError("exponent without a letter", i);
        std::size_t j = i + 1;
        std::uint64_t k = 0;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
          k = k * 10 + static_cast<std::uint64_t>(text[j] - '0');
          if (k > (1u << 24)) throw ParseError("exponent too large", i + 1);
          ++j;
        }
        if (j == i + 1) throw ParseError("expected a decimal exponent", j);
        if (k == 0) throw ParseError("exponent must be positive", i + 1);
        if (previous) raw.insert(raw.end(), k - 1, *previous);
        previous.reset();
        previous_is_identity = false;
        i = j;
        continue;
      }
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    raw.push_back(*previous);
    previous_is_identity = false;
    ++i;
  }
  return Word(raw);
}

/**
 * Walks every reduced word of a fixed length that starts with a fixed prefix,
 * in lexicographic order, without allocating per word.
 *
 * `advance()` reports the leftmost position that changed so callers can keep
 * incremental prefix state (matrix products, piece flags) up to date.
 */
class WordCursor {
 public:
  WordCursor(std::size_t length, WordView prefix) : letters_(length), fixed_(prefix.size()) {
    if (prefix.size() > length || !is_reduced(prefix)) {
      valid_ = false;
      return;
    }
    std::copy(prefix.begin(), prefix.end(), letters_.begin());
    fill_from(fixed_);
  }

  bool valid() const noexcept { return valid_; }
  WordView word() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }

  /// Moves to the next word. Returns the leftmost changed position, or length() when exhausted.
  std::size_t advance() noexcept {
    for (std::size_t i = letters_.size(); i-- > fixed_;) {
      const auto current = static_cast<std::uint8_t>(letters_[i]);
      for (std::uint8_t next = current + 1; next < 4; ++next) {
        const auto l = static_cast<Letter>(next);
        if (i == 0 || l != inverse(letters_[i - 1])) {
          letters_[i] = l;
          fill_from(i + 1);
          return i;
        }
      }
    }
    valid_ = false;
    return letters_.size();
  }

 private:
  void fill_from(std::size_t start) noexcept {
    for (std::size_t i = start; i < letters_.size(); ++i)
      letters_[i] = (i > 0 && letters_[i - 1] == Letter::a_inv) ? Letter::a_inv : Letter::a;
  }

  std::vector<Letter> letters_;
  std::size_t fixed_;
  bool valid_ = true;
};

/// Calls visit(WordView) for each reduced word of length exactly n, in lexicographic order.
template <class Visitor>
void for_each_word_of_length(std::size_t n, Visitor&& visit) {
  for (WordCursor cursor(n, {}); cursor.valid(); cursor.advance()) visit(cursor.word());
}

/// Calls visit(WordView) for each reduced word of length <= n, in shortlex order.
template <class Visitor>
void for_each_word_in_ball(std::size_t n, Visitor&& visit) {
  for (std::size_t len = 0; len <= n; ++len) for_each_word_of_length(len, visit);
}

/// All reduced words of length <= n, shortlex with a < a^-1 < b < b^-1.
inline std::vector<Word> enumerate_ball(std::size_t n) {
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(ball_size(static_cast<unsigned>(n))));
  for_each_word_in_ball(n, [&](WordView w) { out.emplace_back(w); });
  return out;
}

/// Shortlex order on rendered text, treating a < A < b < B; other characters compare by value.
inline bool canonical_text_less(std::string_view x, std::string_view y) noexcept {
  if (x.size() != y.size()) return x.size() < y.size();
  auto rank = [](char c) -> int {
    switch (c) {
      case 'a': return 'a' * 4;
      case 'A': return 'a' * 4 + 1;
      case 'b': return 'a' * 4 + 2;
      case 'B': return 'a' * 4 + 3;
      default: return static_cast<unsigned char>(c) * 4;
    }
  };
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return rank(x[i]) < rank(y[i]);
  return false;
}

}  // namespace tarski

template <>
struct std::hash<tarski::Word> {
  std::size_t operator()(const tarski::Word& w) const noexcept {
    std::size_t h = w.length() * 0x9e3779b97f4a7c15ULL;
    for (tarski::Letter l : w.letters()) h = h * 5 + tarski::index(l) + 1;
    return h;
  }
};
