#pragma once

// Slow, independent reference implementations. Nothing here calls into the
// library code it is used to check.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline char inverse_char(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    case 'B': return 'b';
  }
  return '?';
}

/// Deletes the leftmost cancelling pair until none is left. "" is the identity.
inline std::string reduce(std::string s) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      if (s[i + 1] == inverse_char(s[i])) {
        s.erase(i, 2);
        changed = true;
        break;
      }
  }
  return s;
}

/// Every string over {a,A,b,B} of length <= n, reduced and deduplicated.
inline std::set<std::string> ball_by_brute_force(std::size_t n) {
  std::set<std::string> out;
  std::vector<std::string> layer{""};
  for (std::size_t len = 0; len <= n; ++len) {
    std::vector<std::string> next;
    for (const std::string& s : layer) {
      out.insert(reduce(s));
      if (len < n)
        for (char c : {'a', 'A', 'b', 'B'}) next.push_back(s + c);
    }
    layer = std::move(next);
  }
  return out;
}

inline std::string show(const std::string& w) { return w.empty() ? "e" : w; }

using Q = mpq_class;
using M3 = std::array<std::array<Q, 3>, 3>;
using V3 = std::array<Q, 3>;

inline M3 identity() {
  M3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1;
  return m;
}

// The two generators with their entries typed out by hand.
inline M3 sigma_literal() {
  return M3{{{Q(3, 5), Q(-4, 5), Q(0)}, {Q(4, 5), Q(3, 5), Q(0)}, {Q(0), Q(0), Q(1)}}};
}
inline M3 tau_literal() {
  return M3{{{Q(1), Q(0), Q(0)}, {Q(0), Q(3, 5), Q(-4, 5)}, {Q(0), Q(4, 5), Q(3, 5)}}};
}

inline M3 transpose(const M3& m) {
  M3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  return t;
}

inline M3 mul(const M3& x, const M3& y) {
  M3 z{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Q acc = 0;
      for (int k = 0; k < 3; ++k) acc += x[i][k] * y[k][j];
      z[i][j] = acc;
    }
  return z;
}

inline V3 mul(const M3& m, const V3& v) {
  V3 out{};
  for (int i = 0; i < 3; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return out;
}

inline M3 letter_matrix(char c) {
  switch (c) {
    case 'a': return sigma_literal();
    case 'A': return transpose(sigma_literal());
    case 'b': return tau_literal();
    default: return transpose(tau_literal());
  }
}

/// Left-to-right product of letter matrices; the word acts right to left.
inline M3 word_matrix(const std::string& w) {
  M3 m = identity();
  for (char c : w) m = mul(m, letter_matrix(c));
  return m;
}

inline Q det(const M3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Text "(x,y,z)" of the primitive integer multiple of v pointing the same way.
inline std::string primitive_text(const V3& v) {
  mpz_class l = 1;
  for (const Q& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::array<mpz_class, 3> z;
  mpz_class g = 0;
  for (int i = 0; i < 3; ++i) {
    Q scaled = v[i] * l;
    z[i] = scaled.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z[i].get_mpz_t());
  }
  for (auto& x : z) x /= g;
  return "(" + z[0].get_str() + "," + z[1].get_str() + "," + z[2].get_str() + ")";
}

/// Null space of a 3x3 rational matrix of rank 2 by Gaussian elimination; empty if the rank is not 2.
inline std::vector<V3> kernel_rank2(M3 a) {
  int row = 0;
  std::array<int, 3> pivot_col{-1, -1, -1};
  for (int col = 0; col < 3 && row < 3; ++col) {
    int p = row;
    while (p < 3 && a[p][col] == 0) ++p;
    if (p == 3) continue;
    std::swap(a[p], a[row]);
    for (int r = 0; r < 3; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Q f = a[r][col] / a[row][col];
      for (int c = 0; c < 3; ++c) a[r][c] -= f * a[row][c];
    }
    pivot_col[row++] = col;
  }
  if (row != 2) return {};
  int free_col = 0;
  while (free_col == pivot_col[0] || free_col == pivot_col[1]) ++free_col;
  V3 v{};
  v[free_col] = 1;
  for (int r = 0; r < 2; ++r) v[pivot_col[r]] = -a[r][free_col] / a[r][pivot_col[r]];
  V3 neg{-v[0], -v[1], -v[2]};
  return {v, neg};
}

/// Points fixed by some word of length exactly n, as primitive texts.
inline std::set<std::string> fixed_points_of_length(std::size_t n) {
  std::set<std::string> out;
  for (const std::string& w : ball_by_brute_force(n)) {
    if (w.size() != n) continue;
    M3 k = word_matrix(w);
    for (int i = 0; i < 3; ++i) k[i][i] -= 1;
    for (const V3& v : kernel_rank2(k)) out.insert(primitive_text(v));
  }
  return out;
}

/// A finite instance in plain tables: f on A, g from A1 onto B.
struct BsbTables {
  std::vector<std::string> a, b;
  std::map<std::string, std::string> f, g;
};

/// f a random bijection A -> B, g another; |A| = |B| = size.
inline BsbTables random_bsb(std::mt19937_64& rng, std::size_t size) {
  BsbTables t;
  for (std::size_t i = 0; i < size; ++i) {
    t.a.push_back(std::to_string(i));
    t.b.push_back("y" + std::to_string(i));
  }
  std::vector<std::string> perm = t.b;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < size; ++i) t.f[t.a[i]] = perm[i];
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < size; ++i) t.g[t.a[i]] = perm[i];
  return t;
}

/// C as the least fixpoint of C = (A \ A1) + g^-1 f (C), by iteration to stability.
inline std::set<std::string> bsb_c(const BsbTables& t) {
  std::map<std::string, std::string> g_inv;
  for (const auto& [x, y] : t.g) g_inv[y] = x;
  std::set<std::string> c;
  for (const std::string& x : t.a)
    if (!t.g.count(x)) c.insert(x);
  for (bool changed = true; changed;) {
    changed = false;
    for (const std::string& x : std::set<std::string>(c)) {
      auto it = g_inv.find(t.f.at(x));
      if (it != g_inv.end() && c.insert(it->second).second) changed = true;
    }
  }
  return c;
}

/// h total on A, image exactly B, no collisions.
inline bool is_bijection(const std::map<std::string, std::string>& h, const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  if (h.size() != a.size()) return false;
  std::set<std::string> image;
  for (const std::string& x : a) {
    auto it = h.find(x);
    if (it == h.end() || !image.insert(it->second).second) return false;
  }
  return image == std::set<std::string>(b.begin(), b.end());
}

}  // namespace oracle
