#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tarski/error.hpp"
#include "tarski/parallel.hpp"
#include "tarski/report.hpp"

/// Equidecomposability certificates: data model, windowed verifier, combinators.
namespace tarski {

/// Text used for witnesses. Points need either an ADL `to_string` or be integers/strings.
template <class P>
std::string point_text(const P& x) {
  if constexpr (std::is_arithmetic_v<P>)
    return std::to_string(x);
  else if constexpr (std::is_convertible_v<const P&, std::string>)
    return std::string(x);
  else
    return to_string(x);
}

template <class P>
struct Predicate {
  std::string description;
  std::function<bool(const P&)> test;

  bool operator()(const P& x) const { return test(x); }
};

template <class P>
Predicate<P> always(bool value, std::string description) {
  return {std::move(description), [value](const P&) { return value; }};
}

/**
 * An exact membership predicate plus nested finite windows. `window(k)` must be
 * duplicate-free, deterministic and contained in the set.
 */
template <class P>
struct GroundSet {
  std::string description;
  std::function<bool(const P&)> membership;
  std::function<std::vector<P>(std::size_t)> window;

  bool contains(const P& x) const { return membership(x); }
};

template <class P>
GroundSet<P> empty_ground() {
  return {"empty set", [](const P&) { return false; }, [](std::size_t) { return std::vector<P>{}; }};
}

/// Kind-tagged exact bijection. Either direction may throw Error outside its domain.
template <class P>
struct Transform {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> params;
  std::function<P(const P&)> forward;
  std::function<P(const P&)> backward;

  P operator()(const P& x) const { return forward(x); }
};

template <class P>
Transform<P> identity_transform() {
  return {"identity", {}, [](const P& x) { return x; }, [](const P& x) { return x; }};
}

template <class P>
Transform<P> inverse(const Transform<P>& t) {
  Transform<P> out{t.kind, t.params, t.backward, t.forward};
  auto it = std::find_if(out.params.begin(), out.params.end(), [](const auto& kv) { return kv.first == "inverse"; });
  if (it == out.params.end())
    out.params.emplace_back("inverse", "true");
  else
    out.params.erase(it);
  return out;
}

/// `outer` after `inner`.
template <class P>
Transform<P> compose(const Transform<P>& outer, const Transform<P>& inner) {
  if (inner.kind == "identity") return outer;
  if (outer.kind == "identity") return inner;
  Transform<P> out;
  out.kind = "composite";
  auto describe = [](const Transform<P>& t) {
    std::string s = t.kind;
    for (const auto& [k, v] : t.params) s += " " + k + "=" + v;
    return s;
  };
  out.params = {{"first", describe(inner)}, {"then", describe(outer)}};
  out.forward = [f = outer.forward, g = inner.forward](const P& x) { return f(g(x)); };
  out.backward = [f = outer.backward, g = inner.backward](const P& x) { return g(f(x)); };
  return out;
}

/**
 * A finite injection, extended to a permutation of its domain plus image:
 * image points outside the domain are sent, in sorted order, to domain points
 * outside the image. Everything else is fixed.
 */
template <class P>
Transform<P> table_transform(const std::map<P, P>& injection, std::string kind = "table") {
  auto fwd = std::make_shared<std::map<P, P>>(injection);
  auto bwd = std::make_shared<std::map<P, P>>();
  for (const auto& [x, y] : injection)
    if (!bwd->emplace(y, x).second) throw CertificateError("table is not injective", point_text(y));
  std::vector<P> image_only, domain_only;
  for (const auto& [y, x] : *bwd)
    if (!fwd->count(y)) image_only.push_back(y);
  for (const auto& [x, y] : injection)
    if (!bwd->count(x)) domain_only.push_back(x);
  for (std::size_t i = 0; i < image_only.size(); ++i) {
    fwd->emplace(image_only[i], domain_only[i]);
    bwd->emplace(domain_only[i], image_only[i]);
  }
  auto look = [](const std::shared_ptr<std::map<P, P>>& m) {
    return [m](const P& x) {
      auto it = m->find(x);
      return it == m->end() ? x : it->second;
    };
  };
  return {std::move(kind), {{"entries", std::to_string(injection.size())}}, look(fwd), look(bwd)};
}

template <class P>
struct Piece {
  std::string name;
  Predicate<P> source;
  Transform<P> transform;
  Predicate<P> target;
};

template <class P>
struct Certificate {
  std::string name;
  std::string group;
  GroundSet<P> source;
  GroundSet<P> target;
  std::vector<Piece<P>> pieces;
};

/// copyA : A ~ ground and copyB : B ~ ground with A, B disjoint subsets of ground.
template <class P>
struct ParadoxCertificate {
  GroundSet<P> ground;
  Certificate<P> copyA;
  Certificate<P> copyB;
};

namespace detail {

template <class P>
std::optional<P> try_apply(const std::function<P(const P&)>& f, const P& x) {
  try {
    return f(x);
  } catch (const Error&) {
    return std::nullopt;
  }
}

template <class P>
bool try_test(const std::function<bool(const P&)>& f, const P& x) {
  try {
    return f(x);
  } catch (const Error&) {
    return false;
  }
}

template <class P>
std::vector<P> sorted_unique(std::vector<P> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline constexpr std::size_t kChunk = 2048;

/// Image of window point `index` under piece `piece`, keyed by its hash.
struct ImageKey {
  std::size_t hash;
  std::size_t index;
  std::size_t piece;

  friend auto operator<=>(const ImageKey&, const ImageKey&) = default;
};

template <class P>
struct SourceChunk {
  FailureSink failures;
  std::vector<ImageKey> images;
  std::vector<std::uint64_t> per_piece;
};

}  // namespace detail

template <class P>
void require_pieces(const Certificate<P>& c) {
  if (c.pieces.empty()) throw CertificateError("certificate has no pieces", c.name);
}

/**
 * Exact check of a certificate on source.window(k) and target.window(k):
 *  - every source window point lies in the source set and in exactly one piece;
 *  - its image lies in that piece's target predicate and in the target set, and
 *    the inverse transform brings it back;
 *  - images are pairwise distinct;
 *  - every target window point is hit by exactly one piece, i.e. exactly one
 *    inverse transform lands in that piece's source predicate.
 * Predicates are global, so only the points tested are windowed.
 */
template <class P>
VerificationReport verify_certificate(const Certificate<P>& cert, std::size_t k, unsigned threads = 1) {
  require_pieces(cert);
  ReportTimer timer;
  VerificationReport report;
  report.check = "certificate";
  report.set_param("name", cert.name);
  report.set_param("group", cert.group);
  report.set_param("window", std::to_string(k));

  const std::vector<P> src = cert.source.window(k);
  const std::vector<P> tgt = cert.target.window(k);
  const std::size_t npieces = cert.pieces.size();

  const std::size_t src_chunks = (src.size() + detail::kChunk - 1) / detail::kChunk;
  auto src_parts = parallel_map(src_chunks, threads, [&](std::size_t c) {
    detail::SourceChunk<P> out;
    out.per_piece.assign(npieces, 0);
    const std::size_t end = std::min(src.size(), (c + 1) * detail::kChunk);
    for (std::size_t i = c * detail::kChunk; i < end; ++i) {
      const P& x = src[i];
      try {
        if (!cert.source.contains(x)) out.failures.add(point_text(x), "window point is outside the source set");
        std::vector<std::size_t> hits;
        for (std::size_t p = 0; p < npieces; ++p)
          if (cert.pieces[p].source(x)) hits.push_back(p);
        if (hits.size() != 1) {
          std::string names;
          for (std::size_t h : hits) names += (names.empty() ? "" : ", ") + cert.pieces[h].name;
          out.failures.add(point_text(x), "lies in " + std::to_string(hits.size()) + " source pieces" +
                                   (names.empty() ? "" : " (" + names + ")"));
          if (hits.empty()) continue;
        }
        const Piece<P>& piece = cert.pieces[hits.front()];
        ++out.per_piece[hits.front()];
        const P y = piece.transform(x);
        if (!piece.target(y))
          out.failures.add(point_text(x), "image " + point_text(y) + " is not in target piece " + piece.name);
        if (!cert.target.contains(y)) out.failures.add(point_text(x), "image " + point_text(y) + " is outside the target set");
        if (!(piece.transform.backward(y) == x)) out.failures.add(point_text(x), "inverse transform does not return the point");
        out.images.push_back({std::hash<P>{}(y), i, hits.front()});
      } catch (const Error& e) {
        out.failures.add(point_text(x), std::string("error: ") + e.what());
      }
    }
    return out;
  });

  FailureSink failures;
  std::vector<detail::ImageKey> images;
  std::vector<std::uint64_t> per_piece(npieces, 0);
  for (auto& part : src_parts) {
    failures.merge(part.failures);
    for (std::size_t p = 0; p < npieces; ++p) per_piece[p] += part.per_piece[p];
    images.insert(images.end(), std::make_move_iterator(part.images.begin()),
                  std::make_move_iterator(part.images.end()));
  }
  // Injectivity: only images with equal hashes are recomputed and compared.
  std::sort(images.begin(), images.end());
  for (std::size_t lo = 0, hi = 0; lo < images.size(); lo = hi) {
    while (hi < images.size() && images[hi].hash == images[lo].hash) ++hi;
    if (hi - lo < 2) continue;
    std::vector<P> ys;
    for (std::size_t i = lo; i < hi; ++i) ys.push_back(cert.pieces[images[i].piece].transform(src[images[i].index]));
    for (std::size_t i = 1; i < ys.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (ys[i] == ys[j]) {
          failures.add(point_text(src[images[lo + i].index]),
                       "same image " + point_text(ys[i]) + " as " + point_text(src[images[lo + j].index]));
          break;
        }
  }

  const std::size_t tgt_chunks = (tgt.size() + detail::kChunk - 1) / detail::kChunk;
  auto tgt_parts = parallel_map(tgt_chunks, threads, [&](std::size_t c) {
    FailureSink out;
    const std::size_t end = std::min(tgt.size(), (c + 1) * detail::kChunk);
    for (std::size_t i = c * detail::kChunk; i < end; ++i) {
      const P& t = tgt[i];
      try {
        if (!cert.target.contains(t)) out.add(point_text(t), "window point is outside the target set");
        std::size_t hits = 0;
        for (const Piece<P>& piece : cert.pieces) {
          const std::optional<P> x = detail::try_apply(piece.transform.backward, t);
          if (x && piece.source(*x) && cert.source.contains(*x) && piece.transform(*x) == t) ++hits;
        }
        if (hits != 1) out.add(point_text(t), "target point is covered " + std::to_string(hits) + " times");
      } catch (const Error& e) {
        out.add(point_text(t), std::string("error: ") + e.what());
      }
    }
    return out;
  });
  for (const auto& part : tgt_parts) failures.merge(part);

  report.items_checked = src.size() + tgt.size();
  report.absorb(failures);
  report.set_metric("source_points", src.size());
  report.set_metric("target_points", tgt.size());
  report.set_metric("pieces", npieces);
  for (std::size_t p = 0; p < npieces; ++p) report.set_metric("piece " + cert.pieces[p].name, per_piece[p]);
  if (src.empty() && tgt.empty()) report.set_metric("degenerate", "empty window (vacuous pass)");
  timer.stop(report);
  return report;
}

template <class P>
Certificate<P> inverse_certificate(const Certificate<P>& c) {
  Certificate<P> out{"inverse(" + c.name + ")", c.group, c.target, c.source, {}};
  for (const Piece<P>& p : c.pieces) out.pieces.push_back({p.name, p.target, inverse(p.transform), p.source});
  return out;
}

/// c2 after c1, pieces refined by intersecting c1's images with c2's pieces.
template <class P>
Certificate<P> compose_certificates(const Certificate<P>& c1, const Certificate<P>& c2) {
  require_pieces(c1);
  require_pieces(c2);
  Certificate<P> out{c2.name + " . " + c1.name, c1.group, c1.source, c2.target, {}};
  for (const Piece<P>& p : c1.pieces)
    for (const Piece<P>& q : c2.pieces) {
      Piece<P> r;
      r.name = q.name + "." + p.name;
      r.source = {p.source.description + " and (" + q.source.description + ") after " + p.name,
                  [ps = p.source.test, pf = p.transform.forward, qs = q.source.test](const P& x) {
                    if (!ps(x)) return false;
                    const std::optional<P> y = detail::try_apply(pf, x);
                    return y && qs(*y);
                  }};
      r.transform = compose(q.transform, p.transform);
      r.target = {q.target.description + " and (" + p.target.description + ") before " + q.name,
                  [qt = q.target.test, qb = q.transform.backward, pt = p.target.test](const P& z) {
                    if (!qt(z)) return false;
                    const std::optional<P> y = detail::try_apply(qb, z);
                    return y && pt(*y);
                  }};
      out.pieces.push_back(std::move(r));
    }
  return out;
}

/**
 * Restriction to C = source ∩ sub: C ~ g(C). The target becomes the exact image;
 * its window is the image of the restricted source window.
 */
template <class P>
Certificate<P> restrict_certificate(const Certificate<P>& c, const Predicate<P>& sub) {
  require_pieces(c);
  Certificate<P> out;
  out.name = c.name + " | " + sub.description;
  out.group = c.group;
  out.source = {c.source.description + " and " + sub.description,
                [m = c.source.membership, s = sub.test](const P& x) { return m(x) && s(x); },
                [w = c.source.window, s = sub.test](std::size_t k) {
                  std::vector<P> v = w(k);
                  std::erase_if(v, [&](const P& x) { return !s(x); });
                  return v;
                }};
  for (const Piece<P>& p : c.pieces) {
    Piece<P> r;
    r.name = p.name;
    r.source = {p.source.description + " and " + sub.description,
                [ps = p.source.test, s = sub.test](const P& x) { return ps(x) && s(x); }};
    r.transform = p.transform;
    r.target = {p.target.description + " with preimage in " + sub.description,
                [pt = p.target.test, b = p.transform.backward, s = sub.test](const P& y) {
                  if (!pt(y)) return false;
                  const std::optional<P> x = detail::try_apply(b, y);
                  return x && s(*x);
                }};
    out.pieces.push_back(std::move(r));
  }
  auto pieces = std::make_shared<std::vector<Piece<P>>>(out.pieces);
  auto source = std::make_shared<GroundSet<P>>(out.source);
  out.target = {"image of " + out.source.description,
                [pieces, m = c.target.membership](const P& y) {
                  if (!m(y)) return false;
                  for (const Piece<P>& p : *pieces)
                    if (p.target(y)) return true;
                  return false;
                },
                [pieces, source](std::size_t k) {
                  std::vector<P> out;
                  for (const P& x : source->window(k))
                    for (const Piece<P>& p : *pieces)
                      if (p.source(x)) {
                        if (auto y = detail::try_apply(p.transform.forward, x)) out.push_back(*y);
                        break;
                      }
                  return detail::sorted_unique(std::move(out));
                }};
  return out;
}

/// A certificate with no pieces; the unit for union_certificates.
template <class P>
Certificate<P> empty_certificate(std::string group = "any") {
  return {"empty", std::move(group), empty_ground<P>(), empty_ground<P>(), {}};
}

/// A1 ∪ A2 ~ B1 ∪ B2 from A1 ~ B1 and A2 ~ B2; disjointness is checked on window(k).
template <class P>
Certificate<P> union_certificates(const Certificate<P>& c1, const Certificate<P>& c2, std::size_t k) {
  if (c1.pieces.empty()) return c2;
  if (c2.pieces.empty()) return c1;
  for (const P& x : c1.source.window(k))
    if (c2.source.contains(x)) throw CertificateError("source sets overlap", point_text(x));
  for (const P& x : c2.source.window(k))
    if (c1.source.contains(x)) throw CertificateError("source sets overlap", point_text(x));
  for (const P& y : c1.target.window(k))
    if (c2.target.contains(y)) throw CertificateError("target sets overlap", point_text(y));
  for (const P& y : c2.target.window(k))
    if (c1.target.contains(y)) throw CertificateError("target sets overlap", point_text(y));

  auto merge = [](const GroundSet<P>& a, const GroundSet<P>& b) -> GroundSet<P> {
    return {"(" + a.description + ") or (" + b.description + ")",
            [ma = a.membership, mb = b.membership](const P& x) { return ma(x) || mb(x); },
            [wa = a.window, wb = b.window](std::size_t k) {
              std::vector<P> v = wa(k);
              std::vector<P> u = wb(k);
              v.insert(v.end(), u.begin(), u.end());
              return detail::sorted_unique(std::move(v));
            }};
  };
  Certificate<P> out{c1.name + " + " + c2.name, c1.group, merge(c1.source, c2.source),
                     merge(c1.target, c2.target), {}};
  auto guard = [](const Certificate<P>& c, const Piece<P>& p) {
    Piece<P> g = p;
    g.source.test = [m = c.source.membership, s = p.source.test](const P& x) { return m(x) && s(x); };
    g.target.test = [m = c.target.membership, t = p.target.test](const P& y) { return m(y) && t(y); };
    return g;
  };
  for (const Piece<P>& p : c1.pieces) out.pieces.push_back(guard(c1, p));
  for (const Piece<P>& p : c2.pieces) out.pieces.push_back(guard(c2, p));
  return out;
}

/// The image of x under the bijection a certificate describes.
template <class P>
P apply_certificate(const Certificate<P>& c, const P& x) {
  const Piece<P>* hit = nullptr;
  for (const Piece<P>& p : c.pieces)
    if (p.source(x)) {
      if (hit) throw CertificateError("point lies in two pieces", point_text(x));
      hit = &p;
    }
  if (!hit) throw CertificateError("point lies in no piece", point_text(x));
  return hit->transform(x);
}

template <class P>
P apply_inverse(const Certificate<P>& c, const P& y) {
  return apply_certificate(inverse_certificate(c), y);
}

/// Both copies verified, their sources disjoint subsets of the ground set.
template <class P>
VerificationReport verify_paradox(const ParadoxCertificate<P>& pc, std::size_t k, unsigned threads = 1) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "paradox";
  report.set_param("ground", pc.ground.description);
  report.set_param("window", std::to_string(k));
  FailureSink failures;
  const std::vector<P> ground = pc.ground.window(k);
  std::uint64_t in_a = 0, in_b = 0, in_both = 0;
  for (const P& x : ground) {
    const bool a = pc.copyA.source.contains(x);
    const bool b = pc.copyB.source.contains(x);
    in_a += a;
    in_b += b;
    if (a && b) {
      ++in_both;
      failures.add(point_text(x), "lies in both A and B");
    }
  }
  for (const auto* c : {&pc.copyA, &pc.copyB})
    for (const P& x : c->source.window(k))
      if (!pc.ground.contains(x)) failures.add(point_text(x), "source of " + c->name + " leaves the ground set");
  report.items_checked = ground.size();
  report.absorb(failures);
  report.set_metric("ground_points", ground.size());
  report.set_metric("in_A", in_a);
  report.set_metric("in_B", in_b);
  report.set_metric("in_neither", ground.size() - in_a - in_b + in_both);
  report.sections.push_back(verify_certificate(pc.copyA, k, threads));
  report.sections.push_back(verify_certificate(pc.copyB, k, threads));
  timer.stop(report);
  return report;
}

/**
 * Packages A ~ E and B ~ E as a paradoxical decomposition of E = certA.target.
 * Throws with a witness if A and B meet, leave E, or either certificate fails.
 */
template <class P>
ParadoxCertificate<P> paradox_from_certificates(const Certificate<P>& certA, const Certificate<P>& certB,
                                                std::size_t k, unsigned threads = 1) {
  require_pieces(certA);
  require_pieces(certB);
  const GroundSet<P>& ground = certA.target;
  for (const P& x : certA.source.window(k)) {
    if (certB.source.contains(x)) throw CertificateError("A and B overlap", point_text(x));
    if (!ground.contains(x)) throw CertificateError("A is not a subset of the ground set", point_text(x));
  }
  for (const P& x : certB.source.window(k)) {
    if (certA.source.contains(x)) throw CertificateError("A and B overlap", point_text(x));
    if (!ground.contains(x)) throw CertificateError("B is not a subset of the ground set", point_text(x));
  }
  for (const auto* c : {&certA, &certB}) {
    const VerificationReport r = verify_certificate(*c, k, threads);
    if (!r.passed())
      throw CertificateError(c->name + " does not verify", r.failures.empty() ? "" : r.failures.front().witness);
  }
  return {ground, certA, certB};
}

/// Audit export: pieces with predicate descriptions and transform parameters.
template <class P>
nlohmann::ordered_json to_json(const Certificate<P>& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["group"] = c.group;
  j["source"] = c.source.description;
  j["target"] = c.target.description;
  nlohmann::ordered_json pieces = nlohmann::ordered_json::array();
  for (const Piece<P>& p : c.pieces) {
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : p.transform.params) params[k] = v;
    pieces.push_back({{"name", p.name},
                      {"source", p.source.description},
                      {"transform", {{"kind", p.transform.kind}, {"params", params}}},
                      {"target", p.target.description}});
  }
  j["pieces"] = pieces;
  return j;
}

template <class P>
nlohmann::ordered_json to_json(const ParadoxCertificate<P>& pc) {
  return {{"ground", pc.ground.description}, {"copyA", to_json(pc.copyA)}, {"copyB", to_json(pc.copyB)}};
}

}  // namespace tarski
