#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tarski/certificate.hpp"
#include "tarski/error.hpp"
#include "tarski/report.hpp"

/// Constructive Schröder–Bernstein on certificates.
namespace tarski {

enum class ChainFate { in_c, not_in_c, undetermined };

template <class P>
struct BsbResult {
  Certificate<P> certificate;
  /// C ∩ window, sorted.
  std::vector<P> c_window;
  VerificationReport report;
};

namespace detail {

template <class P>
std::optional<P> piece_image(const Certificate<P>& c, const P& x) {
  for (const Piece<P>& p : c.pieces)
    if (p.source(x)) return detail::try_apply(p.transform.forward, x);
  return std::nullopt;
}

/// The unique source point of `c` mapped to y, if any.
template <class P>
std::optional<P> piece_preimage(const Certificate<P>& c, const P& y) {
  for (const Piece<P>& p : c.pieces) {
    const std::optional<P> x = detail::try_apply(p.transform.backward, y);
    if (x && p.source(*x) && c.source.contains(*x) && p.transform(*x) == y) return x;
  }
  return std::nullopt;
}

template <class P>
void require_verified(const Certificate<P>& c, std::size_t k, unsigned threads, VerificationReport& into) {
  VerificationReport r = verify_certificate(c, k, threads);
  if (!r.passed())
    throw CertificateError(c.name + " does not verify on the window",
                           r.failures.empty() ? std::string() : r.failures.front().witness + ": " +
                                                                    r.failures.front().detail);
  into.sections.push_back(std::move(r));
}

}  // namespace detail

/**
 * From f : A -> B1 ⊆ B and g : A1 ⊆ A -> B, builds h : A -> B equal to f on
 * C = ∪ (g^-1 f)^n (A \ A1) and to g elsewhere.
 *
 * C is computed on A's window twice: forward from C0 = window \ A1, and per
 * point by walking x -> f^-1(g(x)) back to A \ A1 (in C), to a dead end or a
 * cycle (not in C), or out of the window (undetermined). The two must agree.
 * The result is verified on the points whose fate is determined; the rest is
 * reported as boundary. g may be merely injective, in which case `b` names B.
 */
template <class P>
BsbResult<P> bsb_combine(const Certificate<P>& f, const Certificate<P>& g, std::size_t k, unsigned threads = 1,
                         std::optional<GroundSet<P>> b = std::nullopt) {
  require_pieces(f);
  require_pieces(g);
  ReportTimer timer;
  BsbResult<P> out;
  VerificationReport& report = out.report;
  report.check = "bsb";
  report.set_param("f", f.name);
  report.set_param("g", g.name);
  report.set_param("window", std::to_string(k));
  detail::require_verified(f, k, threads, report);
  detail::require_verified(g, k, threads, report);
  const GroundSet<P> target = b ? *b : g.target;

  const std::vector<P> window = f.source.window(k);
  const std::set<P> in_window(window.begin(), window.end());

  // Forward: C_{n+1} = g^-1 f (C_n).
  std::set<P> c_forward;
  std::vector<P> frontier;
  for (const P& x : window)
    if (!g.source.contains(x)) frontier.push_back(x);
  std::uint64_t iterations = 0, escaped = 0;
  while (!frontier.empty()) {
    ++iterations;
    std::vector<P> next;
    for (const P& c : frontier) {
      if (!c_forward.insert(c).second) continue;
      const std::optional<P> y = detail::piece_image(f, c);
      if (!y) continue;
      const std::optional<P> x = detail::piece_preimage(g, *y);
      if (!x) continue;
      if (!in_window.count(*x)) ++escaped;
      else if (!c_forward.count(*x)) next.push_back(*x);
    }
    frontier = std::move(next);
  }

  // Backward: every point on one chain shares its fate.
  auto fate = std::make_shared<std::map<P, ChainFate>>();
  for (const P& x : window) {
    if (fate->count(x)) continue;
    std::vector<P> path;
    std::set<P> on_path;
    ChainFate result = ChainFate::undetermined;
    P cur = x;
    while (true) {
      if (auto it = fate->find(cur); it != fate->end()) {
        result = it->second;
        break;
      }
      if (!in_window.count(cur)) break;
      path.push_back(cur);
      on_path.insert(cur);
      if (!g.source.contains(cur)) {
        result = ChainFate::in_c;
        break;
      }
      const std::optional<P> y = detail::piece_image(g, cur);
      const std::optional<P> prev = y ? detail::piece_preimage(f, *y) : std::nullopt;
      if (!prev || on_path.count(*prev)) {
        result = ChainFate::not_in_c;
        break;
      }
      cur = *prev;
    }
    for (const P& p : path) fate->emplace(p, result);
  }

  FailureSink failures;
  std::vector<P> shrunk_source;
  for (const P& x : window) {
    const ChainFate fx = fate->at(x);
    if (fx == ChainFate::undetermined) continue;
    shrunk_source.push_back(x);
    if ((fx == ChainFate::in_c) != (c_forward.count(x) > 0))
      failures.add(point_text(x), "forward and backward computations of C disagree");
    if (fx == ChainFate::in_c) out.c_window.push_back(x);
  }

  auto determined = [&](const std::optional<P>& x) {
    if (!x) return true;
    auto it = fate->find(*x);
    return it != fate->end() && it->second != ChainFate::undetermined;
  };
  const std::vector<P> target_window = target.window(k);
  std::vector<P> shrunk_target;
  for (const P& t : target_window)
    if (determined(detail::piece_preimage(f, t)) && determined(detail::piece_preimage(g, t)))
      shrunk_target.push_back(t);

  auto in_c = [fate](const P& x) {
    auto it = fate->find(x);
    if (it == fate->end() || it->second == ChainFate::undetermined)
      throw CertificateError("membership in C is undetermined on this window", point_text(x));
    return it->second == ChainFate::in_c;
  };

  Certificate<P>& h = out.certificate;
  h.name = "bsb(" + f.name + ", " + g.name + ")";
  h.group = f.group;
  auto src_window = std::make_shared<std::vector<P>>(shrunk_source);
  auto tgt_window = std::make_shared<std::vector<P>>(shrunk_target);
  h.source = {f.source.description, f.source.membership, [src_window](std::size_t) { return *src_window; }};
  h.target = {target.description, target.membership, [tgt_window](std::size_t) { return *tgt_window; }};
  for (const Piece<P>& p : f.pieces)
    h.pieces.push_back({"f:" + p.name,
                        {p.source.description + " in C", [s = p.source.test, in_c](const P& x) { return s(x) && in_c(x); }},
                        p.transform,
                        {p.target.description + " from C",
                         [t = p.target.test, bwd = p.transform.backward, in_c](const P& y) {
                           if (!t(y)) return false;
                           const std::optional<P> x = detail::try_apply(bwd, y);
                           return x && in_c(*x);
                         }}});
  for (const Piece<P>& p : g.pieces)
    h.pieces.push_back({"g:" + p.name,
                        {p.source.description + " outside C",
                         [s = p.source.test, m = g.source.membership, in_c](const P& x) { return s(x) && m(x) && !in_c(x); }},
                        p.transform,
                        {p.target.description + " from outside C",
                         [t = p.target.test, bwd = p.transform.backward, in_c](const P& y) {
                           if (!t(y)) return false;
                           const std::optional<P> x = detail::try_apply(bwd, y);
                           return x && !in_c(*x);
                         }}});

  report.items_checked = window.size() + target_window.size();
  report.absorb(failures);
  report.set_metric("window_points", window.size());
  report.set_metric("C_in_window", out.c_window.size());
  report.set_metric("forward_iterations", iterations);
  report.set_metric("forward_escapes", escaped);
  report.set_metric("shrunk_source_points", shrunk_source.size());
  report.set_metric("shrunk_target_points", shrunk_target.size());
  report.set_metric("boundary_source_points", window.size() - shrunk_source.size());
  report.set_metric("boundary_target_points", target_window.size() - shrunk_target.size());
  if (shrunk_source.empty() && !window.empty())
    report.mark_inconclusive("window too small: no chain closes inside it");
  else
    report.sections.push_back(verify_certificate(h, k, threads));
  timer.stop(report);
  return out;
}

/// A finite instance: f : A -> B and g : A1 -> B as explicit injective tables, A1 = dom g.
struct BsbInstance {
  std::vector<std::string> a, b;
  std::map<std::string, std::string> f, g;
};

namespace detail {

inline std::string point_from_json(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw ParseError("points must be integers or strings", 0);
}

inline GroundSet<std::string> finite_ground(std::string description, std::vector<std::string> points) {
  auto sorted = std::make_shared<std::vector<std::string>>(detail::sorted_unique(std::move(points)));
  return {std::move(description),
          [sorted](const std::string& x) { return std::binary_search(sorted->begin(), sorted->end(), x); },
          [sorted](std::size_t k) {
            return std::vector<std::string>(sorted->begin(), sorted->begin() + std::min(k, sorted->size()));
          }};
}

}  // namespace detail

/// Parses {"A": [...], "B": [...], "f": [[a, b], ...], "g": [[a, b], ...]}; integers become their decimal text.
inline BsbInstance parse_bsb_instance(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
  BsbInstance inst;
  for (const char* key : {"A", "B", "f", "g"})
    if (!j.is_object() || !j.contains(key) || !j[key].is_array())
      throw ParseError(std::string("missing array \"") + key + "\"", 0);
  for (const auto& v : j["A"]) inst.a.push_back(detail::point_from_json(v));
  for (const auto& v : j["B"]) inst.b.push_back(detail::point_from_json(v));
  for (const char* key : {"f", "g"}) {
    auto& table = key[0] == 'f' ? inst.f : inst.g;
    for (const auto& pair : j[key]) {
      if (!pair.is_array() || pair.size() != 2) throw ParseError(std::string(key) + " entries must be pairs", 0);
      const std::string x = detail::point_from_json(pair[0]);
      if (!table.emplace(x, detail::point_from_json(pair[1])).second)
        throw PreconditionError(std::string(key) + " assigns two values to one point", x);
    }
  }
  return inst;
}

inline BsbInstance load_bsb_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bsb_instance(ss.str());
}

struct BsbCertificates {
  Certificate<std::string> f, g;
  GroundSet<std::string> b;
};

/// Certificates for an instance; g must map A1 onto B. Each ground window is its first k points in sorted order.
inline BsbCertificates instance_certificates(const BsbInstance& inst) {
  const std::set<std::string> a(inst.a.begin(), inst.a.end()), b(inst.b.begin(), inst.b.end());
  if (a.size() != inst.a.size()) throw PreconditionError("A lists a point twice");
  if (b.size() != inst.b.size()) throw PreconditionError("B lists a point twice");
  for (const std::string& x : inst.a)
    if (!inst.f.count(x)) throw PreconditionError("f is not defined on all of A", x);
  auto check_table = [&](const std::map<std::string, std::string>& t, const char* name) {
    std::set<std::string> seen;
    for (const auto& [x, y] : t) {
      if (!a.count(x)) throw PreconditionError(std::string(name) + " is defined outside A", x);
      if (!b.count(y)) throw PreconditionError(std::string(name) + " maps outside B", y);
      if (!seen.insert(y).second) throw PreconditionError(std::string(name) + " is not injective", y);
    }
  };
  check_table(inst.f, "f");
  check_table(inst.g, "g");
  std::set<std::string> g_image;
  for (const auto& [x, y] : inst.g) g_image.insert(y);
  for (const std::string& y : inst.b)
    if (!g_image.count(y)) throw PreconditionError("g does not cover B", y);

  auto make = [](std::string name, const std::map<std::string, std::string>& t, const std::string& from,
                 const std::string& to) {
    std::vector<std::string> dom, img;
    for (const auto& [x, y] : t) dom.push_back(x), img.push_back(y);
    auto d = detail::finite_ground(from, dom);
    auto i = detail::finite_ground(to, img);
    Certificate<std::string> c{name, "permutations of the instance points", d, i, {}};
    c.pieces.push_back({name, {from, d.membership}, table_transform(t), {to, i.membership}});
    return c;
  };
  BsbCertificates out{make("f", inst.f, "A", "f(A)"), make("g", inst.g, "A1", "g(A1)"),
                      detail::finite_ground("B", inst.b)};
  return out;
}

/// bsb_combine on an instance; the report lists C and the combined map on the determined points.
inline BsbResult<std::string> solve_bsb_instance(const BsbInstance& inst, std::size_t k, unsigned threads = 1) {
  const BsbCertificates certs = instance_certificates(inst);
  BsbResult<std::string> r = bsb_combine(certs.f, certs.g, k, threads, std::make_optional(certs.b));
  std::string c, h;
  for (const std::string& x : r.c_window) c += (c.empty() ? "" : ",") + x;
  for (const std::string& x : r.certificate.source.window(k)) {
    const std::optional<std::string> y = detail::piece_image(r.certificate, x);
    h += (h.empty() ? "" : ", ") + x + "->" + (y ? *y : "?");
  }
  r.report.set_metric("C", "{" + c + "}");
  r.report.set_metric("bijection", h);
  return r;
}

}  // namespace tarski
