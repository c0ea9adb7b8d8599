#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "tarski/error.hpp"
#include "tarski/f2_paradox.hpp"
#include "tarski/report.hpp"
#include "tarski/word.hpp"

namespace tarski {

enum class CayleyColoring { none, psi, paradox };

inline CayleyColoring parse_coloring(std::string_view s) {
  if (s.empty() || s == "none") return CayleyColoring::none;
  if (s == "psi") return CayleyColoring::psi;
  if (s == "paradox") return CayleyColoring::paradox;
  throw ParseError("unknown piece coloring '" + std::string(s) + "' (expected psi or paradox)", 0);
}

struct CayleyStats {
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
};

namespace detail {

struct NodeStyle {
  std::string_view piece;
  std::string_view color;
};

inline NodeStyle node_style(WordView w, CayleyColoring coloring) {
  if (coloring == CayleyColoring::none) return {};
  if (w.empty() && coloring == CayleyColoring::psi) return {"e", "white"};
  if (coloring == CayleyColoring::psi) {
    constexpr std::string_view kColors[] = {"lightcoral", "lightblue", "palegreen", "khaki"};
    const auto i = static_cast<std::size_t>(w.front());
    return {to_string(static_cast<PieceLabel>(i)), kColors[i]};
  }
  constexpr PieceLabel kQuarter[] = {PieceLabel::A1, PieceLabel::A2, PieceLabel::B1, PieceLabel::B2};
  constexpr std::string_view kColors[] = {"lightcoral", "lightsalmon", "lightblue", "lightskyblue"};
  for (std::size_t i = 0; i < 4; ++i)
    if (piece_member(w, kQuarter[i])) return {to_string(kQuarter[i]), kColors[i]};
  return {};
}

inline std::string dot_id(WordView w) { return "\"" + to_string(w) + "\""; }

}  // namespace detail

/**
 * The ball of radius n in the Cayley graph of F2 as a DOT digraph: one node per
 * reduced word (canonical order), and an edge w -> l*w labelled l for l in {a, b}
 * whenever both ends lie in the ball.
 */
inline CayleyStats write_cayley_dot(std::ostream& os, std::size_t n, CayleyColoring coloring = CayleyColoring::none) {
  CayleyStats stats;
  os << "digraph F2 {\n";
  os << "  node [shape=circle, fontsize=10" << (coloring == CayleyColoring::none ? "" : ", style=filled") << "];\n";
  for_each_word_in_ball(n, [&](WordView w) {
    ++stats.nodes;
    os << "  " << detail::dot_id(w);
    const detail::NodeStyle style = detail::node_style(w, coloring);
    if (!style.color.empty())
      os << " [fillcolor=" << style.color << ", tooltip=\"" << style.piece << "\"]";
    os << ";\n";
  });
  for_each_word_in_ball(n, [&](WordView w) {
    for (Letter l : {Letter::a, Letter::b}) {
      const Word target = concat(Word::of(l), Word(w));
      if (target.length() > n) continue;
      ++stats.edges;
      os << "  " << detail::dot_id(w) << " -> " << detail::dot_id(target) << " [label=\"" << to_char(l) << "\"];\n";
    }
  });
  os << "}\n";
  return stats;
}

inline CayleyStats write_cayley_dot(const std::string& path, std::size_t n, CayleyColoring coloring) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  CayleyStats stats = write_cayley_dot(out, n, coloring);
  out.flush();
  if (!out) throw Error("write to " + path + " failed");
  return stats;
}

/// Writes the DOT file and checks the node count against 2*3^n - 1.
inline VerificationReport cayley_export_report(std::size_t n, CayleyColoring coloring, const std::string& path) {
  ReportTimer timer;
  VerificationReport report;
  report.check = "cayley";
  report.set_param("max_len", std::to_string(n));
  constexpr std::string_view kNames[] = {"none", "psi", "paradox"};
  report.set_param("pieces", std::string(kNames[static_cast<std::size_t>(coloring)]));
  report.set_param("dot", path);
  const CayleyStats stats = write_cayley_dot(path, n, coloring);
  const std::uint64_t expected = ball_size(static_cast<unsigned>(n));
  report.items_checked = stats.nodes;
  report.set_metric("nodes", stats.nodes);
  report.set_metric("edges", stats.edges);
  report.set_metric("expected_nodes", expected);
  if (stats.nodes != expected) report.add_failure("nodes", "wrote " + std::to_string(stats.nodes) + " nodes");
  timer.stop(report);
  return report;
}

}  // namespace tarski
