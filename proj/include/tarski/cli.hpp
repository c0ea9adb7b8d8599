#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tarski/tarski.hpp"

/// The `tarski` command line. Each subcommand calls one library operation and prints its report.
namespace tarski::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

struct OutputOptions {
  std::string format = "text";
  unsigned threads = 1;
  bool timing = true;
};

inline int exit_code(Status s) {
  switch (s) {
    case Status::pass: return kPass;
    case Status::fail: return kFail;
    case Status::inconclusive: return kInconclusive;
  }
  return kFail;
}

inline void emit(std::ostream& out, const VerificationReport& r, const OutputOptions& o) {
  if (o.format == "json")
    out << to_json(r, o.timing).dump(2) << "\n";
  else
    write_text(out, r, o.timing);
}

inline std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_rational(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

/// A report standing in for one that could not be produced.
template <class E>
VerificationReport error_report(const std::string& check, const E& e, bool inconclusive) {
  VerificationReport r;
  r.check = check;
  if (inconclusive)
    r.mark_inconclusive(e.what());
  else
    r.add_failure(e.witness().empty() ? "-" : e.witness(), e.what());
  return r;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact finite-stage checks of the Banach-Tarski construction", "tarski"};
  app.require_subcommand(1);
  OutputOptions opts;
  app.add_option("--format", opts.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--threads", opts.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  bool no_timing = false;
  app.add_flag("--no-timing", no_timing, "report elapsed_ms as 0 so output is reproducible");

  std::string check;
  std::function<VerificationReport()> action;
  auto command = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    sub->preparse_callback([&check, name](std::size_t) { check = name; });
    return sub;
  };

  std::size_t max_len = 0, window = 0, d_len = 0, powers = 0;
  std::uint64_t order_k = 100000;
  std::string seed_text = "1,2,3", radii_text = "1,1/2,1/3", mode_text = "both", pieces_text, dot_path,
              json_path, input_path, axis_text, cos_text = "3/5", sin_text = "4/5";

  CLI::App* cayley = command(&app, "cayley", "export the Cayley ball as DOT");
  cayley->add_option("--max-len", max_len)->required();
  cayley->add_option("--pieces", pieces_text, "psi or paradox")->check(CLI::IsMember({"psi", "paradox"}));
  cayley->add_option("--dot", dot_path)->required();
  cayley->callback([&] {
    action = [&] { return cayley_export_report(max_len, parse_coloring(pieces_text), dot_path); };
  });

  CLI::App* verify = app.add_subcommand("verify", "run a verifier");
  verify->fallthrough();
  verify->require_subcommand(1);

  CLI::App* free_paradox = command(verify, "free-paradox", "Psi partition and paradoxical decomposition of F2");
  free_paradox->add_option("--max-len", max_len)->required();
  free_paradox->callback([&] { action = [&] { return free_paradox_report(max_len, opts.threads); }; });

  CLI::App* independence = command(verify, "independence", "no nontrivial word is the identity");
  independence->add_option("--max-len", max_len)->required();
  independence->add_option("--mode", mode_text, "direct, five-adic or both")
      ->check(CLI::IsMember({"direct", "five-adic", "both"}));
  independence->callback([&] {
    action = [&] {
      const IndependenceMode mode = mode_text == "direct"      ? IndependenceMode::direct
                                    : mode_text == "five-adic" ? IndependenceMode::five_adic
                                                               : IndependenceMode::both;
      return verify_independence(max_len, mode, opts.threads);
    };
  });

  CLI::App* five_adic = command(verify, "five-adic", "5-adic invariant and recurrence");
  five_adic->add_option("--max-len", max_len)->required();
  five_adic->callback([&] { action = [&] { return check_five_adic(max_len, opts.threads); }; });

  CLI::App* freeness = command(verify, "freeness", "pairwise distinct orbit ball");
  freeness->add_option("--seed", seed_text, "X,Y,Z");
  freeness->add_option("--max-len", max_len)->required();
  freeness->callback([&] { action = [&] { return verify_freeness(parse_ray(seed_text), max_len, opts.threads); }; });

  CLI::App* sphere = command(verify, "sphere-paradox", "finite-stage sphere pieces and both reassemblies");
  sphere->add_option("--seed", seed_text, "X,Y,Z");
  sphere->add_option("--max-len", max_len)->required();
  sphere->callback([&] { action = [&] { return sphere_paradox_report(parse_ray(seed_text), max_len, opts.threads); }; });

  CLI::App* cert = verify->add_subcommand("cert", "verify a concrete certificate on a window");
  cert->fallthrough();
  cert->require_subcommand(1);
  CLI::App* nat_z = command(cert, "nat-z", "N ~ Z");
  nat_z->add_option("--window", window)->required();
  nat_z->callback([&] { action = [&] { return verify_certificate(nat_z_certificate(), window, opts.threads); }; });
  CLI::App* circle = command(cert, "circle", "S1 ~ S1 minus a point");
  circle->add_option("--window", window)->required();
  circle->add_option("--cos", cos_text);
  circle->add_option("--sin", sin_text);
  circle->add_option("--order", order_k, "no-return check up to this power");
  circle->callback([&] {
    action = [&] {
      return verify_circle(parse_rational(cos_text), parse_rational(sin_text), window, order_k, opts.threads);
    };
  });
  CLI::App* ball_point = command(cert, "ball-minus-point", "B3 ~ B3 minus the origin");
  ball_point->add_option("--window", window)->required();
  ball_point->add_option("--order", order_k, "no-return check up to this power");
  ball_point->callback([&] { action = [&] { return verify_ball_minus_point(window, order_k, opts.threads); }; });

  CLI::App* ball = command(verify, "ball-paradox", "finite-stage ball doubling over sample radii");
  ball->add_option("--seed", seed_text, "X,Y,Z");
  ball->add_option("--max-len", max_len)->required();
  ball->add_option("--radii", radii_text, "r1,r2,... in (0,1]");
  ball->callback([&] {
    action = [&] {
      return ball_doubling_certificate(parse_ray(seed_text), max_len, parse_rational_list(radii_text), opts.threads).report;
    };
  });

  CLI::App* fixed = command(&app, "fixed-points", "fixed points of words up to a length");
  fixed->add_option("--max-len", max_len)->required();
  fixed->add_option("--json", json_path, "also write the census here");
  fixed->callback([&] {
    action = [&] {
      const FixedPointCensus census = enumerate_fixed_rays(max_len, opts.threads);
      if (!json_path.empty()) {
        std::ofstream f(json_path);
        f << to_json(census).dump(2) << "\n";
        if (!f) throw Error("cannot write " + json_path);
      }
      return fixed_points_report(census);
    };
  });

  CLI::App* bsb = command(&app, "bsb", "Schroeder-Bernstein on a finite instance");
  bsb->add_option("--input", input_path)->required();
  bsb->add_option("--window", window)->required();
  bsb->callback([&] { action = [&] { return solve_bsb_instance(load_bsb_instance(input_path), window, opts.threads).report; }; });

  CLI::App* mu = command(&app, "mu-disjoint", "mu^k D and D disjoint for k <= powers");
  mu->add_option("--axis", axis_text, "X,Y,Z with a square norm")->required();
  mu->add_option("--cos", cos_text);
  mu->add_option("--sin", sin_text);
  mu->add_option("--d-len", d_len)->required();
  mu->add_option("--powers", powers)->required();
  mu->callback([&] {
    action = [&] {
      const Mat3Rational m = rodrigues_rational(parse_ray(axis_text).vec(), parse_rational(cos_text), parse_rational(sin_text));
      return check_mu_disjointness(m, d_len, powers, opts.threads);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  opts.timing = !no_timing;
  if (!action) {
    err << "error: no command given\n";
    return kUsage;
  }

  try {
    const VerificationReport report = action();
    emit(out, report, opts);
    return exit_code(report.status());
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    emit(out, error_report(check, e, true), opts);
    return kInconclusive;
  } catch (const CertificateError& e) {
    emit(out, error_report(check, e, false), opts);
    return kFail;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace tarski::cli
