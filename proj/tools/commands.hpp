#pragma once

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tropeig/asymptotics.hpp"
#include "tropeig/io.hpp"
#include "tropeig/najman.hpp"
#include "tropeig/oracle.hpp"

namespace tropeig::cli {

enum ExitCode { kOk = 0, kNonGeneric = 2, kMismatch = 3 };

struct Options {
  GraphMode mode = GraphMode::kOpt;
  double tol = kDefaultStripTolerance;
  std::vector<double> eps = default_eps_grid();
  std::optional<std::string> gamma;
  std::optional<unsigned> seed;
  bool machine = false;
  double exponent_tolerance = 5e-2;
  double coefficient_tolerance = 5e-2;
};

inline std::string fmt(double x) {
  std::ostringstream ss;
  ss << std::setprecision(6) << x;
  return ss.str();
}

inline std::string fmt(Complex z) {
  std::ostringstream ss;
  ss << std::setprecision(10) << z.real() << (z.imag() < 0 ? " - " : " + ")
     << std::abs(z.imag()) << "i";
  return ss.str();
}

inline RootOptions root_options(const Options& opt) {
  RootOptions r;
  r.strip_tolerance = opt.tol;
  if (opt.seed) r.seed = *opt.seed;
  return r;
}

/// Sat mode: the Hungarian pair from hungarian(), or with --seed the pair
/// obtained after a seeded row shuffle.
inline AnalyzeOptions analyze_options(const Options& opt) {
  AnalyzeOptions a;
  a.mode = opt.mode;
  a.roots = root_options(opt);
  if (opt.mode == GraphMode::kSat && opt.seed) {
    const unsigned seed = *opt.seed;
    a.pair_provider = [seed](const TropMatrix& b) {
      std::vector<int> order(b.size());
      std::iota(order.begin(), order.end(), 0);
      std::mt19937 rng(seed);
      std::shuffle(order.begin(), order.end(), rng);
      return hungarian_pair_permuted(b, order);
    };
  }
  return a;
}

inline void print_char_poly(std::ostream& out, const CharPolyFunction& cp) {
  out << "corners: " << cp.corners.str() << "\n";
  out << "val perm: " << cp.val_perm << "\n";
  out << "deg perm: " << cp.deg_perm << "\n";
  out << "char poly function: " << cp.f.str() << "\n";
}

/// A spec file, or a Weierstrass file standing for its eps X^2 m + X c + k
/// pencil.
inline PencilSpec load_input(const std::string& path, const Options& opt) {
  const std::string text = read_file(path);
  const json doc = detail::parse_text(text);
  if (doc.is_object() && !doc.contains("terms") &&
      (doc.contains("lambdas") || doc.contains("zero_blocks") || doc.contains("inf_blocks"))) {
    const WeierstrassFile wf = parse_weierstrass(text, opt.seed.value_or(1));
    return najman_pencil(wf.blocks, wf.m);
  }
  return spec_from_json(doc);
}

inline int cmd_corners(const std::string& path, const Options& opt, std::ostream& out) {
  const PencilSpec spec = load_input(path, opt);
  const CharPolyFunction cp = char_poly_function(spec.trop());
  if (opt.machine) {
    out << to_json(cp).dump(2) << "\n";
  } else {
    print_char_poly(out, cp);
  }
  return kOk;
}

inline void print_report(std::ostream& out, const AsymptoticReport& r) {
  out << "mode: " << to_string(r.mode) << "\n";
  print_char_poly(out, r.trop);
  for (const CornerRecord& c : r.corners) {
    out << "\ncorner " << to_string(c.gamma) << ": multiplicity " << c.multiplicity
        << ", mass above " << c.mass_above << ", m = " << c.m_gamma << ", m' = " << c.m_prime_gamma;
    if (c.lost_at_infinity) out << ", lost at infinity " << c.lost_at_infinity;
    out << (c.informative ? "" : ", auxiliary determinant vanishes")
        << (c.generic ? ", generic" : ", NON-GENERIC") << "\n";
    for (std::size_t k = 0; k < c.graphs.layers.size(); ++k)
      out << "  G_" << k << ": " << c.graphs.layers[k].str() << "\n";
    for (const Complex& l : c.lambdas) out << "  lambda = " << fmt(l) << "\n";
  }
  out << "\nbranches: " << r.branch_count() << ", identically zero: " << r.identically_zero_count
      << ", unresolved: " << r.unresolved_count << "\n";
  for (const std::string& w : r.warnings) out << "warning: " << w << "\n";
}

inline int report_exit(const AsymptoticReport& r) {
  return !r.all_generic() && r.unresolved_count > 0 ? kNonGeneric : kOk;
}

inline int cmd_predict(const std::string& path, const Options& opt, std::ostream& out) {
  const PencilSpec spec = load_input(path, opt);
  const AsymptoticReport r = analyze(spec, analyze_options(opt));
  if (opt.machine) {
    out << to_json(r).dump(2) << "\n";
  } else {
    print_report(out, r);
  }
  return report_exit(r);
}

/// Problems found by the sweep: count disagreements at generic corners,
/// unmatched branches and errors above tolerance at the smallest eps.
inline std::vector<std::string> verify_mismatches(const ValidationTable& v, const Options& opt) {
  std::vector<std::string> out;
  if (!v.counts_agree()) out.push_back("order counts disagree at a generic corner");
  for (const BranchValidation& b : v.branches) {
    const std::string name = "branch " + fmt(b.lambda) + " eps^" + to_string(b.gamma);
    if (b.trajectory < 0) {
      out.push_back(name + ": no trajectory");
      continue;
    }
    if (!(b.exponent_error.back() < opt.exponent_tolerance))
      out.push_back(name + ": exponent error " + fmt(b.exponent_error.back()));
    if (!(b.coefficient_error.back() < opt.coefficient_tolerance))
      out.push_back(name + ": coefficient error " + fmt(b.coefficient_error.back()));
  }
  return out;
}

inline int cmd_verify(const std::string& path, const Options& opt, std::ostream& out) {
  const PencilSpec spec = load_input(path, opt);
  const AsymptoticReport r = analyze(spec, analyze_options(opt));
  SweepOptions so;
  so.roots = root_options(opt);
  const SweepResult sw = sweep(spec, opt.eps, so);
  const ValidationTable v = match_predictions(sw, r);
  const std::vector<std::string> bad = verify_mismatches(v, opt);
  if (opt.machine) {
    json doc{{"report", to_json(r)}, {"sweep", to_json(sw)}, {"validation", to_json(v)}, {"mismatches", bad}};
    out << doc.dump(2) << "\n";
  } else {
    out << "corners: " << r.trop.corners.str() << "\n";
    out << "eps:";
    for (double e : sw.eps) out << " " << fmt(e);
    out << "\n\nbranch                                  exponent err / coefficient err per eps\n";
    for (const BranchValidation& b : v.branches) {
      std::ostringstream name;
      name << fmt(b.lambda) << " eps^" << to_string(b.gamma);
      out << std::left << std::setw(40) << name.str();
      for (std::size_t e = 0; e < sw.eps.size(); ++e)
        out << " " << fmt(b.exponent_error[e]) << "/" << fmt(b.coefficient_error[e]);
      out << "\n";
    }
    out << "\ncorner  below(pred/obs)  order(pred/obs)  above(pred/obs)\n";
    for (const CornerValidation& c : v.corners)
      out << std::left << std::setw(8) << to_string(c.gamma) << c.predicted_below << "/" << c.observed_below
          << "              " << c.predicted_order << "/" << c.observed_order << "              "
          << c.predicted_above << "/" << c.observed_above << (c.generic ? "" : "  (non-generic)") << "\n";
    out << "\nzero trajectories: " << v.zero_trajectories << ", unmatched: " << v.unmatched_trajectories
        << "\n";
    for (const std::string& m : bad) out << "mismatch: " << m << "\n";
    out << (bad.empty() ? "verified\n" : "validation FAILED\n");
  }
  if (!bad.empty()) return kMismatch;
  return report_exit(r);
}

inline int cmd_assignment(const std::string& path, const Options& opt, std::ostream& out) {
  if (!opt.gamma) throw InvalidArgument("--gamma is required");
  const Rational gamma = parse_rational(*opt.gamma);
  const PencilSpec spec = load_input(path, opt);
  const TropPencil trop = spec.trop();
  const CharPolyFunction cp = char_poly_function(trop);
  if (cp.corners.multiplicity(ExtRat(gamma)) == 0)
    throw InvalidArgument("gamma " + to_string(gamma) + " is not a corner (" + cp.corners.str() + ")");
  const TropMatrix b = eval_pencil(trop, gamma);
  const AnalyzeOptions ao = analyze_options(opt);
  const HungarianPair pair = ao.pair_provider ? ao.pair_provider(b) : hungarian(b).pair;
  validate_pair(b, pair);
  const Digraph sat = sat_graph(b, pair);
  const Digraph opt_g = opt_graph(b);
  const CornerGraphs g = corner_graphs(trop, gamma, opt.mode, pair);
  if (opt.machine) {
    json layers = json::array();
    for (const Digraph& l : g.layers) layers.push_back(to_json(l));
    json doc{{"gamma", rational_json(gamma)},
             {"matrix", to_json(b)},
             {"permanent", exponent_json(permanent(b))},
             {"pair", to_json(pair)},
             {"sat", to_json(sat)},
             {"opt", to_json(opt_g)},
             {"mode", to_string(opt.mode)},
             {"layers", layers}};
    out << doc.dump(2) << "\n";
  } else {
    out << "A(" << to_string(gamma) << "):\n" << b.str();
    out << "permanent: " << permanent(b).str() << "\n";
    out << "U:";
    for (const Rational& u : pair.u) out << " " << to_string(u);
    out << "\nV:";
    for (const Rational& v : pair.v) out << " " << to_string(v);
    out << "\nSat: " << sat.str() << "\nOpt: " << opt_g.str() << "\n";
    for (std::size_t k = 0; k < g.layers.size(); ++k)
      out << "G_" << k << " (" << to_string(opt.mode) << "): " << g.layers[k].str() << "\n";
  }
  return kOk;
}

inline int cmd_najman(const std::string& path, const Options& opt, std::ostream& out) {
  const WeierstrassFile wf = parse_weierstrass(read_file(path), opt.seed.value_or(1));
  const PencilSpec spec = najman_pencil(wf.blocks, wf.m);
  NajmanOptions no;
  no.eps = opt.eps;
  const NajmanReport r = najman_check(spec, wf.blocks, no);
  if (opt.machine) {
    out << to_json(r).dump(2) << "\n";
  } else {
    const WeierstrassSpec& w = wf.blocks;
    out << "n = " << w.n() << ", r = " << w.r() << ", q0 = " << w.q0() << ", q0' = " << w.q0_prime()
        << ", q_inf = " << w.q_inf() << ", t = " << r.t << "\n";
    out << "corners: " << r.analysis.trop.corners.str() << "\n\n";
    out << "item       order     expected  predicted  observed\n";
    for (const NajmanItem& it : r.items)
      out << std::left << std::setw(11) << it.item << std::setw(10) << to_string(it.order)
          << (it.at_least ? ">=" : "  ") << std::setw(8) << it.expected << std::setw(11) << it.predicted
          << std::setw(9) << it.observed << (it.passed ? "ok" : "MISMATCH") << "  " << it.description << "\n";
    for (const std::string& m : r.mismatches) out << "mismatch: " << m << "\n";
  }
  return r.ok() ? kOk : kMismatch;
}

/// Canonical re-serialization of a spec file.
inline int cmd_format(const std::string& path, const Options& opt, std::ostream& out) {
  out << serialize_spec(load_input(path, opt));
  return kOk;
}

/// Runs a command, rendering library errors with their stable code.
template <typename Command>
int run(Command&& command, const std::string& path, const Options& opt, std::ostream& out,
        std::ostream& err) {
  try {
    return command(path, opt, out);
  } catch (const Error& e) {
    if (opt.machine) {
      err << json{{"error", std::string(error_code_name(e.code()))},
                  {"code", static_cast<int>(e.code())},
                  {"message", e.what()}}
                 .dump()
          << "\n";
    } else {
      err << "error " << static_cast<int>(e.code()) << ": " << e.what() << "\n";
    }
    return static_cast<int>(e.code());
  }
}

}  // namespace tropeig::cli
