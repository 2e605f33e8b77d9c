#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tropeig/asymptotics.hpp"
#include "tropeig/errors.hpp"
#include "tropeig/najman.hpp"
#include "tropeig/oracle.hpp"
#include "tropeig/pencil_spec.hpp"

namespace tropeig {

using json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void field_error(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

inline const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) field_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path, std::string("missing field \"") + key + "\"");
  return *it;
}

inline long as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<long>();
}

inline Complex as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return Complex(v.get<double>(), 0);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    field_error(path, "expected [re, im]");
  return Complex(v[0].get<double>(), v[1].get<double>());
}

inline ExtRat as_exponent(const json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return ExtRat(Rational(v.get<long>()));
    if (v.is_number_float()) {
      if (!std::isfinite(v.get<double>())) field_error(path, "exponent must be finite or \"inf\"");
      return ExtRat(parse_rational(v.dump()));
    }
    if (v.is_string()) return ExtRat::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    field_error(path, e.what());
  }
  field_error(path, "expected a number, \"p/q\" or \"inf\"");
}

inline const json& square_row(const json& m, int n, int i, const std::string& path) {
  if (!m.is_array() || static_cast<int>(m.size()) != n)
    field_error(path, "expected " + std::to_string(n) + " rows");
  const json& row = m[i];
  if (!row.is_array() || static_cast<int>(row.size()) != n)
    field_error(path + "[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
  return row;
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(e.what()) + " (byte " + std::to_string(e.byte) + ")");
  }
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Exact exponent: integers as numbers, other rationals as "p/q", +infinity
/// as "inf".
inline json exponent_json(const ExtRat& e) {
  if (e.is_zero()) return "inf";
  if (is_integer(e.value())) return json(e.value().convert_to<long>());
  return to_string(e.value());
}

inline json rational_json(const Rational& q) { return exponent_json(ExtRat(q)); }

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json complex_list_json(const std::vector<Complex>& zs) {
  json out = json::array();
  for (const Complex& z : zs) out.push_back(complex_json(z));
  return out;
}

inline json cmatrix_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline PencilSpec spec_from_json(const json& doc) {
  const long n = detail::as_int(detail::member(doc, "$", "n"), "$.n");
  const long d = detail::as_int(detail::member(doc, "$", "d"), "$.d");
  if (n < 1 || n > 64) detail::field_error("$.n", "must be in 1..64");
  if (d < 0 || d > 64) detail::field_error("$.d", "must be in 0..64");
  const json& terms = detail::member(doc, "$", "terms");
  if (!terms.is_array()) detail::field_error("$.terms", "expected an array");

  PencilSpec spec = PencilSpec::zeros(static_cast<int>(n), static_cast<int>(d));
  std::vector<bool> seen(d + 1, false);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string path = "$.terms[" + std::to_string(t) + "]";
    const json& term = terms[t];
    const long k = detail::as_int(detail::member(term, path, "degree"), path + ".degree");
    if (k < 0 || k > d) detail::field_error(path + ".degree", "must be in 0.." + std::to_string(d));
    if (seen[k]) detail::field_error(path + ".degree", "degree " + std::to_string(k) + " appears twice");
    seen[k] = true;
    const json& coeff = detail::member(term, path, "coeff");
    const json& expo = detail::member(term, path, "exponent");
    for (int i = 0; i < n; ++i) {
      const json& crow = detail::square_row(coeff, static_cast<int>(n), i, path + ".coeff");
      const json& erow = detail::square_row(expo, static_cast<int>(n), i, path + ".exponent");
      for (int j = 0; j < n; ++j) {
        const std::string at = "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        ExtRat e = detail::as_exponent(erow[j], path + ".exponent" + at);
        Complex c = detail::as_complex(crow[j], path + ".coeff" + at);
        spec.set(static_cast<int>(k), i, j, c, e);
      }
    }
  }
  spec.validate();
  return spec;
}

inline PencilSpec parse_spec(const std::string& text) { return spec_from_json(detail::parse_text(text)); }

inline PencilSpec load_spec(const std::string& path) { return parse_spec(read_file(path)); }

/// Canonical form: every degree present in order, coefficients under "inf"
/// written as [0, 0].
inline json spec_to_json(const PencilSpec& spec) {
  json doc;
  doc["n"] = spec.n;
  doc["d"] = spec.d;
  json terms = json::array();
  for (int k = 0; k <= spec.d; ++k) {
    json coeff = json::array(), expo = json::array();
    for (int i = 0; i < spec.n; ++i) {
      json crow = json::array(), erow = json::array();
      for (int j = 0; j < spec.n; ++j) {
        const ExtRat& e = spec.exponents[k](i, j);
        crow.push_back(complex_json(e.is_zero() ? Complex(0) : spec.coeffs[k](i, j)));
        erow.push_back(exponent_json(e));
      }
      coeff.push_back(std::move(crow));
      expo.push_back(std::move(erow));
    }
    json term;
    term["degree"] = k;
    term["coeff"] = std::move(coeff);
    term["exponent"] = std::move(expo);
    terms.push_back(std::move(term));
  }
  doc["terms"] = std::move(terms);
  return doc;
}

/// Canonical text: one matrix row per line, negative zeros dropped.
inline std::string serialize_spec(const PencilSpec& spec) {
  json doc = spec_to_json(spec);
  for (json& term : doc["terms"])
    for (json& row : term["coeff"])
      for (json& z : row)
        for (json& x : z)
          if (x.get<double>() == 0.0) x = 0.0;
  auto matrix = [](const json& m) {
    std::string s = "[\n";
    for (std::size_t i = 0; i < m.size(); ++i)
      s += "        " + m[i].dump() + (i + 1 < m.size() ? ",\n" : "\n");
    return s + "      ]";
  };
  std::string out = "{\n  \"n\": " + std::to_string(spec.n) + ",\n  \"d\": " + std::to_string(spec.d) +
                    ",\n  \"terms\": [\n";
  const json& terms = doc["terms"];
  for (std::size_t k = 0; k < terms.size(); ++k) {
    out += "    {\n      \"degree\": " + std::to_string(k) + ",\n";
    out += "      \"coeff\": " + matrix(terms[k]["coeff"]) + ",\n";
    out += "      \"exponent\": " + matrix(terms[k]["exponent"]) + "\n";
    out += k + 1 < terms.size() ? "    },\n" : "    }\n";
  }
  return out + "  ]\n}\n";
}

struct WeierstrassFile {
  WeierstrassSpec blocks;
  CMatrix m;
  std::optional<unsigned> seed;  // set when m was drawn at random
};

/// {lambdas, zero_blocks, inf_blocks, m}; m is an n x n matrix of [re, im]
/// or "random:<seed>". A missing m is drawn with `default_seed`.
inline WeierstrassFile parse_weierstrass(const std::string& text, unsigned default_seed = 1) {
  const json doc = detail::parse_text(text);
  WeierstrassFile out;
  auto int_list = [&](const char* key) {
    std::vector<int> v;
    if (!doc.is_object()) detail::field_error("$", "expected an object");
    if (!doc.contains(key)) return v;
    const json& a = doc[key];
    const std::string path = std::string("$.") + key;
    if (!a.is_array()) detail::field_error(path, "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i)
      v.push_back(static_cast<int>(detail::as_int(a[i], path + "[" + std::to_string(i) + "]")));
    return v;
  };
  out.blocks.zero_blocks = int_list("zero_blocks");
  out.blocks.inf_blocks = int_list("inf_blocks");
  if (doc.contains("lambdas")) {
    const json& a = doc["lambdas"];
    if (!a.is_array()) detail::field_error("$.lambdas", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i)
      out.blocks.lambdas.push_back(detail::as_complex(a[i], "$.lambdas[" + std::to_string(i) + "]"));
  }
  try {
    out.blocks.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("$: ") + e.what());
  }
  const int n = out.blocks.n();
  if (n == 0) detail::field_error("$", "no blocks");
  std::optional<unsigned> seed;
  if (!doc.contains("m")) {
    seed = default_seed;
  } else if (doc["m"].is_string()) {
    const std::string s = doc["m"].get<std::string>();
    if (s.rfind("random:", 0) != 0) detail::field_error("$.m", "expected a matrix or \"random:<seed>\"");
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(s.substr(7), &used);
      if (used != s.size() - 7) throw std::invalid_argument(s);
      seed = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      detail::field_error("$.m", "bad seed in \"" + s + "\"");
    }
  } else {
    out.m = CMatrix(n, n);
    for (int i = 0; i < n; ++i) {
      const json& row = detail::square_row(doc["m"], n, i, "$.m");
      for (int j = 0; j < n; ++j)
        out.m(i, j) = detail::as_complex(row[j], "$.m[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  if (seed) {
    out.seed = seed;
    out.m = random_complex_matrix(n, *seed);
  }
  return out;
}

inline json to_json(const Digraph& g) {
  json out = json::array();
  for (auto [i, j] : g.arcs()) out.push_back(json::array({i + 1, j + 1}));
  return out;
}

inline json to_json(const TropMatrix& b) {
  json out = json::array();
  for (int i = 0; i < b.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < b.size(); ++j) row.push_back(exponent_json(b(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline json to_json(const HungarianPair& p) {
  json u = json::array(), v = json::array();
  for (const Rational& x : p.u) u.push_back(rational_json(x));
  for (const Rational& x : p.v) v.push_back(rational_json(x));
  return json{{"U", u}, {"V", v}};
}

inline json to_json(const CornerList& cl) {
  json out = json::array();
  for (const Corner& c : cl.entries()) out.push_back(json{{"value", exponent_json(c.value)}, {"multiplicity", c.multiplicity}});
  return out;
}

inline json to_json(const ConcavePL& f) {
  json out = json::array();
  if (f.is_identically_zero()) return out;
  const auto& pieces = f.pieces();
  const auto bps = f.breakpoints();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    json piece{{"slope", pieces[i].slope}, {"intercept", rational_json(pieces[i].intercept)}};
    piece["from"] = i == 0 ? json("-inf") : rational_json(bps[i - 1].x);
    piece["to"] = i + 1 == pieces.size() ? json("inf") : rational_json(bps[i].x);
    out.push_back(std::move(piece));
  }
  return out;
}

inline json to_json(const CharPolyFunction& cp) {
  return json{{"corners", to_json(cp.corners)},
              {"val_perm", cp.val_perm},
              {"deg_perm", cp.deg_perm},
              {"pieces", to_json(cp.f)}};
}

inline json to_json(const AsymptoticReport& r) {
  json corners = json::array();
  for (const CornerRecord& c : r.corners) {
    json layers = json::array();
    for (const Digraph& g : c.graphs.layers) layers.push_back(to_json(g));
    corners.push_back(json{{"gamma", rational_json(c.gamma)},
                           {"multiplicity", c.multiplicity},
                           {"mass_above", c.mass_above},
                           {"m", c.m_gamma},
                           {"m_prime", c.m_prime_gamma},
                           {"lost_at_infinity", c.lost_at_infinity},
                           {"informative", c.informative},
                           {"generic", c.generic},
                           {"graphs", layers},
                           {"lambdas", complex_list_json(c.lambdas)}});
  }
  json branches = json::array();
  for (const AsymptoticBranch& b : r.branches)
    branches.push_back(json{{"gamma", rational_json(b.gamma)}, {"lambda", complex_json(b.lambda)}});
  return json{{"mode", to_string(r.mode)},
              {"char_poly", to_json(r.trop)},
              {"corners", corners},
              {"branches", branches},
              {"identically_zero", r.identically_zero_count},
              {"unresolved", r.unresolved_count},
              {"all_generic", r.all_generic()},
              {"warnings", r.warnings}};
}

inline json to_json(const SweepResult& sw) {
  json traj = json::array();
  for (const auto& t : sw.trajectories) {
    json row = json::array();
    for (const auto& v : t) row.push_back(v ? complex_json(*v) : json(nullptr));
    traj.push_back(std::move(row));
  }
  return json{{"eps", sw.eps}, {"zero_counts", sw.zero_counts},
              {"lost_at_infinity", sw.lost_at_infinity}, {"trajectories", traj}};
}

inline json to_json(const ValidationTable& v) {
  json branches = json::array();
  for (const BranchValidation& b : v.branches)
    branches.push_back(json{{"gamma", rational_json(b.gamma)},
                            {"lambda", complex_json(b.lambda)},
                            {"trajectory", b.trajectory},
                            {"coefficient_error", b.coefficient_error},
                            {"exponent_estimate", b.exponent_estimate},
                            {"exponent_error", b.exponent_error}});
  json corners = json::array();
  for (const CornerValidation& c : v.corners)
    corners.push_back(json{{"gamma", rational_json(c.gamma)},
                           {"generic", c.generic},
                           {"predicted", {c.predicted_below, c.predicted_order, c.predicted_above}},
                           {"observed", {c.observed_below, c.observed_order, c.observed_above}}});
  return json{{"branches", branches},
              {"corners", corners},
              {"nonzero_trajectories", v.nonzero_trajectories},
              {"zero_trajectories", v.zero_trajectories},
              {"unmatched_trajectories", v.unmatched_trajectories},
              {"slope_tolerance", v.slope_tolerance}};
}

inline json to_json(const NajmanReport& r) {
  json items = json::array();
  for (const NajmanItem& it : r.items)
    items.push_back(json{{"item", it.item},
                         {"description", it.description},
                         {"order", rational_json(it.order)},
                         {"at_least", it.at_least},
                         {"expected", it.expected},
                         {"predicted", it.predicted},
                         {"observed", it.observed},
                         {"passed", it.passed}});
  return json{{"items", items},
              {"t", r.t},
              {"mu", complex_list_json(r.mus)},
              {"corners", to_json(r.analysis.trop.corners)},
              {"mismatches", r.mismatches},
              {"ok", r.ok()}};
}

}  // namespace tropeig
