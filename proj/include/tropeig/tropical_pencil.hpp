#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tropeig/assignment.hpp"
#include "tropeig/errors.hpp"
#include "tropeig/ext_rat.hpp"
#include "tropeig/minplus.hpp"

namespace tropeig {

/// Min-plus matrix pencil A_0 + X A_1 + ... + X^d A_d (min-plus operations).
class TropPencil {
 public:
  TropPencil() = default;
  explicit TropPencil(std::vector<TropMatrix> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw InvalidArgument("pencil needs at least one layer");
    for (const TropMatrix& m : layers_)
      if (m.size() != layers_.front().size()) throw InvalidArgument("layer dimensions differ");
  }

  int size() const { return layers_.empty() ? 0 : layers_.front().size(); }
  int degree() const { return static_cast<int>(layers_.size()) - 1; }
  const TropMatrix& layer(int k) const { return layers_.at(k); }
  const std::vector<TropMatrix>& layers() const { return layers_; }

  /// Formal entry (i, j) as a min-plus polynomial in X.
  TropFormalPoly entry(int i, int j) const {
    TropFormalPoly p;
    for (int k = 0; k <= degree(); ++k) p.set(k, layers_[k](i, j));
    return p;
  }

 private:
  std::vector<TropMatrix> layers_;
};

/// Entrywise min over k of (A_k)_ij + k x.
inline TropMatrix eval_pencil(const TropPencil& a, const Rational& x) {
  const int n = a.size();
  TropMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ExtRat best = ExtRat::zero();
      for (int k = 0; k <= a.degree(); ++k) {
        const ExtRat& c = a.layer(k)(i, j);
        if (c.is_finite()) best = trop_add(best, ExtRat(c.value() + x * k));
      }
      out(i, j) = best;
    }
  }
  return out;
}

/// Polynomial function of the min-plus characteristic polynomial perm(A)
/// together with its corners.
struct CharPolyFunction {
  ConcavePL f;
  CornerList corners;
  long val_perm = 0;  // terminal slope, multiplicity of the corner +infinity
  long deg_perm = 0;  // initial slope, total multiplicity
  std::vector<Rational> probes;  // abscissae where assignment problems were solved
};

namespace detail {

// Per-entry lexicographic choice among the finite layers.
inline TropMatrix degree_matrix_value(const TropPencil& a, const Rational& x,
                                      std::vector<std::vector<long>>& dmin,
                                      std::vector<std::vector<long>>& dmax) {
  const int n = a.size();
  TropMatrix b = eval_pencil(a, x);
  dmin.assign(n, std::vector<long>(n, 0));
  dmax.assign(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (b(i, j).is_zero()) continue;
      bool first = true;
      for (int k = 0; k <= a.degree(); ++k) {
        const ExtRat& c = a.layer(k)(i, j);
        if (c.is_finite() && c.value() + x * k == b(i, j).value()) {
          if (first) dmin[i][j] = k;
          dmax[i][j] = k;
          first = false;
        }
      }
    }
  }
  return b;
}

// Steepest (toward = -inf) or flattest (+inf) line of the characteristic
// polynomial function: extreme total degree first, then least intercept.
inline Line extreme_line(const TropPencil& a, bool steepest) {
  using Cost = Lex<long, Rational>;
  const int n = a.size();
  auto sol = solve_assignment<Cost>(n, [&](int i, int j) -> std::optional<Cost> {
    std::optional<Cost> best;
    for (int k = 0; k <= a.degree(); ++k) {
      const ExtRat& c = a.layer(k)(i, j);
      if (c.is_zero()) continue;
      Cost cand{steepest ? -k : k, c.value()};
      if (!best || cand < *best) best = cand;
    }
    return best;
  });
  if (!sol) throw SingularTropPencil("no permutation has a finite entry at any degree");
  long slope = steepest ? -sol->value.first : sol->value.first;
  return Line{slope, sol->value.second};
}

}  // namespace detail

/// Value and one-sided slopes of x -> perm(eval_pencil(A, x)).
inline Tangent probe_char_poly(const TropPencil& a, const Rational& x) {
  std::vector<std::vector<long>> dmin, dmax;
  TropMatrix b = detail::degree_matrix_value(a, x, dmin, dmax);
  LexAssignment right = lex_assignment(b, dmin, Sense::kMin);
  LexAssignment left = lex_assignment(b, dmax, Sense::kMax);
  return Tangent{x, right.value.value(), left.degree, right.degree};
}

/// Computes the characteristic polynomial function by tangent bisection.
///
/// Starting from the steepest and flattest lines, each step probes the
/// intersection of two known lines. If the function touches the intersection
/// it is a breakpoint; otherwise the probe yields new tangent lines strictly
/// between the two and both halves are refined. Every probe either certifies
/// a breakpoint or discovers a new piece.
inline CharPolyFunction char_poly_function(const TropPencil& a) {
  const Line steep = detail::extreme_line(a, true);
  const Line flat = detail::extreme_line(a, false);

  std::vector<Tangent> tangents;
  std::vector<Rational> probes;
  auto probe = [&](const Rational& x) {
    probes.push_back(x);
    tangents.push_back(probe_char_poly(a, x));
    return tangents.back();
  };

  if (steep.slope == flat.slope) {
    probe(Rational(0));
  } else {
    struct Task { Line left, right; };
    std::vector<Task> stack{{steep, flat}};
    while (!stack.empty()) {
      Task t = stack.back();
      stack.pop_back();
      const Rational x = intersection(t.left, t.right);
      const Tangent tan = probe(x);
      if (tan.value == t.left.at(x)) continue;  // breakpoint between the two lines
      const Line lo{tan.left_slope, tan.value - x * tan.left_slope};
      const Line hi{tan.right_slope, tan.value - x * tan.right_slope};
      if (hi.slope != t.right.slope) stack.push_back({hi, t.right});
      if (lo.slope != t.left.slope) stack.push_back({t.left, lo});
    }
  }

  CharPolyFunction out;
  out.f = concave_from_samples(tangents);
  out.corners = corners(out.f);
  out.val_perm = out.f.terminal_slope();
  out.deg_perm = out.f.initial_slope();
  out.probes = std::move(probes);
  if (out.deg_perm != steep.slope || out.val_perm != flat.slope)
    throw InconsistentSamples("bisection did not recover the extreme slopes");
  return out;
}

/// Matrix of valuations: lowest degree with a finite coefficient.
inline TropMatrix val_matrix(const TropPencil& a) {
  TropMatrix m(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      for (int k = a.degree(); k >= 0; --k)
        if (a.layer(k)(i, j).is_finite()) m(i, j) = ExtRat(k);
  return m;
}

/// Max-plus permanent of the matrix of degrees (highest finite layer),
/// or std::nullopt when every permutation meets an identically-infinite entry.
inline std::optional<long> deg_permanent(const TropPencil& a) {
  TropMatrix neg(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      for (int k = 0; k <= a.degree(); ++k)
        if (a.layer(k)(i, j).is_finite()) neg(i, j) = ExtRat(-k);
  ExtRat p = permanent(neg);
  if (p.is_zero()) return std::nullopt;
  return -p.value().convert_to<long>();
}

/// Generic number of identically zero eigenvalues: multiplicity of the
/// corner +infinity.
inline long zero_corner_count(const CharPolyFunction& cp) { return cp.val_perm; }

enum class GraphMode { kOpt, kSat };

inline std::string to_string(GraphMode mode) { return mode == GraphMode::kOpt ? "opt" : "sat"; }

struct CornerGraphs {
  Rational gamma;
  GraphMode mode = GraphMode::kOpt;
  std::optional<HungarianPair> pair;  // set in Sat mode
  TropMatrix value;                   // eval_pencil(A, gamma)
  Digraph base;                       // Opt(value) or Sat(value, U, V)
  std::vector<Digraph> layers;        // G_0 .. G_d
};

/// Graphs G_k at a finite corner: arcs of the base graph where layer k
/// attains the entry minimum.
inline CornerGraphs corner_graphs(const TropPencil& a, const Rational& gamma, GraphMode mode,
                                  std::optional<HungarianPair> pair = std::nullopt) {
  CornerGraphs out;
  out.gamma = gamma;
  out.mode = mode;
  out.value = eval_pencil(a, gamma);
  if (permanent(out.value).is_zero())
    throw Infeasible("permanent of A(" + to_string(gamma) + ") is +infinity");
  if (mode == GraphMode::kOpt) {
    out.base = opt_graph(out.value);
  } else {
    if (!pair) pair = hungarian(out.value).pair;
    out.base = sat_graph(out.value, *pair);
    out.pair = std::move(pair);
  }
  const int n = a.size();
  for (int k = 0; k <= a.degree(); ++k) {
    Digraph g(n);
    for (auto [i, j] : out.base.arcs()) {
      const ExtRat& c = a.layer(k)(i, j);
      if (c.is_finite() && c.value() + gamma * k == out.value(i, j).value()) g.add(i, j);
    }
    out.layers.push_back(std::move(g));
  }
  return out;
}

}  // namespace tropeig
