#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tropeig/errors.hpp"
#include "tropeig/ext_rat.hpp"

namespace tropeig {

/// Formal min-plus polynomial: finitely many finite coefficients indexed by
/// degree. Degrees absent from the map carry +infinity.
class TropFormalPoly {
 public:
  TropFormalPoly() = default;
  explicit TropFormalPoly(const std::map<int, ExtRat>& coeffs) {
    for (const auto& [k, c] : coeffs) set(k, c);
  }

  void set(int degree, const ExtRat& c) {
    if (degree < 0) throw InvalidArgument("negative degree");
    if (c.is_zero()) {
      coeffs_.erase(degree);
    } else {
      coeffs_[degree] = c.value();
    }
  }

  ExtRat coeff(int degree) const {
    auto it = coeffs_.find(degree);
    return it == coeffs_.end() ? ExtRat::zero() : ExtRat(it->second);
  }

  bool is_identically_zero() const { return coeffs_.empty(); }
  std::optional<int> degree() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.rbegin()->first;
  }
  std::optional<int> valuation() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.begin()->first;
  }

  const std::map<int, Rational>& coefficients() const { return coeffs_; }

 private:
  std::map<int, Rational> coeffs_;
};

inline TropFormalPoly trop_add(const TropFormalPoly& p, const TropFormalPoly& q) {
  TropFormalPoly out = p;
  for (const auto& [k, c] : q.coefficients()) out.set(k, trop_add(out.coeff(k), ExtRat(c)));
  return out;
}

inline TropFormalPoly trop_mul(const TropFormalPoly& p, const TropFormalPoly& q) {
  TropFormalPoly out;
  for (const auto& [a, ca] : p.coefficients())
    for (const auto& [b, cb] : q.coefficients())
      out.set(a + b, trop_add(out.coeff(a + b), ExtRat(ca + cb)));
  return out;
}

/// min over k of coeff_k + k*x. At x = +infinity only the constant term
/// survives.
inline ExtRat eval_formal(const TropFormalPoly& p, const ExtRat& x) {
  ExtRat best = ExtRat::zero();
  for (const auto& [k, c] : p.coefficients()) {
    ExtRat term = k == 0 ? ExtRat(c) : trop_mul(ExtRat(c), x.is_zero() ? x : ExtRat(x.value() * k));
    best = trop_add(best, term);
  }
  return best;
}

/// x -> intercept + slope * x.
struct Line {
  long slope = 0;
  Rational intercept;

  Rational at(const Rational& x) const { return intercept + x * slope; }

  friend bool operator==(const Line&, const Line&) = default;
};

/// Abscissa where two lines with distinct slopes meet.
inline Rational intersection(const Line& a, const Line& b) {
  if (a.slope == b.slope) throw InvalidArgument("parallel lines do not intersect");
  return (b.intercept - a.intercept) / Rational(a.slope - b.slope);
}

struct Breakpoint {
  Rational x;
  long left_slope = 0;
  long right_slope = 0;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Tangent data at a point: the value and both one-sided derivatives.
struct Tangent {
  Rational x;
  Rational value;
  long left_slope = 0;
  long right_slope = 0;
};

/// Concave piecewise-linear function with nonnegative integer slopes, stored
/// as the ordered list of its pieces (slope strictly decreasing from x -> -inf
/// to x -> +inf) together with the breakpoints where consecutive pieces meet.
/// The function may also be identically +infinity.
class ConcavePL {
 public:
  static ConcavePL identically_zero() {
    ConcavePL f;
    f.zero_ = true;
    return f;
  }

  static ConcavePL constant(const Rational& c) { return from_pieces({Line{0, c}}); }

  /// Pieces must already be the active pieces in order; use lower_envelope
  /// for an arbitrary family of lines.
  static ConcavePL from_pieces(std::vector<Line> pieces) {
    ConcavePL f;
    f.pieces_ = std::move(pieces);
    for (std::size_t i = 0; i + 1 < f.pieces_.size(); ++i) {
      const Line& a = f.pieces_[i];
      const Line& b = f.pieces_[i + 1];
      if (a.slope <= b.slope) throw InconsistentSamples("slopes must strictly decrease");
      f.breakpoints_.push_back(Breakpoint{intersection(a, b), a.slope, b.slope});
    }
    f.validate();
    return f;
  }

  /// Pointwise minimum of an arbitrary nonempty family of lines.
  static ConcavePL lower_envelope(std::vector<Line> lines) {
    if (lines.empty()) return identically_zero();
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
      if (a.slope != b.slope) return a.slope > b.slope;
      return a.intercept < b.intercept;
    });
    std::vector<Line> hull;
    for (const Line& line : lines) {
      if (!hull.empty() && hull.back().slope == line.slope) continue;
      while (hull.size() >= 2 &&
             intersection(hull[hull.size() - 2], hull.back()) >=
                 intersection(hull.back(), line)) {
        hull.pop_back();
      }
      hull.push_back(line);
    }
    return from_pieces(std::move(hull));
  }

  /// Checks the structural invariants; throws InconsistentSamples on failure.
  void validate() const {
    if (zero_) {
      if (!pieces_.empty() || !breakpoints_.empty())
        throw InconsistentSamples("identically zero function with pieces");
      return;
    }
    if (pieces_.empty()) throw InconsistentSamples("no pieces");
    if (breakpoints_.size() + 1 != pieces_.size())
      throw InconsistentSamples("piece/breakpoint count mismatch");
    if (pieces_.back().slope < 0) throw InconsistentSamples("negative slope");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      const Breakpoint& bp = breakpoints_[i];
      const Line& a = pieces_[i];
      const Line& b = pieces_[i + 1];
      if (a.slope <= b.slope) throw InconsistentSamples("slopes must strictly decrease");
      if (bp.left_slope != a.slope || bp.right_slope != b.slope)
        throw InconsistentSamples("breakpoint slopes disagree with pieces");
      if (a.at(bp.x) != b.at(bp.x))
        throw InconsistentSamples("pieces do not meet at breakpoint");
      if (i > 0 && !(breakpoints_[i - 1].x < bp.x))
        throw InconsistentSamples("breakpoints must strictly increase");
    }
  }

  bool is_identically_zero() const { return zero_; }
  const std::vector<Line>& pieces() const { return pieces_; }
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

  /// Slope as x -> -infinity.
  long initial_slope() const { return pieces_.empty() ? 0 : pieces_.front().slope; }
  /// Slope as x -> +infinity.
  long terminal_slope() const { return pieces_.empty() ? 0 : pieces_.back().slope; }

  ExtRat operator()(const Rational& x) const {
    if (zero_) return ExtRat::zero();
    return ExtRat(pieces_[piece_index_right(x)].at(x));
  }

  long left_slope(const Rational& x) const {
    std::size_t i = 0;
    while (i < breakpoints_.size() && breakpoints_[i].x < x) ++i;
    return pieces_.at(i).slope;
  }

  long right_slope(const Rational& x) const {
    return pieces_.at(piece_index_right(x)).slope;
  }

  friend bool operator==(const ConcavePL& a, const ConcavePL& b) {
    return a.zero_ == b.zero_ && a.pieces_ == b.pieces_;
  }

  /// Adds the constant c (min-plus scalar multiplication).
  ConcavePL shifted(const Rational& c) const {
    if (zero_) return *this;
    std::vector<Line> lines = pieces_;
    for (Line& l : lines) l.intercept += c;
    return from_pieces(std::move(lines));
  }

  std::string str() const {
    if (zero_) return "inf";
    std::string out;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (i > 0) out += " | x=" + to_string(breakpoints_[i - 1].x) + " | ";
      out += to_string(pieces_[i].intercept) + " + " + std::to_string(pieces_[i].slope) + "x";
    }
    return out;
  }

 private:
  // Index of the piece that is active immediately to the right of x.
  std::size_t piece_index_right(const Rational& x) const {
    std::size_t i = 0;
    while (i < breakpoints_.size() && breakpoints_[i].x <= x) ++i;
    return i;
  }

  bool zero_ = false;
  std::vector<Line> pieces_;
  std::vector<Breakpoint> breakpoints_;
};

/// Pointwise min-plus product (ordinary sum) of two concave PL functions.
inline ConcavePL trop_product(const ConcavePL& f, const ConcavePL& g) {
  if (f.is_identically_zero() || g.is_identically_zero()) return ConcavePL::identically_zero();
  std::vector<Rational> xs;
  for (const auto& bp : f.breakpoints()) xs.push_back(bp.x);
  for (const auto& bp : g.breakpoints()) xs.push_back(bp.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  // One tangent line per interval between consecutive breakpoints.
  std::vector<Rational> probes;
  if (xs.empty()) {
    probes.push_back(Rational(0));
  } else {
    probes.push_back(xs.front() - 1);
    for (const Rational& x : xs) probes.push_back(x);
  }
  std::vector<Line> lines;
  for (const Rational& x : probes) {
    long slope = f.right_slope(x) + g.right_slope(x);
    Rational value = f(x).value() + g(x).value();
    lines.push_back(Line{slope, value - x * slope});
  }
  return ConcavePL::lower_envelope(std::move(lines));
}

struct Corner {
  ExtRat value;
  long multiplicity = 0;

  friend bool operator==(const Corner&, const Corner&) = default;
};

/// Corners with multiplicities, sorted ascending, the corner +infinity last.
class CornerList {
 public:
  CornerList() = default;

  /// Merges equal values; entries with zero multiplicity are dropped.
  explicit CornerList(std::vector<Corner> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Corner& a, const Corner& b) { return a.value < b.value; });
    for (Corner& c : entries) {
      if (c.multiplicity < 0) throw InvalidArgument("negative corner multiplicity");
      if (c.multiplicity == 0) continue;
      if (!entries_.empty() && entries_.back().value == c.value) {
        entries_.back().multiplicity += c.multiplicity;
      } else {
        entries_.push_back(std::move(c));
      }
    }
  }

  const std::vector<Corner>& entries() const { return entries_; }

  long degree() const {
    long total = 0;
    for (const Corner& c : entries_) total += c.multiplicity;
    return total;
  }

  long multiplicity(const ExtRat& value) const {
    for (const Corner& c : entries_)
      if (c.value == value) return c.multiplicity;
    return 0;
  }

  /// Finite corners only, ascending.
  std::vector<Corner> finite() const {
    std::vector<Corner> out;
    for (const Corner& c : entries_)
      if (c.value.is_finite()) out.push_back(c);
    return out;
  }

  /// Sum of multiplicities of corners strictly greater than value
  /// (the corner +infinity included).
  long multiplicity_above(const ExtRat& value) const {
    long total = 0;
    for (const Corner& c : entries_)
      if (c.value > value) total += c.multiplicity;
    return total;
  }

  std::string str() const {
    std::string out;
    for (const Corner& c : entries_) {
      if (!out.empty()) out += ", ";
      out += c.value.str() + " (x" + std::to_string(c.multiplicity) + ")";
    }
    return out;
  }

  friend bool operator==(const CornerList&, const CornerList&) = default;

 private:
  std::vector<Corner> entries_;
};

/// Finite corners are the breakpoints with multiplicity equal to the slope
/// drop; the corner +infinity carries the terminal slope.
inline CornerList corners(const ConcavePL& f) {
  if (f.is_identically_zero()) return CornerList();
  std::vector<Corner> out;
  for (const Breakpoint& bp : f.breakpoints())
    out.push_back(Corner{ExtRat(bp.x), bp.left_slope - bp.right_slope});
  out.push_back(Corner{ExtRat::zero(), f.terminal_slope()});
  return CornerList(std::move(out));
}

/// The factored form a (x + c_1) ... (x + c_k) in min-plus notation.
inline ConcavePL from_factors(const Rational& a, std::span<const ExtRat> roots) {
  ConcavePL f = ConcavePL::constant(a);
  for (const ExtRat& c : roots) {
    ConcavePL factor = c.is_zero() ? ConcavePL::from_pieces({Line{1, Rational(0)}})
                                   : ConcavePL::from_pieces({Line{1, Rational(0)}, Line{0, c.value()}});
    f = trop_product(f, factor);
  }
  return f;
}

/// The polynomial function of a formal min-plus polynomial.
inline ConcavePL polynomial_function(const TropFormalPoly& p) {
  std::vector<Line> lines;
  for (const auto& [k, c] : p.coefficients()) lines.push_back(Line{k, c});
  return ConcavePL::lower_envelope(std::move(lines));
}

/// Rebuilds a concave PL function from tangent data: the lower envelope of
/// every one-sided tangent line, checked against each sample.
inline ConcavePL concave_from_samples(std::span<const Tangent> tangents) {
  if (tangents.empty()) throw InconsistentSamples("no tangent data");
  std::map<long, Rational> by_slope;
  auto add_line = [&](long slope, const Tangent& t) {
    if (slope < 0) throw InconsistentSamples("negative slope at x=" + to_string(t.x));
    Rational intercept = t.value - t.x * slope;
    auto [it, inserted] = by_slope.emplace(slope, intercept);
    if (!inserted && it->second != intercept)
      throw InconsistentSamples("two tangents of slope " + std::to_string(slope) +
                                " with different intercepts");
  };
  for (const Tangent& t : tangents) {
    if (t.left_slope < t.right_slope)
      throw InconsistentSamples("left slope below right slope at x=" + to_string(t.x));
    add_line(t.left_slope, t);
    add_line(t.right_slope, t);
  }
  std::vector<Line> lines;
  for (const auto& [slope, intercept] : by_slope) lines.push_back(Line{slope, intercept});
  ConcavePL f = ConcavePL::lower_envelope(std::move(lines));
  for (const Tangent& t : tangents) {
    if (f(t.x) != ExtRat(t.value) || f.left_slope(t.x) != t.left_slope ||
        f.right_slope(t.x) != t.right_slope) {
      throw InconsistentSamples("tangent at x=" + to_string(t.x) +
                                " contradicts concavity of the other samples");
    }
  }
  return f;
}

}  // namespace tropeig
