#pragma once

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tropeig/assignment.hpp"
#include "tropeig/asymptotics.hpp"
#include "tropeig/complex_poly.hpp"
#include "tropeig/minplus.hpp"
#include "tropeig/pencil_spec.hpp"
#include "tropeig/tropical_pencil.hpp"

namespace tropeig {

/// Geometric grid 1e-2, 1e-3, ..., 1e-6.
inline std::vector<double> default_eps_grid() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

/// Scale-free distance between eigenvalues: log-modulus gap plus argument
/// gap. Zeros only match zeros cheaply.
inline double log_distance(Complex a, Complex b) {
  const bool za = a == Complex(0), zb = b == Complex(0);
  if (za && zb) return 0;
  if (za || zb) return 50;
  return std::abs(std::log(std::abs(a)) - std::log(std::abs(b))) + std::abs(std::arg(a / b));
}

namespace detail {

// Rectangular min-cost matching via padding; returns row -> column or -1.
inline std::vector<int> match_rectangular(std::size_t rows, std::size_t cols,
                                          const std::function<double(int, int)>& cost) {
  const int n = static_cast<int>(std::max(rows, cols));
  constexpr double kPad = 100;
  auto sol = solve_assignment<double>(n, [&](int i, int j) -> std::optional<double> {
    if (i >= static_cast<int>(rows) || j >= static_cast<int>(cols)) return kPad;
    return cost(i, j);
  });
  std::vector<int> out(rows, -1);
  for (std::size_t i = 0; i < rows; ++i)
    if (sol->row_to_col[i] < static_cast<int>(cols)) out[i] = sol->row_to_col[i];
  return out;
}

}  // namespace detail

struct SweepOptions {
  RootOptions roots;
  /// Defaults to Laplace expansion for n <= 12: it keeps structural zeros
  /// exact and judges each coefficient against its own terms, which the
  /// multi-scale determinants of small eps require.
  std::optional<DetMethod> det_method;
};

struct SweepResult {
  std::vector<double> eps;                        // strictly decreasing
  std::vector<std::vector<Complex>> eigenvalues;  // per eps; identically zero roots as 0
  std::vector<long> zero_counts;
  std::vector<long> lost_at_infinity;
  /// trajectories[t][e]: value of trajectory t at eps[e], if present.
  std::vector<std::vector<std::optional<Complex>>> trajectories;

  bool is_zero_trajectory(std::size_t t) const {
    for (const auto& v : trajectories[t])
      if (v && *v != Complex(0)) return false;
    return true;
  }

  /// Least-squares slope of log|L| against log eps over eps indices
  /// [first, last]; NaN with fewer than two usable points.
  double slope(std::size_t t, std::size_t first, std::size_t last) const {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t e = first; e <= last && e < eps.size(); ++e) {
      const auto& v = trajectories[t][e];
      if (!v || *v == Complex(0)) continue;
      const double x = std::log(eps[e]), y = std::log(std::abs(*v));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
    if (count < 2) return std::numeric_limits<double>::quiet_NaN();
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }

  /// Slope over the last three eps values.
  double tail_slope(std::size_t t) const {
    const std::size_t last = eps.size() - 1;
    return slope(t, last >= 2 ? last - 2 : 0, last);
  }
};

/// Numeric eigenvalues of the leading-term pencil at every eps, linked into
/// trajectories by minimal total log-distance between consecutive eps.
inline SweepResult sweep(const PencilSpec& spec, const std::vector<double>& eps_list,
                         const SweepOptions& opt = {}) {
  if (eps_list.empty()) throw InvalidArgument("empty eps list");
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    if (!(eps_list[e] > 0)) throw InvalidArgument("eps values must be positive");
    if (e > 0 && !(eps_list[e] < eps_list[e - 1]))
      throw InvalidArgument("eps values must be strictly decreasing");
  }
  const DetMethod method =
      opt.det_method.value_or(spec.n <= 12 ? DetMethod::kExpansion : DetMethod::kInterpolation);

  SweepResult out;
  out.eps = eps_list;
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    const CPoly det = det_poly(instantiate(spec, eps_list[e]), method);
    RootSet rs = roots(det, opt.roots);
    std::vector<Complex> values(static_cast<std::size_t>(rs.zero_multiplicity), Complex(0));
    values.insert(values.end(), rs.nonzero_roots.begin(), rs.nonzero_roots.end());
    out.zero_counts.push_back(rs.zero_multiplicity);
    out.lost_at_infinity.push_back(rs.degree_deficiency);

    if (e == 0) {
      for (const Complex& z : values) out.trajectories.push_back({z});
    } else {
      std::vector<std::size_t> live;
      for (std::size_t t = 0; t < out.trajectories.size(); ++t)
        if (out.trajectories[t][e - 1]) live.push_back(t);
      std::vector<int> m = detail::match_rectangular(live.size(), values.size(), [&](int i, int j) {
        return log_distance(*out.trajectories[live[i]][e - 1], values[j]);
      });
      for (auto& traj : out.trajectories) traj.push_back(std::nullopt);
      std::vector<bool> taken(values.size(), false);
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (m[i] < 0) continue;
        out.trajectories[live[i]][e] = values[m[i]];
        taken[m[i]] = true;
      }
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (taken[j]) continue;
        std::vector<std::optional<Complex>> traj(e, std::nullopt);
        traj.push_back(values[j]);
        out.trajectories.push_back(std::move(traj));
      }
    }
    out.eigenvalues.push_back(std::move(values));
  }
  return out;
}

struct BranchValidation {
  Rational gamma;
  Complex lambda;
  int trajectory = -1;                     // -1 when no trajectory matched
  std::vector<double> coefficient_error;   // per eps: |L / (lambda eps^gamma) - 1|
  std::vector<double> exponent_estimate;   // per eps: slope over the window ending there (NaN if < 3 points)
  std::vector<double> exponent_error;      // |estimate - gamma|
};

struct CornerValidation {
  Rational gamma;
  long predicted_order = 0;   // m_gamma
  long observed_order = 0;    // trajectories with eps^-gamma L bounded away from 0 and oo
  long predicted_below = 0;   // m'_gamma: eps^-gamma L -> 0
  long observed_below = 0;
  long predicted_above = 0;   // remaining eigenvalues: eps^-gamma L -> oo
  long observed_above = 0;
  bool generic = false;
};

struct ValidationTable {
  std::vector<BranchValidation> branches;
  std::vector<CornerValidation> corners;
  long nonzero_trajectories = 0;
  long zero_trajectories = 0;
  long unmatched_trajectories = 0;
  double slope_tolerance = 0;

  /// Every matched branch within the given errors at eps index `at`.
  bool branches_within(std::size_t at, double exponent_tol, double coefficient_tol) const {
    for (const BranchValidation& b : branches) {
      if (b.trajectory < 0) return false;
      if (!(b.exponent_error.at(at) < exponent_tol)) return false;
      if (!(b.coefficient_error.at(at) < coefficient_tol)) return false;
    }
    return true;
  }

  bool counts_agree() const {
    for (const CornerValidation& c : corners) {
      if (!c.generic) continue;
      if (c.observed_order != c.predicted_order || c.observed_below != c.predicted_below ||
          c.observed_above != c.predicted_above)
        return false;
    }
    return true;
  }
};

/// Matches predicted branches to numeric trajectories at the smallest eps
/// and measures coefficient and exponent errors along the sweep; classifies
/// every trajectory relative to each corner by its tail slope.
inline ValidationTable match_predictions(const SweepResult& sw, const AsymptoticReport& report) {
  ValidationTable out;
  const std::size_t last = sw.eps.size() - 1;
  std::vector<std::size_t> nonzero;
  for (std::size_t t = 0; t < sw.trajectories.size(); ++t) {
    if (sw.is_zero_trajectory(t)) {
      ++out.zero_trajectories;
    } else if (sw.trajectories[t][last]) {
      nonzero.push_back(t);
    }
  }
  out.nonzero_trajectories = static_cast<long>(nonzero.size());

  const auto& branches = report.branches;
  std::vector<int> m = detail::match_rectangular(branches.size(), nonzero.size(), [&](int i, int j) {
    const Complex predicted =
        branches[i].lambda * std::pow(sw.eps[last], to_double(branches[i].gamma));
    return log_distance(predicted, *sw.trajectories[nonzero[j]][last]);
  });
  std::vector<bool> used(nonzero.size(), false);
  for (std::size_t i = 0; i < branches.size(); ++i) {
    BranchValidation bv;
    bv.gamma = branches[i].gamma;
    bv.lambda = branches[i].lambda;
    const double g = to_double(bv.gamma);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    bv.coefficient_error.assign(sw.eps.size(), nan);
    bv.exponent_estimate.assign(sw.eps.size(), nan);
    bv.exponent_error.assign(sw.eps.size(), nan);
    if (m[i] >= 0) {
      used[m[i]] = true;
      const std::size_t t = nonzero[m[i]];
      bv.trajectory = static_cast<int>(t);
      for (std::size_t e = 0; e < sw.eps.size(); ++e) {
        if (const auto& v = sw.trajectories[t][e])
          bv.coefficient_error[e] = std::abs(*v / (bv.lambda * std::pow(sw.eps[e], g)) - 1.0);
        if (e >= 2) {
          bv.exponent_estimate[e] = sw.slope(t, e - 2, e);
          bv.exponent_error[e] = std::abs(bv.exponent_estimate[e] - g);
        }
      }
    }
    out.branches.push_back(std::move(bv));
  }
  out.unmatched_trajectories = std::count(used.begin(), used.end(), false);
  if (out.unmatched_trajectories > 0 && report.unresolved_count == 0)
    throw MatchFailure(std::to_string(out.unmatched_trajectories) +
                       " nonzero trajectories have no predicted branch");

  // Slope classification tolerance: half the smallest gap between corners.
  double tol = 0.1;
  for (std::size_t i = 1; i < report.corners.size(); ++i)
    tol = std::min(tol, to_double(report.corners[i - 1].gamma - report.corners[i].gamma) / 2);
  out.slope_tolerance = tol;

  const long total = static_cast<long>(sw.eigenvalues[last].size());
  for (const CornerRecord& c : report.corners) {
    CornerValidation cv;
    cv.gamma = c.gamma;
    cv.generic = c.generic;
    cv.predicted_order = c.m_gamma;
    cv.predicted_below = c.m_prime_gamma;
    cv.predicted_above = total - c.m_gamma - c.m_prime_gamma;
    const double g = to_double(c.gamma);
    cv.observed_below = out.zero_trajectories;
    for (std::size_t t : nonzero) {
      const double s = sw.tail_slope(t);
      if (std::abs(s - g) <= tol) {
        ++cv.observed_order;
      } else if (s > g) {
        ++cv.observed_below;
      } else {
        ++cv.observed_above;
      }
    }
    out.corners.push_back(cv);
  }
  return out;
}

/// The min-plus characteristic polynomial computed from its definition, the
/// formal sum over all permutations of the product of entries, followed by
/// the lower envelope of its monomials.
inline CharPolyFunction brute_force_trop_charpoly(const TropPencil& a) {
  const int n = a.size();
  if (n > 7) throw TooLarge("brute-force permanent limited to n <= 7");
  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  TropFormalPoly total;
  do {
    TropFormalPoly term;
    term.set(0, ExtRat::one());
    for (int i = 0; i < n && !term.is_identically_zero(); ++i) term = trop_mul(term, a.entry(i, sigma[i]));
    total = trop_add(total, term);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  if (total.is_identically_zero())
    throw SingularTropPencil("every permutation meets an identically infinite entry");

  CharPolyFunction out;
  out.f = polynomial_function(total);
  out.corners = corners(out.f);
  out.val_perm = *total.valuation();
  out.deg_perm = *total.degree();
  return out;
}

}  // namespace tropeig
