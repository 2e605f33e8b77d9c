#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tropeig/asymptotics.hpp"
#include "tropeig/complex_poly.hpp"
#include "tropeig/errors.hpp"
#include "tropeig/oracle.hpp"
#include "tropeig/pencil_spec.hpp"

namespace tropeig {

/// Block data of a regular pencil X c + k in Weierstrass normal form:
/// simple nonzero finite eigenvalues, nilpotent (eigenvalue 0) Jordan blocks
/// and blocks at infinity.
struct WeierstrassSpec {
  std::vector<Complex> lambdas;
  std::vector<int> zero_blocks;
  std::vector<int> inf_blocks;

  int r() const { return static_cast<int>(lambdas.size()); }
  int d0() const { return sum(zero_blocks); }
  int d_inf() const { return sum(inf_blocks); }
  int n() const { return r() + d0() + d_inf(); }
  int q0() const { return static_cast<int>(zero_blocks.size()); }
  int q_inf() const { return static_cast<int>(inf_blocks.size()); }
  int q0_prime() const { return static_cast<int>(std::count(zero_blocks.begin(), zero_blocks.end(), 1)); }

  void validate() const {
    for (const Complex& l : lambdas)
      if (l == Complex(0)) throw InconsistentSpec("finite eigenvalues must be nonzero");
    for (int s : zero_blocks)
      if (s <= 0) throw InconsistentSpec("block sizes must be positive");
    for (int s : inf_blocks)
      if (s <= 0) throw InconsistentSpec("block sizes must be positive");
  }

 private:
  static int sum(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
  }
};

/// The normal-form pair (c, k): X c + k is block diagonal with 1x1 blocks
/// X - lambda_i, nilpotent blocks X I + N and infinite blocks X N + I, where
/// N carries ones on the superdiagonal.
inline std::pair<CMatrix, CMatrix> weierstrass_blocks(const WeierstrassSpec& w) {
  w.validate();
  const int n = w.n();
  CMatrix c = CMatrix::Zero(n, n), k = CMatrix::Zero(n, n);
  int at = 0;
  for (const Complex& l : w.lambdas) {
    c(at, at) = 1;
    k(at, at) = -l;
    ++at;
  }
  for (int s : w.zero_blocks) {
    for (int i = 0; i < s; ++i) {
      c(at + i, at + i) = 1;
      if (i + 1 < s) k(at + i, at + i + 1) = 1;
    }
    at += s;
  }
  for (int s : w.inf_blocks) {
    for (int i = 0; i < s; ++i) {
      k(at + i, at + i) = 1;
      if (i + 1 < s) c(at + i, at + i + 1) = 1;
    }
    at += s;
  }
  return {c, k};
}

/// Dense complex matrix with independent standard normal real and imaginary
/// parts.
inline CMatrix random_complex_matrix(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

/// Leading-term spec of eps X^2 m + X c + k with (c, k) in normal form.
/// Nonzero entries of c and k get exponent 0, nonzero entries of m exponent
/// 1, zeros are infinite.
inline PencilSpec najman_pencil(const WeierstrassSpec& w, const CMatrix& m) {
  const int n = w.n();
  if (m.rows() != n || m.cols() != n)
    throw InconsistentSpec("r + d0 + d_inf = " + std::to_string(n) + " but m is " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  auto [c, k] = weierstrass_blocks(w);
  PencilSpec spec = PencilSpec::zeros(n, 2);
  const CMatrix* layers[3] = {&k, &c, &m};
  for (int layer = 0; layer < 3; ++layer)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if ((*layers[layer])(i, j) != Complex(0))
          spec.set(layer, i, j, (*layers[layer])(i, j), ExtRat(layer == 2 ? 1 : 0));
  return spec;
}

/// One count of the singular-perturbation statement, checked against the
/// tropical prediction and against the numeric sweep.
struct NajmanItem {
  std::string item;
  std::string description;
  Rational order;          // leading exponent, when the item is about one order
  bool at_least = false;   // count is a lower bound rather than exact
  long expected = 0;
  long predicted = 0;      // from analyze()
  long observed = 0;       // from the eps sweep
  bool passed = false;
};

struct NajmanReport {
  std::vector<NajmanItem> items;
  std::vector<std::string> mismatches;
  long t = 0;                    // nonzero finite eigenvalues of X m + c
  std::vector<Complex> mus;
  AsymptoticReport analysis;
  SweepResult sweep;

  bool ok() const { return mismatches.empty(); }
};

struct NajmanOptions {
  std::vector<double> eps = default_eps_grid();
  double slope_tolerance = 0.02;
  double coefficient_tolerance = 1e-6;  // predicted lambda vs lambda_i, mu_i
  double limit_tolerance = 1e-2;        // numeric eigenvalue at the smallest eps vs its limit
};

namespace detail {

// Greedy nearest pairing; largest relative distance over the pairs, or
// infinity if the sizes differ.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0;
  for (const Complex& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](Complex p, Complex q) {
      return std::abs(p - x) < std::abs(q - x);
    });
    worst = std::max(worst, std::abs(*it - x) / std::max(std::abs(x), 1e-300));
    b.erase(it);
  }
  return worst;
}

}  // namespace detail

/// Checks the eigenvalue counts of eps X^2 m + X c + k against the block
/// data: r eigenvalues tending to the lambda_i, t of order 1/eps equivalent
/// to mu_i / eps, at least 2 q0 - q0' identically zero, s+1 of order
/// eps^(-1/(s+1)) per infinite block of size s and s-2 of order
/// eps^(1/(s-2)) per nilpotent block of size s > 2.
inline NajmanReport najman_check(const PencilSpec& spec, const WeierstrassSpec& w,
                                 const NajmanOptions& opt = {}) {
  NajmanReport rep;
  rep.analysis = analyze(spec);
  rep.sweep = sweep(spec, opt.eps);
  const SweepResult& sw = rep.sweep;
  const std::size_t last = sw.eps.size() - 1;

  // mu_i: nonzero eigenvalues of X m + c.
  RootSet mu = pencil_eigenvalues(CMatrixPencil({spec.coeffs[1], spec.coeffs[2]}));
  rep.mus = mu.nonzero_roots;
  rep.t = static_cast<long>(rep.mus.size());

  auto predicted_at = [&](const Rational& g) {
    std::vector<Complex> out;
    for (const AsymptoticBranch& b : rep.analysis.branches)
      if (b.gamma == g) out.push_back(b.lambda);
    return out;
  };
  auto observed_at = [&](const Rational& g) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < sw.trajectories.size(); ++t) {
      if (sw.is_zero_trajectory(t) || !sw.trajectories[t][last]) continue;
      if (std::abs(sw.tail_slope(t) - to_double(g)) <= opt.slope_tolerance) out.push_back(t);
    }
    return out;
  };
  auto add = [&](NajmanItem it) {
    it.passed = it.at_least ? (it.predicted >= it.expected && it.observed >= it.expected)
                            : (it.predicted == it.expected && it.observed == it.expected);
    if (!it.passed)
      rep.mismatches.push_back(it.item + " (" + it.description + "): expected " +
                               (it.at_least ? ">= " : "") + std::to_string(it.expected) +
                               ", predicted " + std::to_string(it.predicted) + ", observed " +
                               std::to_string(it.observed));
    rep.items.push_back(std::move(it));
  };

  {
    NajmanItem it{"i", "order eps^0, limits lambda_i", Rational(0)};
    it.expected = w.r();
    std::vector<Complex> pred = predicted_at(Rational(0));
    std::vector<std::size_t> obs = observed_at(Rational(0));
    it.predicted = static_cast<long>(pred.size());
    it.observed = static_cast<long>(obs.size());
    add(it);
    if (detail::multiset_distance(pred, w.lambdas) > opt.coefficient_tolerance)
      rep.mismatches.push_back("i: predicted coefficients differ from lambda_i");
    std::vector<Complex> limits;
    for (std::size_t t : obs) limits.push_back(*sw.trajectories[t][last]);
    if (detail::multiset_distance(limits, w.lambdas) > opt.limit_tolerance)
      rep.mismatches.push_back("i: numeric eigenvalues do not approach lambda_i");
  }
  {
    NajmanItem it{"ii", "order eps^-1, equivalent to mu_i/eps", Rational(-1)};
    it.expected = rep.t;
    std::vector<Complex> pred = predicted_at(Rational(-1));
    std::vector<std::size_t> obs = observed_at(Rational(-1));
    it.predicted = static_cast<long>(pred.size());
    it.observed = static_cast<long>(obs.size());
    add(it);
    if (detail::multiset_distance(pred, rep.mus) > opt.coefficient_tolerance)
      rep.mismatches.push_back("ii: predicted coefficients differ from mu_i");
    std::vector<Complex> scaled;
    for (std::size_t t : obs) scaled.push_back(*sw.trajectories[t][last] * sw.eps[last]);
    if (detail::multiset_distance(scaled, rep.mus) > opt.limit_tolerance)
      rep.mismatches.push_back("ii: eps * eigenvalue does not approach mu_i");
  }
  {
    NajmanItem it{"generic t", "t = n - q_inf", Rational(-1)};
    it.expected = w.n() - w.q_inf();
    it.predicted = rep.t;
    it.observed = rep.t;
    add(it);
  }
  {
    NajmanItem it{"iii", "identically zero", Rational(0)};
    it.at_least = true;
    it.expected = 2L * w.q0() - w.q0_prime();
    it.predicted = rep.analysis.identically_zero_count;
    it.observed = *std::min_element(sw.zero_counts.begin(), sw.zero_counts.end());
    add(it);
  }
  std::map<int, long> inf_sizes, zero_sizes;
  for (int s : w.inf_blocks) inf_sizes[s] += s + 1;
  for (int s : w.zero_blocks)
    if (s > 2) zero_sizes[s] += s - 2;
  for (const auto& [s, count] : inf_sizes) {
    Rational g(-1, s + 1);
    NajmanItem it{"iv", "order eps^(" + to_string(g) + ")", g};
    it.expected = count;
    it.predicted = static_cast<long>(predicted_at(g).size());
    it.observed = static_cast<long>(observed_at(g).size());
    add(it);
  }
  for (const auto& [s, count] : zero_sizes) {
    Rational g(1, s - 2);
    NajmanItem it{"v", "order eps^(" + to_string(g) + ")", g};
    it.expected = count;
    it.predicted = static_cast<long>(predicted_at(g).size());
    it.observed = static_cast<long>(observed_at(g).size());
    add(it);
  }
  return rep;
}

}  // namespace tropeig
