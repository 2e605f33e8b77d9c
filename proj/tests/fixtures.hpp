#pragma once

#include <random>
#include <string>
#include <vector>

#include "tropeig/najman.hpp"
#include "tropeig/pencil_spec.hpp"

namespace fixtures {

using namespace tropeig;

/// Affine 3x3 pencil with exponents [[0,0,0],[0,1,1],[0,1,1]] on a generic
/// coefficient b in degree 0 and -I in degree 1.
inline PencilSpec example_spec(const CMatrix& b) {
  PencilSpec s = PencilSpec::zeros(3, 1);
  const int a0[3][3] = {{0, 0, 0}, {0, 1, 1}, {0, 1, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s.set(0, i, j, b(i, j), ExtRat(a0[i][j]));
  for (int i = 0; i < 3; ++i) s.set(1, i, i, Complex(-1), ExtRat(0));
  return s;
}

inline PencilSpec example_spec(unsigned seed = 7) { return example_spec(random_complex_matrix(3, seed)); }

inline TropMatrix matrix(const std::vector<std::vector<ExtRat>>& rows) {
  TropMatrix m(static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

inline const ExtRat kInf = ExtRat::zero();

/// Exponents in {lo..hi} or +infinity with probability p_inf.
inline ExtRat random_exponent(std::mt19937& rng, int lo, int hi, double p_inf) {
  if (std::uniform_real_distribution<double>(0, 1)(rng) < p_inf) return ExtRat::zero();
  return ExtRat(std::uniform_int_distribution<int>(lo, hi)(rng));
}

inline TropMatrix random_trop_matrix(std::mt19937& rng, int n, int lo, int hi, double p_inf) {
  TropMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = random_exponent(rng, lo, hi, p_inf);
  return m;
}

/// Random pencil whose permanent polynomial is not identically +infinity.
inline TropPencil random_trop_pencil(std::mt19937& rng, int n, int d, int lo = -3, int hi = 3,
                                     double p_inf = 0.3) {
  for (;;) {
    std::vector<TropMatrix> layers;
    for (int k = 0; k <= d; ++k) layers.push_back(random_trop_matrix(rng, n, lo, hi, p_inf));
    TropMatrix sum(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ExtRat best = ExtRat::zero();
        for (const TropMatrix& l : layers) best = trop_add(best, l(i, j));
        sum(i, j) = best;
      }
    if (permanent(sum).is_finite()) return TropPencil(std::move(layers));
  }
}

/// Spec on a random pencil with independent complex normal coefficients.
inline PencilSpec random_spec(std::mt19937& rng, int n, int d, int lo = -3, int hi = 3, double p_inf = 0.3) {
  TropPencil t = random_trop_pencil(rng, n, d, lo, hi, p_inf);
  std::normal_distribution<double> normal;
  PencilSpec s = PencilSpec::zeros(n, d);
  for (int k = 0; k <= d; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (t.layer(k)(i, j).is_finite()) s.set(k, i, j, Complex(normal(rng), normal(rng)), t.layer(k)(i, j));
  return s;
}

inline Digraph graph(int n, const std::vector<std::pair<int, int>>& one_based) {
  Digraph g(n);
  for (auto [i, j] : one_based) g.add(i - 1, j - 1);
  return g;
}

inline std::string sample(const std::string& name) { return std::string(TROPEIG_SAMPLES) + "/" + name; }

}  // namespace fixtures
