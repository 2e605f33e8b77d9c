#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tropeig/errors.hpp"

namespace tropeig {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Relative threshold separating structural zeros from rounding noise.
inline constexpr double kDefaultStripTolerance = 1e-9;

/// Complex polynomial, coefficients in ascending degree.
///
/// `scale`, when present, holds for each coefficient a magnitude against which
/// it is judged negligible (the size of the terms it was accumulated from).
/// Without it every coefficient is judged against the largest one.
struct CPoly {
  std::vector<Complex> coeffs;
  std::vector<double> scale;

  CPoly() = default;
  CPoly(std::vector<Complex> c) : coeffs(std::move(c)) {}  // NOLINT
  CPoly(std::vector<Complex> c, std::vector<double> s) : coeffs(std::move(c)), scale(std::move(s)) {}

  int nominal_degree() const { return static_cast<int>(coeffs.size()) - 1; }

  Complex operator()(Complex z) const {
    Complex acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Complex derivative(Complex z) const {
    Complex acc = 0;
    for (int j = nominal_degree(); j >= 1; --j) acc = acc * z + coeffs[j] * static_cast<double>(j);
    return acc;
  }

  /// sum_i |c_i| |z|^i, the natural scale of an evaluation error at z.
  double magnitude(Complex z) const {
    double r = std::abs(z), acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
  }

  double reference(int j) const {
    if (!scale.empty()) return scale.at(j);
    double m = 0;
    for (const Complex& c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }

  bool negligible(int j, double tau = kDefaultStripTolerance) const {
    return std::abs(coeffs.at(j)) <= tau * reference(j);
  }

  bool is_zero(double tau = kDefaultStripTolerance) const {
    for (int j = 0; j <= nominal_degree(); ++j)
      if (!negligible(j, tau)) return false;
    return true;
  }
};

/// Complex matrix polynomial sum_k X^k b_k.
class CMatrixPencil {
 public:
  CMatrixPencil() = default;
  explicit CMatrixPencil(std::vector<CMatrix> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw InvalidArgument("pencil needs at least one layer");
    for (const CMatrix& m : layers_)
      if (m.rows() != m.cols() || m.rows() != layers_.front().rows())
        throw InvalidArgument("pencil layers must be square of equal size");
  }

  int size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().rows()); }
  int degree() const { return static_cast<int>(layers_.size()) - 1; }
  const CMatrix& layer(int k) const { return layers_.at(k); }
  const std::vector<CMatrix>& layers() const { return layers_; }

  CMatrix at(Complex z) const {
    CMatrix m = layers_.back();
    for (int k = degree() - 1; k >= 0; --k) m = (m * z + layers_[k]).eval();
    return m;
  }

 private:
  std::vector<CMatrix> layers_;
};

enum class DetMethod {
  kInterpolation,  // evaluation on a circle + inverse DFT
  kExpansion,      // Laplace expansion over column subsets, n <= 14
};

namespace detail {

inline double layer_norm(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Radius balancing the lowest and highest nonzero layers.
inline double interpolation_radius(const CMatrixPencil& p) {
  int lo = -1, hi = -1;
  for (int k = 0; k <= p.degree(); ++k) {
    if (p.size() > 0 && layer_norm(p.layer(k)) > 0) {
      if (lo < 0) lo = k;
      hi = k;
    }
  }
  if (lo < 0 || lo == hi) return 1.0;
  double r = std::pow(layer_norm(p.layer(lo)) / layer_norm(p.layer(hi)), 1.0 / (hi - lo));
  return std::isfinite(r) && r > 0 ? r : 1.0;
}

}  // namespace detail

/// Determinant of a complex matrix pencil as a polynomial of nominal degree
/// n*d, with per-coefficient magnitude references.
inline CPoly det_poly(const CMatrixPencil& p, DetMethod method = DetMethod::kInterpolation) {
  const int n = p.size();
  const int d = p.degree();
  const int degree = n * d;
  if (n == 0) return CPoly({Complex(1)}, {1.0});

  if (method == DetMethod::kInterpolation) {
    const int points = degree + 1;
    const double rho = detail::interpolation_radius(p);
    std::vector<Complex> values(points);
    double bound = 0;  // max Hadamard bound over the circle
    for (int m = 0; m < points; ++m) {
      const Complex z = std::polar(rho, 2 * std::numbers::pi * m / points);
      CMatrix a = p.at(z);
      values[m] = a.partialPivLu().determinant();
      double hadamard = 1;
      for (int i = 0; i < n; ++i) hadamard *= a.row(i).norm();
      bound = std::max(bound, hadamard);
    }
    std::vector<Complex> coeffs(points);
    std::vector<double> scale(points);
    for (int j = 0; j < points; ++j) {
      Complex acc = 0;
      for (int m = 0; m < points; ++m)
        acc += values[m] * std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(j) * m / points);
      const double rj = std::pow(rho, j);
      coeffs[j] = acc / (static_cast<double>(points) * rj);
      scale[j] = bound / rj;
    }
    return CPoly(std::move(coeffs), std::move(scale));
  }

  if (n > 14) throw TooLarge("Laplace expansion limited to n <= 14");
  const std::size_t states = std::size_t{1} << n;
  const int len = degree + 1;
  std::vector<Complex> poly(states * len, Complex(0));
  std::vector<double> mag(states * len, 0.0);
  poly[0] = 1;
  mag[0] = 1;
  for (std::size_t mask = 0; mask + 1 < states; ++mask) {
    const int row = std::popcount(mask);
    const int used_deg = row * d;
    bool any = false;
    for (int e = 0; e <= used_deg; ++e) any = any || mag[mask * len + e] != 0;
    if (!any) continue;
    for (int col = 0; col < n; ++col) {
      if (mask & (std::size_t{1} << col)) continue;
      const bool odd = std::popcount(mask >> (col + 1)) % 2 == 1;
      const std::size_t next = mask | (std::size_t{1} << col);
      for (int k = 0; k <= d; ++k) {
        const Complex entry = p.layer(k)(row, col);
        if (entry == Complex(0)) continue;
        const Complex signed_entry = odd ? -entry : entry;
        const double abs_entry = std::abs(entry);
        for (int e = 0; e <= used_deg; ++e) {
          const Complex src = poly[mask * len + e];
          poly[next * len + e + k] += signed_entry * src;
          mag[next * len + e + k] += abs_entry * mag[mask * len + e];
        }
      }
    }
  }
  const std::size_t full = states - 1;
  std::vector<Complex> coeffs(poly.begin() + full * len, poly.begin() + (full + 1) * len);
  std::vector<double> scale(mag.begin() + full * len, mag.begin() + (full + 1) * len);
  return CPoly(std::move(coeffs), std::move(scale));
}

/// Roots of a polynomial split into exact-zero multiplicity, nonzero roots
/// and roots lost at infinity (leading coefficients that vanished).
struct RootSet {
  std::vector<Complex> nonzero_roots;  // repeated according to multiplicity
  long zero_multiplicity = 0;
  long degree_deficiency = 0;
  long nominal_degree = 0;
  bool used_fallback = false;

  long numeric_degree() const { return nominal_degree - degree_deficiency; }
};

struct RootOptions {
  double strip_tolerance = kDefaultStripTolerance;
  int max_iterations = 200;
  double step_tolerance = 1e-13;
  unsigned seed = 12345;
};

struct RootCluster {
  Complex center;
  long multiplicity = 0;
};

/// Groups roots whose distance is within `relative_radius` of their modulus.
inline std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots,
                                              double relative_radius = 1e-6) {
  std::vector<RootCluster> clusters;
  for (const Complex& z : roots) {
    bool placed = false;
    for (RootCluster& c : clusters) {
      if (std::abs(z - c.center) <= relative_radius * std::max(std::abs(z), std::abs(c.center))) {
        c.center = (c.center * static_cast<double>(c.multiplicity) + z) /
                   static_cast<double>(c.multiplicity + 1);
        ++c.multiplicity;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({z, 1});
  }
  return clusters;
}

namespace detail {

// Initial approximations from the upper convex hull of (j, log|c_j|): each
// hull edge of length L contributes L points on the circle whose radius
// balances its endpoint terms.
inline std::vector<Complex> newton_polygon_start(const std::vector<Complex>& c, double phase) {
  const int m = static_cast<int>(c.size()) - 1;
  std::vector<int> hull;
  std::vector<double> logs(c.size());
  for (int j = 0; j <= m; ++j) {
    if (std::abs(c[j]) == 0) continue;
    logs[j] = std::log(std::abs(c[j]));
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], b = hull.back();
      // drop b if it lies on or below the segment a -> j
      double cross = (logs[b] - logs[a]) * (j - a) - (logs[j] - logs[a]) * (b - a);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(j);
  }
  std::vector<Complex> z;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    int a = hull[e], b = hull[e + 1];
    double radius = std::exp((logs[a] - logs[b]) / (b - a));
    for (int t = 0; t < b - a; ++t) {
      double angle = 2 * std::numbers::pi * t / (b - a) + phase + 0.4 * static_cast<double>(e);
      z.push_back(std::polar(radius, angle));
    }
  }
  return z;
}

inline bool aberth(const CPoly& p, std::vector<Complex>& z, const RootOptions& opt) {
  const std::size_t m = z.size();
  std::vector<bool> done(m, false);
  for (int it = 0; it < opt.max_iterations; ++it) {
    bool all_done = true;
    for (std::size_t k = 0; k < m; ++k) {
      if (done[k]) continue;
      const Complex value = p(z[k]);
      if (value == Complex(0)) {
        done[k] = true;
        continue;
      }
      const Complex newton = value / p.derivative(z[k]);
      Complex repulsion = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      const Complex step = newton / (1.0 - newton * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
      z[k] -= step;
      if (std::abs(step) <= opt.step_tolerance * std::abs(z[k])) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) return true;
  }
  return false;
}

inline std::vector<Complex> companion_roots(const std::vector<Complex>& c) {
  const int m = static_cast<int>(c.size()) - 1;
  CMatrix comp = CMatrix::Zero(m, m);
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -c[i] / c[m];
  Eigen::ComplexEigenSolver<CMatrix> solver(comp, false);
  std::vector<Complex> z(m);
  for (int i = 0; i < m; ++i) z[i] = solver.eigenvalues()(i);
  return z;
}

// Roots of a polynomial with nonzero constant and leading coefficients.
inline std::vector<Complex> nonzero_roots(const CPoly& q, const RootOptions& opt, bool& fallback) {
  const int m = q.nominal_degree();
  if (m <= 0) return {};
  if (m == 1) return {-q.coeffs[0] / q.coeffs[1]};
  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> z = newton_polygon_start(q.coeffs, 0.3);
  if (aberth(q, z, opt)) return z;
  // restart from a randomly rotated and perturbed start
  z = newton_polygon_start(q.coeffs, 2 * std::numbers::pi * unit(rng));
  for (Complex& w : z) w *= 1.0 + 0.05 * (unit(rng) - 0.5);
  if (aberth(q, z, opt)) return z;
  fallback = true;
  z = companion_roots(q.coeffs);
  RootOptions polish = opt;
  polish.max_iterations = 20;
  aberth(q, z, polish);
  return z;
}

}  // namespace detail

inline RootSet roots(const CPoly& p, const RootOptions& opt = {}) {
  const int nominal = p.nominal_degree();
  int lead = -1, trail = -1;
  for (int j = 0; j <= nominal; ++j) {
    if (p.negligible(j, opt.strip_tolerance)) continue;
    if (trail < 0) trail = j;
    lead = j;
  }
  if (lead < 0) throw ZeroPolynomial("all coefficients are negligible");
  RootSet out;
  out.nominal_degree = nominal;
  out.zero_multiplicity = trail;
  out.degree_deficiency = nominal - lead;
  // Interior negligible coefficients are set to exact zero.
  std::vector<Complex> deflated;
  for (int j = trail; j <= lead; ++j)
    deflated.push_back(p.negligible(j, opt.strip_tolerance) ? Complex(0) : p.coeffs[j]);
  out.nonzero_roots = detail::nonzero_roots(CPoly(std::move(deflated)), opt, out.used_fallback);
  return out;
}

inline RootSet pencil_eigenvalues(const CMatrixPencil& p, const RootOptions& opt = {},
                                  DetMethod method = DetMethod::kInterpolation) {
  CPoly det = det_poly(p, method);
  if (det.is_zero(opt.strip_tolerance))
    throw SingularPencil("determinant vanishes identically");
  return roots(det, opt);
}

}  // namespace tropeig
