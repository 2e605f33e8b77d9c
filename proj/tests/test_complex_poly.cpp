#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tropeig/asymptotics.hpp"
#include "tropeig/complex_poly.hpp"

using namespace tropeig;

namespace {

CMatrix random_matrix(std::mt19937& rng, int n) {
  std::normal_distribution<double> normal;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

CMatrixPencil random_pencil(std::mt19937& rng, int n, int d) {
  std::vector<CMatrix> layers;
  for (int k = 0; k <= d; ++k) layers.push_back(random_matrix(rng, n));
  return CMatrixPencil(layers);
}

// Greedy pairing of two root lists; largest distance between partners.
double pairing_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return 1e300;
  double worst = 0;
  for (const Complex& z : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](Complex p, Complex q) { return std::abs(p - z) < std::abs(q - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

void expect_poly_near(const CPoly& p, const std::vector<Complex>& expected, double tol) {
  ASSERT_EQ(p.coeffs.size(), expected.size());
  for (std::size_t j = 0; j < expected.size(); ++j)
    EXPECT_LE(std::abs(p.coeffs[j] - expected[j]), tol) << "coefficient " << j;
}

}  // namespace

TEST(DetPoly, IdentityMinusX) {
  CMatrixPencil p({CMatrix::Identity(2, 2), -CMatrix::Identity(2, 2)});
  for (DetMethod m : {DetMethod::kInterpolation, DetMethod::kExpansion})
    expect_poly_near(det_poly(p, m), {1.0, -2.0, 1.0}, 1e-14);
}

TEST(DetPoly, DiagonalOneX) {
  CMatrix b0 = CMatrix::Zero(2, 2), b1 = CMatrix::Zero(2, 2);
  b0(0, 0) = 1;
  b1(1, 1) = 1;
  for (DetMethod m : {DetMethod::kInterpolation, DetMethod::kExpansion}) {
    CPoly det = det_poly(CMatrixPencil({b0, b1}), m);
    expect_poly_near(det, {0.0, 1.0, 0.0}, 1e-14);
    RootSet rs = roots(det);
    EXPECT_EQ(rs.zero_multiplicity, 1);
    EXPECT_EQ(rs.degree_deficiency, 1);
    EXPECT_TRUE(rs.nonzero_roots.empty());
  }
}

TEST(DetPoly, ExampleAuxiliaryPencilAtZero) {
  // Entries of b on G_0 = {(1,1),(1,2),(1,3),(2,1),(3,1)}, -X on the diagonal.
  const CMatrix b = random_complex_matrix(3, 21);
  PencilSpec spec = fixtures::example_spec(b);
  AsymptoticReport r = analyze(spec);
  const CornerRecord& c0 = r.corners.at(1);
  ASSERT_EQ(c0.gamma, 0);
  // x (-x^2 + b11 x + b12 b21 + b13 b31)
  const Complex c1 = b(0, 1) * b(1, 0) + b(0, 2) * b(2, 0);
  const std::vector<Complex> expected = {0.0, c1, b(0, 0), -1.0};
  for (DetMethod m : {DetMethod::kInterpolation, DetMethod::kExpansion})
    expect_poly_near(det_poly(c0.aux, m), expected, 1e-12);
  RootSet rs = pencil_eigenvalues(c0.aux);
  EXPECT_EQ(rs.nonzero_roots.size(), 2u);
  EXPECT_EQ(rs.zero_multiplicity, 1);
}

TEST(DetPoly, ExampleAuxiliaryPencilAtOne) {
  const CMatrix b = random_complex_matrix(3, 22);
  AsymptoticReport r = analyze(fixtures::example_spec(b));
  const CornerRecord& c1 = r.corners.at(0);
  ASSERT_EQ(c1.gamma, 1);
  // [[0, b12, b13], [b21, b22 - x, b23], [b31, b32, b33 - x]]
  const Complex lin = b(0, 1) * b(1, 0) + b(0, 2) * b(2, 0);
  const Complex cst = -b(0, 1) * b(1, 0) * b(2, 2) + b(0, 1) * b(1, 2) * b(2, 0) +
                      b(0, 2) * b(1, 0) * b(2, 1) - b(0, 2) * b(1, 1) * b(2, 0);
  for (DetMethod m : {DetMethod::kInterpolation, DetMethod::kExpansion})
    expect_poly_near(det_poly(c1.aux, m), {cst, lin, 0.0, 0.0}, 1e-12);
  RootSet rs = pencil_eigenvalues(c1.aux);
  ASSERT_EQ(rs.nonzero_roots.size(), 1u);
  EXPECT_NEAR(std::abs(rs.nonzero_roots[0] + cst / lin), 0.0, 1e-12);
  EXPECT_EQ(rs.degree_deficiency, 2);
}

TEST(DetPoly, InterpolationMatchesExpansion) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const int d = std::uniform_int_distribution<int>(1, 3)(rng);
    CMatrixPencil p = random_pencil(rng, n, d);
    CPoly a = det_poly(p, DetMethod::kInterpolation), b = det_poly(p, DetMethod::kExpansion);
    ASSERT_EQ(a.coeffs.size(), b.coeffs.size());
    for (std::size_t j = 0; j < a.coeffs.size(); ++j)
      EXPECT_LE(std::abs(a.coeffs[j] - b.coeffs[j]), 1e-10 * std::abs(b.coeffs[j])) << "n=" << n << " d=" << d;
  }
}

TEST(DetPoly, ExpansionRejectsLargePencils) {
  std::mt19937 rng(12);
  EXPECT_THROW(det_poly(random_pencil(rng, 15, 1), DetMethod::kExpansion), TooLarge);
}

TEST(Roots, Examples) {
  RootSet a = roots(CPoly({-1.0, 0.0, 1.0}));
  EXPECT_EQ(a.zero_multiplicity, 0);
  EXPECT_LT(pairing_distance(a.nonzero_roots, {1.0, -1.0}), 1e-14);
  RootSet b = roots(CPoly({0.0, 0.0, 1.0, 1.0}));
  EXPECT_EQ(b.zero_multiplicity, 2);
  ASSERT_EQ(b.nonzero_roots.size(), 1u);
  EXPECT_NEAR(std::abs(b.nonzero_roots[0] + 1.0), 0.0, 1e-14);
  EXPECT_THROW(roots(CPoly({0.0, 0.0})), ZeroPolynomial);
}

TEST(Roots, IdentityPencil) {
  RootSet rs = pencil_eigenvalues(CMatrixPencil({CMatrix::Identity(3, 3), -CMatrix::Identity(3, 3)}));
  EXPECT_EQ(rs.zero_multiplicity, 0);
  ASSERT_EQ(rs.nonzero_roots.size(), 3u);
  // A triple root is only resolved to about the cube root of machine epsilon.
  for (const Complex& z : rs.nonzero_roots) EXPECT_LT(std::abs(z - 1.0), 1e-4);
}

TEST(Roots, DoubleRootClusters) {
  RootSet rs = pencil_eigenvalues(CMatrixPencil({CMatrix::Identity(2, 2), -CMatrix::Identity(2, 2)}));
  std::vector<RootCluster> clusters = cluster_roots(rs.nonzero_roots);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].multiplicity, 2);
  EXPECT_NEAR(std::abs(clusters[0].center - 1.0), 0.0, 1e-7);
  EXPECT_EQ(cluster_roots({1.0, 1.1, Complex(0, 1)}).size(), 3u);
}

TEST(Roots, SingularPencil) {
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 0) = 1;
  EXPECT_THROW(pencil_eigenvalues(CMatrixPencil({b, b})), SingularPencil);
}

TEST(Roots, ResidualsBookkeepingAndConjugation) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const int d = std::uniform_int_distribution<int>(1, 3)(rng);
    CMatrixPencil p = random_pencil(rng, n, d);
    CPoly det = det_poly(p);
    RootSet rs = roots(det);
    EXPECT_EQ(rs.zero_multiplicity + static_cast<long>(rs.nonzero_roots.size()) + rs.degree_deficiency, n * d);
    for (const Complex& r : rs.nonzero_roots) EXPECT_LE(std::abs(det(r)), 1e-8 * det.magnitude(r));

    std::vector<CMatrix> conj;
    for (const CMatrix& m : p.layers()) conj.push_back(m.conjugate());
    RootSet rc = pencil_eigenvalues(CMatrixPencil(conj));
    std::vector<Complex> expected;
    for (const Complex& z : rs.nonzero_roots) expected.push_back(std::conj(z));
    EXPECT_LT(pairing_distance(rc.nonzero_roots, expected), 1e-8);
  }
}

TEST(Roots, MultiScaleNewtonPolygon) {
  // (x - 1e-6)(x - 1)(x - 1e6) with coefficients spanning twelve decades.
  std::vector<Complex> c = {-1.0, 1e6 + 1.0 + 1e-6, -(1e6 + 1.0 + 1e-6), 1.0};
  RootSet rs = roots(CPoly(c));
  ASSERT_EQ(rs.nonzero_roots.size(), 3u);
  std::vector<double> mods;
  for (const Complex& z : rs.nonzero_roots) mods.push_back(std::abs(z));
  std::sort(mods.begin(), mods.end());
  EXPECT_NEAR(mods[0] / 1e-6, 1.0, 1e-8);
  EXPECT_NEAR(mods[1], 1.0, 1e-8);
  EXPECT_NEAR(mods[2] / 1e6, 1.0, 1e-8);
}

TEST(Instantiate, ExampleSpec) {
  const CMatrix b = random_complex_matrix(3, 7);
  PencilSpec spec = fixtures::example_spec(b);
  CMatrixPencil one = instantiate(spec, 1.0);
  EXPECT_LT((one.layer(0) - b).norm(), 1e-15);
  EXPECT_LT((one.layer(1) + CMatrix::Identity(3, 3)).norm(), 1e-15);
  CMatrixPencil small = instantiate(spec, 0.01);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double scale = (i > 0 && j > 0) ? 0.01 : 1.0;
      EXPECT_NEAR(std::abs(small.layer(0)(i, j) - b(i, j) * scale), 0.0, 1e-15);
      if (i != j) {
        EXPECT_EQ(small.layer(1)(i, j), Complex(0));
      }
    }
  EXPECT_THROW(instantiate(spec, 0.0), InvalidArgument);
}

TEST(Instantiate, RationalExponent) {
  PencilSpec spec = PencilSpec::zeros(1, 0);
  spec.set(0, 0, 0, Complex(2, 1), ExtRat(1, 3));
  EXPECT_NEAR(std::abs(instantiate(spec, 1e-6).layer(0)(0, 0) - Complex(2, 1) * 1e-2), 0.0, 1e-15);
}
