#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tropeig/complex_poly.hpp"
#include "tropeig/pencil_spec.hpp"
#include "tropeig/tropical_pencil.hpp"

namespace tropeig {

struct AnalyzeOptions {
  GraphMode mode = GraphMode::kOpt;
  /// Sat mode only: supplies the Hungarian pair for A(gamma). Defaults to the
  /// pair returned by hungarian().
  std::function<HungarianPair(const TropMatrix&)> pair_provider;
  RootOptions roots;
  DetMethod det_method = DetMethod::kInterpolation;
};

/// One predicted eigenvalue L_eps ~ lambda * eps^gamma.
struct AsymptoticBranch {
  Rational gamma;
  Complex lambda;
  std::size_t corner = 0;  // index into AsymptoticReport::corners
};

struct CornerRecord {
  Rational gamma;
  long multiplicity = 0;
  long mass_above = 0;       // multiplicities of corners > gamma, +infinity included
  long m_gamma = 0;          // nonzero eigenvalues of the auxiliary pencil
  long m_prime_gamma = 0;    // multiplicity of 0 as its eigenvalue
  long lost_at_infinity = 0; // degree deficiency of its determinant
  bool informative = true;   // false when the auxiliary determinant vanishes
  bool generic = false;
  CornerGraphs graphs;
  CMatrixPencil aux;
  std::vector<Complex> lambdas;
};

struct AsymptoticReport {
  GraphMode mode = GraphMode::kOpt;
  CharPolyFunction trop;
  std::vector<CornerRecord> corners;  // descending gamma
  std::vector<AsymptoticBranch> branches;
  long identically_zero_count = 0;
  long unresolved_count = 0;
  std::vector<std::string> warnings;

  bool all_generic() const {
    return std::all_of(corners.begin(), corners.end(), [](const CornerRecord& c) { return c.generic; });
  }
  long branch_count() const { return static_cast<long>(branches.size()); }
};

/// Auxiliary pencil sum_k X^k a_k^{G_k}.
inline CMatrixPencil auxiliary_pencil(const PencilSpec& spec, const CornerGraphs& graphs) {
  std::vector<CMatrix> layers;
  for (int k = 0; k <= spec.d; ++k) layers.push_back(mask(spec.coeffs[k], graphs.layers[k]));
  return CMatrixPencil(std::move(layers));
}

/// Leading exponents and coefficients of every eigenvalue branch, one finite
/// corner of the min-plus characteristic polynomial at a time (descending).
inline AsymptoticReport analyze(const PencilSpec& spec, const AnalyzeOptions& opt = {}) {
  AsymptoticReport report;
  report.mode = opt.mode;
  report.warnings = spec.warnings();
  const TropPencil trop = spec.trop();
  report.trop = char_poly_function(trop);

  std::vector<Corner> finite = report.trop.corners.finite();
  std::reverse(finite.begin(), finite.end());
  long predicted = 0;
  for (const Corner& corner : finite) {
    CornerRecord rec;
    rec.gamma = corner.value.value();
    rec.multiplicity = corner.multiplicity;
    rec.mass_above = report.trop.corners.multiplicity_above(corner.value);
    std::optional<HungarianPair> pair;
    if (opt.mode == GraphMode::kSat && opt.pair_provider)
      pair = opt.pair_provider(eval_pencil(trop, rec.gamma));
    rec.graphs = corner_graphs(trop, rec.gamma, opt.mode, pair);
    rec.aux = auxiliary_pencil(spec, rec.graphs);
    try {
      RootSet rs = pencil_eigenvalues(rec.aux, opt.roots, opt.det_method);
      rec.m_gamma = static_cast<long>(rs.nonzero_roots.size());
      rec.m_prime_gamma = rs.zero_multiplicity;
      rec.lost_at_infinity = rs.degree_deficiency;
      rec.lambdas = rs.nonzero_roots;
    } catch (const SingularPencil&) {
      rec.informative = false;
    }
    rec.generic = rec.informative && rec.m_gamma == rec.multiplicity &&
                  rec.m_prime_gamma == rec.mass_above;
    const std::size_t index = report.corners.size();
    for (const Complex& lambda : rec.lambdas)
      report.branches.push_back(AsymptoticBranch{rec.gamma, lambda, index});
    predicted += rec.m_gamma;
    report.corners.push_back(std::move(rec));
  }
  report.identically_zero_count = zero_corner_count(report.trop);
  report.unresolved_count =
      std::max(0L, report.trop.deg_perm - report.identically_zero_count - predicted);
  return report;
}

struct ConsistencyDiagnostics {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Cross-corner bookkeeping: at every generic corner the branches emitted at
/// larger corners, plus the identically zero eigenvalues, must account for
/// exactly m'_gamma, and everything at smaller corners must blow up relative
/// to eps^gamma.
inline ConsistencyDiagnostics check_consistency(const AsymptoticReport& report,
                                                const CharPolyFunction& trop) {
  ConsistencyDiagnostics out;
  auto fail = [&](std::string msg) {
    out.ok = false;
    out.violations.push_back(std::move(msg));
  };
  long total = report.identically_zero_count;
  for (std::size_t i = 1; i < report.corners.size(); ++i)
    if (!(report.corners[i].gamma < report.corners[i - 1].gamma))
      fail("corners are not strictly descending");
  for (const CornerRecord& c : report.corners) {
    total += c.m_gamma;
    if (trop.corners.multiplicity(ExtRat(c.gamma)) != c.multiplicity)
      fail("corner " + to_string(c.gamma) + ": multiplicity differs from the tropical corner list");
    if (!c.generic) {
      fail("corner " + to_string(c.gamma) + ": non-generic (m=" + std::to_string(c.m_gamma) +
           ", m'=" + std::to_string(c.m_prime_gamma) + ", multiplicity " +
           std::to_string(c.multiplicity) + ", mass above " + std::to_string(c.mass_above) + ")");
      continue;
    }
    long above = report.identically_zero_count, here = 0;
    for (const AsymptoticBranch& b : report.branches) {
      if (report.corners.at(b.corner).gamma != b.gamma) fail("branch filed under the wrong corner");
      if (b.gamma > c.gamma) ++above;
      if (b.gamma == c.gamma) ++here;
    }
    if (here != c.m_gamma)
      fail("corner " + to_string(c.gamma) + ": " + std::to_string(here) + " branches but m=" +
           std::to_string(c.m_gamma));
    if (above != c.m_prime_gamma)
      fail("corner " + to_string(c.gamma) + ": " + std::to_string(above) +
           " eigenvalues above but m'=" + std::to_string(c.m_prime_gamma));
  }
  if (total > trop.deg_perm)
    fail("branch count " + std::to_string(total) + " exceeds degree " + std::to_string(trop.deg_perm));
  return out;
}

}  // namespace tropeig
