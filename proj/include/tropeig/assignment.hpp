#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tropeig/errors.hpp"
#include "tropeig/ext_rat.hpp"

namespace tropeig {

/// Square matrix over the min-plus semiring, row-major, 0-based.
class TropMatrix {
 public:
  TropMatrix() = default;
  explicit TropMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}
  TropMatrix(std::initializer_list<std::initializer_list<ExtRat>> rows)
      : n_(static_cast<int>(rows.size())) {
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n_) throw InvalidArgument("matrix must be square");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  /// Identity: 0 on the diagonal, +infinity elsewhere.
  static TropMatrix identity(int n) {
    TropMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = ExtRat::one();
    return m;
  }

  int size() const { return n_; }
  ExtRat& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const ExtRat& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }

  TropMatrix transposed() const {
    TropMatrix t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const TropMatrix&, const TropMatrix&) = default;

  std::string str() const {
    std::string out;
    for (int i = 0; i < n_; ++i) {
      out += "[";
      for (int j = 0; j < n_; ++j) out += (j ? " " : "") + (*this)(i, j).str();
      out += "]\n";
    }
    return out;
  }

 private:
  int n_ = 0;
  std::vector<ExtRat> data_;
};

/// Digraph on nodes 0..n-1 (printed 1-based).
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * n, false) {}

  int size() const { return n_; }
  void add(int i, int j) { adj_[index(i, j)] = true; }
  void remove(int i, int j) { adj_[index(i, j)] = false; }
  bool contains(int i, int j) const { return adj_[index(i, j)]; }

  std::vector<std::pair<int, int>> arcs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (contains(i, j)) out.emplace_back(i, j);
    return out;
  }

  std::size_t arc_count() const { return std::count(adj_.begin(), adj_.end(), true); }

  bool is_subgraph_of(const Digraph& other) const {
    if (other.n_ != n_) return false;
    for (std::size_t k = 0; k < adj_.size(); ++k)
      if (adj_[k] && !other.adj_[k]) return false;
    return true;
  }

  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (auto [i, j] : arcs()) {
      out += (first ? "" : ", ") + std::string("(") + std::to_string(i + 1) + "," +
             std::to_string(j + 1) + ")";
      first = false;
    }
    return out + "}";
  }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_ = 0;
  std::vector<bool> adj_;
};

/// Dual variables of the assignment problem: B_ij >= U_i + V_j everywhere,
/// with equality of sum(U) + sum(V) and the permanent.
struct HungarianPair {
  std::vector<Rational> u;
  std::vector<Rational> v;

  friend bool operator==(const HungarianPair&, const HungarianPair&) = default;
};

/// Lexicographically ordered pair; an ordered abelian group when both
/// components are.
template <typename A, typename B>
struct Lex {
  A first{};
  B second{};

  friend Lex operator+(const Lex& x, const Lex& y) { return {x.first + y.first, x.second + y.second}; }
  friend Lex operator-(const Lex& x, const Lex& y) { return {x.first - y.first, x.second - y.second}; }
  Lex& operator+=(const Lex& y) { return *this = *this + y; }
  Lex& operator-=(const Lex& y) { return *this = *this - y; }
  friend bool operator==(const Lex& x, const Lex& y) { return x.first == y.first && x.second == y.second; }
  friend bool operator<(const Lex& x, const Lex& y) {
    if (x.first < y.first) return true;
    if (y.first < x.first) return false;
    return x.second < y.second;
  }
};

template <typename Cost>
struct AssignmentSolution {
  std::vector<int> row_to_col;
  std::vector<Cost> u;  // row potentials
  std::vector<Cost> v;  // column potentials
  Cost value{};
};

/// Shortest-augmenting-path Hungarian algorithm (O(n^3)) over any ordered
/// additive cost type. `cost(i, j)` returns std::nullopt for forbidden arcs.
/// Returns std::nullopt when no perfect matching avoids forbidden arcs.
///
/// On success, u_i + v_j <= cost(i, j) for every allowed arc, with equality on
/// the returned matching. Ties go to the lowest column index.
template <typename Cost, typename CostFn>
std::optional<AssignmentSolution<Cost>> solve_assignment(int n, CostFn&& cost) {
  // 1-based arrays, slot 0 is the virtual column of the augmentation tree.
  std::vector<Cost> u(n + 1, Cost{}), v(n + 1, Cost{});
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::optional<Cost>> minv(n + 1);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      std::optional<Cost> delta;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        if (std::optional<Cost> c = cost(i0 - 1, j - 1)) {
          Cost reduced = *c - u[i0] - v[j];
          if (!minv[j] || reduced < *minv[j]) {
            minv[j] = reduced;
            way[j] = j0;
          }
        }
        if (minv[j] && (!delta || *minv[j] < *delta)) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (!delta) return std::nullopt;
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += *delta;
          v[j] -= *delta;
        } else if (minv[j]) {
          *minv[j] -= *delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentSolution<Cost> sol;
  sol.row_to_col.assign(n, -1);
  for (int j = 1; j <= n; ++j) sol.row_to_col[p[j] - 1] = j - 1;
  sol.u.assign(u.begin() + 1, u.end());
  sol.v.assign(v.begin() + 1, v.end());
  for (int i = 0; i < n; ++i) sol.value += *cost(i, sol.row_to_col[i]);
  return sol;
}

/// Weight of a permutation under B (min-plus product along the permutation).
inline ExtRat permutation_weight(const TropMatrix& b, const std::vector<int>& sigma) {
  ExtRat w = ExtRat::one();
  for (int i = 0; i < b.size(); ++i) w = trop_mul(w, b(i, sigma[i]));
  return w;
}

namespace detail {

inline auto finite_cost(const TropMatrix& b) {
  return [&b](int i, int j) -> std::optional<Rational> {
    if (b(i, j).is_zero()) return std::nullopt;
    return b(i, j).value();
  };
}

}  // namespace detail

/// Min-plus permanent, i.e. the optimal assignment value (+infinity if no
/// permutation has finite weight).
inline ExtRat permanent(const TropMatrix& b) {
  if (b.size() == 0) return ExtRat::one();
  auto sol = solve_assignment<Rational>(b.size(), detail::finite_cost(b));
  return sol ? ExtRat(sol->value) : ExtRat::zero();
}

struct HungarianResult {
  HungarianPair pair;
  std::vector<int> matching;  // row -> column
  Rational value;
};

inline HungarianResult hungarian(const TropMatrix& b) {
  auto sol = solve_assignment<Rational>(b.size(), detail::finite_cost(b));
  if (!sol) throw Infeasible("optimal assignment problem has no finite permutation");
  return HungarianResult{HungarianPair{sol->u, sol->v}, sol->row_to_col, sol->value};
}

/// Throws InvalidPair unless (U, V) is dual feasible and attains perm B.
inline void validate_pair(const TropMatrix& b, const HungarianPair& pair) {
  const int n = b.size();
  if (static_cast<int>(pair.u.size()) != n || static_cast<int>(pair.v.size()) != n)
    throw InvalidPair("pair dimension does not match matrix");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (b(i, j).is_finite() && b(i, j).value() < pair.u[i] + pair.v[j])
        throw InvalidPair("B(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") < U_i + V_j");
  ExtRat perm = permanent(b);
  if (perm.is_zero()) throw InvalidPair("permanent is +infinity");
  Rational total = std::accumulate(pair.u.begin(), pair.u.end(), Rational(0)) +
                   std::accumulate(pair.v.begin(), pair.v.end(), Rational(0));
  if (total != perm.value())
    throw InvalidPair("sum(U) + sum(V) = " + to_string(total) + " differs from perm B = " +
                      perm.str());
}

/// Arcs where the dual constraint is tight.
inline Digraph sat_graph(const TropMatrix& b, const HungarianPair& pair) {
  validate_pair(b, pair);
  Digraph g(b.size());
  for (int i = 0; i < b.size(); ++i)
    for (int j = 0; j < b.size(); ++j)
      if (b(i, j).is_finite() && b(i, j).value() == pair.u[i] + pair.v[j]) g.add(i, j);
  return g;
}

/// Hungarian pair obtained by solving the problem with rows reordered by
/// `row_order` (a permutation) and mapping the duals back.
inline HungarianPair hungarian_pair_permuted(const TropMatrix& b, const std::vector<int>& row_order) {
  const int n = b.size();
  TropMatrix permuted(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) permuted(i, j) = b(row_order[i], j);
  HungarianResult r = hungarian(permuted);
  HungarianPair pair{std::vector<Rational>(n), r.pair.v};
  for (int i = 0; i < n; ++i) pair.u[row_order[i]] = r.pair.u[i];
  return pair;
}

/// Hungarian pair obtained from the transposed problem (roles of U, V swap).
inline HungarianPair hungarian_pair_transposed(const TropMatrix& b) {
  HungarianResult r = hungarian(b.transposed());
  return HungarianPair{r.pair.v, r.pair.u};
}

struct OptGraph {
  Digraph graph;
  /// For every arc, an optimal permutation (row -> column) that uses it.
  std::map<std::pair<int, int>, std::vector<int>> certificates;
};

/// Arcs belonging to at least one optimal permutation, each with a
/// certifying permutation.
///
/// Every optimal permutation lies in the tight graph of any optimal dual pair,
/// and every perfect matching of that tight graph is optimal. A tight arc
/// (i, j) outside the reference matching M lies on some perfect matching iff
/// the alternating cycle i -> j -> M^{-1}(j) -> ... -> i exists, i.e. iff
/// M^{-1}(j) reaches i in the row digraph with arcs r -> M^{-1}(c) for tight
/// (r, c).
inline OptGraph opt_graph_with_certificates(const TropMatrix& b) {
  const int n = b.size();
  HungarianResult h = hungarian(b);
  std::vector<int> col_owner(n);
  for (int i = 0; i < n; ++i) col_owner[h.matching[i]] = i;
  auto tight = [&](int i, int j) {
    return b(i, j).is_finite() && b(i, j).value() == h.pair.u[i] + h.pair.v[j];
  };

  // BFS parents for paths in the row digraph; next[r] lists (successor, column).
  auto path = [&](int from, int to) -> std::optional<std::vector<std::pair<int, int>>> {
    std::vector<int> parent(n, -1), via_col(n, -1);
    std::vector<bool> seen(n, false);
    std::vector<int> queue{from};
    seen[from] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      int r = queue[q];
      if (r == to) break;
      for (int c = 0; c < n; ++c) {
        if (!tight(r, c) || c == h.matching[r]) continue;
        int s = col_owner[c];
        if (seen[s]) continue;
        seen[s] = true;
        parent[s] = r;
        via_col[s] = c;
        queue.push_back(s);
      }
    }
    if (!seen[to]) return std::nullopt;
    std::vector<std::pair<int, int>> steps;  // (row, new column) reassignments
    for (int s = to; s != from; s = parent[s]) steps.emplace_back(parent[s], via_col[s]);
    return steps;
  };

  OptGraph out{Digraph(n), {}};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!tight(i, j)) continue;
      if (h.matching[i] == j) {
        out.graph.add(i, j);
        out.certificates[{i, j}] = h.matching;
        continue;
      }
      int owner = col_owner[j];
      auto steps = path(owner, i);
      if (!steps) continue;
      std::vector<int> sigma = h.matching;
      sigma[i] = j;
      for (auto [row, col] : *steps) sigma[row] = col;
      out.graph.add(i, j);
      out.certificates[{i, j}] = std::move(sigma);
    }
  }
  return out;
}

inline Digraph opt_graph(const TropMatrix& b) { return opt_graph_with_certificates(b).graph; }

enum class Sense { kMin, kMax };

struct LexAssignment {
  ExtRat value;
  long degree = 0;
  std::vector<int> permutation;
};

/// Among permutations optimal for B, the minimal (or maximal) total degree
/// sum_i D(i, sigma(i)). One assignment solve over lexicographic costs
/// (B_ij, +-D_ij).
inline LexAssignment lex_assignment(const TropMatrix& b, const std::vector<std::vector<long>>& degrees,
                                    Sense sense) {
  const int n = b.size();
  const long sign = sense == Sense::kMin ? 1 : -1;
  using Cost = Lex<Rational, long>;
  auto sol = solve_assignment<Cost>(n, [&](int i, int j) -> std::optional<Cost> {
    if (b(i, j).is_zero()) return std::nullopt;
    return Cost{b(i, j).value(), sign * degrees.at(i).at(j)};
  });
  if (!sol) throw Infeasible("optimal assignment problem has no finite permutation");
  return LexAssignment{ExtRat(sol->value.first), sign * sol->value.second, sol->row_to_col};
}

}  // namespace tropeig
