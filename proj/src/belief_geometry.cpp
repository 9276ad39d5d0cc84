#include "persuasion/belief_geometry.hpp"

#include <algorithm>

#include "persuasion/lp.hpp"

namespace persuasion {

BestReplySet best_replies(const GameSpec& g, const Belief& pi) {
  if (pi.size() != g.num_states()) throw std::invalid_argument("best_replies: dimension mismatch");
  std::vector<int> arg;
  Rational best;
  for (int a = 0; a < g.num_actions(); ++a) {
    Rational val = dm_row_payoff(g, a, pi);
    if (arg.empty() || val > best) {
      best = val;
      arg = {a};
    } else if (val == best) {
      arg.push_back(a);
    }
  }
  return {std::move(arg), pi};
}

Rational u_bar(const GameSpec& g, const Belief& pi) {
  BestReplySet br = best_replies(g, pi);
  Rational best;
  bool first = true;
  for (int a : br.actions) {
    Rational val = expert_row_payoff(g, a, pi);
    if (first || val > best) best = val;
    first = false;
  }
  return best;
}

Rational v_bar(const GameSpec& g, const Belief& pi) {
  Rational best;
  for (int a = 0; a < g.num_actions(); ++a) {
    Rational val = dm_row_payoff(g, a, pi);
    if (a == 0 || val > best) best = val;
  }
  return best;
}

Rational u_min(const GameSpec& g, const Belief& pi) {
  Rational worst;
  for (int a = 0; a < g.num_actions(); ++a) {
    Rational val = expert_row_payoff(g, a, pi);
    if (a == 0 || val < worst) worst = val;
  }
  return worst;
}

namespace {

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Rational rhs;  // coeffs . x  (=|>=)  rhs
};

// Gaussian elimination. Returns rank; when `solution` is non-null and the
// system has a unique solution, stores it and returns dim.
int solve_system(std::vector<LinearConstraint> eqs, int dim, std::vector<Rational>* solution) {
  int rank = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < dim && rank < static_cast<int>(eqs.size()); ++col) {
    int sel = -1;
    for (int r = rank; r < static_cast<int>(eqs.size()); ++r) {
      if (!eqs[r].coeffs[col].is_zero()) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(eqs[rank], eqs[sel]);
    Rational p = eqs[rank].coeffs[col];
    for (auto& c : eqs[rank].coeffs) c /= p;
    eqs[rank].rhs /= p;
    for (int r = 0; r < static_cast<int>(eqs.size()); ++r) {
      if (r == rank || eqs[r].coeffs[col].is_zero()) continue;
      Rational f = eqs[r].coeffs[col];
      for (int j = 0; j < dim; ++j) eqs[r].coeffs[j] -= f * eqs[rank].coeffs[j];
      eqs[r].rhs -= f * eqs[rank].rhs;
    }
    pivot_col.push_back(col);
    ++rank;
  }
  // inconsistency: zero row with nonzero rhs
  for (int r = rank; r < static_cast<int>(eqs.size()); ++r) {
    if (!eqs[r].rhs.is_zero()) return -1;
  }
  if (solution && rank == dim) {
    solution->assign(dim, Rational(0));
    for (int r = 0; r < rank; ++r) (*solution)[pivot_col[r]] = eqs[r].rhs;
  }
  return rank;
}

// Vertices of {x: eq rows hold, ineq rows >= rhs}, by enumerating active
// sets: choose (dim - rank(eqs)) rows from candidates (the inequalities
// plus any extra hyperplanes), solve, keep solutions satisfying every
// inequality. With `extra` non-empty this enumerates arrangement vertices
// rather than polytope vertices.
std::vector<std::vector<Rational>> enumerate_vertices(const std::vector<LinearConstraint>& eqs,
                                                      const std::vector<LinearConstraint>& ineqs,
                                                      const std::vector<LinearConstraint>& extra,
                                                      int dim) {
  int base_rank = solve_system(eqs, dim, nullptr);
  if (base_rank < 0) return {};
  int need = dim - base_rank;
  std::vector<LinearConstraint> candidates = ineqs;
  candidates.insert(candidates.end(), extra.begin(), extra.end());
  const int nc = static_cast<int>(candidates.size());
  if (need > nc) return {};

  std::vector<std::vector<Rational>> found;
  std::vector<int> pick(need);
  auto attempt = [&]() {
    std::vector<LinearConstraint> sys = eqs;
    for (int idx : pick) sys.push_back(candidates[idx]);
    std::vector<Rational> x;
    if (solve_system(std::move(sys), dim, &x) != dim) return;
    for (const auto& c : ineqs) {
      Rational lhs;
      for (int j = 0; j < dim; ++j) lhs += c.coeffs[j] * x[j];
      if (lhs < c.rhs) return;
    }
    found.push_back(std::move(x));
  };
  // lexicographic combinations of size `need`
  if (need == 0) {
    attempt();
  } else {
    for (int i = 0; i < need; ++i) pick[i] = i;
    for (;;) {
      attempt();
      int i = need - 1;
      while (i >= 0 && pick[i] == nc - need + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < need; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

LinearConstraint simplex_sum_row(int n) {
  return {std::vector<Rational>(n, Rational(1)), Rational(1)};
}

// Rows of the region where `action` is a DM best reply, as >= constraints
// over the belief coordinates (not including the simplex itself).
std::vector<LinearConstraint> cell_rows(const GameSpec& g, int action) {
  std::vector<LinearConstraint> rows;
  for (int a2 = 0; a2 < g.num_actions(); ++a2) {
    if (a2 == action) continue;
    LinearConstraint c;
    c.coeffs.resize(g.num_states());
    for (int s = 0; s < g.num_states(); ++s) c.coeffs[s] = g.v(action, s) - g.v(a2, s);
    c.rhs = 0;
    rows.push_back(std::move(c));
  }
  return rows;
}

std::vector<LinearConstraint> nonneg_rows(int dim, int from, int count) {
  std::vector<LinearConstraint> rows;
  for (int i = from; i < from + count; ++i) {
    LinearConstraint c;
    c.coeffs.assign(dim, Rational(0));
    c.coeffs[i] = 1;
    c.rhs = 0;
    rows.push_back(std::move(c));
  }
  return rows;
}

// Extreme points of the convex hull of a finite point set, found by exact
// LP: a point is extreme iff it is not a convex combination of the others.
std::vector<std::vector<Rational>> extreme_points(std::vector<std::vector<Rational>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  const int dim = static_cast<int>(pts.front().size());
  std::vector<std::vector<Rational>> keep;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    LinearProgram lp;
    const int nvars = static_cast<int>(pts.size()) - 1;
    lp.objective.assign(nvars, Rational(0));
    lp.nonneg.assign(nvars, true);
    for (int d = 0; d < dim; ++d) {
      std::vector<Rational> row;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j != k) row.push_back(pts[j][d]);
      }
      lp.add_row(std::move(row), Sense::Eq, pts[k][d]);
    }
    lp.add_row(std::vector<Rational>(nvars, Rational(1)), Sense::Eq, Rational(1));
    if (lp_solve(lp).status != LpStatus::Optimal) keep.push_back(pts[k]);
  }
  return keep;
}

}  // namespace

std::vector<int> supported_actions(const GameSpec& g) {
  std::vector<int> out;
  const int n = g.num_states();
  for (int a = 0; a < g.num_actions(); ++a) {
    LinearProgram lp;
    lp.objective.assign(n, Rational(0));
    lp.nonneg.assign(n, true);
    for (auto& row : cell_rows(g, a)) lp.add_row(std::move(row.coeffs), Sense::GreaterEq, row.rhs);
    lp.add_row(std::vector<Rational>(n, Rational(1)), Sense::Eq, Rational(1));
    if (lp_solve(lp).status == LpStatus::Optimal) out.push_back(a);
  }
  return out;
}

std::vector<Belief> cell_vertices(const GameSpec& g, int action,
                                  const std::vector<Belief>* restrict, int geometry_limit) {
  const int n = g.num_states();
  if (n > geometry_limit) {
    throw GeometryLimitError("geometry limit exceeded: " + std::to_string(n) + " states > limit " +
                             std::to_string(geometry_limit));
  }
  std::vector<std::vector<Rational>> raw;
  if (!restrict) {
    std::vector<LinearConstraint> eqs{simplex_sum_row(n)};
    std::vector<LinearConstraint> ineqs = nonneg_rows(n, 0, n);
    for (auto& r : cell_rows(g, action)) ineqs.push_back(std::move(r));
    raw = enumerate_vertices(eqs, ineqs, {}, n);
  } else {
    // Lifted formulation over (pi, mu): pi = sum mu_j * h_j, mu in the
    // simplex, pi in the cell. Vertices of the projection are the extreme
    // points of the projected lifted vertices.
    const int m = static_cast<int>(restrict->size());
    if (m == 0) return {};
    const int dim = n + m;
    std::vector<LinearConstraint> eqs;
    for (int s = 0; s < n; ++s) {
      LinearConstraint c;
      c.coeffs.assign(dim, Rational(0));
      c.coeffs[s] = 1;
      for (int j = 0; j < m; ++j) c.coeffs[n + j] = -(*restrict)[j][s];
      c.rhs = 0;
      eqs.push_back(std::move(c));
    }
    LinearConstraint sum;
    sum.coeffs.assign(dim, Rational(0));
    for (int j = 0; j < m; ++j) sum.coeffs[n + j] = 1;
    sum.rhs = 1;
    eqs.push_back(std::move(sum));

    std::vector<LinearConstraint> ineqs = nonneg_rows(dim, n, m);
    for (auto& r : cell_rows(g, action)) {
      r.coeffs.resize(dim, Rational(0));
      ineqs.push_back(std::move(r));
    }
    auto lifted = enumerate_vertices(eqs, ineqs, {}, dim);
    std::vector<std::vector<Rational>> projected;
    for (auto& x : lifted) projected.emplace_back(x.begin(), x.begin() + n);
    raw = extreme_points(std::move(projected));
  }
  std::vector<Belief> out;
  for (auto& x : raw) out.push_back(Belief(std::move(x)));
  return out;
}

std::vector<SubdivisionVertex> subdivision_vertices(const GameSpec& g,
                                                    const std::vector<Belief>* restrict,
                                                    int geometry_limit) {
  std::vector<Belief> all;
  for (int a : supported_actions(g)) {
    auto vs = cell_vertices(g, a, restrict, geometry_limit);
    all.insert(all.end(), vs.begin(), vs.end());
  }
  // reversed-lexicographic order: ascending in the last state's weight, the
  // natural reading order for two-state games
  std::sort(all.begin(), all.end(), [](const Belief& x, const Belief& y) {
    for (int i = x.size() - 1; i >= 0; --i) {
      if (x[i] != y[i]) return x[i] < y[i];
    }
    return false;
  });
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<SubdivisionVertex> out;
  for (auto& b : all) {
    SubdivisionVertex v{b, best_replies(g, b).actions, u_bar(g, b)};
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<RealizedSet> realize_subset(const GameSpec& g, const std::vector<Belief>& hull,
                                          const std::vector<int>& subset) {
  if (subset.empty() || hull.empty()) return std::nullopt;
  const int m = static_cast<int>(hull.size());
  // v(a, h_j) table
  std::vector<std::vector<Rational>> vh(g.num_actions(), std::vector<Rational>(m));
  for (int a = 0; a < g.num_actions(); ++a) {
    for (int j = 0; j < m; ++j) vh[a][j] = dm_row_payoff(g, a, hull[j]);
  }
  const int rep = subset.front();
  LinearProgram lp;
  lp.objective.assign(m, Rational(0));
  lp.nonneg.assign(m, true);
  for (std::size_t k = 1; k < subset.size(); ++k) {
    std::vector<Rational> row(m);
    for (int j = 0; j < m; ++j) row[j] = vh[rep][j] - vh[subset[k]][j];
    lp.add_row(std::move(row), Sense::Eq, Rational(0));
  }
  for (int a = 0; a < g.num_actions(); ++a) {
    if (std::find(subset.begin(), subset.end(), a) != subset.end()) continue;
    std::vector<Rational> row(m);
    for (int j = 0; j < m; ++j) row[j] = vh[rep][j] - vh[a][j];
    lp.add_row(std::move(row), Sense::GreaterEq, Rational(0));
  }
  lp.add_row(std::vector<Rational>(m, Rational(1)), Sense::Eq, Rational(1));
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  std::vector<std::pair<Rational, Belief>> parts;
  for (int j = 0; j < m; ++j) parts.emplace_back(sol.primal[j], hull[j]);
  RealizedSet rs{subset, convex_combination(parts), sol.primal};
  return rs;
}

namespace detail {

std::vector<std::vector<int>> subsets_by_size(const std::vector<int>& universe) {
  const int n = static_cast<int>(universe.size());
  std::vector<std::vector<int>> out;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      std::vector<int> subset;
      for (int idx : pick) subset.push_back(universe[idx]);
      out.push_back(std::move(subset));
      int i = k - 1;
      while (i >= 0 && pick[i] == n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

std::vector<Belief> arrangement_vertices(const GameSpec& g, int geometry_limit) {
  const int n = g.num_states();
  if (n > geometry_limit) {
    throw GeometryLimitError("geometry limit exceeded: " + std::to_string(n) + " states > limit " +
                             std::to_string(geometry_limit));
  }
  std::vector<LinearConstraint> eqs{simplex_sum_row(n)};
  std::vector<LinearConstraint> ineqs = nonneg_rows(n, 0, n);
  std::vector<LinearConstraint> extra;
  for (int a = 0; a < g.num_actions(); ++a) {
    for (int a2 = a + 1; a2 < g.num_actions(); ++a2) {
      LinearConstraint c;
      c.coeffs.resize(n);
      for (int s = 0; s < n; ++s) c.coeffs[s] = g.v(a, s) - g.v(a2, s);
      c.rhs = 0;
      bool all_zero = true;
      for (const auto& x : c.coeffs) {
        if (!x.is_zero()) all_zero = false;
      }
      if (!all_zero) extra.push_back(std::move(c));
    }
  }
  auto raw = enumerate_vertices(eqs, ineqs, extra, n);
  std::vector<Belief> out;
  for (auto& x : raw) out.push_back(Belief(std::move(x)));
  return out;
}

}  // namespace detail

std::vector<RealizedSet> realized_br_supersets(const GameSpec& g, const std::vector<Belief>& hull,
                                               int subset_limit) {
  std::vector<int> ahat = supported_actions(g);
  if (static_cast<int>(ahat.size()) > subset_limit) {
    throw SubsetLimitError("subset enumeration limit exceeded: " + std::to_string(ahat.size()) +
                           " realizable actions > limit " + std::to_string(subset_limit));
  }
  std::vector<RealizedSet> out;
  for (const auto& subset : detail::subsets_by_size(ahat)) {
    if (auto rs = realize_subset(g, hull, subset)) out.push_back(std::move(*rs));
  }
  return out;
}

Belief cell_interior_point(const GameSpec& g, int action, int geometry_limit) {
  auto vs = cell_vertices(g, action, nullptr, geometry_limit);
  if (vs.empty()) throw std::invalid_argument("cell_interior_point: empty best-reply region");
  Rational w(1, static_cast<long>(vs.size()));
  std::vector<std::pair<Rational, Belief>> parts;
  for (const auto& b : vs) parts.emplace_back(w, b);
  return convex_combination(parts);
}

RedundancyCheck check_no_redundant_actions_dm(const GameSpec& g, int subset_limit,
                                              int geometry_limit) {
  std::vector<int> ahat = supported_actions(g);
  if (static_cast<int>(ahat.size()) > subset_limit) {
    throw SubsetLimitError("subset enumeration limit exceeded: " + std::to_string(ahat.size()) +
                           " realizable actions > limit " + std::to_string(subset_limit));
  }
  auto verts = detail::arrangement_vertices(g, geometry_limit);
  std::vector<Rational> vbar(verts.size());
  std::vector<std::vector<Rational>> va(verts.size(), std::vector<Rational>(g.num_actions()));
  for (std::size_t k = 0; k < verts.size(); ++k) {
    vbar[k] = v_bar(g, verts[k]);
    for (int a = 0; a < g.num_actions(); ++a) va[k][a] = dm_row_payoff(g, a, verts[k]);
  }
  for (const auto& subset : detail::subsets_by_size(ahat)) {
    if (subset.size() == ahat.size()) continue;  // proper subsets only
    bool separated = false;
    for (std::size_t k = 0; k < verts.size() && !separated; ++k) {
      Rational best;
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const Rational& val = va[k][subset[i]];
        if (i == 0 || val > best) best = val;
      }
      if (vbar[k] > best) separated = true;
    }
    if (!separated) return {false, subset};
  }
  return {true, {}};
}

}  // namespace persuasion
