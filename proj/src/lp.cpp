#include "persuasion/lp.hpp"

#include <stdexcept>

namespace persuasion {

void LinearProgram::add_row(std::vector<Rational> coeffs, Sense s, Rational b) {
  if (static_cast<int>(coeffs.size()) != num_vars()) {
    throw std::invalid_argument("LinearProgram::add_row: coefficient count mismatch");
  }
  rows.push_back(std::move(coeffs));
  senses.push_back(s);
  rhs.push_back(std::move(b));
}

namespace {

struct Tableau {
  int m = 0;                        // constraint rows
  int ncols = 0;                    // columns excluding RHS
  std::vector<std::vector<Rational>> t;  // m x (ncols+1)
  std::vector<Rational> z1, z2;     // reduced-cost rows, length ncols+1
  std::vector<int> basis;           // per row, column index
  std::vector<bool> active;         // per row
  std::vector<bool> artificial;     // per column

  void pivot(int r, int e) {
    Rational piv = t[r][e];
    for (auto& x : t[r]) x /= piv;
    auto elim = [&](std::vector<Rational>& row) {
      if (row[e].is_zero()) return;
      Rational f = row[e];
      for (int j = 0; j <= ncols; ++j) row[j] -= f * t[r][j];
    };
    for (int i = 0; i < m; ++i) {
      if (i != r) elim(t[i]);
    }
    elim(z1);
    elim(z2);
    basis[r] = e;
  }

  // Bland's rule on the given reduced-cost row. Returns final status of the
  // phase: true = optimal reached, false = unbounded.
  bool run(std::vector<Rational>& z) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (!artificial[j] && z[j].sign() < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m; ++i) {
        if (!active[i] || t[i][enter].sign() <= 0) continue;
        Rational ratio = t[i][ncols] / t[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

void verify_optimal(const LinearProgram& lp, const LpSolution& sol) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  const bool maximize = lp.goal == Goal::Maximize;
  // primal feasibility
  for (int j = 0; j < n; ++j) {
    if (lp.nonneg[j] && sol.primal[j].sign() < 0) throw std::logic_error("lp: primal negativity");
  }
  Rational dual_obj;
  for (int i = 0; i < m; ++i) {
    Rational ax;
    for (int j = 0; j < n; ++j) ax += lp.rows[i][j] * sol.primal[j];
    Rational slack = ax - lp.rhs[i];
    switch (lp.senses[i]) {
      case Sense::LessEq:
        if (slack.sign() > 0) throw std::logic_error("lp: primal row violated (<=)");
        if ((maximize ? sol.dual[i].sign() < 0 : sol.dual[i].sign() > 0))
          throw std::logic_error("lp: dual sign (<= row)");
        break;
      case Sense::GreaterEq:
        if (slack.sign() < 0) throw std::logic_error("lp: primal row violated (>=)");
        if ((maximize ? sol.dual[i].sign() > 0 : sol.dual[i].sign() < 0))
          throw std::logic_error("lp: dual sign (>= row)");
        break;
      case Sense::Eq:
        if (!slack.is_zero()) throw std::logic_error("lp: primal row violated (=)");
        break;
    }
    if (!(sol.dual[i] * slack).is_zero()) throw std::logic_error("lp: complementary slackness (row)");
    dual_obj += sol.dual[i] * lp.rhs[i];
  }
  // dual feasibility + complementary slackness on variables
  for (int j = 0; j < n; ++j) {
    Rational aty;
    for (int i = 0; i < m; ++i) aty += lp.rows[i][j] * sol.dual[i];
    Rational red = lp.objective[j] - aty;
    if (!lp.nonneg[j]) {
      if (!red.is_zero()) throw std::logic_error("lp: dual infeasible (free var)");
    } else if (maximize ? red.sign() > 0 : red.sign() < 0) {
      throw std::logic_error("lp: dual infeasible");
    }
    if (!(red * sol.primal[j]).is_zero()) throw std::logic_error("lp: complementary slackness (var)");
  }
  if (dual_obj != sol.objective) throw std::logic_error("lp: duality gap");
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  if (static_cast<int>(lp.nonneg.size()) != n || static_cast<int>(lp.senses.size()) != m ||
      static_cast<int>(lp.rhs.size()) != m) {
    throw std::invalid_argument("lp_solve: inconsistent dimensions");
  }
  const bool maximize = lp.goal == Goal::Maximize;

  // Internal form: minimize, all rows with nonnegative rhs, x >= 0 after
  // splitting free variables.
  std::vector<Rational> c(n);
  for (int j = 0; j < n; ++j) c[j] = maximize ? -lp.objective[j] : lp.objective[j];

  std::vector<int> pos_col(n), neg_col(n, -1);
  int ncols = 0;
  for (int j = 0; j < n; ++j) {
    pos_col[j] = ncols++;
    if (!lp.nonneg[j]) neg_col[j] = ncols++;
  }
  std::vector<int> slack_col(m, -1), art_col(m, -1), surplus_col(m, -1);
  std::vector<bool> flipped(m, false);
  for (int i = 0; i < m; ++i) {
    Sense s = lp.senses[i];
    if (lp.rhs[i].sign() < 0) {
      flipped[i] = true;
      if (s == Sense::LessEq) s = Sense::GreaterEq;
      else if (s == Sense::GreaterEq) s = Sense::LessEq;
    }
    if (s == Sense::LessEq) slack_col[i] = ncols++;
    else if (s == Sense::GreaterEq) { surplus_col[i] = ncols++; art_col[i] = ncols++; }
    else art_col[i] = ncols++;
  }

  Tableau tb;
  tb.m = m;
  tb.ncols = ncols;
  tb.t.assign(m, std::vector<Rational>(ncols + 1));
  tb.basis.assign(m, -1);
  tb.active.assign(m, true);
  tb.artificial.assign(ncols, false);
  for (int i = 0; i < m; ++i) {
    if (art_col[i] >= 0) tb.artificial[art_col[i]] = true;
  }

  for (int i = 0; i < m; ++i) {
    Rational sgn = flipped[i] ? Rational(-1) : Rational(1);
    for (int j = 0; j < n; ++j) {
      Rational a = sgn * lp.rows[i][j];
      tb.t[i][pos_col[j]] = a;
      if (neg_col[j] >= 0) tb.t[i][neg_col[j]] = -a;
    }
    tb.t[i][ncols] = sgn * lp.rhs[i];
    if (slack_col[i] >= 0) {
      tb.t[i][slack_col[i]] = 1;
      tb.basis[i] = slack_col[i];
    }
    if (surplus_col[i] >= 0) tb.t[i][surplus_col[i]] = -1;
    if (art_col[i] >= 0) {
      tb.t[i][art_col[i]] = 1;
      tb.basis[i] = art_col[i];
    }
  }

  // phase-2 reduced costs: initial basis has zero cost everywhere
  tb.z2.assign(ncols + 1, Rational(0));
  for (int j = 0; j < n; ++j) {
    tb.z2[pos_col[j]] = c[j];
    if (neg_col[j] >= 0) tb.z2[neg_col[j]] = -c[j];
  }
  // phase-1 reduced costs: minimize sum of artificials
  tb.z1.assign(ncols + 1, Rational(0));
  bool any_artificial = false;
  for (int j = 0; j < ncols; ++j) {
    if (tb.artificial[j]) tb.z1[j] = 1;
  }
  for (int i = 0; i < m; ++i) {
    if (art_col[i] >= 0 && tb.basis[i] == art_col[i]) {
      any_artificial = true;
      for (int j = 0; j <= ncols; ++j) tb.z1[j] -= tb.t[i][j];
    }
  }

  LpSolution sol;
  if (any_artificial) {
    if (!tb.run(tb.z1)) throw std::logic_error("lp_solve: phase 1 unbounded");
    if ((-tb.z1[ncols]).sign() > 0) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Drive artificial variables out of the basis; rows that cannot pivot
    // are redundant and get deactivated.
    for (int i = 0; i < m; ++i) {
      if (tb.basis[i] < 0 || !tb.artificial[tb.basis[i]]) continue;
      int e = -1;
      for (int j = 0; j < ncols; ++j) {
        if (!tb.artificial[j] && !tb.t[i][j].is_zero()) {
          e = j;
          break;
        }
      }
      if (e >= 0) tb.pivot(i, e);
      else tb.active[i] = false;
    }
  }

  if (!tb.run(tb.z2)) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  std::vector<Rational> xs(ncols);
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] >= 0 && tb.active[i]) xs[tb.basis[i]] = tb.t[i][ncols];
  }
  sol.primal.assign(n, Rational(0));
  for (int j = 0; j < n; ++j) {
    sol.primal[j] = xs[pos_col[j]];
    if (neg_col[j] >= 0) sol.primal[j] -= xs[neg_col[j]];
  }
  Rational internal_obj = -tb.z2[ncols];
  sol.objective = maximize ? -internal_obj : internal_obj;

  sol.dual.assign(m, Rational(0));
  for (int i = 0; i < m; ++i) {
    if (!tb.active[i]) continue;
    int idcol = (slack_col[i] >= 0) ? slack_col[i] : art_col[i];
    Rational y = -tb.z2[idcol];
    if (flipped[i]) y = -y;
    if (maximize) y = -y;
    sol.dual[i] = y;
  }

  verify_optimal(lp, sol);
  return sol;
}

}  // namespace persuasion
