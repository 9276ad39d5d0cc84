#pragma once

#include <vector>

#include "persuasion/rational.hpp"

namespace persuasion {

enum class Sense { LessEq, Eq, GreaterEq };
enum class Goal { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// A small dense linear program. Variables are either non-negative or free.
struct LinearProgram {
  Goal goal = Goal::Minimize;
  std::vector<Rational> objective;             // length n
  std::vector<std::vector<Rational>> rows;     // m x n
  std::vector<Sense> senses;                   // length m
  std::vector<Rational> rhs;                   // length m
  std::vector<bool> nonneg;                    // length n; false = free variable

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  void add_row(std::vector<Rational> coeffs, Sense s, Rational b);
};

// Solution with exact primal and dual vectors. For an Optimal solve the
// solver itself asserts, in exact arithmetic, primal feasibility, dual
// feasibility, complementary slackness and a zero duality gap, and throws
// std::logic_error if any of them fails.
//
// Dual sign convention, chosen so that objective == dual . rhs in both goals:
//   Minimize: y_i >= 0 on >= rows, y_i <= 0 on <= rows, free on = rows,
//             and (A^T y)_j <= c_j with equality on free variables.
//   Maximize: y_i >= 0 on <= rows, y_i <= 0 on >= rows, free on = rows,
//             and (A^T y)_j >= c_j with equality on free variables.
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
  std::vector<Rational> primal;
  std::vector<Rational> dual;
};

// Dense two-phase tableau simplex over exact rationals with Bland's pivot
// rule (terminating: no cycling, no tolerances).
LpSolution lp_solve(const LinearProgram& lp);

}  // namespace persuasion
