/*
Copyright 2026 The impsched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace impsched::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };

struct Term {
    int var;
    double coef;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    double cost = 0.0;
    bool integer = false;
};

/// lower <= sum(terms) <= upper; equal bounds make an equality row.
struct Constraint {
    std::string name;
    std::vector<Term> terms;
    double lower = -kInf;
    double upper = kInf;
};

class LinearProgram {
  public:
    int add_variable(std::string name, double lower, double upper, double cost = 0.0);
    int add_constraint(std::string name, std::vector<Term> terms, double lower, double upper);
    int add_le(std::string name, std::vector<Term> terms, double rhs) {
        return add_constraint(std::move(name), std::move(terms), -kInf, rhs);
    }
    int add_ge(std::string name, std::vector<Term> terms, double rhs) {
        return add_constraint(std::move(name), std::move(terms), rhs, kInf);
    }
    int add_eq(std::string name, std::vector<Term> terms, double rhs) {
        return add_constraint(std::move(name), std::move(terms), rhs, rhs);
    }

    void set_sense(Sense s) { sense_ = s; }
    Sense sense() const { return sense_; }
    void set_objective_constant(double c) { objective_constant_ = c; }
    double objective_constant() const { return objective_constant_; }
    void set_cost(int var, double cost) { vars_.at(var).cost = cost; }
    void set_bounds(int var, double lower, double upper);
    void set_integer(int var, bool integer = true) { vars_.at(var).integer = integer; }

    int num_variables() const { return static_cast<int>(vars_.size()); }
    int num_constraints() const { return static_cast<int>(rows_.size()); }
    const Variable &variable(int j) const { return vars_.at(j); }
    const Constraint &constraint(int r) const { return rows_.at(r); }
    const std::vector<Variable> &variables() const { return vars_; }
    const std::vector<Constraint> &constraints() const { return rows_; }

    double objective(std::span<const double> x) const;
    double row_activity(int r, std::span<const double> x) const;
    /// Largest bound or row violation of `x` (absolute, unscaled).
    double max_violation(std::span<const double> x) const;
    /// Throws std::invalid_argument on dangling references or crossed bounds.
    void validate() const;

  private:
    std::vector<Variable> vars_;
    std::vector<Constraint> rows_;
    Sense sense_ = Sense::minimize;
    double objective_constant_ = 0.0;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit, numerical_failure };
std::string_view to_string(Status s);

/**
 * Solver output. Duals refer to the minimization form min (s * c)^T x with
 * s = +1 for minimize and -1 for maximize: reduced_cost = s * c - A^T row_dual.
 * A positive row dual binds the row's lower bound, a negative one its upper.
 */
struct Solution {
    Status status = Status::numerical_failure;
    double objective = 0.0;  // includes the objective constant, in the LP's own sense
    std::vector<double> x;
    std::vector<double> row_activity;
    std::vector<double> row_dual;
    std::vector<double> reduced_cost;
    int iterations = 0;

    bool optimal() const { return status == Status::optimal; }
};

struct SolverOptions {
    double primal_tolerance = 1e-9;  // on scaled rows and bounds
    double dual_tolerance = 1e-9;
    int max_iterations = 200000;
    int refactor_interval = 64;
    bool bland_only = false;  // Bland's rule throughout instead of as the anti-cycling fallback
    bool scale = true;
};

/// Variable status per column (structural columns, then one logical per row).
struct Basis {
    std::vector<int> head;
    std::vector<signed char> status;
    bool empty() const { return head.empty(); }
};

/**
 * Bounded-variable revised simplex with a dense explicit basis inverse.
 *
 * Rows are turned into equalities with one bounded logical each. A cold
 * start runs a composite phase 1 / phase 2 primal simplex; after bound
 * changes the previous basis is re-entered with the dual simplex. Pricing
 * is Dantzig's rule, switching to Bland's rule after a run of degenerate
 * pivots.
 */
class SimplexSolver {
  public:
    explicit SimplexSolver(const LinearProgram &lp, SolverOptions opts = {});
    ~SimplexSolver();
    SimplexSolver(SimplexSolver &&) noexcept;
    SimplexSolver &operator=(SimplexSolver &&) noexcept;

    Solution solve();

    /// Changes bounds of a structural variable; keeps the basis for a warm start.
    void set_variable_bounds(int var, double lower, double upper);
    double variable_lower(int var) const;
    double variable_upper(int var) const;

    Basis basis() const;
    void set_basis(const Basis &b);

    const LinearProgram &program() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Solution solve(const LinearProgram &lp, const SolverOptions &opts = {});

/// CPLEX-style LP text; integer variables, if any, go in a General section.
void write_lp_format(std::ostream &os, const LinearProgram &lp);

}  // namespace impsched::lp
