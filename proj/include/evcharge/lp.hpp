#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace evcharge {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Term {
    std::size_t var;
    double coef;
};

struct LinearRow {
    std::vector<Term> terms;
    double rhs = 0.0;
};

/// min c.x  s.t.  G x <= h,  E x = b,  lower <= x <= upper.
///
/// Bounds may be infinite. Rows are stored sparsely; repeated terms for the
/// same variable within a row are summed.
struct LinearProgram {
    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LinearRow> inequalities;  // G x <= h
    std::vector<LinearRow> equalities;    // E x = b

    std::size_t num_vars() const noexcept { return cost.size(); }

    std::size_t add_variable(double c, double lo = 0.0, double up = kInf);
    std::size_t add_le(std::vector<Term> terms, double rhs);
    /// Stored as the negated <= row.
    std::size_t add_ge(std::vector<Term> terms, double rhs);
    std::size_t add_eq(std::vector<Term> terms, double rhs);

    /// Throws InvalidArgument on inconsistent dimensions or lower > upper.
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus status);

/// Solution with a Lagrangian certificate.
///
/// Multiplier signs follow L = c.x + ineq_duals.(Gx - h) + eq_duals.(Ex - b)
///   - lower_duals.(x - lo) + upper_duals.(x - up),
/// so ineq/lower/upper duals are nonnegative and the dual objective is
///   -h.ineq_duals - b.eq_duals + lo.lower_duals - up.upper_duals.
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;

    std::vector<double> ineq_duals;
    std::vector<double> eq_duals;
    std::vector<double> lower_duals;
    std::vector<double> upper_duals;
    double dual_objective = 0.0;

    double primal_residual = 0.0;  // max constraint or bound violation
    double dual_residual = 0.0;    // max |c + G'l + E'm - zl + zu|
    double relative_gap = 0.0;     // |primal - dual| / max(1, |primal|)
    std::size_t iterations = 0;
};

struct LpOptions {
    double feasibility_tol = 1e-8;
    double gap_tol = 1e-7;
    std::size_t refactor_interval = 64;
    std::size_t max_iterations = 0;  // 0 picks a limit from the problem size
};

/// Bounded-variable revised simplex (two phases, Dantzig pricing with a Bland
/// fallback on degenerate stalls). Optimal results are certified against
/// `opts`; NumericalFailure is thrown when certification fails.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

/// Recomputes the certificate fields of `sol` for `lp` from x and the duals.
void certify(const LinearProgram& lp, LpSolution& sol);

}  // namespace evcharge
