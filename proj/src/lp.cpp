#include "evcharge/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "evcharge/errors.hpp"

namespace evcharge {

std::size_t LinearProgram::add_variable(double c, double lo, double up) {
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(up);
    return cost.size() - 1;
}

std::size_t LinearProgram::add_le(std::vector<Term> terms, double rhs) {
    inequalities.push_back({std::move(terms), rhs});
    return inequalities.size() - 1;
}

std::size_t LinearProgram::add_ge(std::vector<Term> terms, double rhs) {
    for (auto& t : terms) t.coef = -t.coef;
    return add_le(std::move(terms), -rhs);
}

std::size_t LinearProgram::add_eq(std::vector<Term> terms, double rhs) {
    equalities.push_back({std::move(terms), rhs});
    return equalities.size() - 1;
}

void LinearProgram::validate() const {
    const auto n = num_vars();
    if (lower.size() != n || upper.size() != n)
        throw InvalidArgument("bounds must match the number of variables");
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(cost[j])) throw InvalidArgument("objective coefficients must be finite");
        if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
            lower[j] == kInf || upper[j] == -kInf)
            throw InvalidArgument("invalid bounds on variable " + std::to_string(j));
    }
    for (const auto* rows : {&inequalities, &equalities}) {
        for (const auto& row : *rows) {
            if (!std::isfinite(row.rhs)) throw InvalidArgument("row right-hand sides must be finite");
            for (const auto& t : row.terms)
                if (t.var >= n || !std::isfinite(t.coef))
                    throw InvalidArgument("row references an invalid variable or coefficient");
        }
    }
}

std::string_view to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kStepTol = 1e-12;
constexpr std::size_t kDegenerateStall = 30;
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper };

using SparseColumn = std::vector<std::pair<std::size_t, double>>;

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

// Standard form: A x' = b, 0 <= x' <= u. Original variables are shifted onto
// their finite bound or split into two nonnegative parts when free.
class Simplex {
public:
    Simplex(const LinearProgram& lp, const LpOptions& opts) : lp_(lp), opts_(opts) { build(); }

    LpSolution solve();

private:
    enum class PhaseResult { Optimal, Unbounded };

    struct Origin {
        std::size_t var;
        double sign;
    };

    void build();
    void refactor();
    PhaseResult run_phase(const std::vector<double>& c);
    double reduced_cost(std::size_t j, const Eigen::VectorXd& y, const std::vector<double>& c) const;

    const LinearProgram& lp_;
    LpOptions opts_;

    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::size_t num_struct_ = 0;
    std::size_t first_art_ = 0;
    std::vector<SparseColumn> cols_;
    std::vector<double> b_;
    std::vector<double> upper_;
    std::vector<double> x_;
    std::vector<VarState> state_;
    std::vector<std::size_t> basis_;
    Eigen::MatrixXd binv_;

    std::vector<Origin> origin_;  // per structural column
    std::vector<double> offset_;  // per original variable

    std::size_t iterations_ = 0;
    std::size_t max_iterations_ = 0;
    std::size_t since_refactor_ = 0;
};

void Simplex::build() {
    const auto n_orig = lp_.num_vars();
    const auto n_le = lp_.inequalities.size();
    m_ = n_le + lp_.equalities.size();
    offset_.assign(n_orig, 0.0);

    // Structural columns.
    std::vector<std::vector<std::size_t>> cols_of_var(n_orig);
    for (std::size_t j = 0; j < n_orig; ++j) {
        const double lo = lp_.lower[j], up = lp_.upper[j];
        if (std::isfinite(lo)) {
            offset_[j] = lo;
            cols_of_var[j].push_back(origin_.size());
            origin_.push_back({j, 1.0});
            upper_.push_back(up - lo);
        } else if (std::isfinite(up)) {
            offset_[j] = up;
            cols_of_var[j].push_back(origin_.size());
            origin_.push_back({j, -1.0});
            upper_.push_back(kInf);
        } else {
            cols_of_var[j].push_back(origin_.size());
            origin_.push_back({j, 1.0});
            upper_.push_back(kInf);
            cols_of_var[j].push_back(origin_.size());
            origin_.push_back({j, -1.0});
            upper_.push_back(kInf);
        }
    }
    num_struct_ = origin_.size();
    cols_.assign(num_struct_, {});

    b_.assign(m_, 0.0);
    auto add_row = [&](std::size_t r, const LinearRow& row) {
        double rhs = row.rhs;
        for (const auto& t : row.terms) {
            rhs -= t.coef * offset_[t.var];
            for (auto c : cols_of_var[t.var]) cols_[c].emplace_back(r, t.coef * origin_[c].sign);
        }
        b_[r] = rhs;
    };
    for (std::size_t r = 0; r < n_le; ++r) add_row(r, lp_.inequalities[r]);
    for (std::size_t r = 0; r < lp_.equalities.size(); ++r) add_row(n_le + r, lp_.equalities[r]);

    // Slacks for inequality rows, then artificials where the slack cannot start basic.
    basis_.assign(m_, kNone);
    std::vector<std::size_t> slack_col(n_le);
    for (std::size_t r = 0; r < n_le; ++r) {
        slack_col[r] = cols_.size();
        cols_.push_back({{r, 1.0}});
        upper_.push_back(kInf);
    }
    first_art_ = cols_.size();
    std::vector<double> basis_sign(m_, 1.0);
    for (std::size_t r = 0; r < m_; ++r) {
        if (r < n_le && b_[r] >= 0.0) {
            basis_[r] = slack_col[r];
            continue;
        }
        const double sign = b_[r] >= 0.0 ? 1.0 : -1.0;
        basis_[r] = cols_.size();
        basis_sign[r] = sign;
        cols_.push_back({{r, sign}});
        upper_.push_back(kInf);
    }
    n_ = cols_.size();

    x_.assign(n_, 0.0);
    state_.assign(n_, VarState::AtLower);
    binv_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
    for (std::size_t r = 0; r < m_; ++r) {
        state_[basis_[r]] = VarState::Basic;
        x_[basis_[r]] = std::abs(b_[r]);
        binv_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = basis_sign[r];
    }
    max_iterations_ = opts_.max_iterations ? opts_.max_iterations : 50 * (m_ + n_) + 1000;
}

void Simplex::refactor() {
    const auto m = static_cast<Eigen::Index>(m_);
    since_refactor_ = 0;
    if (m == 0) return;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t r = 0; r < m_; ++r)
        for (const auto& [row, v] : cols_[basis_[r]])
            basis(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(r)) += v;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    if (!(lu.rcond() > 1e-14)) throw NumericalFailure("simplex basis became singular");
    binv_ = lu.inverse();

    Eigen::VectorXd rhs(m);
    for (std::size_t r = 0; r < m_; ++r) rhs(static_cast<Eigen::Index>(r)) = b_[r];
    for (std::size_t j = 0; j < n_; ++j) {
        if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
        for (const auto& [row, v] : cols_[j]) rhs(static_cast<Eigen::Index>(row)) -= v * x_[j];
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (std::size_t r = 0; r < m_; ++r) x_[basis_[r]] = xb(static_cast<Eigen::Index>(r));
    since_refactor_ = 0;
}

double Simplex::reduced_cost(std::size_t j, const Eigen::VectorXd& y,
                             const std::vector<double>& c) const {
    double d = c[j];
    for (const auto& [row, v] : cols_[j]) d -= y(static_cast<Eigen::Index>(row)) * v;
    return d;
}

Simplex::PhaseResult Simplex::run_phase(const std::vector<double>& c) {
    const auto m = static_cast<Eigen::Index>(m_);
    const double dual_tol = 1e-10 * std::max(1.0, max_abs(c));
    std::size_t degenerate_run = 0;
    bool bland = false;
    Eigen::VectorXd cb(m), y(m), alpha(m);

    for (;;) {
        if (++iterations_ > max_iterations_)
            throw NumericalFailure("simplex iteration limit reached");
        if (since_refactor_ >= opts_.refactor_interval) refactor();

        for (std::size_t r = 0; r < m_; ++r) cb(static_cast<Eigen::Index>(r)) = c[basis_[r]];
        y.noalias() = binv_.transpose() * cb;

        // Pricing.
        std::size_t enter = kNone;
        double best = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (state_[j] == VarState::Basic || upper_[j] <= 0.0) continue;
            const double d = reduced_cost(j, y, c);
            double score = 0.0;
            if (state_[j] == VarState::AtLower && d < -dual_tol) score = -d;
            else if (state_[j] == VarState::AtUpper && d > dual_tol) score = d;
            else continue;
            if (bland) {
                enter = j;
                break;
            }
            if (score > best) {
                best = score;
                enter = j;
            }
        }
        if (enter == kNone) {
            if (since_refactor_ == 0) return PhaseResult::Optimal;
            refactor();
            continue;
        }

        alpha.setZero();
        for (const auto& [row, v] : cols_[enter]) alpha += binv_.col(static_cast<Eigen::Index>(row)) * v;
        const double sigma = state_[enter] == VarState::AtLower ? 1.0 : -1.0;

        // Ratio test; bound flip of the entering variable competes with pivots.
        double theta = upper_[enter];
        std::size_t leave_row = kNone;
        bool leave_to_upper = false;
        double leave_pivot = 0.0;
        for (std::size_t r = 0; r < m_; ++r) {
            const double a = sigma * alpha(static_cast<Eigen::Index>(r));
            const std::size_t bj = basis_[r];
            double limit;
            bool to_upper;
            if (a > kPivotTol) {
                limit = std::max(x_[bj], 0.0) / a;
                to_upper = false;
            } else if (a < -kPivotTol && std::isfinite(upper_[bj])) {
                limit = std::max(upper_[bj] - x_[bj], 0.0) / -a;
                to_upper = true;
            } else {
                continue;
            }
            bool take;
            if (leave_row == kNone)
                take = limit <= theta + kStepTol;
            else if (limit < theta - kStepTol)
                take = true;
            else if (limit <= theta + kStepTol)
                take = bland ? bj < basis_[leave_row] : std::abs(a) > std::abs(leave_pivot);
            else
                take = false;
            if (take) {
                theta = limit;
                leave_row = r;
                leave_to_upper = to_upper;
                leave_pivot = a;
            }
        }
        if (!std::isfinite(theta)) {
            if (since_refactor_ == 0) return PhaseResult::Unbounded;
            refactor();
            continue;
        }

        if (theta <= kStepTol) {
            if (++degenerate_run >= kDegenerateStall) bland = true;
        } else {
            degenerate_run = 0;
            bland = false;
        }

        for (std::size_t r = 0; r < m_; ++r)
            x_[basis_[r]] -= sigma * theta * alpha(static_cast<Eigen::Index>(r));
        x_[enter] += sigma * theta;

        if (leave_row == kNone) {
            // Bound flip.
            state_[enter] = state_[enter] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
            x_[enter] = state_[enter] == VarState::AtLower ? 0.0 : upper_[enter];
            continue;
        }

        const std::size_t leaving = basis_[leave_row];
        state_[leaving] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
        x_[leaving] = leave_to_upper ? upper_[leaving] : 0.0;
        state_[enter] = VarState::Basic;
        basis_[leave_row] = enter;

        const auto pr = static_cast<Eigen::Index>(leave_row);
        const double pivot = alpha(pr);
        binv_.row(pr) /= pivot;
        for (Eigen::Index r = 0; r < m; ++r) {
            if (r == pr || alpha(r) == 0.0) continue;
            binv_.row(r) -= alpha(r) * binv_.row(pr);
        }
        ++since_refactor_;
    }
}

LpSolution Simplex::solve() {
    LpSolution sol;
    const double feas_scale = std::max(1.0, max_abs(b_));

    if (first_art_ < n_) {
        std::vector<double> phase1(n_, 0.0);
        for (std::size_t j = first_art_; j < n_; ++j) phase1[j] = 1.0;
        run_phase(phase1);
        double infeasibility = 0.0;
        for (std::size_t j = first_art_; j < n_; ++j) infeasibility += std::max(x_[j], 0.0);
        if (infeasibility > 1e-9 * feas_scale) {
            sol.status = LpStatus::Infeasible;
            sol.iterations = iterations_;
            return sol;
        }
        for (std::size_t j = first_art_; j < n_; ++j) {
            upper_[j] = 0.0;
            if (state_[j] != VarState::Basic) {
                state_[j] = VarState::AtLower;
                x_[j] = 0.0;
            }
        }
    }

    std::vector<double> phase2(n_, 0.0);
    for (std::size_t c = 0; c < num_struct_; ++c) phase2[c] = lp_.cost[origin_[c].var] * origin_[c].sign;
    since_refactor_ = std::max<std::size_t>(since_refactor_, 1);
    if (run_phase(phase2) == PhaseResult::Unbounded) {
        sol.status = LpStatus::Unbounded;
        sol.iterations = iterations_;
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.iterations = iterations_;

    const auto n_orig = lp_.num_vars();
    sol.x = offset_;
    for (std::size_t c = 0; c < num_struct_; ++c) {
        const double v = std::clamp(x_[c], 0.0, upper_[c]);
        sol.x[origin_[c].var] += origin_[c].sign * v;
    }
    for (std::size_t j = 0; j < n_orig; ++j) sol.x[j] = std::clamp(sol.x[j], lp_.lower[j], lp_.upper[j]);

    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::VectorXd cb(m);
    for (std::size_t r = 0; r < m_; ++r) cb(static_cast<Eigen::Index>(r)) = phase2[basis_[r]];
    const Eigen::VectorXd y = binv_.transpose() * cb;
    const auto n_le = lp_.inequalities.size();
    sol.ineq_duals.resize(n_le);
    for (std::size_t r = 0; r < n_le; ++r) sol.ineq_duals[r] = std::max(-y(static_cast<Eigen::Index>(r)), 0.0);
    sol.eq_duals.resize(lp_.equalities.size());
    for (std::size_t r = 0; r < lp_.equalities.size(); ++r)
        sol.eq_duals[r] = -y(static_cast<Eigen::Index>(n_le + r));

    certify(lp_, sol);

    const double dual_scale = std::max(1.0, max_abs(lp_.cost));
    if (sol.primal_residual > opts_.feasibility_tol * feas_scale || sol.relative_gap > opts_.gap_tol ||
        sol.dual_residual > 1e-7 * dual_scale) {
        std::ostringstream msg;
        msg << "could not certify LP optimum: primal residual " << sol.primal_residual
            << ", dual residual " << sol.dual_residual << ", relative gap " << sol.relative_gap;
        throw NumericalFailure(msg.str());
    }
    return sol;
}

}  // namespace

void certify(const LinearProgram& lp, LpSolution& sol) {
    const auto n = lp.num_vars();
    double primal = 0.0, resid = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        primal += lp.cost[j] * sol.x[j];
        resid = std::max({resid, lp.lower[j] - sol.x[j], sol.x[j] - lp.upper[j]});
    }
    std::vector<double> d = lp.cost;
    double dual = 0.0;
    for (std::size_t r = 0; r < lp.inequalities.size(); ++r) {
        const auto& row = lp.inequalities[r];
        double ax = 0.0;
        for (const auto& t : row.terms) {
            ax += t.coef * sol.x[t.var];
            d[t.var] += t.coef * sol.ineq_duals[r];
        }
        resid = std::max(resid, ax - row.rhs);
        dual -= row.rhs * sol.ineq_duals[r];
    }
    for (std::size_t r = 0; r < lp.equalities.size(); ++r) {
        const auto& row = lp.equalities[r];
        double ax = 0.0;
        for (const auto& t : row.terms) {
            ax += t.coef * sol.x[t.var];
            d[t.var] += t.coef * sol.eq_duals[r];
        }
        resid = std::max(resid, std::abs(ax - row.rhs));
        dual -= row.rhs * sol.eq_duals[r];
    }
    sol.lower_duals.assign(n, 0.0);
    sol.upper_duals.assign(n, 0.0);
    double dual_resid = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (d[j] > 0.0 && std::isfinite(lp.lower[j])) {
            sol.lower_duals[j] = d[j];
            dual += lp.lower[j] * d[j];
        } else if (d[j] < 0.0 && std::isfinite(lp.upper[j])) {
            sol.upper_duals[j] = -d[j];
            dual -= lp.upper[j] * -d[j];
        } else {
            dual_resid = std::max(dual_resid, std::abs(d[j]));
        }
    }
    sol.objective = primal;
    sol.dual_objective = dual;
    sol.primal_residual = std::max(resid, 0.0);
    sol.dual_residual = dual_resid;
    sol.relative_gap = std::abs(primal - dual) / std::max(1.0, std::abs(primal));
}

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts) {
    lp.validate();
    Simplex simplex(lp, opts);
    return simplex.solve();
}

}  // namespace evcharge
