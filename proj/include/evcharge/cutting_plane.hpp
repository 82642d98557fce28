#pragma once

#include <cstddef>
#include <vector>

#include "evcharge/lp.hpp"

namespace evcharge {

/// Linear map x -> v with v_k = sum of terms in row k.
using NormMap = std::vector<std::vector<Term>>;

std::vector<double> apply(const NormMap& map, const std::vector<double>& x);

enum class CutStatus { Converged, CutLimitExceeded };

struct NormSolution {
    LpStatus status = LpStatus::Infeasible;
    CutStatus cut_status = CutStatus::Converged;
    std::vector<double> x;           // best iterate
    std::vector<double> mapped;      // M x at the best iterate
    double objective = 0.0;          // c.x + r ||M x|| at the best iterate
    double lower_bound = 0.0;        // optimum of the last cut relaxation
    double gap = 0.0;                // objective - lower_bound
    double relative_gap = 0.0;       // gap / max(1, |objective|)
    std::size_t cuts = 0;            // rows added
    std::size_t rounds = 0;          // separation rounds
};

struct CutOptions {
    double rel_tol = 1e-6;
    std::size_t max_rounds = 200;
    LpOptions lp;
};

/// Minimizes c.x + r ||M x||_2 over the LP's feasible set. The norm is
/// split into a binary tree of two-term norms t >= ||(a, b)||_2, each with its
/// own epigraph variable, and every tree node is refined by Kelley cuts
/// u.(a, b) <= t with u the unit direction of (a, b) at the latest iterate
/// (the first axis at the origin). Each round adds one cut per violated node.
/// r = 0 reduces to a single solve_lp call.
///
/// The cut relaxation's optimum is a valid lower bound, so `gap` certifies
/// the returned objective. Hitting `max_rounds` returns the best iterate with
/// cut_status = CutLimitExceeded.
NormSolution solve_norm_augmented(const LinearProgram& lp, double radius, const NormMap& map,
                                  const CutOptions& opts = {});

}  // namespace evcharge
