#include "evcharge/cutting_plane.hpp"

#include <cmath>
#include <map>

#include "evcharge/errors.hpp"

namespace evcharge {

std::vector<double> apply(const NormMap& map, const std::vector<double>& x) {
    std::vector<double> v(map.size(), 0.0);
    for (std::size_t k = 0; k < map.size(); ++k)
        for (const auto& t : map[k]) v[k] += t.coef * x[t.var];
    return v;
}

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    return std::sqrt(s);
}

// One operand of a pairwise norm: either a row of the map or the epigraph
// variable of another node.
struct Operand {
    bool leaf = true;
    std::size_t index = 0;
};

struct Node {
    Operand left, right;
    std::size_t epigraph = 0;
};

// ||v|| written as nested two-term norms t >= ||(a, b)||. A row without a
// partner is carried up unchanged.
std::vector<Node> build_tree(std::size_t rows, LinearProgram& lp, Operand& root) {
    std::vector<Node> nodes;
    std::vector<Operand> level;
    for (std::size_t k = 0; k < rows; ++k) level.push_back({true, k});
    while (level.size() > 1) {
        std::vector<Operand> next;
        for (std::size_t k = 0; k + 1 < level.size(); k += 2) {
            Node n{level[k], level[k + 1], lp.add_variable(0.0, 0.0, kInf)};
            next.push_back({false, nodes.size()});
            nodes.push_back(n);
        }
        if (level.size() % 2 == 1) next.push_back(level.back());
        level = std::move(next);
    }
    root = level.front();
    return nodes;
}

}  // namespace

NormSolution solve_norm_augmented(const LinearProgram& lp, double radius, const NormMap& map,
                                  const CutOptions& opts) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidArgument("radius must be a nonnegative number");
    lp.validate();
    for (const auto& row : map)
        for (const auto& t : row)
            if (t.var >= lp.num_vars()) throw InvalidArgument("norm map references an invalid variable");

    NormSolution out;
    if (radius == 0.0 || map.empty()) {
        const auto sol = solve_lp(lp, opts.lp);
        out.status = sol.status;
        if (sol.status != LpStatus::Optimal) return out;
        out.x = sol.x;
        out.mapped = evcharge::apply(map, sol.x);
        out.objective = sol.objective + radius * norm2(out.mapped);
        out.lower_bound = out.objective;
        return out;
    }

    LinearProgram relaxed = lp;
    const std::size_t n = lp.num_vars();
    Operand root;
    const auto nodes = build_tree(map.size(), relaxed, root);
    // The top of the tree carries the cost; a single row gets |v_0| <= t.
    std::size_t top;
    if (root.leaf) {
        top = relaxed.add_variable(radius, 0.0, kInf);
    } else {
        top = nodes[root.index].epigraph;
        relaxed.cost[top] = radius;
    }

    auto operand_value = [&](const Operand& o, const std::vector<double>& v, const std::vector<double>& sol) {
        return o.leaf ? v[o.index] : sol[nodes[o.index].epigraph];
    };
    auto add_operand = [&](std::map<std::size_t, double>& merged, const Operand& o, double w) {
        if (o.leaf) {
            for (const auto& t : map[o.index]) merged[t.var] += w * t.coef;
        } else {
            merged[nodes[o.index].epigraph] += w;
        }
    };
    // u.(a, b) - t <= 0 with u the unit direction of (a, b).
    auto add_cut = [&](const Operand& a, const Operand& b, std::size_t epigraph, double va, double vb) {
        const double len = std::hypot(va, vb);
        const double ua = len > 0.0 ? va / len : 1.0, ub = len > 0.0 ? vb / len : 0.0;
        std::map<std::size_t, double> merged;
        add_operand(merged, a, ua);
        add_operand(merged, b, ub);
        merged[epigraph] -= 1.0;
        std::vector<Term> terms;
        for (const auto& [var, coef] : merged)
            if (coef != 0.0) terms.push_back({var, coef});
        relaxed.add_le(std::move(terms), 0.0);
        ++out.cuts;
    };

    for (;;) {
        const auto sol = solve_lp(relaxed, opts.lp);
        out.status = sol.status;
        if (sol.status != LpStatus::Optimal) return out;

        std::vector<double> x(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
        auto v = evcharge::apply(map, x);
        double linear = 0.0;
        for (std::size_t j = 0; j < n; ++j) linear += lp.cost[j] * x[j];
        const double upper = linear + radius * norm2(v);
        if (out.x.empty() || upper < out.objective) {
            out.objective = upper;
            out.x = std::move(x);
            out.mapped = v;
        }
        out.lower_bound = std::max(out.rounds == 0 ? -kInf : out.lower_bound, sol.objective);
        out.gap = std::max(0.0, out.objective - out.lower_bound);
        out.relative_gap = out.gap / std::max(1.0, std::abs(out.objective));
        if (out.relative_gap <= opts.rel_tol) {
            out.cut_status = CutStatus::Converged;
            return out;
        }
        if (out.rounds >= opts.max_rounds) {
            out.cut_status = CutStatus::CutLimitExceeded;
            return out;
        }

        const auto before = out.cuts;
        if (root.leaf) {
            const double a = v[root.index];
            if (std::abs(a) > sol.x[top]) add_cut(root, root, top, a, 0.0);
        }
        for (const auto& node : nodes) {
            const double a = operand_value(node.left, v, sol.x), b = operand_value(node.right, v, sol.x);
            const double t = sol.x[node.epigraph];
            if (std::hypot(a, b) > t + 1e-13 * std::max(1.0, t)) add_cut(node.left, node.right, node.epigraph, a, b);
        }
        ++out.rounds;
        if (out.cuts == before) {
            // Nothing left to separate: the relaxation is exact up to rounding.
            out.cut_status = CutStatus::Converged;
            return out;
        }
    }
}

}  // namespace evcharge
