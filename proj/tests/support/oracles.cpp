#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mtinv::testing {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// All constraints as rows G x <= h, equalities kept separately.
struct Inequalities {
    MatrixXd g;
    VectorXd h;
};

Inequalities collect(const LPProblem& lp)
{
    const Index n = lp.num_variables();
    std::vector<VectorXd> rows;
    std::vector<double> rhs;
    for (Index i = 0; i < lp.a_ub.rows(); ++i) {
        rows.emplace_back(lp.a_ub.row(i).transpose());
        rhs.push_back(lp.b_ub[i]);
    }
    for (Index j = 0; j < n; ++j) {
        const double lo = lp.lower.size() ? lp.lower[j] : 0.0;
        const double hi = lp.upper.size() ? lp.upper[j] : kInf;
        if (std::isfinite(lo)) {
            rows.emplace_back(-VectorXd::Unit(n, j));
            rhs.push_back(-lo);
        }
        if (std::isfinite(hi)) {
            rows.emplace_back(VectorXd::Unit(n, j));
            rhs.push_back(hi);
        }
    }
    Inequalities out{MatrixXd(static_cast<Index>(rows.size()), n), VectorXd(static_cast<Index>(rows.size()))};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.g.row(static_cast<Index>(r)) = rows[r].transpose();
        out.h[static_cast<Index>(r)] = rhs[r];
    }
    return out;
}

template <typename F>
void for_each_combination(int total, int pick, F&& visit)
{
    if (pick < 0 || pick > total) {
        return;
    }
    std::vector<int> idx(static_cast<std::size_t>(pick));
    for (int i = 0; i < pick; ++i) {
        idx[static_cast<std::size_t>(i)] = i;
    }
    while (true) {
        visit(idx);
        int k = pick - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == total - pick + k) {
            --k;
        }
        if (k < 0) {
            return;
        }
        ++idx[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < pick; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

// Linearly independent subset of the equality rows.
void independent_equalities(const LPProblem& lp, MatrixXd& a, VectorXd& b)
{
    if (lp.a_eq.rows() == 0) {
        a.resize(0, lp.num_variables());
        b.resize(0);
        return;
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(lp.a_eq.transpose());
    const Index r = qr.rank();
    a.resize(r, lp.a_eq.cols());
    b.resize(r);
    for (Index i = 0; i < r; ++i) {
        const Index row = qr.colsPermutation().indices()[i];
        a.row(i) = lp.a_eq.row(row);
        b[i] = lp.b_eq[row];
    }
}

} // namespace

std::optional<VertexOptimum> vertex_enumeration(const LPProblem& lp, double feas_tol)
{
    const Index n = lp.num_variables();
    const Inequalities ineq = collect(lp);
    MatrixXd a_eq;
    VectorXd b_eq;
    independent_equalities(lp, a_eq, b_eq);
    const Index m_eq = a_eq.rows();
    std::optional<VertexOptimum> best;

    for_each_combination(static_cast<int>(ineq.g.rows()), static_cast<int>(n - m_eq), [&](const std::vector<int>& act) {
        MatrixXd m(n, n);
        VectorXd rhs(n);
        if (m_eq > 0) {
            m.topRows(m_eq) = a_eq;
            rhs.head(m_eq) = b_eq;
        }
        for (std::size_t k = 0; k < act.size(); ++k) {
            m.row(m_eq + static_cast<Index>(k)) = ineq.g.row(act[k]);
            rhs[m_eq + static_cast<Index>(k)] = ineq.h[act[k]];
        }
        Eigen::FullPivLU<MatrixXd> lu(m);
        if (lu.rank() < n) {
            return;
        }
        const VectorXd x = lu.solve(rhs);
        if (m_eq > 0 && (lp.a_eq * x - lp.b_eq).cwiseAbs().maxCoeff() > feas_tol) {
            return;
        }
        if (ineq.g.rows() > 0 && (ineq.g * x - ineq.h).maxCoeff() > feas_tol) {
            return;
        }
        const double obj = lp.c.dot(x);
        if (!best || obj < best->objective) {
            best = VertexOptimum{obj, x};
        }
    });
    return best;
}

double epigraph_value(const MatrixXd& a, const MatrixXd& b, const VectorXd& q_max, const VectorXd& phi)
{
    const VectorXd re = a * phi;
    const VectorXd im = b * phi;
    double worst = 0.0;
    for (Index k = 0; k < q_max.size(); ++k) {
        worst = std::max(worst, (std::abs(re[k]) + std::abs(im[k])) / q_max[k]);
    }
    return worst;
}

double grid_minimum(const MatrixXd& a, const MatrixXd& b, const VectorXd& q_max, int divisions)
{
    double best = std::numeric_limits<double>::infinity();
    VectorXd phi(3);
    for (int i = 0; i <= divisions; ++i) {
        for (int j = 0; i + j <= divisions; ++j) {
            phi << i, j, divisions - i - j;
            phi /= divisions;
            best = std::min(best, epigraph_value(a, b, q_max, phi));
        }
    }
    return best;
}

double two_phase_phi1(double eps_hat, double r1)
{
    return (eps_hat - 1.0) * (3.0 + r1) / (r1 * (eps_hat + 2.0));
}

namespace {

LPProblem make(std::initializer_list<double> c)
{
    LPProblem lp;
    lp.c = VectorXd(static_cast<Index>(c.size()));
    Index i = 0;
    for (double v : c) {
        lp.c[i++] = v;
    }
    return lp;
}

MatrixXd rows(Index r, Index cols, std::initializer_list<double> v)
{
    MatrixXd m(r, cols);
    auto it = v.begin();
    for (Index i = 0; i < r; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = *it++;
        }
    }
    return m;
}

VectorXd vec(std::initializer_list<double> v)
{
    VectorXd out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) {
        out[i++] = x;
    }
    return out;
}

} // namespace

std::vector<LPCase> lp_cases()
{
    std::vector<LPCase> cases;
    auto add = [&](std::string name, LPProblem lp, Expect e, std::optional<double> obj = std::nullopt) {
        cases.push_back({std::move(name), std::move(lp), e, obj});
    };

    {   // max x + y on a box corner cut
        auto lp = make({-1, -1});
        lp.a_ub = rows(2, 2, {1, 2, 3, 1});
        lp.b_ub = vec({4, 6});
        add("two_var_max", lp, Expect::Optimal, -2.8);
    }
    {
        auto lp = make({1, 2, 3});
        lp.a_eq = rows(1, 3, {1, 1, 1});
        lp.b_eq = vec({1});
        add("simplex_min_cost", lp, Expect::Optimal, 1.0);
    }
    {   // classic production LP
        auto lp = make({-3, -5});
        lp.a_ub = rows(3, 2, {1, 0, 0, 2, 3, 2});
        lp.b_ub = vec({4, 12, 18});
        add("wyndor", lp, Expect::Optimal, -36.0);
    }
    {
        auto lp = make({-1, -1});
        lp.a_ub = rows(1, 2, {1, 1});
        lp.b_ub = vec({1});
        add("degenerate_face", lp, Expect::Optimal, -1.0);
    }
    {   // redundant constraints through the optimum
        auto lp = make({-1, -1});
        lp.a_ub = rows(4, 2, {1, 0, 0, 1, 1, 1, 2, 2});
        lp.b_ub = vec({1, 1, 2, 4});
        add("degenerate_vertex", lp, Expect::Optimal, -2.0);
    }
    {
        auto lp = make({1, 1});
        lp.a_eq = rows(2, 2, {1, 1, 1, 1});
        lp.b_eq = vec({2, 2});
        add("duplicate_equality", lp, Expect::Optimal, 2.0);
    }
    {
        auto lp = make({1, -1});
        lp.lower = vec({-2, -kInf});
        lp.upper = vec({3, 5});
        add("bounds_only", lp, Expect::Optimal, -7.0);
    }
    {
        auto lp = make({1, 0});
        lp.lower = vec({-kInf, -kInf});
        lp.upper = vec({kInf, kInf});
        lp.a_ub = rows(2, 2, {-1, 1, -1, -1});
        lp.b_ub = vec({0, 0});
        add("free_abs_value", lp, Expect::Optimal, 0.0);
    }
    {   // min |x - 3| via epigraph
        auto lp = make({0, 1});
        lp.lower = vec({-kInf, 0});
        lp.a_ub = rows(2, 2, {1, -1, -1, -1});
        lp.b_ub = vec({3, -3});
        add("epigraph_abs", lp, Expect::Optimal, 0.0);
    }
    {
        auto lp = make({2, 3, 1});
        lp.a_ub = rows(2, 3, {-1, -1, -1, -2, -1, 0});
        lp.b_ub = vec({-4, -3});
        add("covering", lp, Expect::Optimal, 5.5);
    }
    {
        auto lp = make({1, 1, 1, 1});
        lp.a_eq = rows(2, 4, {1, 1, 0, 0, 0, 0, 1, 1});
        lp.b_eq = vec({1, 2});
        lp.upper = vec({0.5, 0.5, 1.5, 1.5});
        add("transport_like", lp, Expect::Optimal, 3.0);
    }
    {
        auto lp = make({-1, -2, -3, -1, 0, 0});
        lp.a_ub = rows(3, 6, {1, 1, 1, 1, 1, 1, 2, 1, 0, 0, 1, 0, 0, 1, 3, 0, 0, 1});
        lp.b_ub = vec({10, 8, 9});
        add("six_var_packing", lp, Expect::Optimal);
    }
    {
        auto lp = make({1, -1, 2, -2, 1, -1, 0.5, -0.5});
        lp.a_eq = rows(1, 8, {1, 1, 1, 1, 1, 1, 1, 1});
        lp.b_eq = vec({1});
        lp.upper = VectorXd::Constant(8, 0.4);
        add("eight_var_capped_simplex", lp, Expect::Optimal, -1.4);
    }
    {
        auto lp = make({0, 0, 0});
        lp.a_eq = rows(1, 3, {1, 1, 1});
        lp.b_eq = vec({1});
        add("zero_objective", lp, Expect::Optimal, 0.0);
    }
    {   // Beale-style cycling example
        auto lp = make({-0.75, 150, -0.02, 6});
        lp.a_ub = rows(3, 4, {0.25, -60, -0.04, 9, 0.5, -90, -0.02, 3, 0, 0, 1, 0});
        lp.b_ub = vec({0, 0, 1});
        add("beale_cycling", lp, Expect::Optimal, -0.05);
    }
    {
        auto lp = make({1e3, 1e-3});
        lp.a_ub = rows(1, 2, {-1e-3, -1e3});
        lp.b_ub = vec({-1});
        add("badly_scaled", lp, Expect::Optimal, 1e-6);
    }
    {
        auto lp = make({1, 1});
        lp.a_eq = rows(1, 2, {1, -1});
        lp.b_eq = vec({0});
        lp.lower = vec({1, 1});
        add("shifted_lower", lp, Expect::Optimal, 2.0);
    }
    {
        auto lp = make({1, 2});
        lp.lower = vec({-kInf, -kInf});
        lp.upper = vec({-1, -2});
        lp.a_ub = rows(1, 2, {-1, -1});
        lp.b_ub = vec({6});
        add("upper_bounded_only", lp, Expect::Optimal, -11.0);
    }

    {
        auto lp = make({1, 1});
        lp.a_ub = rows(1, 2, {1, 1});
        lp.b_ub = vec({-1});
        add("infeasible_negative_sum", lp, Expect::Infeasible);
    }
    {
        auto lp = make({1, 0});
        lp.a_eq = rows(2, 2, {1, 1, 1, 1});
        lp.b_eq = vec({1, 2});
        add("infeasible_parallel_equalities", lp, Expect::Infeasible);
    }
    {
        auto lp = make({0, 0, 1});
        lp.a_eq = rows(1, 3, {1, 1, 1});
        lp.b_eq = vec({1});
        lp.a_ub = rows(1, 3, {-1, -1, -1});
        lp.b_ub = vec({-2});
        add("infeasible_simplex_cut", lp, Expect::Infeasible);
    }
    {
        auto lp = make({1});
        lp.lower = vec({2});
        lp.a_ub = rows(1, 1, {1});
        lp.b_ub = vec({1});
        add("infeasible_bound_conflict", lp, Expect::Infeasible);
    }

    {
        auto lp = make({-1, 0});
        lp.a_ub = rows(1, 2, {-1, 1});
        lp.b_ub = vec({1});
        add("unbounded_ray", lp, Expect::Unbounded);
    }
    {
        auto lp = make({-1, -1});
        lp.a_ub = rows(1, 2, {1, -1});
        lp.b_ub = vec({1});
        add("unbounded_diagonal", lp, Expect::Unbounded);
    }
    {
        auto lp = make({1});
        lp.lower = vec({-kInf});
        add("unbounded_free", lp, Expect::Unbounded);
    }
    return cases;
}

} // namespace mtinv::testing
