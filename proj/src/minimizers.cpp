#include "mtinv/minimizers.hpp"

#include "mtinv/errors.hpp"
#include "mtinv/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace mtinv {
namespace {

using Eigen::Index;

void require_dimension(std::size_t n)
{
    if (n < 2) {
        throw ValidationError("need at least two components, got " + std::to_string(n));
    }
    if (n > 31) {
        throw ValidationError("ordered simplex enumeration limited to 31 components");
    }
}

std::vector<std::size_t> subset_of(std::uint32_t mask)
{
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < 32; ++i) {
        if (mask & (1u << i)) {
            s.push_back(i + 1);
        }
    }
    return s;
}

// Masks over {1..n-1} (bit i-1 <-> component i), by popcount then value.
std::vector<std::uint32_t> subset_masks(std::size_t n)
{
    std::vector<std::uint32_t> masks(std::size_t{1} << (n - 1));
    for (std::uint32_t m = 0; m < masks.size(); ++m) {
        masks[m] = m;
    }
    auto colex = [](std::uint32_t mask) {
        // Lexicographic order on the sorted element list.
        std::uint64_t key = 0;
        for (std::size_t e : subset_of(mask)) {
            key = key * 64 + e;
        }
        return key;
    };
    std::sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
        const int pa = __builtin_popcount(a);
        const int pb = __builtin_popcount(b);
        if (pa != pb) {
            return pa < pb;
        }
        return colex(a) < colex(b);
    });
    return masks;
}

Eigen::VectorXd vertex_phi(std::size_t n, const std::vector<std::size_t>& subset)
{
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Index>(n));
    const double w = 1.0 / static_cast<double>(subset.size() + 1);
    phi[0] = w;
    for (std::size_t i : subset) {
        phi[static_cast<Index>(i)] = w;
    }
    return phi;
}

} // namespace

UVector build_u(const PQVectors& pq, Complex eps_hat)
{
    return {pq.p - eps_hat * pq.q, eps_hat};
}

SignPartition sign_partition(const Eigen::VectorXd& u, double rel_tol)
{
    SignPartition part;
    const double scale = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
    const double tol = rel_tol * scale;
    for (Index i = 0; i < u.size(); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (std::abs(u[i]) <= tol) {
            part.zero.push_back(idx);
        } else if (u[i] > 0.0) {
            part.positive.push_back(idx);
        } else {
            part.negative.push_back(idx);
        }
    }
    return part;
}

MinimizerSet simplex_minimizers(const Eigen::VectorXd& u)
{
    const auto n = static_cast<std::size_t>(u.size());
    require_dimension(n);
    const SignPartition part = sign_partition(u);

    MinimizerSet set;
    set.domain = Domain::Simplex;
    for (std::size_t i : part.positive) {
        for (std::size_t j : part.negative) {
            const double ui = u[static_cast<Index>(i)];
            const double uj = u[static_cast<Index>(j)];
            Eigen::VectorXd phi = Eigen::VectorXd::Zero(u.size());
            phi[static_cast<Index>(i)] = uj / (uj - ui);
            phi[static_cast<Index>(j)] = -ui / (uj - ui);
            set.generators.push_back(std::move(phi));
        }
    }
    for (std::size_t i : part.zero) {
        set.generators.push_back(Eigen::VectorXd::Unit(u.size(), static_cast<Index>(i)));
    }
    if (set.generators.empty()) {
        throw EmptyMinimizerSet("u has no sign change on the simplex: the measurement lies outside the "
                                "range spanned by the component permittivities");
    }
    return set;
}

MinimizerSet simplex_minimizers(const UVector& u)
{
    return simplex_minimizers(Eigen::VectorXd(u.u.real()));
}

std::vector<OrderedVertex> ordered_vertices(std::size_t n)
{
    require_dimension(n);
    std::vector<OrderedVertex> out;
    for (std::uint32_t mask : subset_masks(n)) {
        auto subset = subset_of(mask);
        Eigen::VectorXd phi = vertex_phi(n, subset);
        out.push_back({std::move(subset), std::move(phi)});
    }
    return out;
}

std::vector<OrderedEdge> ordered_edges(std::size_t n)
{
    require_dimension(n);
    std::vector<OrderedEdge> out;
    for (std::uint32_t mask : subset_masks(n)) {
        for (std::size_t k = 1; k < n; ++k) {
            if (!(mask & (1u << (k - 1)))) {
                out.push_back({subset_of(mask), k});
            }
        }
    }
    return out;
}

double vertex_value(const Eigen::VectorXd& u, const std::vector<std::size_t>& subset)
{
    double sum = u[0];
    for (std::size_t i : subset) {
        sum += u[static_cast<Index>(i)];
    }
    return sum / static_cast<double>(subset.size() + 1);
}

MinimizerSet ordered_simplex_minimizers(const Eigen::VectorXd& u)
{
    const auto n = static_cast<std::size_t>(u.size());
    require_dimension(n);
    const double tol = kZeroSignTolerance * u.cwiseAbs().maxCoeff();

    MinimizerSet set;
    set.domain = Domain::OrderedSimplex;
    for (const auto& v : ordered_vertices(n)) {
        if (std::abs(vertex_value(u, v.subset)) <= tol) {
            set.generators.push_back(v.phi);
        }
    }
    for (const auto& e : ordered_edges(n)) {
        auto next = e.subset;
        next.insert(std::upper_bound(next.begin(), next.end(), e.k), e.k);
        const double u_s = vertex_value(u, e.subset);
        const double u_next = vertex_value(u, next);
        if (std::abs(u_s) <= tol || std::abs(u_next) <= tol || u_s * u_next >= 0.0) {
            continue;
        }
        const double t = u_next / (u_next - u_s);
        set.generators.push_back(t * vertex_phi(n, e.subset) + (1.0 - t) * vertex_phi(n, next));
    }
    if (set.generators.empty()) {
        throw EmptyMinimizerSet("u . phi has no sign change on the ordered simplex: the measurement is not "
                                "reproducible with phi_0 >= phi_i");
    }
    return set;
}

MinimizerSet ordered_simplex_minimizers(const UVector& u)
{
    return ordered_simplex_minimizers(Eigen::VectorXd(u.u.real()));
}

bool in_convex_hull(const MinimizerSet& set, const Eigen::VectorXd& phi, double tol)
{
    if (set.generators.empty()) {
        return false;
    }
    const Index n = phi.size();
    const auto g = static_cast<Index>(set.generators.size());
    // Variables (lambda, e+, e-): min 1^T (e+ + e-) s.t. G lambda + e+ - e- = phi, 1^T lambda = 1.
    LPProblem lp;
    lp.c = Eigen::VectorXd::Zero(g + 2 * n);
    lp.c.tail(2 * n).setOnes();
    lp.a_eq = Eigen::MatrixXd::Zero(n + 1, g + 2 * n);
    lp.b_eq = Eigen::VectorXd::Zero(n + 1);
    for (Index k = 0; k < g; ++k) {
        const auto& gen = set.generators[static_cast<std::size_t>(k)];
        if (gen.size() != n) {
            throw ValidationError("in_convex_hull: generator dimension mismatch");
        }
        lp.a_eq.block(0, k, n, 1) = gen;
        lp.a_eq(n, k) = 1.0;
    }
    lp.a_eq.block(0, g, n, n).setIdentity();
    lp.a_eq.block(0, g + n, n, n) = -Eigen::MatrixXd::Identity(n, n);
    lp.b_eq.head(n) = phi;
    lp.b_eq[n] = 1.0;
    const LPSolution sol = solve_lp(lp);
    return sol.status == LPStatus::Optimal && sol.objective <= tol;
}

} // namespace mtinv
