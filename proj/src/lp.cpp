#include "mtinv/lp.hpp"

#include "mtinv/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mtinv {

std::string_view to_string(LPStatus status)
{
    switch (status) {
    case LPStatus::Optimal:
        return "optimal";
    case LPStatus::Infeasible:
        return "infeasible";
    case LPStatus::Unbounded:
        return "unbounded";
    case LPStatus::NumericalFailure:
        return "numerical_failure";
    }
    return "unknown";
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

bool all_finite(const MatrixXd& m)
{
    return m.size() == 0 || m.allFinite();
}

double inf_norm(const VectorXd& v)
{
    return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

// min c^T X + offset, A X = b, X >= 0, with the affine map back to the
// caller's variables: x = x0 + T X.
struct StandardForm {
    MatrixXd a;
    VectorXd b;
    VectorXd c;
    double offset = 0.0;
    VectorXd x0;
    MatrixXd t;
};

StandardForm to_standard_form(const LPProblem& lp)
{
    const Index nv = lp.num_variables();
    const Index m_eq = lp.a_eq.rows();
    const Index m_ub = lp.a_ub.rows();
    const VectorXd lower = lp.lower.size() ? lp.lower : VectorXd::Zero(nv);
    const VectorXd upper = lp.upper.size() ? lp.upper : VectorXd::Constant(nv, kInf);

    // Column layout of X: one column per bounded variable, two per free one.
    StandardForm sf;
    sf.x0 = VectorXd::Zero(nv);
    std::vector<std::pair<Index, double>> columns; // (variable, sign)
    std::vector<std::pair<Index, double>> range_rows; // (X column, upper - lower)
    for (Index j = 0; j < nv; ++j) {
        const bool lo = std::isfinite(lower[j]);
        const bool hi = std::isfinite(upper[j]);
        if (lo) {
            sf.x0[j] = lower[j];
            columns.emplace_back(j, 1.0);
            if (hi) {
                range_rows.emplace_back(static_cast<Index>(columns.size()) - 1, upper[j] - lower[j]);
            }
        } else if (hi) {
            sf.x0[j] = upper[j];
            columns.emplace_back(j, -1.0);
        } else {
            columns.emplace_back(j, 1.0);
            columns.emplace_back(j, -1.0);
        }
    }
    const Index n_x = static_cast<Index>(columns.size());
    const Index n_range = static_cast<Index>(range_rows.size());

    sf.t = MatrixXd::Zero(nv, n_x);
    for (Index k = 0; k < n_x; ++k) {
        sf.t(columns[static_cast<std::size_t>(k)].first, k) = columns[static_cast<std::size_t>(k)].second;
    }

    const Index rows = m_eq + m_ub + n_range;
    const Index cols = n_x + m_ub + n_range;
    sf.a = MatrixXd::Zero(rows, cols);
    sf.b = VectorXd::Zero(rows);
    if (m_eq > 0) {
        sf.a.block(0, 0, m_eq, n_x) = lp.a_eq * sf.t;
        sf.b.head(m_eq) = lp.b_eq - lp.a_eq * sf.x0;
    }
    if (m_ub > 0) {
        sf.a.block(m_eq, 0, m_ub, n_x) = lp.a_ub * sf.t;
        sf.a.block(m_eq, n_x, m_ub, m_ub).setIdentity();
        sf.b.segment(m_eq, m_ub) = lp.b_ub - lp.a_ub * sf.x0;
    }
    for (Index k = 0; k < n_range; ++k) {
        const Index row = m_eq + m_ub + k;
        sf.a(row, range_rows[static_cast<std::size_t>(k)].first) = 1.0;
        sf.a(row, n_x + m_ub + k) = 1.0;
        sf.b[row] = range_rows[static_cast<std::size_t>(k)].second;
    }
    sf.c = VectorXd::Zero(cols);
    sf.c.head(n_x) = sf.t.transpose() * lp.c;
    sf.offset = lp.c.dot(sf.x0);
    return sf;
}

// Solves (A D A^T) v = r for the current scaling D, degrading from Cholesky
// to LDL^T to a rank-revealing least-squares solve.
class NormalEquations {
public:
    NormalEquations(const MatrixXd& a, const VectorXd& d)
    {
        m_ = a * d.asDiagonal() * a.transpose();
        llt_.compute(m_);
        if (llt_.info() == Eigen::Success) {
            kind_ = Kind::Cholesky;
            return;
        }
        ldlt_.compute(m_);
        if (ldlt_.info() == Eigen::Success && ldlt_.isPositive()) {
            kind_ = Kind::Ldlt;
            return;
        }
        cod_.compute(m_);
        kind_ = Kind::LeastSquares;
    }

    [[nodiscard]] VectorXd solve(const VectorXd& r) const
    {
        if (m_.rows() == 0) {
            return VectorXd::Zero(0);
        }
        switch (kind_) {
        case Kind::Cholesky:
            return llt_.solve(r);
        case Kind::Ldlt:
            return ldlt_.solve(r);
        case Kind::LeastSquares:
            break;
        }
        return cod_.solve(r);
    }

private:
    enum class Kind { Cholesky, Ldlt, LeastSquares };

    MatrixXd m_;
    Eigen::LLT<MatrixXd> llt_;
    Eigen::LDLT<MatrixXd> ldlt_;
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod_;
    Kind kind_ = Kind::LeastSquares;
};

// Complementarity below this fraction of its starting value leaves nothing
// for further steps to gain.
constexpr double kMuFloor = 1e-18;
constexpr int kStallIterations = 20;

struct Iterate {
    VectorXd x;
    VectorXd y;
    VectorXd z;
    double tau = 1.0;
    double kappa = 1.0;
};

struct Direction {
    VectorXd dx;
    VectorXd dy;
    VectorXd dz;
    double dtau = 0.0;
    double dkappa = 0.0;
};

double max_step(const Iterate& it, const Direction& d, double fraction)
{
    double alpha = 1.0;
    for (Index i = 0; i < it.x.size(); ++i) {
        if (d.dx[i] < 0.0) {
            alpha = std::min(alpha, fraction * it.x[i] / -d.dx[i]);
        }
        if (d.dz[i] < 0.0) {
            alpha = std::min(alpha, fraction * it.z[i] / -d.dz[i]);
        }
    }
    if (d.dtau < 0.0) {
        alpha = std::min(alpha, fraction * it.tau / -d.dtau);
    }
    if (d.dkappa < 0.0) {
        alpha = std::min(alpha, fraction * it.kappa / -d.dkappa);
    }
    return alpha;
}

// Predictor-corrector direction for the homogeneous self-dual embedding.
Direction search_direction(const StandardForm& sf, const Iterate& it)
{
    const MatrixXd& a = sf.a;
    const VectorXd& b = sf.b;
    const VectorXd& c = sf.c;
    const auto n = static_cast<double>(it.x.size());

    const VectorXd r_p = b * it.tau - a * it.x;
    const VectorXd r_d = c * it.tau - a.transpose() * it.y - it.z;
    const double r_g = c.dot(it.x) - b.dot(it.y) + it.kappa;
    const double mu = (it.x.dot(it.z) + it.tau * it.kappa) / (n + 1.0);

    const VectorXd d_inv = it.x.cwiseQuotient(it.z);
    const NormalEquations normal(a, d_inv);

    auto sym_solve = [&](const VectorXd& r1, const VectorXd& r2, VectorXd& u, VectorXd& v) {
        v = normal.solve(r2 + a * d_inv.cwiseProduct(r1));
        u = d_inv.cwiseProduct(a.transpose() * v - r1);
    };

    VectorXd p;
    VectorXd q;
    sym_solve(c, b, p, q);

    Direction d;
    double gamma = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const double eta = 1.0 - gamma;
        VectorXd r_xs = VectorXd::Constant(it.x.size(), gamma * mu) - it.x.cwiseProduct(it.z);
        double r_tk = gamma * mu - it.tau * it.kappa;
        if (pass == 1) {
            r_xs -= d.dx.cwiseProduct(d.dz);
            r_tk -= d.dtau * d.dkappa;
        }
        VectorXd u;
        VectorXd v;
        sym_solve(eta * r_d - r_xs.cwiseQuotient(it.x), eta * r_p, u, v);

        d.dtau = (eta * r_g + r_tk / it.tau - (-c.dot(u) + b.dot(v))) /
                 (it.kappa / it.tau + (-c.dot(p) + b.dot(q)));
        d.dx = u + p * d.dtau;
        d.dy = v + q * d.dtau;
        d.dz = (r_xs - it.z.cwiseProduct(d.dx)).cwiseQuotient(it.x);
        d.dkappa = (r_tk - it.kappa * d.dtau) / it.tau;

        const double alpha = max_step(it, d, 1.0);
        gamma = (1.0 - alpha) * (1.0 - alpha) * std::min(0.1, 1.0 - alpha);
    }
    return d;
}

bool direction_finite(const Direction& d)
{
    return d.dx.allFinite() && d.dy.allFinite() && d.dz.allFinite() && std::isfinite(d.dtau) &&
           std::isfinite(d.dkappa);
}

struct Residuals {
    double primal;
    double dual;
    double gap;
};

// Relative residuals of the scaled-back iterate (x, y, z) / tau.
Residuals relative_residuals(const StandardForm& sf, const Iterate& it)
{
    const VectorXd x = it.x / it.tau;
    const VectorXd y = it.y / it.tau;
    const VectorXd z = it.z / it.tau;
    const double primal = inf_norm(sf.a * x - sf.b) / (1.0 + inf_norm(sf.b));
    const double dual = inf_norm(sf.a.transpose() * y + z - sf.c) / (1.0 + inf_norm(sf.c));
    const double pobj = sf.c.dot(x);
    const double gap = std::abs(pobj - sf.b.dot(y)) / (1.0 + std::abs(pobj));
    return {primal, dual, gap};
}

struct InfeasibilityIndicators {
    double rho_p;
    double rho_d;
    double rho_g;
    double rho_mu;
};

InfeasibilityIndicators indicators(const StandardForm& sf, const Iterate& it, double r_p0, double r_d0,
                                   double r_g0, double mu0)
{
    const auto n = static_cast<double>(it.x.size());
    const double r_p = (sf.b * it.tau - sf.a * it.x).norm();
    const double r_d = (sf.c * it.tau - sf.a.transpose() * it.y - it.z).norm();
    const double r_g = std::abs(it.kappa + sf.c.dot(it.x) - sf.b.dot(it.y));
    const double mu = (it.x.dot(it.z) + it.tau * it.kappa) / (n + 1.0);
    return {r_p / std::max(1.0, r_p0), r_d / std::max(1.0, r_d0), r_g / std::max(1.0, r_g0), mu / mu0};
}

double primal_violation(const LPProblem& lp, const VectorXd& x)
{
    double worst = 0.0;
    if (lp.a_eq.rows() > 0) {
        worst = std::max(worst, inf_norm(lp.a_eq * x - lp.b_eq));
    }
    if (lp.a_ub.rows() > 0) {
        worst = std::max(worst, std::max(0.0, (lp.a_ub * x - lp.b_ub).maxCoeff()));
    }
    for (Index j = 0; j < x.size(); ++j) {
        const double lo = lp.lower.size() ? lp.lower[j] : 0.0;
        const double hi = lp.upper.size() ? lp.upper[j] : kInf;
        worst = std::max({worst, lo - x[j], x[j] - hi});
    }
    return worst;
}

} // namespace

void validate(const LPProblem& lp)
{
    const Index nv = lp.num_variables();
    auto fail = [](const std::string& what) { throw ValidationError("LP: " + what); };
    if (nv == 0) {
        fail("no variables");
    }
    if (lp.a_eq.rows() != lp.b_eq.size() || (lp.a_eq.rows() > 0 && lp.a_eq.cols() != nv)) {
        fail("equality block has inconsistent dimensions");
    }
    if (lp.a_ub.rows() != lp.b_ub.size() || (lp.a_ub.rows() > 0 && lp.a_ub.cols() != nv)) {
        fail("inequality block has inconsistent dimensions");
    }
    if ((lp.lower.size() != 0 && lp.lower.size() != nv) || (lp.upper.size() != 0 && lp.upper.size() != nv)) {
        fail("bounds must be empty or one per variable");
    }
    if (!all_finite(lp.c) || !all_finite(lp.a_eq) || !all_finite(lp.b_eq) || !all_finite(lp.a_ub) ||
        !all_finite(lp.b_ub)) {
        fail("non-finite coefficient");
    }
    for (Index j = 0; j < nv; ++j) {
        const double lo = lp.lower.size() ? lp.lower[j] : 0.0;
        const double hi = lp.upper.size() ? lp.upper[j] : kInf;
        if (std::isnan(lo) || std::isnan(hi) || lo == kInf || hi == -kInf) {
            fail("invalid bound on variable " + std::to_string(j));
        }
    }
}

LPSolution solve_lp(const LPProblem& problem, const LPOptions& options)
{
    validate(problem);
    const StandardForm sf = to_standard_form(problem);
    const Index n = sf.a.cols();

    LPSolution out;
    auto finish = [&](const Iterate& it, LPStatus status, int iterations) {
        out.status = status;
        out.iterations = iterations;
        const VectorXd xs = it.x / it.tau;
        out.x = sf.x0 + sf.t * xs.head(sf.t.cols());
        out.primal_residual = primal_violation(problem, out.x);
        out.dual_residual = inf_norm(sf.a.transpose() * (it.y / it.tau) + it.z / it.tau - sf.c);
        out.complementarity = xs.dot(it.z / it.tau);
        switch (status) {
        case LPStatus::Optimal:
        case LPStatus::NumericalFailure:
            out.objective = problem.c.dot(out.x);
            break;
        case LPStatus::Unbounded:
            out.objective = -kInf;
            break;
        case LPStatus::Infeasible:
            out.objective = kInf;
            break;
        }
        return out;
    };

    Iterate it;
    it.x = VectorXd::Ones(n);
    it.y = VectorXd::Zero(sf.a.rows());
    it.z = VectorXd::Ones(n);

    const double r_p0 = (sf.b - sf.a * it.x).norm();
    const double r_d0 = (sf.c - sf.a.transpose() * it.y - it.z).norm();
    const double r_g0 = std::abs(1.0 + sf.c.dot(it.x) - sf.b.dot(it.y));
    const double mu0 = (it.x.dot(it.z) + 1.0) / (static_cast<double>(n) + 1.0);

    auto worst_residual = [&](const Iterate& cur) {
        const Residuals r = relative_residuals(sf, cur);
        return std::max({r.primal, r.dual, r.gap});
    };

    Iterate best = it;
    double best_residual = kInf;
    int best_iteration = 0;
    int iteration = 0;
    while (true) {
        const double residual = worst_residual(it);
        if (residual <= options.tolerance) {
            return finish(it, LPStatus::Optimal, iteration);
        }
        if (residual < best_residual) {
            best = it;
            best_residual = residual;
            best_iteration = iteration;
        }
        const double tol = options.acceptance_tolerance;
        const InfeasibilityIndicators ind = indicators(sf, it, r_p0, r_d0, r_g0, mu0);
        const bool certificate = (ind.rho_p < tol && ind.rho_d < tol && ind.rho_g < tol &&
                                  it.tau < tol * std::max(1.0, it.kappa)) ||
                                 (ind.rho_mu < tol && it.tau < tol * std::min(1.0, it.kappa));
        if (certificate) {
            // b^T y > 0 certifies primal infeasibility; otherwise c^T x < 0
            // certifies an unbounded direction.
            return finish(it, sf.b.dot(it.y) > tol ? LPStatus::Infeasible : LPStatus::Unbounded, iteration);
        }
        if (iteration >= options.max_iterations || ind.rho_mu < kMuFloor ||
            iteration - best_iteration > kStallIterations) {
            break;
        }
        ++iteration;

        const Direction d = search_direction(sf, it);
        if (!direction_finite(d)) {
            break;
        }
        const double alpha = max_step(it, d, options.step_fraction);
        if (!(alpha > 1e-12)) {
            break;
        }
        it.x += alpha * d.dx;
        it.y += alpha * d.dy;
        it.z += alpha * d.dz;
        it.tau += alpha * d.dtau;
        it.kappa += alpha * d.dkappa;
    }
    // Stalled or out of iterations: fall back to the best iterate seen and
    // accept it only if the looser tolerance holds.
    const bool acceptable = best_residual <= options.acceptance_tolerance;
    return finish(best, acceptable ? LPStatus::Optimal : LPStatus::NumericalFailure, iteration);
}

} // namespace mtinv
