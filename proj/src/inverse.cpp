#include "mtinv/inverse.hpp"

#include "mtinv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mtinv {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void MeasurementSet::validate() const
{
    if (frequencies_hz.empty()) {
        throw ValidationError("measurements: need at least one frequency");
    }
    if (frequencies_hz.size() != eps_hat.size()) {
        throw ValidationError("measurements: frequency and value counts differ");
    }
    for (std::size_t k = 0; k < frequencies_hz.size(); ++k) {
        if (!(frequencies_hz[k] > 0.0) || !std::isfinite(frequencies_hz[k])) {
            throw ValidationError("measurements: frequency " + std::to_string(k) + " must be finite and > 0");
        }
        if (k > 0 && !(frequencies_hz[k] > frequencies_hz[k - 1])) {
            throw ValidationError("measurements: frequencies must be strictly increasing");
        }
        if (!std::isfinite(eps_hat[k].real()) || !std::isfinite(eps_hat[k].imag())) {
            throw ValidationError("measurements: value " + std::to_string(k) + " is not finite");
        }
    }
}

MeasurementSet normalize(const MaterialSystem& system, std::span<const RawMeasurement> raw)
{
    std::vector<RawMeasurement> sorted(raw.begin(), raw.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const RawMeasurement& a, const RawMeasurement& b) { return a.frequency_hz < b.frequency_hz; });
    MeasurementSet set;
    set.normalizer_index = system.normalizer_index;
    for (const auto& r : sorted) {
        set.frequencies_hz.push_back(r.frequency_hz);
        set.eps_hat.push_back(r.eps / system.normalizer_permittivity(r.frequency_hz));
    }
    set.validate();
    return set;
}

CharnesCooperLP assemble_cc(const PQVectors& pq, double eps_hat, bool enforce_dominance)
{
    const auto n = static_cast<Index>(pq.size());
    if (n < 2) {
        throw ValidationError("assemble_cc: need at least two components");
    }
    const Index k = n - 1;
    CharnesCooperLP cc;
    cc.p0 = pq.p[0].real();
    cc.x = pq.p.tail(k).real().array() - cc.p0;
    cc.y = pq.q.tail(k).real().array() - cc.p0;
    cc.eps_hat = eps_hat;
    cc.enforce_dominance = enforce_dominance;

    // Variables: z (k), s, t.
    const Index nv = k + 2;
    const Index s_col = k;
    const Index t_col = k + 1;
    LPProblem& lp = cc.problem;
    lp.c = VectorXd::Unit(nv, t_col);

    lp.a_eq = MatrixXd::Zero(1, nv);
    lp.a_eq.block(0, 0, 1, k) = cc.y.transpose();
    lp.a_eq(0, s_col) = cc.p0;
    lp.b_eq = VectorXd::Ones(1);

    const Index rows = 3 + (enforce_dominance ? k : 0);
    lp.a_ub = MatrixXd::Zero(rows, nv);
    lp.b_ub = VectorXd::Zero(rows);
    // x.z + p0 s - t <= eps_hat
    lp.a_ub.block(0, 0, 1, k) = cc.x.transpose();
    lp.a_ub(0, s_col) = cc.p0;
    lp.a_ub(0, t_col) = -1.0;
    lp.b_ub[0] = eps_hat;
    // -(x.z + p0 s) - t <= -eps_hat
    lp.a_ub.block(1, 0, 1, k) = -cc.x.transpose();
    lp.a_ub(1, s_col) = -cc.p0;
    lp.a_ub(1, t_col) = -1.0;
    lp.b_ub[1] = -eps_hat;
    // 1.z <= s
    lp.a_ub.block(2, 0, 1, k).setOnes();
    lp.a_ub(2, s_col) = -1.0;
    if (enforce_dominance) {
        // z_j <= s - 1.z
        for (Index j = 0; j < k; ++j) {
            lp.a_ub.block(3 + j, 0, 1, k).setOnes();
            lp.a_ub(3 + j, j) += 1.0;
            lp.a_ub(3 + j, s_col) = -1.0;
        }
    }
    lp.lower = VectorXd::Zero(nv);
    return cc;
}

VectorXd recover_phi_cc(const LPSolution& solution)
{
    const Index nv = solution.x.size();
    if (nv < 3) {
        throw ValidationError("recover_phi_cc: solution has too few variables");
    }
    const Index k = nv - 2;
    const double s = solution.x[k];
    if (!(s > 1e-12)) {
        throw DegenerateScale("Charnes-Cooper scale s = " + std::to_string(s) + " is not positive");
    }
    VectorXd phi(k + 1);
    phi.tail(k) = solution.x.head(k) / s;
    phi[0] = 1.0 - phi.tail(k).sum();
    return phi;
}

void residual_rows(std::span<const PQVectors> pq, std::span<const Complex> eps_hat, MatrixXd& a, MatrixXd& b,
                   VectorXd& q_max)
{
    if (pq.empty() || pq.size() != eps_hat.size()) {
        throw ValidationError("residual_rows: need one p, q pair per measurement");
    }
    const auto m = static_cast<Index>(pq.size());
    const auto n = static_cast<Index>(pq.front().size());
    a.resize(m, n);
    b.resize(m, n);
    q_max.resize(m);
    for (Index k = 0; k < m; ++k) {
        const auto& v = pq[static_cast<std::size_t>(k)];
        if (static_cast<Index>(v.size()) != n) {
            throw ValidationError("residual_rows: component count differs between frequencies");
        }
        const Eigen::VectorXcd u = v.p - eps_hat[static_cast<std::size_t>(k)] * v.q;
        a.row(k) = u.real().transpose();
        b.row(k) = u.imag().transpose();
        q_max[k] = v.q.cwiseAbs().maxCoeff();
        if (!(q_max[k] > 0.0)) {
            throw SingularDenominator("q vanishes at frequency index " + std::to_string(k));
        }
    }
}

EpigraphLP assemble_multifreq(std::span<const PQVectors> pq, const MeasurementSet& measurements,
                              bool enforce_dominance)
{
    measurements.validate();
    if (pq.size() != measurements.size()) {
        throw ValidationError("assemble_multifreq: " + std::to_string(pq.size()) + " p/q sets for " +
                              std::to_string(measurements.size()) + " measurements");
    }
    EpigraphLP ep;
    residual_rows(pq, measurements.eps_hat, ep.a, ep.b, ep.q_max);
    const Index n = ep.a.cols();
    const Index m = ep.a.rows();
    ep.n = static_cast<std::size_t>(n);
    ep.m = static_cast<std::size_t>(m);
    ep.enforce_dominance = enforce_dominance;

    // Variables: phi (n), t, c (m), d (m).
    const Index t_col = n;
    const Index c_col = n + 1;
    const Index d_col = n + 1 + m;
    const Index nv = n + 1 + 2 * m;
    LPProblem& lp = ep.problem;
    lp.c = VectorXd::Unit(nv, t_col);

    lp.a_eq = MatrixXd::Zero(1, nv);
    lp.a_eq.block(0, 0, 1, n).setOnes();
    lp.b_eq = VectorXd::Ones(1);

    const Index dom_rows = enforce_dominance ? n - 1 : 0;
    const Index rows = 5 * m + dom_rows;
    lp.a_ub = MatrixXd::Zero(rows, nv);
    lp.b_ub = VectorXd::Zero(rows);
    for (Index k = 0; k < m; ++k) {
        const Index r = 5 * k;
        lp.a_ub.block(r + 0, 0, 1, n) = ep.a.row(k);
        lp.a_ub.block(r + 1, 0, 1, n) = -ep.a.row(k);
        lp.a_ub(r + 0, c_col + k) = -1.0;
        lp.a_ub(r + 1, c_col + k) = -1.0;
        lp.a_ub.block(r + 2, 0, 1, n) = ep.b.row(k);
        lp.a_ub.block(r + 3, 0, 1, n) = -ep.b.row(k);
        lp.a_ub(r + 2, d_col + k) = -1.0;
        lp.a_ub(r + 3, d_col + k) = -1.0;
        lp.a_ub(r + 4, c_col + k) = 1.0;
        lp.a_ub(r + 4, d_col + k) = 1.0;
        lp.a_ub(r + 4, t_col) = -ep.q_max[k];
    }
    for (Index i = 1; i <= dom_rows; ++i) {
        const Index r = 5 * m + i - 1;
        lp.a_ub(r, i) = 1.0;
        lp.a_ub(r, 0) = -1.0;
    }
    lp.lower = VectorXd::Zero(nv);
    return ep;
}

std::string_view to_string(Formulation f)
{
    return f == Formulation::CharnesCooper ? "charnes_cooper" : "multi_frequency";
}

namespace {

VectorXd clamp_small(VectorXd phi)
{
    for (Index i = 0; i < phi.size(); ++i) {
        if (phi[i] < kFractionClamp) {
            phi[i] = 0.0;
        }
    }
    return phi;
}

} // namespace

RecoveryReport solve_multifreq(const EpigraphLP& lp, const LPOptions& options)
{
    const LPSolution sol = solve_lp(lp.problem, options);
    RecoveryReport report;
    report.formulation = Formulation::MultiFrequency;
    report.status = sol.status;
    report.iterations = sol.iterations;
    const auto n = static_cast<Index>(lp.n);
    report.phi_star = clamp_small(sol.x.head(n));
    report.t_star = sol.x[n];
    return report;
}

RecoveryReport solve_cc(const CharnesCooperLP& lp, const LPOptions& options)
{
    const LPSolution sol = solve_lp(lp.problem, options);
    RecoveryReport report;
    report.formulation = Formulation::CharnesCooper;
    report.status = sol.status;
    report.iterations = sol.iterations;
    report.t_star = sol.x[sol.x.size() - 1];
    if (sol.status == LPStatus::Optimal) {
        report.phi_star = clamp_small(recover_phi_cc(sol));
    } else {
        report.phi_star = VectorXd::Constant(sol.x.size() - 1, std::numeric_limits<double>::quiet_NaN());
    }
    return report;
}

RecoveryReport invert(const MaterialSystem& system, const MeasurementSet& measurements, const InvertOptions& options)
{
    system.validate();
    measurements.validate();
    if (measurements.normalizer_index != system.normalizer_index) {
        throw ValidationError("measurements were normalized by component " +
                              std::to_string(measurements.normalizer_index) + " but the system normalizes by " +
                              std::to_string(system.normalizer_index));
    }
    std::vector<PQVectors> pq;
    pq.reserve(measurements.size());
    for (double f : measurements.frequencies_hz) {
        pq.push_back(system_pq(system, f));
    }
    const EpigraphLP lp = assemble_multifreq(pq, measurements, options.enforce_dominance);
    RecoveryReport report = solve_multifreq(lp, options.lp);
    switch (report.status) {
    case LPStatus::Optimal:
        return report;
    case LPStatus::Infeasible:
    case LPStatus::Unbounded:
        throw InfeasibleMeasurement("recovery LP is " + std::string(to_string(report.status)));
    case LPStatus::NumericalFailure:
        break;
    }
    throw NumericalFailure("recovery LP did not converge after " + std::to_string(report.iterations) +
                           " iterations");
}

} // namespace mtinv
