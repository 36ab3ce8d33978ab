#include "mtinv/diagnostics.hpp"

#include "mtinv/errors.hpp"
#include "mtinv/inverse.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mtinv {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd tangent_basis(std::size_t n)
{
    if (n < 2) {
        throw ValidationError("tangent_basis: need n >= 2");
    }
    const auto k = static_cast<Index>(n - 1);
    MatrixXd s(k + 1, k);
    s.topRows(k).setIdentity();
    s.row(k).setConstant(-1.0);
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(s.transpose() * s);
    return s * eig.operatorInverseSqrt();
}

SensitivityReport sensitivity(const MatrixXd& a, const MatrixXd& b, const VectorXd& q_max)
{
    const Index m = a.rows();
    const Index n = a.cols();
    if (b.rows() != m || b.cols() != n || q_max.size() != m || m == 0 || n < 2) {
        throw ValidationError("sensitivity: A, B must both be m x n (n >= 2) with one q_max per row");
    }
    if (!(q_max.array() > 0.0).all()) {
        throw ValidationError("sensitivity: q_max entries must be > 0");
    }
    const VectorXd scale = q_max.cwiseInverse();
    MatrixXd stacked(2 * m, n);
    stacked.topRows(m) = scale.asDiagonal() * a;
    stacked.bottomRows(m) = scale.asDiagonal() * b;

    SensitivityReport rep;
    rep.g = stacked * tangent_basis(static_cast<std::size_t>(n));
    const Eigen::JacobiSVD<MatrixXd> svd(rep.g);
    rep.singular_values = svd.singularValues();
    const Index cols = n - 1;
    rep.sigma_max = rep.singular_values.size() ? rep.singular_values[0] : 0.0;
    const double threshold =
        kRankRelativeTolerance * rep.sigma_max * static_cast<double>(std::max<Index>(2 * m, cols));
    rep.rank = static_cast<int>((rep.singular_values.array() > threshold).count());
    rep.sigma_min = rep.singular_values.size() < cols ? 0.0 : rep.singular_values[rep.singular_values.size() - 1];
    rep.identifiable = rep.rank == cols;
    return rep;
}

SensitivityReport sensitivity_at(const MaterialSystem& system, std::span<const double> frequencies_hz,
                                 std::span<const Complex> eps_hat)
{
    std::vector<PQVectors> pq;
    pq.reserve(frequencies_hz.size());
    for (double f : frequencies_hz) {
        pq.push_back(system_pq(system, f));
    }
    MatrixXd a;
    MatrixXd b;
    VectorXd q_max;
    residual_rows(pq, eps_hat, a, b, q_max);
    return sensitivity(a, b, q_max);
}

double error_bound(double t_star, double sigma_min, std::size_t m, double delta_r, double delta_i,
                   double eps0_modulus)
{
    if (!(sigma_min > 1e-14)) {
        throw SingularSensitivity("sigma_min = " + std::to_string(sigma_min) + " is too small for a bound");
    }
    if (m == 0 || delta_r < 0.0 || delta_i < 0.0 || !(eps0_modulus > 0.0)) {
        throw ValidationError("error_bound: need m >= 1, non-negative noise and |eps_0| > 0");
    }
    return std::sqrt(2.0 * static_cast<double>(m)) / sigma_min *
           (t_star + 2.0 * (delta_r + delta_i) / eps0_modulus);
}

double normalizer_modulus(const MaterialSystem& system, std::span<const double> frequencies_hz)
{
    double out = kInf;
    for (double f : frequencies_hz) {
        out = std::min(out, std::abs(system.normalizer_permittivity(f)));
    }
    return out;
}

} // namespace mtinv
