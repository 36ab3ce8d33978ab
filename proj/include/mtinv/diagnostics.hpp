#pragma once

// Constraint sensitivity of the multi-frequency recovery LP and the
// resulting a-priori error bound.

#include "mtinv/forward_model.hpp"
#include "mtinv/material_system.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>

namespace mtinv {

/// Orthonormal n x (n-1) basis V = S (S^T S)^{-1/2} of {d : 1^T d = 0},
/// with S = [I_{n-1}; -1^T].
Eigen::MatrixXd tangent_basis(std::size_t n);

struct SensitivityReport {
    /// G = [Q A; Q B] V, Q = diag(1 / q_max), size 2m x (n-1).
    Eigen::MatrixXd g;
    /// Descending.
    Eigen::VectorXd singular_values;
    int rank = 0;
    /// Zero when G has fewer rows than columns.
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    bool identifiable = false;
    std::optional<double> bound;
};

/// Relative rank threshold: sigma counts iff sigma > 1e-10 sigma_max max(2m, n-1).
inline constexpr double kRankRelativeTolerance = 1e-10;

SensitivityReport sensitivity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& q_max);

/// G of the system at normalized values `eps_hat` (one per frequency).
SensitivityReport sensitivity_at(const MaterialSystem& system, std::span<const double> frequencies_hz,
                                 std::span<const Complex> eps_hat);

/// sqrt(2m) / sigma_min * (t* + 2 (delta_R + delta_I) / |eps_0|).
/// Throws SingularSensitivity when sigma_min <= 1e-14.
double error_bound(double t_star, double sigma_min, std::size_t m, double delta_r, double delta_i,
                   double eps0_modulus);

/// min_k |eps_norm(f_k)|, the normalizer modulus used in the bound.
double normalizer_modulus(const MaterialSystem& system, std::span<const double> frequencies_hz);

} // namespace mtinv
