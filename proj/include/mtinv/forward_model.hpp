#pragma once

// Eshelby-Mori-Tanaka effective permittivity of an n-component composite.
// Component 0 is the matrix; components 1..n-1 are inclusions.

#include "mtinv/permittivity.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace mtinv {

/// Spheroid aspect ratio l/d. alpha == 1 is a sphere.
struct SpheroidShape {
    double alpha = 1.0;

    static constexpr SpheroidShape sphere() noexcept { return {}; }
};

/// Within this distance of 1 the sphere branch (Q = 1/3) is used.
inline constexpr double kSphereAlphaTolerance = 1e-6;

/// Transverse depolarization factor Q of a spheroid; the depolarization
/// tensor is diag(Q, Q, 1 - 2Q).
double depolarization_q(SpheroidShape shape);

/// Orientation-averaged concentration factor
///   R = (1/3) sum_j [1 + A_jj (eps_i - eps_0) / eps_0]^-1.
/// For a sphere this is 3 / (3 + r) with r = eps_i / eps_0 - 1.
Complex concentration_r(Complex eps_i, Complex eps_0, SpheroidShape shape);

/// Throws ValidationError unless every entry is in [0, 1] and they sum to 1
/// within `tol`.
void validate_fractions(const Eigen::VectorXd& phi, double tol = 1e-12);

/// Effective permittivity sum(phi_i eps_i R_i) / sum(phi_i R_i).
///
/// `shapes` is either empty (all spheres) or has one entry per component;
/// the matrix entry is ignored.
Complex effective_permittivity(std::span<const Complex> eps, const Eigen::VectorXd& phi,
                               std::span<const SpheroidShape> shapes = {});

/// Contrasts r_i = eps_i / eps_0 - 1 for i = 1..n-1.
std::vector<Complex> contrasts(std::span<const Complex> eps);

/// sum_i a_i x_i without conjugation (Eigen's dot() conjugates complex lhs).
inline Complex linear_form(const Eigen::VectorXcd& a, const Eigen::VectorXd& x)
{
    return (a.array() * x.array().cast<Complex>()).sum();
}

/// Coefficients of the linear-fractional form eps_bar = (p . phi) / (q . phi).
struct PQVectors {
    Eigen::VectorXcd p;
    Eigen::VectorXcd q;
    double frequency_hz = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(p.size()); }

    /// (p . phi) / (q . phi)
    [[nodiscard]] Complex ratio(const Eigen::VectorXd& phi) const;
};

/// Build p, q from the n-1 inclusion contrasts (spherical inclusions only):
///   p_0 = q_0 = prod_k (3 + r_k)
///   p_i = 3 (1 + r_i) prod_{j != i} (3 + r_j)
///   q_i = 3 prod_{j != i} (3 + r_j)
PQVectors build_pq(std::span<const Complex> contrasts, double frequency_hz = 0.0);

} // namespace mtinv
