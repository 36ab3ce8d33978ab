#pragma once

// Linear programs that recover volume fractions from measured composite
// permittivities.

#include "mtinv/forward_model.hpp"
#include "mtinv/lp.hpp"
#include "mtinv/material_system.hpp"

#include <Eigen/Core>

#include <span>
#include <string_view>
#include <vector>

namespace mtinv {

/// A raw (un-normalized) composite permittivity at one frequency.
struct RawMeasurement {
    double frequency_hz = 0.0;
    Complex eps;
};

/// Normalized measurements: eps_hat_k = measured_k / eps_norm(f_k).
struct MeasurementSet {
    std::vector<double> frequencies_hz;
    std::vector<Complex> eps_hat;
    std::size_t normalizer_index = 0;

    [[nodiscard]] std::size_t size() const noexcept { return frequencies_hz.size(); }

    /// Throws ValidationError: m >= 1, strictly increasing positive
    /// frequencies, finite values, matching lengths.
    void validate() const;
};

/// Divides each raw value by the system normalizer's permittivity at the
/// same frequency. Raw measurements are sorted by frequency.
MeasurementSet normalize(const MaterialSystem& system, std::span<const RawMeasurement> raw);

/// Charnes-Cooper epigraph LP for one real measurement. Variables are
/// (z_1..z_{n-1}, s, t) with z = s phi_inc and s = 1 / (y . phi_inc + p_0).
struct CharnesCooperLP {
    Eigen::VectorXd x; ///< p_inc - p_0
    Eigen::VectorXd y; ///< q_inc - p_0
    double p0 = 0.0;
    double eps_hat = 0.0;
    bool enforce_dominance = false;
    LPProblem problem;
};

/// Uses the real parts of p and q.
CharnesCooperLP assemble_cc(const PQVectors& pq, double eps_hat, bool enforce_dominance);

/// phi_i = z_i / s for i >= 1, phi_0 = 1 - sum. Throws DegenerateScale when
/// s <= 1e-12.
Eigen::VectorXd recover_phi_cc(const LPSolution& solution);

/// Multi-frequency epigraph LP over (phi, t, c, d):
///   min t  s.t.  1^T phi = 1, phi >= 0, t >= 0,
///                |A phi| <= c, |B phi| <= d, c + d <= t q_max
/// where row k of A, B is Re, Im of p_k - eps_hat_k q_k and
/// q_max_k = max_i |q_k,i|.
struct EpigraphLP {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    Eigen::VectorXd q_max;
    std::size_t n = 0;
    std::size_t m = 0;
    bool enforce_dominance = false;
    LPProblem problem;
};

/// `pq[k]` must belong to `measurements.frequencies_hz[k]`.
EpigraphLP assemble_multifreq(std::span<const PQVectors> pq, const MeasurementSet& measurements,
                              bool enforce_dominance = false);

/// Real and imaginary parts of u_k = p_k - eps_hat_k q_k, stacked by row.
void residual_rows(std::span<const PQVectors> pq, std::span<const Complex> eps_hat, Eigen::MatrixXd& a,
                   Eigen::MatrixXd& b, Eigen::VectorXd& q_max);

enum class Formulation { CharnesCooper, MultiFrequency };

std::string_view to_string(Formulation f);

struct RecoveryReport {
    Eigen::VectorXd phi_star;
    double t_star = 0.0;
    LPStatus status = LPStatus::NumericalFailure;
    Formulation formulation = Formulation::MultiFrequency;
    int iterations = 0;
};

/// Entries below this are reported as exactly zero.
inline constexpr double kFractionClamp = 1e-10;

struct InvertOptions {
    bool enforce_dominance = false;
    LPOptions lp;
};

/// Solves an assembled epigraph LP and extracts phi*, t*. Does not throw on
/// solver failure; inspect `status`.
RecoveryReport solve_multifreq(const EpigraphLP& lp, const LPOptions& options = {});

/// Solves the Charnes-Cooper LP; throws DegenerateScale if the scale
/// collapses.
RecoveryReport solve_cc(const CharnesCooperLP& lp, const LPOptions& options = {});

/// End-to-end recovery: per-frequency p, q from the system, multi-frequency
/// LP, phi*. Throws InfeasibleMeasurement for infeasible/unbounded status
/// and NumericalFailure when the solver does not converge.
RecoveryReport invert(const MaterialSystem& system, const MeasurementSet& measurements,
                      const InvertOptions& options = {});

} // namespace mtinv
