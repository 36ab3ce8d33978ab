#pragma once

// Small dense linear programs:
//
//   minimize    c^T x
//   subject to  A_eq x  = b_eq
//               A_ub x <= b_ub
//               lower <= x <= upper
//
// solved with a homogeneous self-dual primal-dual interior-point method
// (Mehrotra predictor-corrector, dense Cholesky of the normal equations).
// Sized for tens of variables and constraints.

#include <Eigen/Core>

#include <limits>
#include <string_view>

namespace mtinv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LPProblem {
    Eigen::VectorXd c;
    Eigen::MatrixXd a_eq;
    Eigen::VectorXd b_eq;
    Eigen::MatrixXd a_ub;
    Eigen::VectorXd b_ub;
    /// Empty means 0 for every variable; entries may be -kInf.
    Eigen::VectorXd lower;
    /// Empty means +kInf for every variable.
    Eigen::VectorXd upper;

    [[nodiscard]] Eigen::Index num_variables() const noexcept { return c.size(); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string_view to_string(LPStatus status);

struct LPSolution {
    Eigen::VectorXd x;
    double objective = std::numeric_limits<double>::quiet_NaN();
    LPStatus status = LPStatus::NumericalFailure;
    int iterations = 0;
    /// Largest violation of any equality, inequality or bound at x.
    double primal_residual = std::numeric_limits<double>::quiet_NaN();
    /// Largest dual residual of the standard-form problem.
    double dual_residual = std::numeric_limits<double>::quiet_NaN();
    /// x^T z of the standard-form primal-dual pair.
    double complementarity = std::numeric_limits<double>::quiet_NaN();
};

struct LPOptions {
    int max_iterations = 200;
    /// Relative primal, dual and gap tolerance the iteration aims for.
    double tolerance = 1e-10;
    /// Tolerance below which a stalled iterate is still accepted as optimal;
    /// also the infeasibility detection threshold.
    double acceptance_tolerance = 1e-8;
    /// Fraction of the distance to the boundary taken per step.
    double step_fraction = 0.99995;
};

/// Throws ValidationError on inconsistent dimensions or non-finite data.
void validate(const LPProblem& problem);

/// Deterministic: identical inputs give bit-identical outputs.
LPSolution solve_lp(const LPProblem& problem, const LPOptions& options = {});

} // namespace mtinv
