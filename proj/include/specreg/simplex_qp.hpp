#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace specreg {

enum class Bound { at_most, at_least };

/// a' w <= bound (at_most) or a' w >= bound (at_least).
struct LinearConstraint {
    Eigen::VectorXd a;
    double bound = 0.0;
    Bound direction = Bound::at_most;
};

/// Solution of min w' Sigma w over the probability simplex intersected with
/// extra linear inequalities. Multipliers refer to the Lagrangian
///   w' Sigma w - mu (1'w - 1) - nu' w - sum_j s_j lambda_j (a_j' w - b_j)
/// with s_j = +1 for at_least and -1 for at_most, so at the optimum
///   2 Sigma w = mu 1 + nu + sum_j s_j lambda_j a_j,  nu >= 0, lambda >= 0.
struct QpSolution {
    Eigen::VectorXd w;
    double objective = 0.0;
    double budget_multiplier = 0.0;
    Eigen::VectorXd lower_bound_multipliers;
    Eigen::VectorXd constraint_multipliers;
    int iterations = 0;
    /// Ridge added to the Hessian when Sigma is singular or nearly so.
    double ridge = 0.0;
};

/// Dense dual active-set solver. Sigma must be symmetric positive
/// semidefinite (to -1e-10 relative to its largest eigenvalue); throws
/// specreg::Error otherwise and specreg::InfeasibleError when the constraint
/// set is empty.
QpSolution solve_simplex_qp(const Eigen::MatrixXd& sigma, std::span<const LinearConstraint> constraints = {});

}  // namespace specreg
