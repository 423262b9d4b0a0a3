#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "specreg/market_data.hpp"
#include "specreg/rolling_spectrum.hpp"

namespace specreg {

struct OlsResult {
    double alpha = 0.0;
    double beta = 0.0;
    double r_squared = 0.0;
    /// Two-sided p-value of H0: beta = 0 (Student t, M - 2 degrees of freedom).
    double p_value = 1.0;
    double t_statistic = 0.0;
    Eigen::Index n_obs = 0;
};

/// Univariate least squares y = alpha + beta x + e.
OlsResult ols(std::span<const double> x, std::span<const double> y);

/// P(|T| >= |t|) for a Student t variable with `dof` degrees of freedom,
/// through the regularised incomplete beta function.
double student_t_two_sided_p(double t, double dof);

struct EigenportfolioBeta {
    int k = 0;
    OlsResult fit;
};

/// Per-step weekly returns used by eigenportfolio_betas.
struct EigenportfolioReturns {
    std::vector<Date> asof_dates;
    std::vector<double> market;                   // equal-weight proxy
    std::vector<std::vector<double>> eigen;       // [k][step]
};

/// Out-of-sample returns of the top-k eigenportfolios and of the equal-weight
/// market proxy over the `step` rows following each window.
EigenportfolioReturns eigenportfolio_returns(const ReturnPanel& panel, const WindowSpec& spec, int top_k);

/// Regresses the market proxy return on each eigenportfolio return.
std::vector<EigenportfolioBeta> eigenportfolio_betas(const ReturnPanel& panel, const WindowSpec& spec, int top_k);

}  // namespace specreg
