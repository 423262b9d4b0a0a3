#pragma once

#include <span>
#include <vector>

namespace specreg {

inline constexpr double kWeeksPerYear = 52.0;

/// How weekly returns are centred in the annualised volatility. The default
/// centres on the annualised geometric mean; weekly_mean is the conventional
/// sample standard deviation.
enum class VolCentering { annualized_mean, weekly_mean };

/// R(t) = prod_{tau <= t} (1 + r(tau)) - 1. Throws when some r <= -1.
std::vector<double> cumulative_returns(std::span<const double> returns);

struct AnnualizedStats {
    double mean_ann = 0.0;
    double vol_ann = 0.0;
    double sharpe = 0.0;
    /// Volatility is zero; sharpe is +/-inf (or NaN when the mean is zero).
    bool sharpe_degenerate = false;
};

/// mu = (prod(1 + r))^(52/M) - 1, sigma = sqrt(52/(M-1) sum (r - c)^2) with c
/// set by `centering`, Sharpe = mu / sigma at zero risk-free rate.
AnnualizedStats annualized_stats(std::span<const double> weekly, VolCentering centering = VolCentering::annualized_mean);

struct RatioMetric {
    double value = 0.0;
    bool degenerate = false;
};

/// mu / sqrt(52/(M-1) sum min(r, 0)^2); degenerate without losses.
RatioMetric sortino(std::span<const double> weekly);

struct TreynorResult {
    double treynor = 0.0;
    double beta = 0.0;
    bool degenerate = false;
};

/// beta = cov(r, r_mkt) / var(r_mkt), Treynor = mu / beta.
TreynorResult treynor(std::span<const double> weekly, std::span<const double> market);

}  // namespace specreg
