#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "specreg/market_data.hpp"
#include "specreg/rolling_spectrum.hpp"

namespace specreg {

/// Correlation and spectrum of one window after zero-variance columns have
/// been dropped. `columns` maps local asset positions to panel columns.
struct WindowEstimate {
    std::vector<Eigen::Index> columns;
    std::vector<std::string> dropped;
    CorrelationMatrix corr;
    Spectrum spectrum;
};

/// Throws specreg::Error when every column of the window is degenerate.
WindowEstimate estimate_window(const ReturnPanel& panel, const Window& window);

/// Compounded linear return exp(sum of log-returns) - 1 of each listed column
/// over rows [first_row, first_row + rows).
Eigen::VectorXd block_linear_returns(const ReturnPanel& panel, Eigen::Index first_row, Eigen::Index rows,
                                     const std::vector<Eigen::Index>& columns);

/// Buy-and-hold return of `weights` (local to `columns`) over the block.
double block_portfolio_return(const Eigen::VectorXd& weights, const Eigen::VectorXd& block_returns);

}  // namespace specreg
