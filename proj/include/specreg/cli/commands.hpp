#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "specreg/cli/config.hpp"
#include "specreg/market_data.hpp"

namespace specreg::cli {

/// A market after loading and cleaning.
struct MarketData {
    std::string name;
    PricePanel prices;
    ReturnPanel returns;
};

std::vector<MarketData> load_markets(const RunConfig& config);

/// Markets plus, when there are two or more, the merged universe named
/// `merged` over the intersection of their dates.
std::vector<MarketData> load_markets_with_merged(const RunConfig& config);

// Each command returns 0 once every output is written and 1 on any error,
// after printing the message to stderr.

/// spectrum_<market>.csv and eigenvectors_<market>_k<k>.csv per market (and
/// merged), plus
/// lambda1_cross_correlation.csv with two or more markets.
int cmd_spectrum(const RunConfig& config);

/// regime_<market>.csv per market and merged universe.
int cmd_regime(const RunConfig& config);

/// betas_<market>.csv per market.
int cmd_betas(const RunConfig& config);

/// <market>_returns_<strategy>.csv, <market>_weights.csv, summary.csv and
/// summary.json; the summary table is printed to `out`.
int cmd_backtest(const RunConfig& config, std::ostream& out);

/// synthetic_prices.csv (wide) and synthetic_labels.csv.
int cmd_synth(const RunConfig& config);

}  // namespace specreg::cli
