#pragma once

#include <cstdint>
#include <vector>

#include "specreg/market_data.hpp"
#include "specreg/regime.hpp"
#include "specreg/rolling_spectrum.hpp"

namespace specreg::cli {

/// Two-regime equicorrelated panel. Daily log-returns follow
/// sigma * (sqrt(rho) f + sqrt(1 - rho) e) with one common Gaussian factor f;
/// rho alternates between rho_calm and rho_crisis every segment_length days,
/// starting calm.
struct SyntheticSpec {
    int assets = 30;
    int days = 2000;
    double rho_calm = 0.2;
    double rho_crisis = 0.7;
    int segment_length = 250;
    double sigma = 0.01;
    Date start_date = Date{std::chrono::year{2010} / 1 / 4};
    std::uint64_t seed = 42;

    void validate() const;
};

struct SyntheticPanel {
    /// days + 1 business-day rows starting at 100.
    PricePanel prices;
    /// One label per return row (prices.dates[1..]).
    std::vector<Regime> labels;
};

SyntheticPanel generate_two_regime(const SyntheticSpec& spec);

/// Majority generator label over each window's rows; ties go to the label of
/// the window's last row.
std::vector<Regime> window_truth(const std::vector<Regime>& labels, const std::vector<Window>& windows);

}  // namespace specreg::cli
