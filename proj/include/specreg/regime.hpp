#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "specreg/dates.hpp"
#include "specreg/rolling_spectrum.hpp"

namespace specreg {

enum class Regime { calm, crisis };

/// full_sample z-scores against moments of the whole series (figure
/// reproduction, uses future data); causal uses expanding moments only.
enum class IndicatorMode { full_sample, causal };

std::string_view to_string(Regime regime);
std::string_view to_string(IndicatorMode mode);
IndicatorMode parse_indicator_mode(std::string_view text);

/// lambda_1 / lambda_2 per window.
std::vector<double> raw_ratio(std::span<const SpectralWindow> spectral);

/// Same ratio from the two leading eigenvalues directly.
double eigenvalue_ratio(double lambda1, double lambda2);

/// z-scored ratio followed by a trailing moving average of length `ell`; the
/// first ell - 1 entries average the available prefix.
std::vector<double> crisis_indicator(std::span<const double> ratio, int ell, IndicatorMode mode);

/// Crisis iff chi >= 0.
std::vector<Regime> classify(std::span<const double> chi);

struct RegimeSeries {
    std::vector<Date> asof_dates;
    std::vector<double> chi;
    std::vector<Regime> labels;
    int smoothing_window = 0;
};

RegimeSeries regime_series(std::span<const SpectralWindow> spectral, int ell, IndicatorMode mode);

}  // namespace specreg
