#include "specreg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "specreg/error.hpp"

namespace specreg {

namespace {

double signed_infinity(double numerator) {
    if (numerator > 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    if (numerator < 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double annualized_mean(std::span<const double> weekly) {
    double log_growth = 0.0;
    for (double r : weekly) {
        if (!(r > -1.0)) {
            throw Error("weekly return <= -100%");
        }
        log_growth += std::log1p(r);
    }
    return std::expm1(log_growth * kWeeksPerYear / static_cast<double>(weekly.size()));
}

}  // namespace

std::vector<double> cumulative_returns(std::span<const double> returns) {
    std::vector<double> out;
    out.reserve(returns.size());
    double growth = 1.0;
    for (double r : returns) {
        if (!(r > -1.0)) {
            throw Error("cumulative_returns: return <= -100%");
        }
        growth *= 1.0 + r;
        out.push_back(growth - 1.0);
    }
    return out;
}

AnnualizedStats annualized_stats(std::span<const double> weekly, VolCentering centering) {
    if (weekly.size() < 2) {
        throw Error("annualized statistics need at least 2 returns");
    }
    const auto m = static_cast<double>(weekly.size());
    AnnualizedStats out;
    out.mean_ann = annualized_mean(weekly);
    const auto [lo, hi] = std::minmax_element(weekly.begin(), weekly.end());
    double centre = out.mean_ann;
    if (centering == VolCentering::weekly_mean) {
        // a constant series must come out with exactly zero spread
        centre = *lo == *hi ? *lo : std::accumulate(weekly.begin(), weekly.end(), 0.0) / m;
    }
    double ss = 0.0;
    for (double r : weekly) {
        ss += (r - centre) * (r - centre);
    }
    out.vol_ann = std::sqrt(kWeeksPerYear / (m - 1.0) * ss);
    if (out.vol_ann > 0.0) {
        out.sharpe = out.mean_ann / out.vol_ann;
    } else {
        out.sharpe = signed_infinity(out.mean_ann);
        out.sharpe_degenerate = true;
    }
    return out;
}

RatioMetric sortino(std::span<const double> weekly) {
    if (weekly.size() < 2) {
        throw Error("sortino needs at least 2 returns");
    }
    const auto m = static_cast<double>(weekly.size());
    const double mu = annualized_mean(weekly);
    double downside = 0.0;
    for (double r : weekly) {
        const double loss = std::min(r, 0.0);
        downside += loss * loss;
    }
    RatioMetric out;
    if (downside > 0.0) {
        out.value = mu / std::sqrt(kWeeksPerYear / (m - 1.0) * downside);
    } else {
        out.value = signed_infinity(mu);
        out.degenerate = true;
    }
    return out;
}

TreynorResult treynor(std::span<const double> weekly, std::span<const double> market) {
    if (weekly.size() != market.size()) {
        throw Error("treynor: series lengths differ");
    }
    if (weekly.size() < 2) {
        throw Error("treynor needs at least 2 returns");
    }
    const auto m = static_cast<double>(weekly.size());
    const double mean_r = std::accumulate(weekly.begin(), weekly.end(), 0.0) / m;
    const double mean_m = std::accumulate(market.begin(), market.end(), 0.0) / m;
    double cov = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < weekly.size(); ++i) {
        cov += (weekly[i] - mean_r) * (market[i] - mean_m);
        var += (market[i] - mean_m) * (market[i] - mean_m);
    }
    if (!(var > 0.0)) {
        throw Error("treynor: market proxy has zero variance");
    }
    TreynorResult out;
    out.beta = cov / var;
    const double mu = annualized_mean(weekly);
    if (std::abs(out.beta) < 1e-10) {
        out.treynor = signed_infinity(mu);
        out.degenerate = true;
    } else {
        out.treynor = mu / out.beta;
    }
    return out;
}

}  // namespace specreg
