#include "specreg/cli/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>

#include "specreg/error.hpp"

namespace specreg::cli {

void SyntheticSpec::validate() const {
    if (assets < 1) {
        throw Error("synthetic panel needs at least one asset");
    }
    if (days < 1) {
        throw Error("synthetic panel needs at least one day");
    }
    if (segment_length < 1) {
        throw Error("segment length must be >= 1");
    }
    for (double rho : {rho_calm, rho_crisis}) {
        if (!(rho >= 0.0 && rho <= 1.0)) {
            throw Error("equicorrelation must lie in [0, 1]");
        }
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error("synthetic volatility must be positive");
    }
}

namespace {

Date next_business_day(Date d) {
    do {
        d += std::chrono::days{1};
    } while (std::chrono::weekday{d} == std::chrono::Saturday || std::chrono::weekday{d} == std::chrono::Sunday);
    return d;
}

}  // namespace

SyntheticPanel generate_two_regime(const SyntheticSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const auto n = static_cast<Eigen::Index>(spec.assets);
    const auto rows = static_cast<Eigen::Index>(spec.days) + 1;
    SyntheticPanel out;
    out.prices.source_tag = "synthetic";
    for (Eigen::Index j = 0; j < n; ++j) {
        out.prices.tickers.push_back("S" + std::to_string(j + 1));
    }
    out.prices.prices.resize(rows, n);
    out.prices.prices.row(0).setConstant(100.0);

    Date d = spec.start_date;
    while (std::chrono::weekday{d} == std::chrono::Saturday || std::chrono::weekday{d} == std::chrono::Sunday) {
        d += std::chrono::days{1};
    }
    out.prices.dates.push_back(d);

    Eigen::VectorXd log_price = Eigen::VectorXd::Constant(n, std::log(100.0));
    for (Eigen::Index t = 1; t < rows; ++t) {
        const bool crisis = ((t - 1) / spec.segment_length) % 2 == 1;
        const double rho = crisis ? spec.rho_crisis : spec.rho_calm;
        const double f = normal(rng);
        for (Eigen::Index j = 0; j < n; ++j) {
            log_price(j) += spec.sigma * (std::sqrt(rho) * f + std::sqrt(1.0 - rho) * normal(rng));
        }
        out.prices.prices.row(t) = log_price.array().exp().transpose();
        d = next_business_day(d);
        out.prices.dates.push_back(d);
        out.labels.push_back(crisis ? Regime::crisis : Regime::calm);
    }
    return out;
}

std::vector<Regime> window_truth(const std::vector<Regime>& labels, const std::vector<Window>& windows) {
    std::vector<Regime> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        if (w.start < 0 || w.end < w.start || static_cast<std::size_t>(w.end) >= labels.size()) {
            throw Error("window outside the label series");
        }
        Eigen::Index crisis = 0;
        for (Eigen::Index t = w.start; t <= w.end; ++t) {
            crisis += labels[static_cast<std::size_t>(t)] == Regime::crisis ? 1 : 0;
        }
        const Eigen::Index calm = w.end - w.start + 1 - crisis;
        if (crisis != calm) {
            out.push_back(crisis > calm ? Regime::crisis : Regime::calm);
        } else {
            out.push_back(labels[static_cast<std::size_t>(w.end)]);
        }
    }
    return out;
}

}  // namespace specreg::cli
