#include "specreg/regime.hpp"

#include <string>

#include "specreg/error.hpp"

namespace specreg {

std::string_view to_string(Regime regime) { return regime == Regime::crisis ? "crisis" : "calm"; }

std::string_view to_string(IndicatorMode mode) {
    return mode == IndicatorMode::causal ? "causal" : "full_sample";
}

IndicatorMode parse_indicator_mode(std::string_view text) {
    if (text == "causal") {
        return IndicatorMode::causal;
    }
    if (text == "full_sample") {
        return IndicatorMode::full_sample;
    }
    throw Error("unknown indicator mode '" + std::string(text) + "'");
}

double eigenvalue_ratio(double lambda1, double lambda2) {
    if (!(lambda2 > 0.0)) {
        throw Error("second eigenvalue must be positive for the eigenvalue ratio");
    }
    return lambda1 / lambda2;
}

std::vector<double> raw_ratio(std::span<const SpectralWindow> spectral) {
    std::vector<double> out;
    out.reserve(spectral.size());
    for (const auto& w : spectral) {
        if (w.eigenvalues.size() < 2) {
            throw Error("eigenvalue ratio needs at least 2 eigenvalues per window");
        }
        out.push_back(eigenvalue_ratio(w.eigenvalues(0), w.eigenvalues(1)));
    }
    return out;
}

std::vector<double> crisis_indicator(std::span<const double> ratio, int ell, IndicatorMode mode) {
    if (ell < 1) {
        throw Error("smoothing length must be >= 1");
    }
    if (ratio.size() < static_cast<std::size_t>(ell)) {
        throw Error("ratio series shorter than the smoothing length");
    }
    const auto z = mode == IndicatorMode::causal ? causal_standardized_series(ratio) : standardized_series(ratio);
    std::vector<double> chi(z.size());
    const auto window = static_cast<std::size_t>(ell);
    for (std::size_t t = 0; t < z.size(); ++t) {
        const std::size_t first = t + 1 >= window ? t + 1 - window : 0;
        double sum = 0.0;
        for (std::size_t i = first; i <= t; ++i) {
            sum += z[i];
        }
        chi[t] = sum / static_cast<double>(t + 1 - first);
    }
    return chi;
}

std::vector<Regime> classify(std::span<const double> chi) {
    std::vector<Regime> out;
    out.reserve(chi.size());
    for (double x : chi) {
        out.push_back(x >= 0.0 ? Regime::crisis : Regime::calm);
    }
    return out;
}

RegimeSeries regime_series(std::span<const SpectralWindow> spectral, int ell, IndicatorMode mode) {
    RegimeSeries out;
    out.smoothing_window = ell;
    const auto ratio = raw_ratio(spectral);
    out.chi = crisis_indicator(ratio, ell, mode);
    out.labels = classify(out.chi);
    for (const auto& w : spectral) {
        out.asof_dates.push_back(w.asof_date);
    }
    return out;
}

}  // namespace specreg
