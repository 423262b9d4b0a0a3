#include "specreg/rolling_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <spdlog/spdlog.h>

#include "specreg/error.hpp"

namespace specreg {

void WindowSpec::validate() const {
    if (length < 2) {
        throw Error("window length must be >= 2");
    }
    if (step < 1) {
        throw Error("window step must be >= 1");
    }
    if (length <= step) {
        throw Error("window length must exceed the step");
    }
}

std::vector<Window> make_windows(const ReturnPanel& panel, const WindowSpec& spec) {
    spec.validate();
    const Eigen::Index rows = panel.rows();
    if (rows < spec.length) {
        throw Error("panel has " + std::to_string(rows) + " rows, shorter than window length " +
                    std::to_string(spec.length));
    }
    if (spec.length < 2 * panel.cols()) {
        spdlog::warn("window length {} is below twice the asset count {}", spec.length, panel.cols());
    }
    std::vector<Window> windows;
    for (Eigen::Index t = spec.length; t <= rows; t += spec.step) {
        Window w;
        w.start = t - spec.length;
        w.end = t - 1;
        w.eval_index = t;
        w.asof_date = panel.dates.at(static_cast<std::size_t>(w.end));
        windows.push_back(w);
    }
    return windows;
}

CorrelationMatrix correlation(const Eigen::Ref<const Eigen::MatrixXd>& slice,
                              std::vector<std::string> tickers, Date asof_date) {
    const Eigen::Index t = slice.rows();
    const Eigen::Index n = slice.cols();
    if (t < 2) {
        throw Error("correlation needs at least 2 observations");
    }
    if (!tickers.empty() && static_cast<Eigen::Index>(tickers.size()) != n) {
        throw Error("ticker count does not match slice width");
    }
    const Eigen::RowVectorXd mean = slice.colwise().mean();
    Eigen::MatrixXd centered = slice.rowwise() - mean;
    const Eigen::VectorXd vols =
        (centered.colwise().squaredNorm() / static_cast<double>(t - 1)).array().sqrt().transpose();
    for (Eigen::Index j = 0; j < n; ++j) {
        // relative test so that a column of identical values with rounding noise is still caught
        const double scale = slice.col(j).cwiseAbs().maxCoeff();
        if (!(vols(j) > 1e-14 * std::max(scale, 1e-300))) {
            throw DegenerateColumnError(static_cast<std::size_t>(j),
                                        tickers.empty() ? std::string{} : tickers[static_cast<std::size_t>(j)]);
        }
    }
    const Eigen::MatrixXd z = centered * vols.cwiseInverse().asDiagonal();

    CorrelationMatrix corr;
    corr.values = (z.transpose() * z) / static_cast<double>(t - 1);
    corr.values = 0.5 * (corr.values + corr.values.transpose()).eval();
    corr.values.diagonal().setOnes();
    corr.values = corr.values.cwiseMax(-1.0).cwiseMin(1.0);
    corr.tickers = std::move(tickers);
    corr.asof_date = asof_date;
    corr.window_vols = vols;
    corr.observations = t;
    return corr;
}

Spectrum eigendecompose(const Eigen::MatrixXd& values, double ratio_c) {
    const Eigen::Index n = values.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(values);
    if (solver.info() != Eigen::Success) {
        throw Error("symmetric eigen-solver failed to converge");
    }
    Spectrum spec;
    spec.eigenvalues = solver.eigenvalues().reverse();
    spec.eigenvectors = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index k = 0; k < n; ++k) {
        auto v = spec.eigenvectors.col(k);
        const double sum = v.sum();
        bool flip = sum < 0.0;
        if (std::abs(sum) <= 1e-12 * std::sqrt(static_cast<double>(n))) {
            Eigen::Index idx = 0;
            v.cwiseAbs().maxCoeff(&idx);
            flip = v(idx) < 0.0;
        }
        if (flip) {
            v = -v;
        }
    }
    const MpBounds bounds = mp_bounds(ratio_c);
    spec.mp_lower = bounds.lower;
    spec.mp_upper = bounds.upper;
    spec.ratio_c = ratio_c;
    return spec;
}

Spectrum eigendecompose(const CorrelationMatrix& corr) {
    if (corr.observations < 1) {
        throw Error("correlation matrix carries no observation count");
    }
    return eigendecompose(corr.values,
                          static_cast<double>(corr.size()) / static_cast<double>(corr.observations));
}

MpBounds mp_bounds(double ratio_c) {
    if (!(ratio_c > 0.0)) {
        throw Error("MP aspect ratio must be positive");
    }
    const double s = std::sqrt(ratio_c);
    return {(1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)};
}

double mp_density(double lambda, double ratio_c) {
    const MpBounds b = mp_bounds(ratio_c);
    if (!(lambda > b.lower && lambda < b.upper) || lambda <= 0.0) {
        return 0.0;
    }
    return std::sqrt((b.upper - lambda) * (lambda - b.lower)) / (2.0 * std::numbers::pi * ratio_c * lambda);
}

Histogram empirical_spectral_density(std::span<const double> eigenvalues, int bins) {
    if (eigenvalues.empty()) {
        throw Error("spectral density needs at least one eigenvalue");
    }
    if (bins < 1) {
        throw Error("spectral density needs at least one bin");
    }
    auto [lo_it, hi_it] = std::minmax_element(eigenvalues.begin(), eigenvalues.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / bins;
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) {
        h.edges[static_cast<std::size_t>(b)] = lo + width * b;
    }
    h.edges.back() = hi;
    h.mass.assign(static_cast<std::size_t>(bins), 0.0);
    const double unit = 1.0 / static_cast<double>(eigenvalues.size());
    for (double x : eigenvalues) {
        auto b = static_cast<int>(std::floor((x - lo) / width));
        b = std::clamp(b, 0, bins - 1);
        h.mass[static_cast<std::size_t>(b)] += unit;
    }
    h.density.resize(h.mass.size());
    std::transform(h.mass.begin(), h.mass.end(), h.density.begin(), [width](double m) { return m / width; });
    return h;
}

std::vector<SpectralWindow> spectral_series(const ReturnPanel& panel, const WindowSpec& spec, int top_k) {
    if (top_k < 1 || top_k > panel.cols()) {
        throw Error("top_k must lie in [1, N]");
    }
    const auto windows = make_windows(panel, spec);
    std::vector<SpectralWindow> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        const auto corr = correlation(panel.returns.middleRows(w.start, spec.length), panel.tickers, w.asof_date);
        const auto spectrum = eigendecompose(corr);
        SpectralWindow rec;
        rec.window = w;
        rec.asof_date = w.asof_date;
        rec.tickers = panel.tickers;
        rec.eigenvalues = spectrum.eigenvalues.head(top_k);
        rec.eigenvectors = spectrum.eigenvectors.leftCols(top_k);
        rec.window_vols = corr.window_vols;
        rec.mp_upper = spectrum.mp_upper;
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

Moments moments(std::span<const double> xs) {
    Moments m;
    if (xs.empty()) {
        return m;
    }
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() < 2) {
        return m;
    }
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - m.mean) * (x - m.mean);
    }
    m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return m;
}

// Spread below this fraction of the series magnitude is rounding noise.
bool negligible_spread(const Moments& m) { return !(m.sd > 1e-14 * std::max(std::abs(m.mean), 1e-300)); }

}  // namespace

std::vector<double> standardized_series(std::span<const double> series) {
    if (series.size() < 2) {
        throw Error("z-score needs at least 2 values");
    }
    const Moments m = moments(series);
    std::vector<double> out(series.size(), 0.0);
    if (negligible_spread(m)) {
        return out;
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        out[i] = (series[i] - m.mean) / m.sd;
    }
    return out;
}

std::vector<double> causal_standardized_series(std::span<const double> series) {
    std::vector<double> out(series.size(), 0.0);
    // Welford running moments
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double x = series[i];
        const double n = static_cast<double>(i + 1);
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
        if (i == 0) {
            continue;
        }
        const Moments m{mean, std::sqrt(std::max(m2, 0.0) / (n - 1.0))};
        if (!negligible_spread(m)) {
            out[i] = (x - m.mean) / m.sd;
        }
    }
    return out;
}

CrossCorrelation eigenvalue_cross_correlation(const std::map<std::string, DatedSeries>& series_by_market) {
    if (series_by_market.size() < 2) {
        throw Error("cross-correlation needs at least 2 markets");
    }
    // week -> value, last observation in each ISO week wins
    std::vector<std::map<Date, double>> weekly;
    CrossCorrelation out;
    for (const auto& [market, s] : series_by_market) {
        if (s.dates.size() != s.values.size()) {
            throw Error("series for " + market + " has mismatched dates and values");
        }
        std::map<Date, double> by_week;
        for (std::size_t i = 0; i < s.dates.size(); ++i) {
            by_week[iso_week_start(s.dates[i])] = s.values[i];
        }
        weekly.push_back(std::move(by_week));
        out.markets.push_back(market);
    }
    std::vector<Date> common;
    for (const auto& [week, value] : weekly.front()) {
        const bool everywhere = std::all_of(weekly.begin() + 1, weekly.end(),
                                            [&](const auto& m) { return m.count(week) != 0; });
        if (everywhere) {
            common.push_back(week);
        }
    }
    if (common.size() < 3) {
        throw Error("fewer than 3 common weekly dates across markets");
    }
    const auto m = static_cast<Eigen::Index>(weekly.size());
    Eigen::MatrixXd aligned(static_cast<Eigen::Index>(common.size()), m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < common.size(); ++i) {
            aligned(static_cast<Eigen::Index>(i), j) = weekly[static_cast<std::size_t>(j)].at(common[i]);
        }
    }
    Eigen::MatrixXd z(aligned.rows(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
        std::vector<double> col(aligned.col(j).data(), aligned.col(j).data() + aligned.rows());
        const auto zs = standardized_series(col);
        z.col(j) = Eigen::Map<const Eigen::VectorXd>(zs.data(), aligned.rows());
    }
    out.values = (z.transpose() * z) / static_cast<double>(aligned.rows() - 1);
    out.values = 0.5 * (out.values + out.values.transpose()).eval();
    out.values.diagonal().setOnes();
    out.common_dates = common.size();
    return out;
}

}  // namespace specreg
