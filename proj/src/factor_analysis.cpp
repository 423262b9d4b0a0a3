#include "specreg/factor_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "specreg/error.hpp"
#include "specreg/portfolio.hpp"
#include "specreg/window_estimate.hpp"

namespace specreg {

double student_t_two_sided_p(double t, double dof) {
    if (!(dof > 0.0)) {
        throw Error("Student t needs positive degrees of freedom");
    }
    if (std::isnan(t)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (std::isinf(t)) {
        return 0.0;
    }
    const double x = dof / (dof + t * t);
    return std::clamp(boost::math::ibeta(0.5 * dof, 0.5, x), 0.0, 1.0);
}

OlsResult ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error("ols: series lengths differ");
    }
    if (x.size() < 3) {
        throw Error("ols: needs at least 3 observations");
    }
    const auto m = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double x_scale = std::max(std::abs(mx), 1e-300);
    if (!(sxx > 1e-28 * m * x_scale * x_scale) || !(sxx > 0.0)) {
        throw Error("ols: regressor has zero variance");
    }
    OlsResult out;
    out.n_obs = static_cast<Eigen::Index>(x.size());
    out.beta = sxy / sxx;
    out.alpha = my - out.beta * mx;
    out.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 0.0;

    const double dof = m - 2.0;
    const double sse = std::max(syy - out.beta * sxy, 0.0);
    if (syy == 0.0) {
        out.t_statistic = 0.0;
        out.p_value = 1.0;
    } else if (sse <= 1e-15 * syy) {
        out.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), out.beta);
        out.p_value = 0.0;
    } else {
        const double se = std::sqrt(sse / dof / sxx);
        out.t_statistic = out.beta / se;
        out.p_value = student_t_two_sided_p(out.t_statistic, dof);
    }
    return out;
}

EigenportfolioReturns eigenportfolio_returns(const ReturnPanel& panel, const WindowSpec& spec, int top_k) {
    if (top_k < 1) {
        throw Error("top_k must be >= 1");
    }
    EigenportfolioReturns out;
    out.eigen.resize(static_cast<std::size_t>(top_k));
    for (const auto& window : make_windows(panel, spec)) {
        if (window.eval_index + spec.step > panel.rows()) {
            break;
        }
        const auto est = estimate_window(panel, window);
        if (static_cast<Eigen::Index>(est.columns.size()) < top_k) {
            throw Error("window ending " + format_iso_date(window.asof_date) + " has fewer than top_k assets");
        }
        const Eigen::VectorXd block = block_linear_returns(panel, window.eval_index, spec.step, est.columns);
        out.asof_dates.push_back(window.asof_date);
        out.market.push_back(block_portfolio_return(equal_weight(block.size()).w, block));
        for (int k = 0; k < top_k; ++k) {
            const auto ep = eigenportfolio(est.spectrum.eigenvectors.col(k), est.corr.window_vols);
            out.eigen[static_cast<std::size_t>(k)].push_back(block_portfolio_return(ep.weights.w, block));
        }
    }
    return out;
}

std::vector<EigenportfolioBeta> eigenportfolio_betas(const ReturnPanel& panel, const WindowSpec& spec, int top_k) {
    const auto series = eigenportfolio_returns(panel, spec, top_k);
    if (series.market.size() < 3) {
        throw Error("eigenportfolio betas need at least 3 out-of-sample steps");
    }
    std::vector<EigenportfolioBeta> rows;
    for (int k = 0; k < top_k; ++k) {
        rows.push_back({k + 1, ols(series.eigen[static_cast<std::size_t>(k)], series.market)});
    }
    return rows;
}

}  // namespace specreg
