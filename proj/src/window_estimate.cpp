#include "specreg/window_estimate.hpp"

#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "specreg/error.hpp"

namespace specreg {

WindowEstimate estimate_window(const ReturnPanel& panel, const Window& window) {
    WindowEstimate est;
    est.columns.resize(static_cast<std::size_t>(panel.cols()));
    std::iota(est.columns.begin(), est.columns.end(), Eigen::Index{0});
    const Eigen::Index length = window.end - window.start + 1;
    while (true) {
        if (est.columns.empty()) {
            throw Error("empty universe in window ending " + format_iso_date(window.asof_date));
        }
        Eigen::MatrixXd slice(length, static_cast<Eigen::Index>(est.columns.size()));
        std::vector<std::string> tickers;
        for (std::size_t c = 0; c < est.columns.size(); ++c) {
            slice.col(static_cast<Eigen::Index>(c)) = panel.returns.col(est.columns[c]).segment(window.start, length);
            tickers.push_back(panel.tickers[static_cast<std::size_t>(est.columns[c])]);
        }
        try {
            est.corr = correlation(slice, std::move(tickers), window.asof_date);
            break;
        } catch (const DegenerateColumnError& e) {
            const auto& name = panel.tickers[static_cast<std::size_t>(est.columns[e.column()])];
            spdlog::warn("dropping {} from window ending {}: zero variance", name, format_iso_date(window.asof_date));
            est.dropped.push_back(name);
            est.columns.erase(est.columns.begin() + static_cast<std::ptrdiff_t>(e.column()));
        }
    }
    est.spectrum = eigendecompose(est.corr);
    return est;
}

Eigen::VectorXd block_linear_returns(const ReturnPanel& panel, Eigen::Index first_row, Eigen::Index rows,
                                     const std::vector<Eigen::Index>& columns) {
    if (first_row < 0 || rows < 1 || first_row + rows > panel.rows()) {
        throw Error("return block outside the panel");
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out(static_cast<Eigen::Index>(c)) = std::expm1(panel.returns.col(columns[c]).segment(first_row, rows).sum());
    }
    return out;
}

double block_portfolio_return(const Eigen::VectorXd& weights, const Eigen::VectorXd& block_returns) {
    if (weights.size() != block_returns.size()) {
        throw Error("block return: dimension mismatch");
    }
    return weights.dot(block_returns);
}

}  // namespace specreg
