#include "specreg/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include <spdlog/spdlog.h>

#include "specreg/error.hpp"
#include "specreg/window_estimate.hpp"

namespace specreg {

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::equal_weight:
            return "equal_weight";
        case StrategyKind::principal_eigen:
            return "principal_eigen";
        case StrategyKind::min_variance:
            return "min_variance";
        case StrategyKind::regime_aware:
            return "regime_aware";
    }
    return "unknown";
}

std::string_view to_string(Cleaning cleaning) {
    switch (cleaning) {
        case Cleaning::raw:
            return "raw";
        case Cleaning::clip:
            return "clip";
        case Cleaning::clip_and_shrink:
            return "clip_and_shrink";
    }
    return "unknown";
}

StrategyKind parse_strategy_kind(std::string_view text) {
    for (auto kind : {StrategyKind::equal_weight, StrategyKind::principal_eigen, StrategyKind::min_variance,
                      StrategyKind::regime_aware}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    throw Error("unknown strategy '" + std::string(text) + "'");
}

Cleaning parse_cleaning(std::string_view text) {
    for (auto c : {Cleaning::raw, Cleaning::clip, Cleaning::clip_and_shrink}) {
        if (text == to_string(c)) {
            return c;
        }
    }
    throw Error("unknown cleaning option '" + std::string(text) + "'");
}

void StrategySpec::validate() const {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw Error("shrinkage intensity must lie in [0, 1]");
    }
    if (!std::isfinite(gamma1) || !std::isfinite(gamma2)) {
        throw Error("eigenmode bounds must be finite");
    }
    if (ell < 1) {
        throw Error("smoothing length must be >= 1");
    }
}

PerformanceMetrics compute_metrics(std::span<const double> weekly, std::span<const double> market,
                                   VolCentering centering) {
    if (weekly.size() != market.size()) {
        throw Error("strategy and market series differ in length");
    }
    PerformanceMetrics m;
    const auto stats = annualized_stats(weekly, centering);
    m.mean_ann = stats.mean_ann;
    m.vol_ann = stats.vol_ann;
    m.sharpe = stats.sharpe;
    m.sharpe_degenerate = stats.sharpe_degenerate;
    const auto so = sortino(weekly);
    m.sortino = so.value;
    m.sortino_degenerate = so.degenerate;
    try {
        const auto tr = treynor(weekly, market);
        m.treynor = tr.treynor;
        m.beta_vs_ew = tr.beta;
        m.treynor_degenerate = tr.degenerate;
    } catch (const Error&) {
        // flat market proxy
        m.treynor = std::numeric_limits<double>::quiet_NaN();
        m.beta_vs_ew = std::numeric_limits<double>::quiet_NaN();
        m.treynor_degenerate = true;
    }
    return m;
}

namespace {

struct Step {
    Window window;
    WindowEstimate estimate;
    Eigen::VectorXd block;  // compounded returns of estimate.columns over the holding block
    double market = 0.0;
    double ratio = std::numeric_limits<double>::quiet_NaN();
};

struct Prepared {
    std::vector<Step> steps;
    std::vector<std::string> warnings;
};

Prepared prepare(const ReturnPanel& panel, const WindowSpec& spec) {
    spec.validate();
    Prepared out;
    for (const auto& window : make_windows(panel, spec)) {
        if (window.eval_index + spec.step > panel.rows()) {
            break;
        }
        Step s;
        s.window = window;
        s.estimate = estimate_window(panel, window);
        for (const auto& name : s.estimate.dropped) {
            out.warnings.push_back("dropped " + name + " from window ending " + format_iso_date(window.asof_date));
        }
        s.block = block_linear_returns(panel, window.eval_index, spec.step, s.estimate.columns);
        s.market = s.block.mean();
        const auto& ev = s.estimate.spectrum.eigenvalues;
        if (ev.size() >= 2 && ev(1) > 0.0) {
            s.ratio = eigenvalue_ratio(ev(0), ev(1));
        }
        out.steps.push_back(std::move(s));
    }
    if (out.steps.size() < 2) {
        throw Error("panel too short for two complete rebalance steps");
    }
    return out;
}

std::vector<Regime> step_regimes(const Prepared& prep, const StrategySpec& strategy,
                                 std::vector<std::string>& warnings) {
    std::vector<Regime> labels(prep.steps.size(), Regime::calm);
    std::vector<double> finite;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < prep.steps.size(); ++i) {
        if (std::isfinite(prep.steps[i].ratio)) {
            finite.push_back(prep.steps[i].ratio);
            where.push_back(i);
        }
    }
    if (finite.size() < prep.steps.size()) {
        warnings.push_back("windows without a second eigenvalue treated as calm");
    }
    if (finite.size() < static_cast<std::size_t>(strategy.ell)) {
        warnings.push_back("too few windows for the crisis indicator; all windows treated as calm");
        return labels;
    }
    const auto chi = crisis_indicator(finite, strategy.ell, strategy.indicator_mode);
    const auto classes = classify(chi);
    for (std::size_t j = 0; j < where.size(); ++j) {
        labels[where[j]] = classes[j];
    }
    return labels;
}

Eigen::MatrixXd covariance_for(const WindowEstimate& est, const StrategySpec& strategy) {
    const auto& vols = est.corr.window_vols;
    if (strategy.cleaning == Cleaning::raw) {
        return corr_to_cov(est.corr.values, vols);
    }
    const auto cleaned = denoise_correlation(est.spectrum);
    Eigen::MatrixXd sigma = corr_to_cov(cleaned.values, vols);
    if (strategy.cleaning == Cleaning::clip_and_shrink) {
        sigma = shrink_covariance(sigma, strategy.delta, strategy.target).values;
    }
    return sigma;
}

BacktestReport run_prepared(const ReturnPanel& panel, const Prepared& prep, const StrategySpec& strategy,
                            const BacktestOptions& options) {
    strategy.validate();
    BacktestReport report;
    report.strategy = strategy;
    report.tickers = panel.tickers;
    report.warnings = prep.warnings;

    std::vector<Regime> regimes(prep.steps.size(), Regime::calm);
    Eigen::Index last_window_end = 0;
    if (strategy.kind == StrategyKind::regime_aware) {
        regimes = step_regimes(prep, strategy, report.warnings);
        if (strategy.indicator_mode == IndicatorMode::full_sample) {
            last_window_end = prep.steps.back().window.end;
        }
    }

    for (std::size_t i = 0; i < prep.steps.size(); ++i) {
        const auto& step = prep.steps[i];
        const auto& est = step.estimate;
        const auto n = static_cast<Eigen::Index>(est.columns.size());
        Eigen::VectorXd local;
        std::string fallback = "none";
        switch (strategy.kind) {
            case StrategyKind::equal_weight:
                local = equal_weight(n).w;
                break;
            case StrategyKind::principal_eigen: {
                bool ok = false;
                try {
                    const auto ep = eigenportfolio(est.spectrum.eigenvectors.col(0), est.corr.window_vols);
                    ok = ep.investable;
                    local = ep.weights.w;
                } catch (const Error&) {
                }
                if (!ok) {
                    local = equal_weight(n).w;
                    fallback = "equal_weight";
                    report.warnings.push_back("principal eigenportfolio not investable on " +
                                              format_iso_date(step.window.asof_date));
                }
                break;
            }
            case StrategyKind::min_variance:
                local = min_variance(covariance_for(est, strategy)).w;
                break;
            case StrategyKind::regime_aware: {
                const auto sigma = covariance_for(est, strategy);
                if (regimes[i] == Regime::crisis && n >= 2) {
                    EigenmodeConstraints c;
                    c.gamma1_cap = strategy.gamma1;
                    c.gamma2_floor = strategy.gamma2;
                    c.v1 = est.spectrum.eigenvectors.col(0);
                    c.v2 = est.spectrum.eigenvectors.col(1);
                    const auto ra = regime_aware(sigma, c);
                    local = ra.weights.w;
                    fallback = std::string(to_string(ra.fallback));
                } else {
                    local = min_variance(sigma).w;
                }
                break;
            }
        }

        RebalanceRecord record;
        record.asof_date = step.window.asof_date;
        record.weights.tickers = panel.tickers;
        record.weights.w = Eigen::VectorXd::Zero(panel.cols());
        for (Eigen::Index c = 0; c < n; ++c) {
            record.weights.w(est.columns[static_cast<std::size_t>(c)]) = local(c);
        }
        record.fallback = std::move(fallback);
        record.regime = regimes[i];
        report.weights_history.push_back(std::move(record));

        StepAudit audit;
        audit.last_data_row = std::max(step.window.end, last_window_end);
        audit.first_applied_row = step.window.eval_index;
        audit.last_data_date = panel.dates[static_cast<std::size_t>(audit.last_data_row)];
        audit.first_applied_date = panel.dates[static_cast<std::size_t>(audit.first_applied_row)];
        report.audit.push_back(audit);

        report.asof_dates.push_back(step.window.asof_date);
        report.weekly_returns.push_back(block_portfolio_return(local, step.block));
        report.market_returns.push_back(step.market);
    }

    report.cumulative = cumulative_returns(report.weekly_returns);
    report.metrics = compute_metrics(report.weekly_returns, report.market_returns, options.vol_centering);
    return report;
}

}  // namespace

BacktestReport run_backtest(const ReturnPanel& panel, const WindowSpec& spec, const StrategySpec& strategy,
                            const BacktestOptions& options) {
    const auto prep = prepare(panel, spec);
    return run_prepared(panel, prep, strategy, options);
}

std::vector<BacktestReport> run_backtests(const ReturnPanel& panel, const WindowSpec& spec,
                                          std::span<const StrategySpec> strategies, const BacktestOptions& options) {
    for (const auto& s : strategies) {
        s.validate();
    }
    const auto prep = prepare(panel, spec);
    std::vector<std::future<BacktestReport>> jobs;
    jobs.reserve(strategies.size());
    for (const auto& s : strategies) {
        jobs.push_back(std::async(std::launch::async, [&panel, &prep, s, options] {
            return run_prepared(panel, prep, s, options);
        }));
    }
    std::vector<BacktestReport> out;
    out.reserve(jobs.size());
    for (auto& job : jobs) {
        out.push_back(job.get());
    }
    return out;
}

PerformanceTable performance_table(std::span<const BacktestReport> reports) {
    PerformanceTable table;
    for (const auto& r : reports) {
        PerformanceRow row;
        row.strategy = r.strategy.name();
        row.mean_pct = 100.0 * r.metrics.mean_ann;
        row.vol_pct = 100.0 * r.metrics.vol_ann;
        row.sharpe = r.metrics.sharpe;
        row.sortino = r.metrics.sortino;
        row.treynor_pct = 100.0 * r.metrics.treynor;
        table.rows.push_back(std::move(row));
    }
    const auto column = [](const PerformanceRow& row, std::size_t c) {
        switch (c) {
            case 0:
                return row.mean_pct;
            case 1:
                return -row.vol_pct;
            case 2:
                return row.sharpe;
            case 3:
                return row.sortino;
            default:
                return row.treynor_pct;
        }
    };
    table.best.assign(table.rows.size(), {false, false, false, false, false});
    for (std::size_t c = 0; c < 5; ++c) {
        double best = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (const auto& row : table.rows) {
            const double v = column(row, c);
            if (!std::isnan(v) && (!any || v > best)) {
                best = v;
                any = true;
            }
        }
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            table.best[i][c] = any && column(table.rows[i], c) == best;
        }
    }
    return table;
}

}  // namespace specreg
