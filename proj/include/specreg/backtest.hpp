#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specreg/market_data.hpp"
#include "specreg/matrix_cleaning.hpp"
#include "specreg/metrics.hpp"
#include "specreg/portfolio.hpp"
#include "specreg/regime.hpp"
#include "specreg/rolling_spectrum.hpp"

namespace specreg {

enum class StrategyKind { equal_weight, principal_eigen, min_variance, regime_aware };
enum class Cleaning { raw, clip, clip_and_shrink };

std::string_view to_string(StrategyKind kind);
std::string_view to_string(Cleaning cleaning);
StrategyKind parse_strategy_kind(std::string_view text);
Cleaning parse_cleaning(std::string_view text);

struct StrategySpec {
    StrategyKind kind = StrategyKind::equal_weight;
    Cleaning cleaning = Cleaning::clip_and_shrink;
    double delta = 0.1;
    ShrinkageTarget target = ShrinkageTarget::compound_symmetry;
    double gamma1 = 0.3;
    double gamma2 = 0.2;
    IndicatorMode indicator_mode = IndicatorMode::causal;
    int ell = 2;

    std::string name() const { return std::string(to_string(kind)); }
    void validate() const;
};

struct BacktestOptions {
    VolCentering vol_centering = VolCentering::annualized_mean;
};

struct PerformanceMetrics {
    double mean_ann = 0.0;
    double vol_ann = 0.0;
    double sharpe = 0.0;
    double sortino = 0.0;
    double treynor = 0.0;
    double beta_vs_ew = 0.0;
    bool sharpe_degenerate = false;
    bool sortino_degenerate = false;
    bool treynor_degenerate = false;
};

PerformanceMetrics compute_metrics(std::span<const double> weekly, std::span<const double> market,
                                   VolCentering centering = VolCentering::annualized_mean);

/// Rows/dates touched by one rebalance decision versus the block it is
/// applied to. A look-ahead-free step has last_data_row < first_applied_row.
struct StepAudit {
    Eigen::Index last_data_row = 0;
    Eigen::Index first_applied_row = 0;
    Date last_data_date{};
    Date first_applied_date{};
};

struct RebalanceRecord {
    Date asof_date{};
    /// Full-universe weights; assets dropped from the window carry zero.
    Weights weights;
    /// `none`, a FallbackLevel name, or `equal_weight` when a principal
    /// eigenportfolio was not investable.
    std::string fallback = "none";
    Regime regime = Regime::calm;
};

struct BacktestReport {
    StrategySpec strategy;
    std::vector<std::string> tickers;
    std::vector<Date> asof_dates;
    std::vector<double> weekly_returns;
    std::vector<double> cumulative;
    /// Equal-weight proxy over the same window universes.
    std::vector<double> market_returns;
    std::vector<RebalanceRecord> weights_history;
    std::vector<StepAudit> audit;
    PerformanceMetrics metrics;
    std::vector<std::string> warnings;
};

/// Rolling backtest: estimate on rows [t - T, t - 1], hold the weights over
/// rows [t, t + step) and rebalance. Needs at least two complete steps.
BacktestReport run_backtest(const ReturnPanel& panel, const WindowSpec& spec, const StrategySpec& strategy,
                            const BacktestOptions& options = {});

/// Runs several strategies over the same window estimates, one thread each.
std::vector<BacktestReport> run_backtests(const ReturnPanel& panel, const WindowSpec& spec,
                                          std::span<const StrategySpec> strategies,
                                          const BacktestOptions& options = {});

struct PerformanceRow {
    std::string strategy;
    double mean_pct = 0.0;
    double vol_pct = 0.0;
    double sharpe = 0.0;
    double sortino = 0.0;
    double treynor_pct = 0.0;
};

/// Columns: mean, vol, Sharpe, Sortino, Treynor. Best = max, except vol = min.
struct PerformanceTable {
    std::vector<PerformanceRow> rows;
    std::vector<std::array<bool, 5>> best;
};

PerformanceTable performance_table(std::span<const BacktestReport> reports);

}  // namespace specreg
