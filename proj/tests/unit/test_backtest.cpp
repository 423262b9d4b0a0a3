#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "specreg/backtest.hpp"
#include "specreg/cli/synthetic.hpp"
#include "specreg/error.hpp"

using namespace specreg;

namespace {

ReturnPanel two_asset_fixture() {
    Eigen::MatrixXd lr(30, 2);
    for (int t = 0; t < 30; ++t) {
        lr(t, 0) = 0.01 * std::sin(0.9 * t + 0.3);
        lr(t, 1) = 0.015 * std::cos(0.5 * t) - 0.002;
    }
    return fixtures::return_panel(lr);
}

ReturnPanel synthetic_returns(std::uint64_t seed, int assets = 12, int days = 900) {
    cli::SyntheticSpec spec;
    spec.assets = assets;
    spec.days = days;
    spec.segment_length = 150;
    spec.seed = seed;
    return log_returns(cli::generate_two_regime(spec).prices);
}

StrategySpec strategy(StrategyKind kind) {
    StrategySpec s;
    s.kind = kind;
    return s;
}

const StrategyKind kAllKinds[] = {StrategyKind::equal_weight, StrategyKind::principal_eigen,
                                  StrategyKind::min_variance, StrategyKind::regime_aware};

}  // namespace

TEST(StrategySpec, ParseAndValidate) {
    EXPECT_EQ(parse_strategy_kind("regime_aware"), StrategyKind::regime_aware);
    EXPECT_EQ(parse_cleaning("clip"), Cleaning::clip);
    EXPECT_THROW(parse_strategy_kind("momentum"), Error);
    EXPECT_THROW(parse_cleaning("none"), Error);
    for (auto kind : kAllKinds) {
        EXPECT_EQ(parse_strategy_kind(to_string(kind)), kind);
    }
    auto s = strategy(StrategyKind::min_variance);
    s.delta = 1.5;
    EXPECT_THROW(s.validate(), Error);
    s.delta = 0.1;
    s.ell = 0;
    EXPECT_THROW(s.validate(), Error);
}

TEST(Backtest, EqualWeightMatchesHandComputation) {
    const auto panel = two_asset_fixture();
    const auto report = run_backtest(panel, WindowSpec{10, 5}, strategy(StrategyKind::equal_weight));
    const std::vector<double> frozen{0.01432532583065523, -0.02086335528025651, 0.00371250395197937,
                                     0.00774070839928224};
    const std::vector<double> frozen_cum{0.01432532583065527, -0.0068369038119116, -0.00314978189235315,
                                         0.00456654496377906};
    ASSERT_EQ(report.weekly_returns.size(), 4u);
    for (std::size_t s = 0; s < 4; ++s) {
        const Eigen::Index first = 10 + 5 * static_cast<Eigen::Index>(s);
        double direct = 0.0;
        for (int j = 0; j < 2; ++j) {
            direct += 0.5 * std::expm1(panel.returns.col(j).segment(first, 5).sum());
        }
        EXPECT_NEAR(report.weekly_returns[s], direct, 1e-12);
        EXPECT_NEAR(report.weekly_returns[s], frozen[s], 1e-12);
        EXPECT_NEAR(report.cumulative[s], frozen_cum[s], 1e-12);
        EXPECT_EQ(report.asof_dates[s], panel.dates[static_cast<std::size_t>(first - 1)]);
    }
}

TEST(Backtest, SingleAssetFollowsItsOwnBlocks) {
    std::mt19937_64 rng(61);
    const auto panel = fixtures::return_panel(0.01 * fixtures::gaussian(40, 1, rng));
    for (auto kind : kAllKinds) {
        const auto report = run_backtest(panel, WindowSpec{10, 5}, strategy(kind));
        ASSERT_EQ(report.weekly_returns.size(), 6u);
        for (std::size_t s = 0; s < 6; ++s) {
            const Eigen::Index first = 10 + 5 * static_cast<Eigen::Index>(s);
            EXPECT_NEAR(report.weekly_returns[s], std::expm1(panel.returns.col(0).segment(first, 5).sum()), 1e-14)
                << to_string(kind);
            EXPECT_NEAR(report.weights_history[s].weights.w(0), 1.0, 1e-12);
        }
    }
}

TEST(Backtest, NoLookAheadUnderCausalIndicator) {
    const auto panel = synthetic_returns(7);
    for (auto kind : kAllKinds) {
        const auto report = run_backtest(panel, WindowSpec{126, 5}, strategy(kind));
        ASSERT_EQ(report.audit.size(), report.weekly_returns.size());
        for (const auto& a : report.audit) {
            EXPECT_LT(a.last_data_row, a.first_applied_row);
            EXPECT_LT(a.last_data_date, a.first_applied_date);
        }
    }
}

TEST(Backtest, FullSampleIndicatorIsFlaggedByAudit) {
    const auto panel = synthetic_returns(8);
    auto s = strategy(StrategyKind::regime_aware);
    s.indicator_mode = IndicatorMode::full_sample;
    const auto report = run_backtest(panel, WindowSpec{126, 5}, s);
    EXPECT_GE(report.audit.front().last_data_row, report.audit.front().first_applied_row);
}

TEST(Backtest, EqualWeightTreynorIsItsMean) {
    const auto report = run_backtest(synthetic_returns(9), WindowSpec{126, 5}, strategy(StrategyKind::equal_weight));
    EXPECT_NEAR(report.metrics.beta_vs_ew, 1.0, 1e-10);
    EXPECT_NEAR(report.metrics.treynor, report.metrics.mean_ann, 1e-10);
    ASSERT_EQ(report.weekly_returns.size(), report.market_returns.size());
    for (std::size_t i = 0; i < report.weekly_returns.size(); ++i) {
        EXPECT_NEAR(report.weekly_returns[i], report.market_returns[i], 1e-15);
    }
}

TEST(Backtest, ReportIsInternallyConsistent) {
    const auto panel = synthetic_returns(10);
    const WindowSpec spec{126, 5};
    const auto windows = make_windows(panel, spec);
    std::size_t complete = 0;
    for (const auto& w : windows) {
        complete += w.eval_index + 5 <= panel.returns.rows() ? 1 : 0;
    }
    for (auto kind : kAllKinds) {
        const auto report = run_backtest(panel, spec, strategy(kind));
        EXPECT_EQ(report.weekly_returns.size(), complete);
        EXPECT_EQ(report.weights_history.size(), complete);
        const auto cum = cumulative_returns(report.weekly_returns);
        for (std::size_t i = 0; i < cum.size(); ++i) {
            EXPECT_NEAR(report.cumulative[i], cum[i], 1e-13);
        }
        const auto stats = annualized_stats(report.weekly_returns);
        EXPECT_DOUBLE_EQ(report.metrics.mean_ann, stats.mean_ann);
        EXPECT_DOUBLE_EQ(report.metrics.vol_ann, stats.vol_ann);
        EXPECT_DOUBLE_EQ(report.metrics.sharpe, stats.sharpe);
        for (const auto& rec : report.weights_history) {
            EXPECT_NEAR(rec.weights.w.sum(), 1.0, 1e-9);
            EXPECT_GE(rec.weights.w.minCoeff(), -1e-12);
        }
        for (std::size_t s = 0; s < report.weekly_returns.size(); ++s) {
            const Eigen::Index first = report.audit[s].first_applied_row;
            Eigen::VectorXd block(panel.returns.cols());
            for (Eigen::Index j = 0; j < block.size(); ++j) {
                block(j) = std::expm1(panel.returns.col(j).segment(first, 5).sum());
            }
            EXPECT_NEAR(report.weekly_returns[s], report.weights_history[s].weights.w.dot(block), 1e-12);
        }
    }
}

TEST(Backtest, RegimeAwareIsMinVarianceWhenCalm) {
    const auto panel = synthetic_returns(11);
    auto ra = strategy(StrategyKind::regime_aware);
    const auto a = run_backtest(panel, WindowSpec{126, 5}, ra);
    const auto mv = run_backtest(panel, WindowSpec{126, 5}, strategy(StrategyKind::min_variance));
    int calm = 0;
    int crisis = 0;
    for (std::size_t s = 0; s < a.weekly_returns.size(); ++s) {
        if (a.weights_history[s].regime == Regime::calm) {
            ++calm;
            EXPECT_NEAR(a.weekly_returns[s], mv.weekly_returns[s], 1e-12);
        } else {
            ++crisis;
        }
    }
    EXPECT_GT(calm, 0);
    EXPECT_GT(crisis, 0);
}

TEST(Backtest, DegenerateColumnIsDroppedWithWarning) {
    std::mt19937_64 rng(62);
    Eigen::MatrixXd lr = 0.01 * fixtures::gaussian(60, 3, rng);
    lr.col(1).head(30).setZero();
    const auto panel = fixtures::return_panel(lr);
    const auto report = run_backtest(panel, WindowSpec{20, 5}, strategy(StrategyKind::min_variance));
    EXPECT_FALSE(report.warnings.empty());
    EXPECT_NE(report.warnings.front().find("A2"), std::string::npos);
    EXPECT_EQ(report.weights_history.front().weights.w(1), 0.0);
    EXPECT_NEAR(report.weights_history.front().weights.w.sum(), 1.0, 1e-12);
}

TEST(Backtest, Errors) {
    std::mt19937_64 rng(63);
    const auto panel = fixtures::return_panel(0.01 * fixtures::gaussian(24, 2, rng));
    // windows at 20 only; one full block
    EXPECT_THROW(run_backtest(panel, WindowSpec{15, 5}, strategy(StrategyKind::equal_weight)), Error);
    EXPECT_NO_THROW(run_backtest(panel, WindowSpec{10, 5}, strategy(StrategyKind::equal_weight)));
}

TEST(Backtest, ParallelRunsMatchSequential) {
    const auto panel = synthetic_returns(12);
    std::vector<StrategySpec> specs;
    for (auto kind : kAllKinds) {
        specs.push_back(strategy(kind));
    }
    const auto all = run_backtests(panel, WindowSpec{126, 5}, specs);
    ASSERT_EQ(all.size(), specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto one = run_backtest(panel, WindowSpec{126, 5}, specs[i]);
        EXPECT_EQ(all[i].weekly_returns, one.weekly_returns);
        EXPECT_EQ(all[i].strategy.name(), specs[i].name());
    }
}

TEST(ComputeMetrics, FlatMarketLeavesTreynorUndefined) {
    const std::vector<double> r{0.01, -0.02, 0.015};
    const std::vector<double> m{0.0, 0.0, 0.0};
    const auto pm = compute_metrics(r, m);
    EXPECT_TRUE(pm.treynor_degenerate);
    EXPECT_TRUE(std::isnan(pm.treynor));
}

TEST(PerformanceTable, BestFlags) {
    const auto panel = synthetic_returns(13);
    std::vector<StrategySpec> specs{strategy(StrategyKind::equal_weight)};
    const auto single = run_backtests(panel, WindowSpec{126, 5}, specs);
    const auto t1 = performance_table(single);
    ASSERT_EQ(t1.rows.size(), 1u);
    for (bool b : t1.best[0]) {
        EXPECT_TRUE(b);
    }
    EXPECT_NEAR(t1.rows[0].mean_pct, 100.0 * single[0].metrics.mean_ann, 1e-12);

    specs.push_back(strategy(StrategyKind::equal_weight));
    const auto twins = run_backtests(panel, WindowSpec{126, 5}, specs);
    const auto t2 = performance_table(twins);
    EXPECT_EQ(t2.best[0], t2.best[1]);
    EXPECT_EQ(t2.rows[0].sharpe, t2.rows[1].sharpe);

    specs.push_back(strategy(StrategyKind::min_variance));
    const auto mixed = performance_table(run_backtests(panel, WindowSpec{126, 5}, specs));
    for (int c = 0; c < 5; ++c) {
        int flagged = 0;
        for (const auto& b : mixed.best) {
            flagged += b[static_cast<std::size_t>(c)] ? 1 : 0;
        }
        EXPECT_GE(flagged, 1);
    }
    EXPECT_TRUE(performance_table(std::vector<BacktestReport>{}).rows.empty());
}
