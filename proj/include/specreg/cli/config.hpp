#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specreg/backtest.hpp"
#include "specreg/cli/synthetic.hpp"
#include "specreg/market_data.hpp"
#include "specreg/rolling_spectrum.hpp"

namespace specreg::cli {

struct MarketInput {
    std::string name;
    std::filesystem::path path;
    /// Empty means detect from the header.
    std::optional<CsvLayout> layout;
};

/// Everything a run needs. Loaded from an INI file:
///
///   [run]            window_length, window_step, top_k, delta, clipping,
///                    shrinkage_target, ell, indicator_mode, strategies,
///                    gamma1, gamma2, output_dir, seed, vol_centering,
///                    max_forward_fill_days, max_missing_fraction
///   [market.NAME]    path, format = auto | long | wide
///   [synth]          assets, days, rho_calm, rho_crisis, segment_length,
///                    sigma, start_date
///
/// Relative paths resolve against the config file's directory.
struct RunConfig {
    std::vector<MarketInput> markets;
    WindowSpec window;
    int top_k = 3;
    double delta = 0.1;
    bool clipping = true;
    ShrinkageTarget shrinkage_target = ShrinkageTarget::compound_symmetry;
    int ell = 2;
    IndicatorMode indicator_mode = IndicatorMode::causal;
    std::vector<StrategyKind> strategies{StrategyKind::equal_weight, StrategyKind::principal_eigen,
                                         StrategyKind::min_variance, StrategyKind::regime_aware};
    double gamma1 = 0.3;
    double gamma2 = 0.2;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 42;
    VolCentering vol_centering = VolCentering::annualized_mean;
    GapPolicy gaps;
    SyntheticSpec synth;

    Cleaning cleaning() const;
    std::vector<StrategySpec> strategy_specs() const;

    /// Range checks; with `check_inputs`, every market file must exist.
    void validate(bool check_inputs = true) const;
};

RunConfig load_config(const std::filesystem::path& path);

/// Parses INI text; `base_dir` anchors relative paths.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

}  // namespace specreg::cli
