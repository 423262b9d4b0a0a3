#include "specreg/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "specreg/backtest.hpp"
#include "specreg/csv.hpp"
#include "specreg/error.hpp"
#include "specreg/factor_analysis.hpp"
#include "specreg/regime.hpp"
#include "specreg/rolling_spectrum.hpp"

namespace specreg::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return csv::format_number(v); }

template <typename Body>
int guarded(const char* command, Body&& body) {
    try {
        body();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "specreg " << command << ": error: " << e.what() << '\n';
        return 1;
    }
}

void prepare_output(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.output_dir);
}

std::string regime_name(Regime r) { return std::string(to_string(r)); }

void write_spectrum(const fs::path& path, const std::vector<SpectralWindow>& spectral, int top_k) {
    csv::Writer w(path);
    csv::Row header{"asof_date"};
    for (int k = 1; k <= top_k; ++k) {
        header.push_back("lambda_" + std::to_string(k));
    }
    for (int k = 1; k <= top_k; ++k) {
        header.push_back("lambda_" + std::to_string(k) + "_std");
    }
    header.push_back("mp_upper");
    w.write_row(header);

    std::vector<std::vector<double>> standardized;
    for (int k = 0; k < top_k; ++k) {
        std::vector<double> series;
        for (const auto& s : spectral) {
            series.push_back(s.eigenvalues(k));
        }
        standardized.push_back(standardized_series(series));
    }
    for (std::size_t t = 0; t < spectral.size(); ++t) {
        csv::Row row{format_iso_date(spectral[t].asof_date)};
        for (int k = 0; k < top_k; ++k) {
            row.push_back(num(spectral[t].eigenvalues(k)));
        }
        for (int k = 0; k < top_k; ++k) {
            row.push_back(num(standardized[static_cast<std::size_t>(k)][t]));
        }
        row.push_back(num(spectral[t].mp_upper));
        w.write_row(row);
    }
    w.close();
}

// One file per mode k: asof_date then the k-th eigenvector's entries.
void write_eigenvectors(const fs::path& dir, const std::string& market, const std::vector<SpectralWindow>& spectral,
                        int top_k) {
    for (int k = 0; k < top_k; ++k) {
        csv::Writer w(dir / ("eigenvectors_" + market + "_k" + std::to_string(k + 1) + ".csv"));
        csv::Row header{"asof_date"};
        if (!spectral.empty()) {
            header.insert(header.end(), spectral.front().tickers.begin(), spectral.front().tickers.end());
        }
        w.write_row(header);
        for (const auto& s : spectral) {
            csv::Row row{format_iso_date(s.asof_date)};
            for (Eigen::Index i = 0; i < s.eigenvectors.rows(); ++i) {
                row.push_back(num(s.eigenvectors(i, k)));
            }
            w.write_row(row);
        }
        w.close();
    }
}

int effective_top_k(const RunConfig& config, const ReturnPanel& panel) {
    return static_cast<int>(std::min<Eigen::Index>(config.top_k, panel.cols()));
}

struct SummaryRow {
    std::string market;
    PerformanceRow perf;
    double beta_vs_ew = 0.0;
    std::array<bool, 5> best{};
};

// Rounded to the same 12 significant digits as the CSV files.
nlohmann::ordered_json finite_or_null(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return std::stod(num(v));
}

}  // namespace

std::vector<MarketData> load_markets(const RunConfig& config) {
    if (config.markets.empty()) {
        throw Error("no [market.NAME] sections in the config");
    }
    std::vector<MarketData> out;
    for (const auto& m : config.markets) {
        const auto layout = m.layout ? *m.layout : detect_layout(m.path);
        auto raw = load_price_panel(m.path, layout);
        raw.source_tag = m.name;
        MarketData md;
        md.name = m.name;
        md.prices = clean_panel(raw, config.gaps);
        if (md.prices.cols() < raw.cols()) {
            spdlog::warn("{}: {} of {} tickers dropped by the gap policy", m.name, raw.cols() - md.prices.cols(),
                         raw.cols());
        }
        md.returns = log_returns(md.prices);
        out.push_back(std::move(md));
    }
    return out;
}

std::vector<MarketData> load_markets_with_merged(const RunConfig& config) {
    auto markets = load_markets(config);
    if (markets.size() >= 2) {
        std::vector<PricePanel> panels;
        for (const auto& m : markets) {
            panels.push_back(m.prices);
        }
        MarketData merged;
        merged.name = "merged";
        merged.prices = merge_universes(panels);
        merged.prices.source_tag = "merged";
        merged.returns = log_returns(merged.prices);
        markets.push_back(std::move(merged));
    }
    return markets;
}

int cmd_spectrum(const RunConfig& config) {
    return guarded("spectrum", [&] {
        prepare_output(config);
        const auto markets = load_markets_with_merged(config);
        std::map<std::string, DatedSeries> leading;
        for (const auto& m : markets) {
            const int k = effective_top_k(config, m.returns);
            const auto spectral = spectral_series(m.returns, config.window, k);
            write_spectrum(config.output_dir / ("spectrum_" + m.name + ".csv"), spectral, k);
            write_eigenvectors(config.output_dir, m.name, spectral, k);
            if (m.name != "merged" || markets.size() == 1) {
                DatedSeries s;
                for (const auto& w : spectral) {
                    s.dates.push_back(w.asof_date);
                    s.values.push_back(w.eigenvalues(0));
                }
                leading[m.name] = std::move(s);
            }
        }
        if (leading.size() >= 2) {
            const auto cc = eigenvalue_cross_correlation(leading);
            csv::Writer w(config.output_dir / "lambda1_cross_correlation.csv");
            csv::Row header{"market"};
            header.insert(header.end(), cc.markets.begin(), cc.markets.end());
            w.write_row(header);
            for (std::size_t i = 0; i < cc.markets.size(); ++i) {
                csv::Row row{cc.markets[i]};
                for (std::size_t j = 0; j < cc.markets.size(); ++j) {
                    row.push_back(num(cc.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
                }
                w.write_row(row);
            }
            w.close();
        }
    });
}

int cmd_regime(const RunConfig& config) {
    return guarded("regime", [&] {
        prepare_output(config);
        for (const auto& m : load_markets_with_merged(config)) {
            if (m.returns.cols() < 2) {
                throw Error(m.name + ": the crisis indicator needs at least two assets");
            }
            const auto spectral = spectral_series(m.returns, config.window, 2);
            const auto regimes = regime_series(spectral, config.ell, config.indicator_mode);
            csv::Writer w(config.output_dir / ("regime_" + m.name + ".csv"));
            w.write_row({"asof_date", "chi", "label"});
            for (std::size_t t = 0; t < regimes.chi.size(); ++t) {
                w.write_row({format_iso_date(regimes.asof_dates[t]), num(regimes.chi[t]),
                             regime_name(regimes.labels[t])});
            }
            w.close();
        }
    });
}

int cmd_betas(const RunConfig& config) {
    return guarded("betas", [&] {
        prepare_output(config);
        for (const auto& m : load_markets(config)) {
            const auto betas = eigenportfolio_betas(m.returns, config.window, effective_top_k(config, m.returns));
            csv::Writer w(config.output_dir / ("betas_" + m.name + ".csv"));
            w.write_row({"k", "alpha", "beta", "r_squared", "t_statistic", "p_value", "n_obs"});
            for (const auto& b : betas) {
                w.write_row({std::to_string(b.k), num(b.fit.alpha), num(b.fit.beta), num(b.fit.r_squared),
                             num(b.fit.t_statistic), num(b.fit.p_value), std::to_string(b.fit.n_obs)});
            }
            w.close();
        }
    });
}

int cmd_backtest(const RunConfig& config, std::ostream& out) {
    return guarded("backtest", [&] {
        prepare_output(config);
        const auto specs = config.strategy_specs();
        if (specs.empty()) {
            throw Error("no strategies configured");
        }
        BacktestOptions options;
        options.vol_centering = config.vol_centering;

        std::vector<SummaryRow> summary;
        for (const auto& m : load_markets(config)) {
            const auto reports = run_backtests(m.returns, config.window, specs, options);
            for (const auto& r : reports) {
                for (const auto& msg : r.warnings) {
                    spdlog::debug("{} {}: {}", m.name, r.strategy.name(), msg);
                }
                csv::Writer w(config.output_dir / (m.name + "_returns_" + r.strategy.name() + ".csv"));
                w.write_row({"asof_date", "weekly_return", "cumulative"});
                for (std::size_t t = 0; t < r.weekly_returns.size(); ++t) {
                    w.write_row({format_iso_date(r.asof_dates[t]), num(r.weekly_returns[t]), num(r.cumulative[t])});
                }
                w.close();
            }

            csv::Writer w(config.output_dir / (m.name + "_weights.csv"));
            csv::Row header{"asof_date", "strategy"};
            header.insert(header.end(), m.returns.tickers.begin(), m.returns.tickers.end());
            header.push_back("fallback_level");
            header.push_back("regime");
            w.write_row(header);
            for (const auto& r : reports) {
                for (const auto& rec : r.weights_history) {
                    csv::Row row{format_iso_date(rec.asof_date), r.strategy.name()};
                    for (Eigen::Index j = 0; j < rec.weights.w.size(); ++j) {
                        row.push_back(num(rec.weights.w(j)));
                    }
                    row.push_back(rec.fallback);
                    row.push_back(regime_name(rec.regime));
                    w.write_row(row);
                }
            }
            w.close();

            const auto table = performance_table(reports);
            for (std::size_t i = 0; i < table.rows.size(); ++i) {
                summary.push_back({m.name, table.rows[i], reports[i].metrics.beta_vs_ew, table.best[i]});
            }
        }

        static const std::array<const char*, 5> kBestNames{"best_mean", "best_vol", "best_sharpe", "best_sortino",
                                                           "best_treynor"};
        csv::Writer w(config.output_dir / "summary.csv");
        csv::Row header{"market", "strategy", "mean_pct", "vol_pct", "sharpe", "sortino", "treynor_pct", "beta_vs_ew"};
        header.insert(header.end(), kBestNames.begin(), kBestNames.end());
        w.write_row(header);
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& s : summary) {
            csv::Row row{s.market,         s.perf.strategy,    num(s.perf.mean_pct),       num(s.perf.vol_pct),
                         num(s.perf.sharpe), num(s.perf.sortino), num(s.perf.treynor_pct), num(s.beta_vs_ew)};
            nlohmann::ordered_json obj{{"market", s.market},
                               {"strategy", s.perf.strategy},
                               {"mean_pct", finite_or_null(s.perf.mean_pct)},
                               {"vol_pct", finite_or_null(s.perf.vol_pct)},
                               {"sharpe", finite_or_null(s.perf.sharpe)},
                               {"sortino", finite_or_null(s.perf.sortino)},
                               {"treynor_pct", finite_or_null(s.perf.treynor_pct)},
                               {"beta_vs_ew", finite_or_null(s.beta_vs_ew)}};
            for (std::size_t c = 0; c < 5; ++c) {
                row.push_back(s.best[c] ? "1" : "0");
                obj[kBestNames[c]] = s.best[c];
            }
            w.write_row(row);
            doc.push_back(std::move(obj));
        }
        w.close();

        std::ofstream json_out(config.output_dir / "summary.json");
        json_out << std::setw(2) << nlohmann::ordered_json{{"rows", doc}} << '\n';
        json_out.close();
        if (!json_out) {
            throw Error("write failed: " + (config.output_dir / "summary.json").string());
        }

        out << std::left << std::setw(12) << "market" << std::setw(18) << "strategy" << std::right << std::setw(10)
            << "mean%" << std::setw(10) << "vol%" << std::setw(10) << "sharpe" << std::setw(10) << "sortino"
            << std::setw(11) << "treynor%" << '\n';
        out << std::fixed << std::setprecision(3);
        for (const auto& s : summary) {
            const auto mark = [&](std::size_t c) { return s.best[c] ? "*" : " "; };
            out << std::left << std::setw(12) << s.market << std::setw(18) << s.perf.strategy << std::right
                << std::setw(9) << s.perf.mean_pct << mark(0) << std::setw(9) << s.perf.vol_pct << mark(1)
                << std::setw(9) << s.perf.sharpe << mark(2) << std::setw(9) << s.perf.sortino << mark(3)
                << std::setw(10) << s.perf.treynor_pct << mark(4) << '\n';
        }
        out << std::defaultfloat;
    });
}

int cmd_synth(const RunConfig& config) {
    return guarded("synth", [&] {
        config.validate(false);
        fs::create_directories(config.output_dir);
        auto spec = config.synth;
        spec.seed = config.seed;
        const auto synth = generate_two_regime(spec);
        const auto& p = synth.prices;

        csv::Writer prices(config.output_dir / "synthetic_prices.csv");
        csv::Row header{"date"};
        header.insert(header.end(), p.tickers.begin(), p.tickers.end());
        prices.write_row(header);
        for (Eigen::Index t = 0; t < p.rows(); ++t) {
            csv::Row row{format_iso_date(p.dates[static_cast<std::size_t>(t)])};
            for (Eigen::Index j = 0; j < p.cols(); ++j) {
                row.push_back(num(p.prices(t, j)));
            }
            prices.write_row(row);
        }
        prices.close();

        csv::Writer labels(config.output_dir / "synthetic_labels.csv");
        labels.write_row({"date", "label"});
        for (std::size_t t = 0; t < synth.labels.size(); ++t) {
            labels.write_row({format_iso_date(p.dates[t + 1]), regime_name(synth.labels[t])});
        }
        labels.close();
    });
}

}  // namespace specreg::cli
