#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "specreg/cli/commands.hpp"
#include "specreg/cli/config.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("specreg");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("SPECREG_LOG")) {
        const std::string text(level);
        if (text == "error" || text == "warn" || text == "info" || text == "debug") {
            spdlog::set_level(spdlog::level::from_str(text));
        } else {
            spdlog::warn("ignoring SPECREG_LOG='{}'; expected error, warn, info or debug", text);
        }
    }
}

// --out beats SPECREG_OUT beats output_dir in the config file.
specreg::cli::RunConfig resolve(const Options& opts) {
    auto config = specreg::cli::load_config(opts.config);
    if (!opts.out.empty()) {
        config.output_dir = opts.out;
    } else if (const char* env = std::getenv("SPECREG_OUT"); env != nullptr && *env != '\0') {
        config.output_dir = env;
    }
    if (opts.seed) {
        config.seed = *opts.seed;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Random-matrix spectral analysis, regime detection and portfolio backtests"};
    app.require_subcommand(1);

    Options opts;
    int status = 0;
    const auto add = [&](const char* name, const char* help, auto run, bool with_seed) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "INI configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out, "Output directory");
        if (with_seed) {
            sub->add_option("--seed", opts.seed, "Generator seed");
        }
        sub->callback([&opts, &status, run] {
            try {
                status = run(resolve(opts));
            } catch (const std::exception& e) {
                std::cerr << "specreg: error: " << e.what() << '\n';
                status = 1;
            }
        });
    };

    add("spectrum", "Rolling eigenvalue series", [](const auto& c) { return specreg::cli::cmd_spectrum(c); }, false);
    add("regime", "Crisis indicator and regime labels", [](const auto& c) { return specreg::cli::cmd_regime(c); },
        false);
    add("betas", "Market regressions on eigenportfolios", [](const auto& c) { return specreg::cli::cmd_betas(c); },
        false);
    add("backtest", "Rolling strategy backtest and performance table",
        [](const auto& c) { return specreg::cli::cmd_backtest(c, std::cout); }, false);
    add("synth", "Two-regime synthetic price panel", [](const auto& c) { return specreg::cli::cmd_synth(c); }, true);

    CLI11_PARSE(app, argc, argv);
    return status;
}
