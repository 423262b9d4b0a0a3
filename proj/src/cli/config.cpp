#include "specreg/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "specreg/error.hpp"

namespace specreg::cli {

namespace pt = boost::property_tree;

namespace {

template <typename T>
T convert(const std::string& section, const std::string& key, const std::string& value) {
    try {
        return boost::lexical_cast<T>(value);
    } catch (const boost::bad_lexical_cast&) {
        throw Error("config [" + section + "] " + key + ": cannot parse '" + value + "'");
    }
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& value) {
    if (value == "true" || value == "on" || value == "yes" || value == "1") {
        return true;
    }
    if (value == "false" || value == "off" || value == "no" || value == "0") {
        return false;
    }
    throw Error("config [" + section + "] " + key + ": expected a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

void parse_run(const pt::ptree& section, RunConfig& cfg) {
    const std::string name = "run";
    for (const auto& [key, node] : section) {
        const auto value = node.get_value<std::string>();
        if (key == "window_length") {
            cfg.window.length = convert<int>(name, key, value);
        } else if (key == "window_step") {
            cfg.window.step = convert<int>(name, key, value);
        } else if (key == "top_k") {
            cfg.top_k = convert<int>(name, key, value);
        } else if (key == "delta") {
            cfg.delta = convert<double>(name, key, value);
        } else if (key == "clipping") {
            cfg.clipping = parse_bool(name, key, value);
        } else if (key == "shrinkage_target") {
            if (value == "compound_symmetry") {
                cfg.shrinkage_target = ShrinkageTarget::compound_symmetry;
            } else if (value == "identity") {
                cfg.shrinkage_target = ShrinkageTarget::identity;
            } else {
                throw Error("config [run] shrinkage_target: unknown target '" + value + "'");
            }
        } else if (key == "ell") {
            cfg.ell = convert<int>(name, key, value);
        } else if (key == "indicator_mode") {
            cfg.indicator_mode = parse_indicator_mode(value);
        } else if (key == "strategies") {
            cfg.strategies.clear();
            for (const auto& s : split_list(value)) {
                cfg.strategies.push_back(parse_strategy_kind(s));
            }
        } else if (key == "gamma1") {
            cfg.gamma1 = convert<double>(name, key, value);
        } else if (key == "gamma2") {
            cfg.gamma2 = convert<double>(name, key, value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "seed") {
            cfg.seed = convert<std::uint64_t>(name, key, value);
        } else if (key == "vol_centering") {
            if (value == "annualized_mean") {
                cfg.vol_centering = VolCentering::annualized_mean;
            } else if (value == "weekly_mean") {
                cfg.vol_centering = VolCentering::weekly_mean;
            } else {
                throw Error("config [run] vol_centering: unknown value '" + value + "'");
            }
        } else if (key == "max_forward_fill_days") {
            cfg.gaps.max_forward_fill_days = convert<int>(name, key, value);
        } else if (key == "max_missing_fraction") {
            cfg.gaps.max_missing_fraction = convert<double>(name, key, value);
        } else {
            throw Error("config [run]: unknown key '" + key + "'");
        }
    }
}

void parse_synth(const pt::ptree& section, RunConfig& cfg) {
    const std::string name = "synth";
    auto& s = cfg.synth;
    for (const auto& [key, node] : section) {
        const auto value = node.get_value<std::string>();
        if (key == "assets") {
            s.assets = convert<int>(name, key, value);
        } else if (key == "days") {
            s.days = convert<int>(name, key, value);
        } else if (key == "rho_calm") {
            s.rho_calm = convert<double>(name, key, value);
        } else if (key == "rho_crisis") {
            s.rho_crisis = convert<double>(name, key, value);
        } else if (key == "segment_length") {
            s.segment_length = convert<int>(name, key, value);
        } else if (key == "sigma") {
            s.sigma = convert<double>(name, key, value);
        } else if (key == "start_date") {
            const auto d = parse_iso_date(value);
            if (!d) {
                throw Error("config [synth] start_date: expected YYYY-MM-DD, got '" + value + "'");
            }
            s.start_date = *d;
        } else {
            throw Error("config [synth]: unknown key '" + key + "'");
        }
    }
}

MarketInput parse_market(const std::string& market, const pt::ptree& section, const std::filesystem::path& base) {
    MarketInput in;
    in.name = market;
    for (const auto& [key, node] : section) {
        const auto value = node.get_value<std::string>();
        if (key == "path") {
            in.path = resolve(base, value);
        } else if (key == "format") {
            if (value == "long") {
                in.layout = CsvLayout::long_format;
            } else if (value == "wide") {
                in.layout = CsvLayout::wide_format;
            } else if (value != "auto") {
                throw Error("config [market." + market + "] format: expected auto, long or wide");
            }
        } else {
            throw Error("config [market." + market + "]: unknown key '" + key + "'");
        }
    }
    if (in.path.empty()) {
        throw Error("config [market." + market + "]: missing path");
    }
    return in;
}

}  // namespace

Cleaning RunConfig::cleaning() const {
    if (!clipping) {
        return Cleaning::raw;
    }
    return delta > 0.0 ? Cleaning::clip_and_shrink : Cleaning::clip;
}

std::vector<StrategySpec> RunConfig::strategy_specs() const {
    std::vector<StrategySpec> out;
    for (auto kind : strategies) {
        StrategySpec s;
        s.kind = kind;
        s.cleaning = cleaning();
        s.delta = delta;
        s.target = shrinkage_target;
        s.gamma1 = gamma1;
        s.gamma2 = gamma2;
        s.indicator_mode = indicator_mode;
        s.ell = ell;
        out.push_back(s);
    }
    return out;
}

void RunConfig::validate(bool check_inputs) const {
    window.validate();
    gaps.validate();
    synth.validate();
    if (top_k < 1) {
        throw Error("top_k must be >= 1");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw Error("delta must lie in [0, 1]");
    }
    if (ell < 1) {
        throw Error("ell must be >= 1");
    }
    std::set<std::string> names;
    for (const auto& m : markets) {
        if (!names.insert(m.name).second) {
            throw Error("duplicate market '" + m.name + "'");
        }
        if (check_inputs && !std::filesystem::is_regular_file(m.path)) {
            throw Error("input file not found: " + m.path.string());
        }
    }
    for (const auto& s : strategy_specs()) {
        s.validate();
    }
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error("config: " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    RunConfig cfg;
    for (const auto& [section, node] : tree) {
        if (node.empty() && !node.data().empty()) {
            throw Error("config: key '" + section + "' outside a section");
        }
        if (section == "run") {
            parse_run(node, cfg);
        } else if (section == "synth") {
            parse_synth(node, cfg);
        } else if (section.rfind("market.", 0) == 0 && section.size() > 7) {
            cfg.markets.push_back(parse_market(section.substr(7), node, base_dir));
        } else {
            throw Error("config: unknown section [" + section + "]");
        }
    }
    if (!cfg.output_dir.is_absolute()) {
        cfg.output_dir = base_dir / cfg.output_dir;
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path());
}

}  // namespace specreg::cli
