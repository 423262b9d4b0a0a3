#include "specreg/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include "specreg/csv.hpp"
#include "specreg/error.hpp"

namespace specreg {

namespace {

constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

bool is_present(double price) { return std::isfinite(price) && price > 0.0; }

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string where(const std::filesystem::path& path, std::size_t line, const std::string& column) {
    return path.filename().string() + " row " + std::to_string(line) + " column '" + column + "'";
}

double parse_price(const std::string& field, const std::filesystem::path& path, std::size_t line,
                   const std::string& column) {
    const std::string text = trim(field);
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw Error("unparseable price '" + field + "' at " + where(path, line, column));
    }
    return value;
}

Date parse_date(const std::string& field, const std::filesystem::path& path, std::size_t line,
                const std::string& column) {
    auto date = parse_iso_date(trim(field));
    if (!date) {
        throw Error("unparseable date '" + field + "' at " + where(path, line, column));
    }
    return *date;
}

PricePanel build_panel(const std::map<Date, std::map<std::string, double>>& cells,
                       const std::vector<std::string>& tickers, const std::string& tag) {
    PricePanel panel;
    panel.source_tag = tag;
    panel.tickers = tickers;
    panel.prices = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(cells.size()),
                                             static_cast<Eigen::Index>(tickers.size()), kAbsent);
    std::map<std::string, Eigen::Index> col_of;
    for (std::size_t j = 0; j < tickers.size(); ++j) {
        col_of[tickers[j]] = static_cast<Eigen::Index>(j);
    }
    Eigen::Index row = 0;
    for (const auto& [date, values] : cells) {
        panel.dates.push_back(date);
        for (const auto& [ticker, price] : values) {
            panel.prices(row, col_of.at(ticker)) = price;
        }
        ++row;
    }
    return panel;
}

PricePanel load_long(const std::vector<csv::Row>& rows, const std::filesystem::path& path) {
    const auto& header = rows.front();
    int date_col = -1;
    int ticker_col = -1;
    int close_col = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        const std::string name = lower(trim(header[j]));
        if (name == "date") date_col = static_cast<int>(j);
        if (name == "ticker") ticker_col = static_cast<int>(j);
        if (name == "close") close_col = static_cast<int>(j);
    }
    if (date_col < 0 || ticker_col < 0 || close_col < 0) {
        throw Error(path.string() + ": long format requires columns date, ticker, close");
    }
    std::map<Date, std::map<std::string, double>> cells;
    std::vector<std::string> tickers;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::size_t line = i + 1;
        const auto need = static_cast<std::size_t>(std::max({date_col, ticker_col, close_col}));
        if (row.size() <= need) {
            throw Error(path.filename().string() + " row " + std::to_string(line) + ": too few fields");
        }
        const Date date = parse_date(row[date_col], path, line, "date");
        const std::string ticker = trim(row[ticker_col]);
        if (ticker.empty()) {
            throw Error("empty ticker at " + where(path, line, "ticker"));
        }
        const std::string close_text = trim(row[close_col]);
        if (close_text.empty()) {
            continue;  // explicit missing value
        }
        const double price = parse_price(close_text, path, line, "close");
        auto& day = cells[date];
        if (!day.emplace(ticker, price).second) {
            throw Error("duplicate (date, ticker) (" + format_iso_date(date) + ", " + ticker + ") at " +
                        path.filename().string() + " row " + std::to_string(line));
        }
        if (seen.insert(ticker).second) {
            tickers.push_back(ticker);
        }
    }
    if (cells.empty()) {
        throw Error(path.string() + ": no data rows");
    }
    return build_panel(cells, tickers, path.stem().string());
}

PricePanel load_wide(const std::vector<csv::Row>& rows, const std::filesystem::path& path) {
    const auto& header = rows.front();
    int date_col = -1;
    std::vector<std::pair<std::size_t, std::string>> ticker_cols;
    std::unordered_set<std::string> seen;
    for (std::size_t j = 0; j < header.size(); ++j) {
        const std::string name = trim(header[j]);
        if (lower(name) == "date" && date_col < 0) {
            date_col = static_cast<int>(j);
            continue;
        }
        if (name.empty()) {
            throw Error(path.string() + ": empty ticker name in header column " + std::to_string(j + 1));
        }
        if (!seen.insert(name).second) {
            throw Error(path.string() + ": duplicate ticker column '" + name + "'");
        }
        ticker_cols.emplace_back(j, name);
    }
    if (date_col < 0) {
        throw Error(path.string() + ": wide format requires a date column");
    }
    if (ticker_cols.empty()) {
        throw Error(path.string() + ": wide format has no ticker columns");
    }
    std::map<Date, std::map<std::string, double>> cells;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::size_t line = i + 1;
        if (row.size() > header.size()) {
            throw Error(path.filename().string() + " row " + std::to_string(line) + ": too many fields");
        }
        const Date date = parse_date(row.at(date_col), path, line, "date");
        if (cells.count(date) != 0) {
            throw Error("duplicate date " + format_iso_date(date) + " at " + path.filename().string() +
                        " row " + std::to_string(line));
        }
        auto& day = cells[date];
        for (const auto& [j, ticker] : ticker_cols) {
            if (j >= row.size() || trim(row[j]).empty()) {
                continue;
            }
            day.emplace(ticker, parse_price(row[j], path, line, ticker));
        }
    }
    if (cells.empty()) {
        throw Error(path.string() + ": no data rows");
    }
    std::vector<std::string> tickers;
    for (const auto& entry : ticker_cols) {
        tickers.push_back(entry.second);
    }
    return build_panel(cells, tickers, path.stem().string());
}

}  // namespace

bool PricePanel::has_absent_cells() const {
    return !prices.unaryExpr([](double p) { return is_present(p) ? 0.0 : 1.0; }).isZero();
}

void GapPolicy::validate() const {
    if (max_forward_fill_days < 0) {
        throw Error("max_forward_fill_days must be >= 0");
    }
    if (!(max_missing_fraction >= 0.0 && max_missing_fraction <= 1.0)) {
        throw Error("max_missing_fraction must lie in [0, 1]");
    }
}

CsvLayout detect_layout(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::string line;
    std::getline(in, line);
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    auto header = csv::split_line(line);
    for (auto& h : header) {
        h = lower(trim(h));
    }
    std::set<std::string> names(header.begin(), header.end());
    if (header.size() == 3 && names == std::set<std::string>{"date", "ticker", "close"}) {
        return CsvLayout::long_format;
    }
    return CsvLayout::wide_format;
}

PricePanel load_price_panel(const std::filesystem::path& path, CsvLayout layout) {
    if (!std::filesystem::exists(path)) {
        throw Error("input file not found: " + path.string());
    }
    const auto rows = csv::read_file(path);
    if (rows.empty()) {
        throw Error(path.string() + ": empty file");
    }
    return layout == CsvLayout::long_format ? load_long(rows, path) : load_wide(rows, path);
}

void validate_panel(const PricePanel& panel, bool require_complete) {
    if (panel.prices.rows() != static_cast<Eigen::Index>(panel.dates.size()) ||
        panel.prices.cols() != static_cast<Eigen::Index>(panel.tickers.size())) {
        throw Error("price panel shape does not match dates/tickers");
    }
    if (panel.rows() < 2) {
        throw Error("price panel needs at least 2 dates");
    }
    if (panel.cols() < 1) {
        throw Error("price panel has no tickers");
    }
    for (std::size_t i = 1; i < panel.dates.size(); ++i) {
        if (!(panel.dates[i - 1] < panel.dates[i])) {
            throw Error("dates not strictly increasing at " + format_iso_date(panel.dates[i]));
        }
    }
    if (require_complete && panel.has_absent_cells()) {
        throw Error("price panel has absent or non-positive cells");
    }
}

PricePanel clean_panel(const PricePanel& panel, const GapPolicy& policy) {
    policy.validate();
    validate_panel(panel, false);
    const Eigen::Index rows = panel.rows();

    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < panel.cols(); ++j) {
        Eigen::Index missing = 0;
        Eigen::Index run = 0;
        Eigen::Index longest = 0;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (is_present(panel.prices(i, j))) {
                run = 0;
            } else {
                ++missing;
                longest = std::max(longest, ++run);
            }
        }
        const double fraction = static_cast<double>(missing) / static_cast<double>(rows);
        const bool leading_gap = !is_present(panel.prices(0, j));
        if (fraction > policy.max_missing_fraction || longest > policy.max_forward_fill_days ||
            leading_gap) {
            continue;
        }
        kept.push_back(j);
    }
    if (kept.empty()) {
        throw Error("empty universe after cleaning");
    }

    PricePanel out;
    out.dates = panel.dates;
    out.source_tag = panel.source_tag;
    out.prices.resize(rows, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) {
        const Eigen::Index j = kept[c];
        out.tickers.push_back(panel.tickers[static_cast<std::size_t>(j)]);
        double last = panel.prices(0, j);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double p = panel.prices(i, j);
            if (is_present(p)) {
                last = p;
            }
            out.prices(i, static_cast<Eigen::Index>(c)) = last;
        }
    }
    return out;
}

ReturnPanel log_returns(const PricePanel& panel) {
    validate_panel(panel, false);
    for (Eigen::Index i = 0; i < panel.rows(); ++i) {
        for (Eigen::Index j = 0; j < panel.cols(); ++j) {
            if (!is_present(panel.prices(i, j))) {
                throw Error("non-positive or absent price for " + panel.tickers[static_cast<std::size_t>(j)] +
                            " on " + format_iso_date(panel.dates[static_cast<std::size_t>(i)]));
            }
        }
    }
    ReturnPanel out;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    const Eigen::MatrixXd logp = panel.prices.array().log().matrix();
    out.returns = logp.bottomRows(panel.rows() - 1) - logp.topRows(panel.rows() - 1);
    return out;
}

PricePanel resample_weekly(const PricePanel& panel) {
    validate_panel(panel, false);
    std::vector<Eigen::Index> last_rows;
    for (std::size_t i = 0; i < panel.dates.size(); ++i) {
        const bool week_ends = i + 1 == panel.dates.size() ||
                               iso_week_start(panel.dates[i + 1]) != iso_week_start(panel.dates[i]);
        if (week_ends) {
            last_rows.push_back(static_cast<Eigen::Index>(i));
        }
    }
    PricePanel out;
    out.tickers = panel.tickers;
    out.source_tag = panel.source_tag;
    out.prices.resize(static_cast<Eigen::Index>(last_rows.size()), panel.cols());
    for (std::size_t r = 0; r < last_rows.size(); ++r) {
        out.dates.push_back(panel.dates[static_cast<std::size_t>(last_rows[r])]);
        out.prices.row(static_cast<Eigen::Index>(r)) = panel.prices.row(last_rows[r]);
    }
    return out;
}

PricePanel merge_universes(std::span<const PricePanel> panels) {
    if (panels.size() < 2) {
        throw Error("merge_universes needs at least 2 panels");
    }
    for (const auto& p : panels) {
        validate_panel(p, false);
    }
    std::vector<Date> common = panels.front().dates;
    for (const auto& p : panels.subspan(1)) {
        std::vector<Date> next;
        std::set_intersection(common.begin(), common.end(), p.dates.begin(), p.dates.end(),
                              std::back_inserter(next));
        common = std::move(next);
    }
    if (common.empty()) {
        throw Error("empty date intersection across panels");
    }

    PricePanel out;
    out.dates = common;
    out.source_tag = "merged";
    Eigen::Index total_cols = 0;
    for (const auto& p : panels) {
        total_cols += p.cols();
    }
    out.prices.resize(static_cast<Eigen::Index>(common.size()), total_cols);
    std::unordered_set<std::string> names;
    Eigen::Index col = 0;
    for (const auto& p : panels) {
        std::vector<Eigen::Index> row_of;
        row_of.reserve(common.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < p.dates.size() && k < common.size(); ++i) {
            if (p.dates[i] == common[k]) {
                row_of.push_back(static_cast<Eigen::Index>(i));
                ++k;
            }
        }
        for (Eigen::Index j = 0; j < p.cols(); ++j, ++col) {
            const auto& base = p.tickers[static_cast<std::size_t>(j)];
            std::string name = p.source_tag.empty() ? base : p.source_tag + ":" + base;
            if (!names.insert(name).second) {
                throw Error("ticker '" + name + "' is not unique across merged panels");
            }
            out.tickers.push_back(std::move(name));
            for (std::size_t r = 0; r < row_of.size(); ++r) {
                out.prices(static_cast<Eigen::Index>(r), col) = p.prices(row_of[r], j);
            }
        }
    }
    validate_panel(out, false);
    return out;
}

}  // namespace specreg
