#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "specreg/dates.hpp"

namespace specreg {

/// Date x ticker matrix of adjusted closing prices. Absent cells are NaN until
/// the panel passes through clean_panel.
struct PricePanel {
    std::vector<Date> dates;
    std::vector<std::string> tickers;
    Eigen::MatrixXd prices;
    std::string source_tag;

    Eigen::Index rows() const { return prices.rows(); }
    Eigen::Index cols() const { return prices.cols(); }
    bool has_absent_cells() const;
};

/// Log-returns; row t is the return realised on dates[t].
struct ReturnPanel {
    std::vector<Date> dates;
    std::vector<std::string> tickers;
    Eigen::MatrixXd returns;

    Eigen::Index rows() const { return returns.rows(); }
    Eigen::Index cols() const { return returns.cols(); }
};

/// Thresholds deciding which tickers survive cleaning. The defaults amount to
/// one trading week of forward-fill and 5% missing cells.
struct GapPolicy {
    int max_forward_fill_days = 5;
    double max_missing_fraction = 0.05;

    void validate() const;
};

enum class CsvLayout { long_format, wide_format };

/// Guesses the layout from the header: exactly `date,ticker,close` is long.
CsvLayout detect_layout(const std::filesystem::path& path);

/// Loads a price CSV into a panel over the union of all dates; cells without
/// a value are left absent (NaN). Throws specreg::Error naming row and column
/// on malformed input.
PricePanel load_price_panel(const std::filesystem::path& path, CsvLayout layout);

/// Checks the structural invariants: sorted unique dates, at least two rows,
/// at least one column, matching shapes. With `require_complete`, every cell
/// must be present and strictly positive.
void validate_panel(const PricePanel& panel, bool require_complete);

/// Drops tickers with too many or too long gaps (or with no leading price) and
/// forward-fills the remaining gaps. Non-positive prices count as absent.
PricePanel clean_panel(const PricePanel& panel, const GapPolicy& policy = {});

ReturnPanel log_returns(const PricePanel& panel);

/// One row per ISO week holding the week's last available price, dated on
/// that last trading day.
PricePanel resample_weekly(const PricePanel& panel);

/// Concatenates columns over the intersection of dates. Tickers are prefixed
/// with `source_tag:` when the panel carries a tag.
PricePanel merge_universes(std::span<const PricePanel> panels);

}  // namespace specreg
