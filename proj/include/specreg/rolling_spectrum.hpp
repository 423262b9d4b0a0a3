#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "specreg/dates.hpp"
#include "specreg/market_data.hpp"

namespace specreg {

/// Rolling window geometry in panel rows (trading days for daily panels).
struct WindowSpec {
    int length = 252;
    int step = 5;

    void validate() const;
};

/// Rows [start, end] of a return panel. `eval_index` = end + 1 is the first
/// row a decision based on this window may be applied to.
struct Window {
    Eigen::Index start = 0;
    Eigen::Index end = 0;
    Eigen::Index eval_index = 0;
    Date asof_date{};
};

/// Windows over rows [t - T, t - 1] for t = T, T + step, ... while t <= rows.
std::vector<Window> make_windows(const ReturnPanel& panel, const WindowSpec& spec);

struct CorrelationMatrix {
    std::vector<std::string> tickers;
    Eigen::MatrixXd values;
    Date asof_date{};
    /// Sample standard deviation (T - 1 denominator) of each column.
    Eigen::VectorXd window_vols;
    /// Number of observations T the matrix was estimated from.
    Eigen::Index observations = 0;

    Eigen::Index size() const { return values.rows(); }
};

/// Pearson correlation Z'Z / (T - 1) of a T x N slice of returns. Throws
/// DegenerateColumnError for a zero-variance column.
CorrelationMatrix correlation(const Eigen::Ref<const Eigen::MatrixXd>& slice,
                              std::vector<std::string> tickers = {}, Date asof_date = {});

/// Full spectrum of a correlation matrix, eigenvalues in descending order.
/// Each eigenvector has a non-negative entry sum; exact ties are broken by
/// making the largest-magnitude entry positive.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    double mp_lower = 0.0;
    double mp_upper = 0.0;
    double ratio_c = 0.0;
};

Spectrum eigendecompose(const CorrelationMatrix& corr);

/// Same as above for a bare symmetric matrix with a known aspect ratio N/T.
Spectrum eigendecompose(const Eigen::MatrixXd& values, double ratio_c);

struct MpBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Edges (1 -/+ sqrt(c))^2 of the Marchenko-Pastur support.
MpBounds mp_bounds(double ratio_c);

/// Marchenko-Pastur density at `lambda`; zero outside the support.
double mp_density(double lambda, double ratio_c);

/// Normalised histogram of eigenvalues over [min, max]. When every value is
/// equal the range is widened to value +/- 0.5 so the mass sits in one bin.
struct Histogram {
    std::vector<double> edges;    // bins + 1 entries
    std::vector<double> mass;     // fraction of eigenvalues per bin
    std::vector<double> density;  // mass / bin width, integrates to 1
};

Histogram empirical_spectral_density(std::span<const double> eigenvalues, int bins);

struct SpectralWindow {
    Window window;
    Date asof_date{};
    std::vector<std::string> tickers;
    Eigen::VectorXd eigenvalues;   // top_k, descending
    Eigen::MatrixXd eigenvectors;  // N x top_k
    Eigen::VectorXd window_vols;
    double mp_upper = 0.0;
};

std::vector<SpectralWindow> spectral_series(const ReturnPanel& panel, const WindowSpec& spec, int top_k);

/// Full-sample z-score with sample std; a constant series maps to zeros.
std::vector<double> standardized_series(std::span<const double> series);

/// Expanding-window z-score: entry t uses only series[0..t]. Entries whose
/// prefix has zero spread (including t = 0) map to zero.
std::vector<double> causal_standardized_series(std::span<const double> series);

struct DatedSeries {
    std::vector<Date> dates;
    std::vector<double> values;
};

struct CrossCorrelation {
    std::vector<std::string> markets;
    Eigen::MatrixXd values;
    std::size_t common_dates = 0;
};

/// Pearson correlation between markets' series after an inner join on ISO
/// week. A series that is constant on the common grid gets zero off-diagonal
/// correlation.
CrossCorrelation eigenvalue_cross_correlation(const std::map<std::string, DatedSeries>& series_by_market);

}  // namespace specreg
