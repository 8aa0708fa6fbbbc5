#pragma once

// Prices -> returns -> cumulative ratios -> fit -> criticality -> forecasts
// and curves.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jgw/branching.hpp"
#include "jgw/estimation.hpp"
#include "jgw/series.hpp"
#include "jgw/subordinated.hpp"

namespace jgw {

/// Parse a `date,close` CSV (ISO-8601 dates, decimal closes). Throws
/// DataError naming the offending line.
PriceSeries load_prices(std::istream& in, const std::string& ticker);

/// Reads `path`; the ticker defaults to the upper-cased file stem.
PriceSeries load_prices(const std::filesystem::path& path, const std::string& ticker = {});

/// r_i = X_i / X_{i-1} - 1, length n - 1.
std::vector<double> daily_returns(const PriceSeries& prices);

/// xi_i = X_i / X_0 indexed by trading-day offset i = 1 .. n-1.
RatioSeries cumulative_ratios(const PriceSeries& prices);

/// (day, xi_i - 1): the total-return path.
CurveTable total_return_curve(const RatioSeries& ratios);

struct TrendConfig {
    /// theta = lambda / horizon_days; unset means the calendar span of the series.
    std::optional<double> horizon_days;
    int offset = 1;
    double x0 = 1.0;
    double tail_tol = kDefaultTailTol;
    double classify_tol = kDefaultClassifyTol;
    ExtinctionOptions extinction;
    std::vector<double> forecast_times{90.0, 180.0, 365.0, 489.0};
    double curve_t_max = 500.0;
    double curve_step = 1.0;
};

struct ForecastRow {
    double t;
    double expected_ratio;
    double variance;
    double prob_zero;
    std::optional<double> actual_ratio;
};

/// Forecast rows at `times`; `observed` supplies the actual ratio when a time
/// matches one of its day offsets.
std::vector<ForecastRow> forecast_rows(const GenerationLaw& law, const SubordinationParams& sub,
                                       std::span<const double> times, double tail_tol,
                                       const RatioSeries* observed = nullptr);

struct TrendReport {
    std::string ticker;
    FitResult fit;
    std::size_t n_prices = 0;
    double calendar_span_days = 0.0;
    int offset = 1;
    double x0 = 1.0;
    /// True iff the fit is supercritical and the fixed-point root was solved.
    bool extinction_computed = false;
    double extinction_q = 1.0;
    std::vector<ForecastRow> forecasts;
    CurveTable expected_return;
    CurveTable extinction;
    CurveTable total_return;

    /// up-trend / down-trend / flat from the criticality status.
    const char* trend() const noexcept;
};

TrendReport run_trend_algorithm(const PriceSeries& prices, const TrendConfig& config = {});

void write_trend_text(std::ostream& os, const TrendReport& report);

/// header: t,expected_ratio,variance,prob_zero,actual_ratio
void write_forecast_csv(std::ostream& os, std::span<const ForecastRow> rows);

/// header: ticker,t,expected_ratio,variance,prob_zero,actual_ratio
void write_forecast_table_header(std::ostream& os);
void write_forecast_table_rows(std::ostream& os, const std::string& ticker, std::span<const ForecastRow> rows);

}  // namespace jgw
