#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace jgw {

struct PriceRow {
    std::chrono::sys_days date;
    double close;
};

/// Daily close prices; dates strictly increasing, closes > 0, at least 2 rows.
class PriceSeries {
public:
    PriceSeries(std::string ticker, std::vector<PriceRow> rows);

    const std::string& ticker() const noexcept { return ticker_; }
    const std::vector<PriceRow>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

    /// Calendar days between the first and last row.
    double calendar_span_days() const;

private:
    std::string ticker_;
    std::vector<PriceRow> rows_;
};

/// Cumulative ratios xi_i = X_i / X_0 with their trading-day offsets.
class RatioSeries {
public:
    RatioSeries(std::vector<double> ratios, std::vector<double> day_index);

    /// Ratios at day offsets 1, 2, ..., n.
    static RatioSeries from_ratios(std::vector<double> ratios);

    std::span<const double> ratios() const noexcept { return ratios_; }
    std::span<const double> day_index() const noexcept { return day_index_; }
    std::size_t size() const noexcept { return ratios_.size(); }
    bool empty() const noexcept { return ratios_.empty(); }

private:
    std::vector<double> ratios_;
    std::vector<double> day_index_;
};

}  // namespace jgw
