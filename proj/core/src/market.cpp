#include "jgw/market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "jgw/errors.hpp"
#include "jgw/text_format.hpp"

namespace jgw {

PriceSeries::PriceSeries(std::string ticker, std::vector<PriceRow> rows)
    : ticker_(std::move(ticker)), rows_(std::move(rows)) {
    if (rows_.size() < 2) throw DataError("price series needs at least 2 rows");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!(rows_[i].close > 0.0) || !std::isfinite(rows_[i].close)) {
            throw DataError("price series: non-positive close at row " + std::to_string(i + 1));
        }
        if (i > 0 && rows_[i].date <= rows_[i - 1].date) {
            throw DataError("price series: dates not strictly increasing at row " + std::to_string(i + 1));
        }
    }
}

double PriceSeries::calendar_span_days() const {
    return static_cast<double>((rows_.back().date - rows_.front().date).count());
}

RatioSeries::RatioSeries(std::vector<double> ratios, std::vector<double> day_index)
    : ratios_(std::move(ratios)), day_index_(std::move(day_index)) {
    if (ratios_.size() != day_index_.size()) throw DataError("ratio series: ratios and day_index differ in length");
    for (std::size_t i = 0; i < ratios_.size(); ++i) {
        if (!(ratios_[i] > 0.0) || !std::isfinite(ratios_[i])) {
            throw DataError("ratio series: ratio " + std::to_string(i) + " is not positive");
        }
    }
}

RatioSeries RatioSeries::from_ratios(std::vector<double> ratios) {
    std::vector<double> days(ratios.size());
    for (std::size_t i = 0; i < days.size(); ++i) days[i] = static_cast<double>(i + 1);
    return {std::move(ratios), std::move(days)};
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_int(std::string_view s, int& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

std::chrono::sys_days parse_date(std::string_view s, std::size_t line) {
    int y = 0;
    int m = 0;
    int d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !parse_int(s.substr(0, 4), y) ||
        !parse_int(s.substr(5, 2), m) || !parse_int(s.substr(8, 2), d)) {
        throw DataError("invalid ISO-8601 date '" + std::string(s) + "'", line);
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw DataError("invalid calendar date '" + std::string(s) + "'", line);
    return std::chrono::sys_days{ymd};
}

double parse_close(std::string_view s, std::size_t line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
        throw DataError("invalid close '" + std::string(s) + "'", line);
    }
    if (!(v > 0.0) || !std::isfinite(v)) throw DataError("close must be positive, got '" + std::string(s) + "'", line);
    return v;
}

}  // namespace

PriceSeries load_prices(std::istream& in, const std::string& ticker) {
    std::string raw;
    std::size_t line = 0;
    bool have_header = false;
    std::vector<PriceRow> rows;
    while (std::getline(in, raw)) {
        ++line;
        const auto text = trim(raw);
        if (text.empty()) continue;
        if (!have_header) {
            if (text != "date,close") throw DataError("expected header 'date,close'", line);
            have_header = true;
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            throw DataError("expected two fields 'date,close'", line);
        }
        const auto date = parse_date(trim(text.substr(0, comma)), line);
        const double close = parse_close(trim(text.substr(comma + 1)), line);
        if (!rows.empty()) {
            if (date == rows.back().date) throw DataError("duplicate date", line);
            if (date < rows.back().date) throw DataError("dates out of order", line);
        }
        rows.push_back({date, close});
    }
    if (!have_header) throw DataError("empty price file");
    if (rows.size() < 2) throw DataError("price file needs at least 2 rows, got " + std::to_string(rows.size()));
    return PriceSeries(ticker, std::move(rows));
}

PriceSeries load_prices(const std::filesystem::path& path, const std::string& ticker) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string label = ticker;
    if (label.empty()) {
        label = path.stem().string();
        std::transform(label.begin(), label.end(), label.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    }
    try {
        return load_prices(in, label);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::vector<double> daily_returns(const PriceSeries& prices) {
    const auto& rows = prices.rows();
    std::vector<double> out;
    out.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(rows[i].close / rows[i - 1].close - 1.0);
    return out;
}

RatioSeries cumulative_ratios(const PriceSeries& prices) {
    const auto& rows = prices.rows();
    std::vector<double> ratios;
    ratios.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) ratios.push_back(rows[i].close / rows.front().close);
    return RatioSeries::from_ratios(std::move(ratios));
}

CurveTable total_return_curve(const RatioSeries& ratios) {
    std::vector<CurvePoint> points;
    points.reserve(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        points.push_back({ratios.day_index()[i], ratios.ratios()[i] - 1.0});
    }
    return CurveTable(std::move(points));
}

std::vector<ForecastRow> forecast_rows(const GenerationLaw& law, const SubordinationParams& sub,
                                       std::span<const double> times, double tail_tol,
                                       const RatioSeries* observed) {
    std::vector<ForecastRow> rows;
    rows.reserve(times.size());
    for (double t : times) {
        ForecastRow row{t, expected_ratio(law, sub, t), ratio_variance(law, sub, t), prob_zero(law, sub, t, tail_tol),
                        std::nullopt};
        if (observed != nullptr) {
            const auto days = observed->day_index();
            const auto it = std::find(days.begin(), days.end(), t);
            if (it != days.end()) row.actual_ratio = observed->ratios()[static_cast<std::size_t>(it - days.begin())];
        }
        rows.push_back(row);
    }
    return rows;
}

const char* TrendReport::trend() const noexcept {
    switch (fit.status) {
        case Criticality::Supercritical: return "up-trend";
        case Criticality::Subcritical: return "down-trend";
        case Criticality::Critical: return "flat";
    }
    return "?";
}

TrendReport run_trend_algorithm(const PriceSeries& prices, const TrendConfig& config) {
    TrendReport report;
    report.ticker = prices.ticker();
    report.n_prices = prices.size();
    report.calendar_span_days = prices.calendar_span_days();
    report.offset = config.offset;
    report.x0 = config.x0;

    // (1) returns and cumulative ratios
    const RatioSeries ratios = cumulative_ratios(prices);
    report.total_return = total_return_curve(ratios);

    // (2)-(5) zero class, sample mean, lambda/eta/g, theta
    const double horizon = config.horizon_days.value_or(report.calendar_span_days);
    report.fit = fit(ratios, horizon, FitOptions{config.classify_tol});

    // (6) moments and forecasts of P(t)
    const GenerationLaw law(report.fit.params());
    const SubordinationParams sub(report.fit.theta_hat, horizon, config.x0, config.offset);
    report.forecasts = forecast_rows(law, sub, config.forecast_times, config.tail_tol, &ratios);

    // (7)-(8) criticality; the root is solved only for supercritical laws
    if (report.fit.status == Criticality::Supercritical) {
        report.extinction_q = extinction_probability(law, config.extinction);
        report.extinction_computed = true;
    } else {
        report.extinction_q = 1.0;
    }

    const auto grid = make_grid(config.curve_t_max, config.curve_step);
    report.expected_return = expected_return_curve(law, sub, grid);
    report.extinction = extinction_curve(law, sub, grid, config.tail_tol);
    return report;
}

namespace {

std::string optional_value(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

}  // namespace

void write_trend_text(std::ostream& os, const TrendReport& report) {
    os << "# trend report\n";
    write_fit_report(os, report.fit, report.ticker);
    os << "n_prices = " << report.n_prices << '\n'
       << "calendar_span_days = " << format_double(report.calendar_span_days) << '\n'
       << "generation_offset = " << report.offset << '\n'
       << "x0 = " << format_double(report.x0) << '\n'
       << "trend = " << report.trend() << '\n'
       << "extinction_computed = " << (report.extinction_computed ? "true" : "false") << '\n'
       << "extinction_probability = " << format_double(report.extinction_q) << '\n';
    if (!report.extinction_computed) os << "eventual_extinction = certain\n";
    for (const auto& row : report.forecasts) {
        const std::string t = format_double(row.t);
        os << "forecast[" << t << "].expected_ratio = " << format_double(row.expected_ratio) << '\n'
           << "forecast[" << t << "].variance = " << format_double(row.variance) << '\n'
           << "forecast[" << t << "].prob_zero = " << format_double(row.prob_zero) << '\n'
           << "forecast[" << t << "].actual_ratio = " << optional_value(row.actual_ratio) << '\n';
    }
}

void write_forecast_csv(std::ostream& os, std::span<const ForecastRow> rows) {
    os << "t,expected_ratio,variance,prob_zero,actual_ratio\n";
    for (const auto& r : rows) {
        os << format_double(r.t) << ',' << format_double(r.expected_ratio) << ',' << format_double(r.variance) << ','
           << format_double(r.prob_zero) << ',' << optional_value(r.actual_ratio) << '\n';
    }
}

void write_forecast_table_header(std::ostream& os) {
    os << "ticker,t,expected_ratio,variance,prob_zero,actual_ratio\n";
}

void write_forecast_table_rows(std::ostream& os, const std::string& ticker, std::span<const ForecastRow> rows) {
    for (const auto& r : rows) {
        os << ticker << ',' << format_double(r.t) << ',' << format_double(r.expected_ratio) << ','
           << format_double(r.variance) << ',' << format_double(r.prob_zero) << ',' << optional_value(r.actual_ratio)
           << '\n';
    }
}

}  // namespace jgw
