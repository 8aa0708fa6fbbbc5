#include "jgw/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "jgw/config.hpp"
#include "jgw/errors.hpp"
#include "jgw/estimation.hpp"
#include "jgw/market.hpp"
#include "jgw/monte_carlo.hpp"
#include "jgw/subordinated.hpp"
#include "jgw/text_format.hpp"

namespace jgw::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

/// Files produced by a command, flushed together once everything succeeded.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    std::ostringstream& file(const std::string& name) { return files_[name]; }

    void commit() const {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw DataError("cannot create output directory '" + dir_.string() + "': " + ec.message());
        std::vector<std::pair<fs::path, fs::path>> staged;
        for (const auto& [name, body] : files_) {
            const fs::path target = dir_ / name;
            const fs::path temp = dir_ / ("." + name + ".tmp");
            std::ofstream os(temp, std::ios::binary);
            os << body.str();
            if (!os) {
                for (const auto& s : staged) fs::remove(s.first, ec);
                fs::remove(temp, ec);
                throw DataError("cannot write '" + target.string() + "'");
            }
            staged.emplace_back(temp, target);
        }
        for (const auto& [temp, target] : staged) fs::rename(temp, target);
    }

    const fs::path& dir() const noexcept { return dir_; }

private:
    fs::path dir_;
    std::map<std::string, std::ostringstream> files_;
};

fs::path default_output_dir() {
    if (const char* env = std::getenv("JGW_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
    return ".";
}

struct CommonFlags {
    std::string out_dir;
    std::string config_path;
};

struct ModelFlags {
    double lambda = 0.0;
    double eta = 0.0;
    double theta = 0.0;
    double horizon_days = 0.0;
    CLI::Option* lambda_opt = nullptr;
    CLI::Option* eta_opt = nullptr;
    CLI::Option* theta_opt = nullptr;
    CLI::Option* horizon_opt = nullptr;
};

struct CurveFlags {
    double t_max = 500.0;
    double t_step = 1.0;
    std::vector<double> times;
    int offset = 1;
    double x0 = 1.0;
    double tail_tol = kDefaultTailTol;
    CLI::Option* t_max_opt = nullptr;
    CLI::Option* t_step_opt = nullptr;
    CLI::Option* times_opt = nullptr;
    CLI::Option* offset_opt = nullptr;
    CLI::Option* x0_opt = nullptr;
    CLI::Option* tail_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--out-dir,-o", flags.out_dir, "Output directory (default: $JGW_OUTPUT_DIR or .)");
    cmd->add_option("--config,-c", flags.config_path, "key=value config file; flags override it");
}

void add_model(CLI::App* cmd, ModelFlags& m) {
    m.lambda_opt = cmd->add_option("--lambda,--first-rate", m.lambda, "First-offspring rate");
    m.eta_opt = cmd->add_option("--eta,--subsequent-rate", m.eta, "Subsequent-offspring rate (<= lambda)");
    m.theta_opt = cmd->add_option("--theta,--clock-rate", m.theta, "Generation-clock rate per day");
    m.horizon_opt = cmd->add_option("--theta-from-horizon,--horizon-days", m.horizon_days,
                                    "Set theta = lambda / horizon (calendar days)");
}

void add_curve(CLI::App* cmd, CurveFlags& c, bool with_grid, bool with_times = true) {
    if (with_grid) {
        c.t_max_opt = cmd->add_option("--t-max", c.t_max, "Last curve time in trading days");
        c.t_step_opt = cmd->add_option("--t-step", c.t_step, "Curve grid spacing");
    }
    if (with_times) {
        c.times_opt = cmd->add_option("--t", c.times, "Comma-separated evaluation times")->delimiter(',');
    }
    c.offset_opt = cmd->add_option("--offset", c.offset, "Generation offset of the extinction series (0 or 1)");
    c.x0_opt = cmd->add_option("--x0", c.x0, "Ancestor weight for the variance");
    c.tail_opt = cmd->add_option("--tail-tol", c.tail_tol, "Poisson tail mass at which the series stops");
}

TrendConfig load_config(const CommonFlags& common) {
    TrendConfig config;
    if (!common.config_path.empty()) apply_config(config, parse_key_value_file(common.config_path));
    return config;
}

void apply_curve_flags(TrendConfig& config, const CurveFlags& c) {
    if (c.t_max_opt && c.t_max_opt->count()) config.curve_t_max = c.t_max;
    if (c.t_step_opt && c.t_step_opt->count()) config.curve_step = c.t_step;
    if (c.times_opt && c.times_opt->count()) config.forecast_times = c.times;
    if (c.offset_opt->count()) config.offset = c.offset;
    if (c.x0_opt->count()) config.x0 = c.x0;
    if (c.tail_opt->count()) config.tail_tol = c.tail_tol;
    if (config.offset != 0 && config.offset != 1) throw UsageError("--offset must be 0 or 1");
}

struct ModelSpec {
    GenerationLaw law;
    SubordinationParams sub;
};

ModelSpec model_from_flags(const ModelFlags& m, const TrendConfig& config) {
    if (!m.lambda_opt->count() || !m.eta_opt->count()) throw UsageError("--lambda and --eta are required");
    const JanardanParams params(m.lambda, m.eta);
    double theta = 0.0;
    double horizon = 0.0;
    if (m.theta_opt->count() && m.horizon_opt->count()) {
        throw UsageError("give either --theta or --theta-from-horizon, not both");
    }
    if (m.theta_opt->count()) {
        theta = m.theta;
    } else if (m.horizon_opt->count() || config.horizon_days) {
        horizon = m.horizon_opt->count() ? m.horizon_days : *config.horizon_days;
        if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
        theta = m.lambda / horizon;
    } else {
        throw UsageError("one of --theta or --theta-from-horizon is required");
    }
    return {GenerationLaw(params), SubordinationParams(theta, horizon, config.x0, config.offset)};
}

fs::path out_dir_of(const CommonFlags& common) {
    return common.out_dir.empty() ? default_output_dir() : fs::path(common.out_dir);
}

std::string ticker_of(const std::string& input, const std::string& flag) {
    if (!flag.empty()) return flag;
    std::string label = fs::path(input).stem().string();
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    return label;
}

void write_model_header(std::ostream& os, const ModelSpec& spec) {
    os << "lambda = " << format_double(spec.law.offspring().lambda()) << '\n'
       << "eta = " << format_double(spec.law.offspring().eta()) << '\n'
       << "theta = " << format_double(spec.sub.theta()) << '\n'
       << "mu = " << format_double(spec.law.mu()) << '\n'
       << "sigma2 = " << format_double(spec.law.sigma2()) << '\n'
       << "offset = " << spec.sub.offset() << '\n'
       << "x0 = " << format_double(spec.sub.x0()) << '\n';
}

int report_error(std::ostream& err, ErrorKind kind, const std::string& what) {
    switch (kind) {
        case ErrorKind::Usage: err << "jgw: usage error: " << what << '\n'; return kUsage;
        case ErrorKind::Data: err << "jgw: data error: " << what << '\n'; return kData;
        case ErrorKind::Domain: err << "jgw: domain error: " << what << '\n'; return kDomain;
        case ErrorKind::Numeric: err << "jgw: numeric error: " << what << '\n'; return kNumeric;
    }
    return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Janardan Galton-Watson stock-ratio toolkit", "jgw"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    CommonFlags common;
    ModelFlags curves_model;
    ModelFlags forecast_model;
    ModelFlags sim_model;
    CurveFlags trend_curve;
    CurveFlags curves_curve;
    CurveFlags forecast_curve;
    CurveFlags sim_curve;
    CurveFlags report_curve;
    std::vector<std::string> inputs;
    std::string input;
    std::string ticker;
    double horizon_days = 0.0;
    double classify_tol = kDefaultClassifyTol;

    auto* fit_cmd = app.add_subcommand("fit", "Calibrate lambda, eta, theta from a date,close CSV");
    fit_cmd->add_option("--input,-i", input, "Price CSV")->required();
    fit_cmd->add_option("--ticker", ticker, "Label (default: file stem)");
    auto* fit_horizon = fit_cmd->add_option("--horizon-days", horizon_days, "theta = lambda / horizon");
    auto* fit_tol = fit_cmd->add_option("--classify-tol", classify_tol, "|mu - 1| tolerance");
    add_common(fit_cmd, common);

    auto* trend_cmd = app.add_subcommand("trend", "Run the full trend pipeline on one price CSV");
    trend_cmd->add_option("--input,-i", input, "Price CSV")->required();
    trend_cmd->add_option("--ticker", ticker, "Label (default: file stem)");
    auto* trend_horizon = trend_cmd->add_option("--horizon-days", horizon_days, "theta = lambda / horizon");
    add_curve(trend_cmd, trend_curve, true);
    add_common(trend_cmd, common);

    auto* curves_cmd = app.add_subcommand("curves", "Expected-return and extinction curves");
    auto* curves_input = curves_cmd->add_option("--input,-i", input, "Price CSV to calibrate from");
    curves_cmd->add_option("--ticker", ticker, "Label / file prefix");
    add_model(curves_cmd, curves_model);
    add_curve(curves_cmd, curves_curve, true);
    add_common(curves_cmd, common);

    auto* forecast_cmd = app.add_subcommand("forecast", "E, Var and Pr(P(t)=0) at chosen times");
    forecast_cmd->add_option("--ticker", ticker, "Label / file prefix");
    add_model(forecast_cmd, forecast_model);
    add_curve(forecast_cmd, forecast_curve, false);
    add_common(forecast_cmd, common);

    SimConfig sim;
    double sim_t = 489.0;
    std::string dump;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo statistics of P(t)");
    add_model(simulate_cmd, sim_model);
    simulate_cmd->add_option("--at", sim_t, "Time in trading days")->capture_default_str();
    simulate_cmd->add_option("--paths", sim.n_paths, "Number of paths")->capture_default_str();
    simulate_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate_cmd->add_option("--max-population", sim.max_population, "Per-generation cap")->capture_default_str();
    simulate_cmd->add_option("--threads", sim.threads, "Worker threads")->capture_default_str();
    simulate_cmd->add_option("--dump", dump, "Also write raw P(t) samples to this file name");
    add_curve(simulate_cmd, sim_curve, false, false);
    add_common(simulate_cmd, common);

    auto* report_cmd = app.add_subcommand("report", "Fit and forecast tables for several tickers");
    report_cmd->add_option("--input,-i", inputs, "Price CSVs, one per ticker")->required();
    auto* report_horizon = report_cmd->add_option("--horizon-days", horizon_days, "theta = lambda / horizon");
    add_curve(report_cmd, report_curve, false);
    add_common(report_cmd, common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        return report_error(err, ErrorKind::Usage, e.what());
    }

    try {
        TrendConfig config = load_config(common);
        OutputSet files(out_dir_of(common));

        if (fit_cmd->parsed()) {
            const auto prices = load_prices(fs::path(input), ticker_of(input, ticker));
            const double horizon = fit_horizon->count() ? horizon_days
                                                        : config.horizon_days.value_or(prices.calendar_span_days());
            const double tol = fit_tol->count() ? classify_tol : config.classify_tol;
            const auto result = fit(cumulative_ratios(prices), horizon, FitOptions{tol});
            write_fit_report(files.file(prices.ticker() + "_fit.txt"), result, prices.ticker());
            auto& csv = files.file(prices.ticker() + "_fit.csv");
            write_fit_csv_header(csv);
            write_fit_csv_row(csv, result, prices.ticker());
            files.commit();
            write_fit_report(out, result, prices.ticker());
        } else if (trend_cmd->parsed()) {
            if (trend_horizon->count()) config.horizon_days = horizon_days;
            apply_curve_flags(config, trend_curve);
            const auto prices = load_prices(fs::path(input), ticker_of(input, ticker));
            const auto report = run_trend_algorithm(prices, config);
            const std::string& t = report.ticker;
            write_trend_text(files.file(t + "_trend.txt"), report);
            write_forecast_csv(files.file(t + "_forecast.csv"), report.forecasts);
            write_csv(files.file(t + "_expected_return.csv"), report.expected_return);
            write_csv(files.file(t + "_extinction.csv"), report.extinction);
            write_csv(files.file(t + "_total_return.csv"), report.total_return);
            files.commit();
            write_trend_text(out, report);
        } else if (curves_cmd->parsed()) {
            apply_curve_flags(config, curves_curve);
            std::optional<ModelSpec> spec;
            std::string prefix = ticker.empty() ? "curve" : ticker;
            if (curves_input->count()) {
                if (curves_model.lambda_opt->count() || curves_model.eta_opt->count() || curves_model.theta_opt->count()) {
                    throw UsageError("--input cannot be combined with --lambda/--eta/--theta");
                }
                const auto prices = load_prices(fs::path(input), ticker_of(input, ticker));
                if (curves_model.horizon_opt->count()) config.horizon_days = curves_model.horizon_days;
                const double horizon = config.horizon_days.value_or(prices.calendar_span_days());
                const auto result = fit(cumulative_ratios(prices), horizon, FitOptions{config.classify_tol});
                spec.emplace(ModelSpec{GenerationLaw(result.params()),
                                       SubordinationParams(result.theta_hat, horizon, config.x0, config.offset)});
                prefix = prices.ticker();
            } else {
                spec.emplace(model_from_flags(curves_model, config));
            }
            const auto grid =
                curves_curve.times_opt->count() ? curves_curve.times : make_grid(config.curve_t_max, config.curve_step);
            const auto er = expected_return_curve(spec->law, spec->sub, grid);
            const auto ext = extinction_curve(spec->law, spec->sub, grid, config.tail_tol);
            write_csv(files.file(prefix + "_expected_return.csv"), er);
            write_csv(files.file(prefix + "_extinction.csv"), ext);
            files.commit();
            write_model_header(out, *spec);
            out << "points = " << grid.size() << '\n'
                << "expected_return[" << format_double(er.back().t) << "] = " << format_double(er.back().value) << '\n'
                << "extinction[" << format_double(ext.back().t) << "] = " << format_double(ext.back().value) << '\n';
        } else if (forecast_cmd->parsed()) {
            apply_curve_flags(config, forecast_curve);
            const auto spec = model_from_flags(forecast_model, config);
            const auto rows = forecast_rows(spec.law, spec.sub, config.forecast_times, config.tail_tol);
            write_forecast_csv(files.file((ticker.empty() ? std::string("forecast") : ticker + "_forecast") + ".csv"),
                               rows);
            files.commit();
            write_forecast_csv(out, rows);
        } else if (simulate_cmd->parsed()) {
            apply_curve_flags(config, sim_curve);
            const auto spec = model_from_flags(sim_model, config);
            const auto sample = simulate_subordinated(spec.law, spec.sub, sim_t, sim);
            auto& summary = files.file("simulate.txt");
            const auto emit = [&](std::ostream& os) {
                write_model_header(os, spec);
                os << "t = " << format_double(sim_t) << '\n'
                   << "paths = " << sim.n_paths << '\n'
                   << "seed = " << sim.seed << '\n'
                   << "mean = " << format_double(sample.stats.mean) << '\n'
                   << "se_mean = " << format_double(sample.stats.se_mean) << '\n'
                   << "variance = " << format_double(sample.stats.variance) << '\n'
                   << "se_variance = " << format_double(sample.stats.se_variance) << '\n'
                   << "zero_fraction = " << format_double(sample.stats.zero_fraction) << '\n'
                   << "se_zero_fraction = " << format_double(sample.stats.se_zero_fraction) << '\n';
                // the closed-form moments describe the unshifted clock
                if (spec.sub.offset() == 0) {
                    os << "analytic_expected_ratio = " << format_double(expected_ratio(spec.law, spec.sub, sim_t))
                       << '\n'
                       << "analytic_variance = " << format_double(ratio_variance(spec.law, spec.sub, sim_t)) << '\n';
                }
                os << "analytic_prob_zero = " << format_double(prob_zero(spec.law, spec.sub, sim_t, config.tail_tol))
                   << '\n';
            };
            emit(summary);
            if (!dump.empty()) {
                if (fs::path(dump).has_parent_path()) throw UsageError("--dump takes a file name inside --out-dir");
                write_samples_csv(files.file(dump), "ratio", sample.ratios);
            }
            files.commit();
            emit(out);
        } else if (report_cmd->parsed()) {
            if (report_horizon->count()) config.horizon_days = horizon_days;
            apply_curve_flags(config, report_curve);
            auto& table1 = files.file("table1.csv");
            auto& table2 = files.file("table2.csv");
            auto& text = files.file("report.txt");
            write_fit_csv_header(table1);
            write_forecast_table_header(table2);
            for (const auto& path : inputs) {
                const auto prices = load_prices(fs::path(path));
                const auto report = run_trend_algorithm(prices, config);
                write_fit_csv_row(table1, report.fit, report.ticker);
                write_forecast_table_rows(table2, report.ticker, report.forecasts);
                write_trend_text(text, report);
                text << '\n';
            }
            files.commit();
            out << table1.str() << '\n' << table2.str();
        }
    } catch (const Error& e) {
        return report_error(err, e.kind(), e.what());
    } catch (const fs::filesystem_error& e) {
        return report_error(err, ErrorKind::Data, e.what());
    }
    return kOk;
}

}  // namespace jgw::cli
