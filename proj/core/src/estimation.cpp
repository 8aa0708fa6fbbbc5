#include "jgw/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "jgw/errors.hpp"
#include "jgw/text_format.hpp"

namespace jgw {

const char* to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::JanardanPoisson: return "JanardanPoisson";
        case ModelKind::PoissonPoisson: return "PoissonPoisson";
    }
    return "?";
}

double estimate_lambda(std::size_t n, std::size_t f0) {
    if (n == 0) throw DomainError("estimate_lambda: sample size must be >= 1");
    if (f0 > n) throw DomainError("estimate_lambda: f0 exceeds sample size");
    if (f0 == 0) throw UnboundedRateError("estimate_lambda: f0 = 0, no ratio below 1 (lambda unbounded)");
    if (f0 == n) throw DegenerateRateError("estimate_lambda: f0 = n, every ratio below 1 (lambda = 0)");
    return std::log(static_cast<double>(n)) - std::log(static_cast<double>(f0));
}

double estimate_eta(double lambda_hat, double xbar) {
    if (!(lambda_hat > 0.0)) throw DomainError("estimate_eta: lambda_hat must be > 0");
    const double decay = std::exp(-lambda_hat);
    // e^-l - 1 + l, series near zero where the difference cancels
    const double denom = lambda_hat < 1e-3
                             ? lambda_hat * lambda_hat * (0.5 - lambda_hat / 6.0 + lambda_hat * lambda_hat / 24.0)
                             : std::expm1(-lambda_hat) + lambda_hat;
    return lambda_hat * (xbar - 1.0 + decay) / denom;
}

FitResult fit(const RatioSeries& ratios, double horizon_days, const FitOptions& options) {
    if (ratios.empty()) throw DataError("fit: empty ratio series");
    if (!(horizon_days > 0.0)) throw DomainError("fit: horizon_days must be > 0");

    FitResult out;
    const auto xs = ratios.ratios();
    out.n = xs.size();
    out.f0 = static_cast<std::size_t>(std::count_if(xs.begin(), xs.end(), [](double x) { return x < 1.0; }));
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.xbar = sum / static_cast<double>(out.n);
    out.horizon_days = horizon_days;

    bool collapse = false;
    if (out.f0 == out.n) {
        collapse = true;
        out.all_below_one = true;
    } else {
        out.lambda_hat = estimate_lambda(out.n, out.f0);  // f0 = 0 propagates
        out.eta_hat = estimate_eta(out.lambda_hat, out.xbar);
        collapse = out.eta_hat > out.lambda_hat || out.eta_hat <= 0.0;
    }
    if (collapse) {
        out.model_kind = ModelKind::PoissonPoisson;
        out.lambda_hat = out.xbar;
        out.eta_hat = out.xbar;
    }

    const JanardanParams params(out.lambda_hat, out.eta_hat);
    out.theta_hat = out.lambda_hat / horizon_days;
    if (collapse) {
        out.mu = out.xbar;
        out.sigma2 = out.xbar;
    } else {
        out.mu = mean(params);
        out.sigma2 = variance(params);
    }
    const auto report = classify(params, options.classify_tol);
    out.status = report.status;
    out.g_value = report.g_value;
    out.rmse = rmse(out, xs, ratios.day_index());
    return out;
}

double rmse(const FitResult& fit, std::span<const double> ratios, std::span<const double> times) {
    if (ratios.size() != times.size()) throw DataError("rmse: ratios and times differ in length");
    if (ratios.empty()) throw DataError("rmse: empty series");
    double acc = 0.0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double gap = ratios[i] - std::exp(fit.theta_hat * times[i] * (fit.mu - 1.0));
        acc += gap * gap;
    }
    return std::sqrt(acc / static_cast<double>(ratios.size()));
}

void write_fit_report(std::ostream& os, const FitResult& fit, const std::string& ticker) {
    os << "ticker = " << ticker << '\n'
       << "model_kind = " << to_string(fit.model_kind) << '\n'
       << "status = " << to_string(fit.status) << '\n'
       << "n = " << fit.n << '\n'
       << "f0 = " << fit.f0 << '\n'
       << "xbar = " << format_double(fit.xbar) << '\n'
       << "lambda_hat = " << format_double(fit.lambda_hat) << '\n'
       << "eta_hat = " << format_double(fit.eta_hat) << '\n'
       << "horizon_days = " << format_double(fit.horizon_days) << '\n'
       << "theta_hat = " << format_double(fit.theta_hat) << '\n'
       << "mu = " << format_double(fit.mu) << '\n'
       << "sigma2 = " << format_double(fit.sigma2) << '\n'
       << "g = " << format_double(fit.g_value) << '\n'
       << "rmse = " << format_double(fit.rmse) << '\n'
       << "all_below_one = " << (fit.all_below_one ? "true" : "false") << '\n';
}

void write_fit_csv_header(std::ostream& os) {
    os << "ticker,mu,sigma2,lambda_hat,eta_hat,theta_hat,rmse,g,status\n";
}

void write_fit_csv_row(std::ostream& os, const FitResult& fit, const std::string& ticker) {
    os << ticker << ',' << format_double(fit.mu) << ',' << format_double(fit.sigma2) << ','
       << format_double(fit.lambda_hat) << ',' << format_double(fit.eta_hat) << ','
       << format_double(fit.theta_hat) << ',' << format_double(fit.rmse) << ','
       << format_double(fit.g_value) << ',' << to_string(fit.status) << '\n';
}

}  // namespace jgw
