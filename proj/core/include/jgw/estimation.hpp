#pragma once

// Method-of-moments calibration: lambda from the zero-class frequency,
// eta from the first moment, with a Poisson-Poisson collapse when the pair
// leaves the valid domain.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>

#include "jgw/errors.hpp"
#include "jgw/janardan.hpp"
#include "jgw/series.hpp"

namespace jgw {

enum class ModelKind { JanardanPoisson, PoissonPoisson };

const char* to_string(ModelKind kind) noexcept;

/// No ratio below 1 was observed: the zero-class estimator diverges.
class UnboundedRateError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Every ratio is below 1: the zero-class estimator gives lambda = 0.
class DegenerateRateError : public DomainError {
public:
    using DomainError::DomainError;
};

struct FitResult {
    double lambda_hat = 0.0;
    double eta_hat = 0.0;
    double theta_hat = 0.0;  ///< generation-clock rate per day
    double mu = 0.0;
    double sigma2 = 0.0;
    double g_value = 0.0;
    Criticality status = Criticality::Critical;
    ModelKind model_kind = ModelKind::JanardanPoisson;
    double rmse = 0.0;
    std::size_t n = 0;
    std::size_t f0 = 0;
    double xbar = 0.0;
    double horizon_days = 0.0;
    /// Set when every ratio was below 1 and the fallback replaced lambda = 0.
    bool all_below_one = false;

    JanardanParams params() const { return {lambda_hat, eta_hat}; }
};

/// lambda_hat = ln(n / f0). Throws UnboundedRateError for f0 = 0,
/// DegenerateRateError for f0 = n, DomainError for f0 > n or n = 0.
double estimate_lambda(std::size_t n, std::size_t f0);

/// eta_hat from the first moment; may fall outside (0, lambda_hat].
double estimate_eta(double lambda_hat, double xbar);

struct FitOptions {
    double classify_tol = kDefaultClassifyTol;
};

/// Calibrate from cumulative ratios; theta_hat = lambda_hat / horizon_days.
FitResult fit(const RatioSeries& ratios, double horizon_days, const FitOptions& options = {});

/// Root-mean-square gap between ratios and exp(theta t (mu - 1)).
/// Throws DataError when the spans differ in length or are empty.
double rmse(const FitResult& fit, std::span<const double> ratios, std::span<const double> times);

/// Flat `key = value` report.
void write_fit_report(std::ostream& os, const FitResult& fit, const std::string& ticker);

/// Column header of the single-row fit CSV.
void write_fit_csv_header(std::ostream& os);

/// ticker, mu, sigma2, lambda_hat, eta_hat, theta_hat, rmse, g, status
void write_fit_csv_row(std::ostream& os, const FitResult& fit, const std::string& ticker);

}  // namespace jgw
