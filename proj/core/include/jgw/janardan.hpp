#pragma once

// Janardan offspring law: a renewal count with rate lambda until the first
// event and rate eta for every later one, observed over [0, t]. The family
// sits between Bernoulli(1 - e^-lambda) (eta -> 0) and Poisson(lambda)
// (eta = lambda).

#include <cstdint>

namespace jgw {

/// Rate pair of the offspring law. Valid iff lambda > 0 and 0 < eta <= lambda.
class JanardanParams {
public:
    /// Throws DomainError when the pair is outside the valid domain.
    JanardanParams(double lambda, double eta);

    /// Poisson limit, eta == lambda.
    static JanardanParams poisson(double rate) { return {rate, rate}; }

    double lambda() const noexcept { return lambda_; }
    double eta() const noexcept { return eta_; }

    /// True when eta is within the analytic-limit band of lambda.
    bool is_poisson_limit() const noexcept;

    friend bool operator==(const JanardanParams&, const JanardanParams&) = default;

private:
    double lambda_;
    double eta_;
};

/// Relative band |lambda - eta| < kPoissonBand * lambda that switches to the
/// Poisson closed forms.
inline constexpr double kPoissonBand = 1e-9;

/// Default |mu - 1| tolerance for classification.
inline constexpr double kDefaultClassifyTol = 1e-9;

struct OffspringMoments {
    double mu;
    double sigma2;
};

enum class Criticality { Subcritical, Critical, Supercritical };

const char* to_string(Criticality status) noexcept;

struct CriticalityReport {
    Criticality status;
    double g_value;  ///< g(lambda), the eta at which mu == 1
    double mu;
};

/// Probability generating function E[s^X(t)]. Throws DomainError for s
/// outside [0, 1] or t < 0.
double pgf_eval(double s, double t, const JanardanParams& params);

struct PmfOptions {
    /// When false, intermediate magnitudes beyond safe_log_magnitude raise
    /// OverflowError instead of switching to log-space accumulation.
    bool allow_log_space = true;
    double safe_log_magnitude = 600.0;
};

/// Pr(X(t) = m). Throws DomainError for t <= 0.
double pmf(std::uint64_t m, double t, const JanardanParams& params, const PmfOptions& options = {});

/// One-generation mean E[X(1)].
double mean(const JanardanParams& params);

/// One-generation variance Var[X(1)].
double variance(const JanardanParams& params);

OffspringMoments moments(const JanardanParams& params);

/// Criticality threshold g(lambda) = lambda e^-lambda / (e^-lambda - 1 + lambda).
double g_threshold(double lambda);

CriticalityReport classify(const JanardanParams& params, double tol = kDefaultClassifyTol);

}  // namespace jgw
