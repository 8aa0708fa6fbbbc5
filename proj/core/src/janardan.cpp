#include "jgw/janardan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jgw/errors.hpp"

namespace jgw {

namespace {

// e^-x - 1 + x without cancellation near zero.
double exp_tail2(double x) {
    if (std::abs(x) < 1e-3) {
        return x * x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x / 120.0)));
    }
    return std::expm1(-x) + x;
}

// (1 - e^{-a t}) / a, continuous at a = 0.
double decay_integral(double a, double t) {
    if (a == 0.0) return t;
    return -std::expm1(-a * t) / a;
}

std::string describe(double lambda, double eta) {
    std::ostringstream os;
    os.precision(17);
    os << "(lambda=" << lambda << ", eta=" << eta << ")";
    return os.str();
}

}  // namespace

JanardanParams::JanardanParams(double lambda, double eta) : lambda_(lambda), eta_(eta) {
    if (!(std::isfinite(lambda) && lambda > 0.0)) {
        throw DomainError("janardan: lambda must be finite and > 0 " + describe(lambda, eta));
    }
    if (!(std::isfinite(eta) && eta > 0.0 && eta <= lambda)) {
        throw DomainError("janardan: eta must satisfy 0 < eta <= lambda " + describe(lambda, eta));
    }
}

bool JanardanParams::is_poisson_limit() const noexcept {
    return std::abs(lambda_ - eta_) < kPoissonBand * lambda_;
}

const char* to_string(Criticality status) noexcept {
    switch (status) {
        case Criticality::Subcritical: return "Subcritical";
        case Criticality::Critical: return "Critical";
        case Criticality::Supercritical: return "Supercritical";
    }
    return "?";
}

double pgf_eval(double s, double t, const JanardanParams& params) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("pgf_eval: s must lie in [0, 1]");
    if (!(t >= 0.0)) throw DomainError("pgf_eval: t must be >= 0");
    if (s == 1.0 || t == 0.0) return 1.0;

    const double lambda = params.lambda();
    if (params.is_poisson_limit()) {
        return std::exp(-t * lambda * (1.0 - s));
    }
    // Split on the first event: none in [0, t], or the first at time v with a
    // Poisson(eta (t - v)) count after it. Equal to the rational closed form
    // but free of the (eta - lambda) / (eta (s - 1) + lambda) cancellation.
    const double eta = params.eta();
    const double a = lambda - eta * (1.0 - s);
    const double value =
        std::exp(-t * lambda) + s * lambda * std::exp(-eta * (1.0 - s) * t) * decay_integral(a, t);
    return std::clamp(value, 0.0, 1.0);
}

double pmf(std::uint64_t m, double t, const JanardanParams& params, const PmfOptions& options) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("pmf: t must be finite and > 0");
    const double lambda = params.lambda();
    const double eta = params.eta();
    if (m == 0) return std::exp(-t * lambda);

    // Pr(X(t) = k + 1) = lambda t e^{-lambda t} (eta t)^k / k! * S,
    // S = sum_j x^j / (j! (k + j + 1)),  x = (lambda - eta) t >= 0.
    const double k = static_cast<double>(m - 1);
    const double x = (lambda - eta) * t;
    const bool log_space = m > 30 || t * lambda > 30.0;

    if (log_space && !options.allow_log_space) {
        const double magnitude =
            std::max({t * lambda, std::abs(k * std::log(eta * t)), std::lgamma(k + 1.0), x});
        if (magnitude > options.safe_log_magnitude) {
            std::ostringstream os;
            os << "pmf: intermediate magnitude e^" << magnitude << " exceeds safe range for m=" << m
               << "; enable log-space evaluation";
            throw OverflowError(os.str());
        }
    }

    constexpr std::size_t kMaxTerms = 1'000'000;
    if (!log_space || !options.allow_log_space) {
        double term = 1.0 / (k + 1.0);
        double sum = term;
        for (std::size_t j = 1; j < kMaxTerms; ++j) {
            const double jd = static_cast<double>(j);
            term *= x / jd * (k + jd) / (k + jd + 1.0);
            sum += term;
            if (term <= sum * 1e-17 && jd > x) break;
        }
        const double prefactor =
            lambda * t * std::exp(-t * lambda) * std::pow(eta * t, k) / std::tgamma(k + 1.0);
        return std::clamp(prefactor * sum, 0.0, 1.0);
    }

    // Streaming log-sum-exp over the same series.
    double log_term = -std::log(k + 1.0);
    double log_max = log_term;
    double scaled = 1.0;  // sum of exp(log_term_j - log_max)
    if (x > 0.0) {
        const double log_x = std::log(x);
        for (std::size_t j = 1; j < kMaxTerms; ++j) {
            const double jd = static_cast<double>(j);
            log_term += log_x - std::log(jd) + std::log((k + jd) / (k + jd + 1.0));
            if (log_term > log_max) {
                scaled = scaled * std::exp(log_max - log_term) + 1.0;
                log_max = log_term;
            } else {
                scaled += std::exp(log_term - log_max);
            }
            if (jd > x && log_term - log_max < -40.0) break;
        }
    }
    const double log_prefactor =
        std::log(lambda * t) - t * lambda + k * std::log(eta * t) - std::lgamma(k + 1.0);
    const double value = std::exp(log_prefactor + log_max + std::log(scaled));
    if (!std::isfinite(value)) throw OverflowError("pmf: non-finite result in log-space evaluation");
    return std::clamp(value, 0.0, 1.0);
}

double mean(const JanardanParams& params) {
    const double lambda = params.lambda();
    return params.eta() / lambda * exp_tail2(lambda) - std::expm1(-lambda);
}

double variance(const JanardanParams& params) {
    const double lambda = params.lambda();
    const double eta = params.eta();
    const double mu = mean(params);
    const double r = eta / lambda;
    const double value = eta * eta - mu * mu + (-std::expm1(-lambda)) * (1.0 - r) * (1.0 - 2.0 * r) +
                         eta * (3.0 - 2.0 * r);
    return std::max(0.0, value);
}

OffspringMoments moments(const JanardanParams& params) { return {mean(params), variance(params)}; }

double g_threshold(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("g_threshold: lambda must be finite and > 0");
    }
    return lambda * std::exp(-lambda) / exp_tail2(lambda);
}

CriticalityReport classify(const JanardanParams& params, double tol) {
    const double mu = mean(params);
    Criticality status = Criticality::Critical;
    if (mu < 1.0 - tol) {
        status = Criticality::Subcritical;
    } else if (mu > 1.0 + tol) {
        status = Criticality::Supercritical;
    }
    return {status, g_threshold(params.lambda()), mu};
}

}  // namespace jgw
