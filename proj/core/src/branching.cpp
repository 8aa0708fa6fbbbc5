#include "jgw/branching.hpp"

#include <cmath>
#include <sstream>

#include "jgw/errors.hpp"

namespace jgw {

GenerationLaw::GenerationLaw(const JanardanParams& offspring)
    : offspring_(offspring), mu_(mean(offspring)), sigma2_(variance(offspring)) {}

double iterate_pgf(const GenerationLaw& law, std::uint64_t n, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("iterate_pgf: s must lie in [0, 1]");
    for (std::uint64_t i = 0; i < n; ++i) {
        const double next = law.pgf(s);
        if (next == s) break;  // fixed point reached in floating point
        s = next;
    }
    return s;
}

std::vector<double> extinction_sequence(const GenerationLaw& law, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(s);
        s = law.pgf(s);
    }
    return out;
}

double expected_size(const GenerationLaw& law, std::uint64_t n) {
    if (n == 0) return 1.0;
    return std::pow(law.mu(), static_cast<double>(n));
}

double variance_size(const GenerationLaw& law, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double mu = law.mu();
    const double nd = static_cast<double>(n);
    if (std::abs(mu - 1.0) < kCriticalBand) return nd * law.sigma2();
    const double mu_n = std::pow(mu, nd);
    return mu_n * (mu_n - 1.0) / (mu * (mu - 1.0)) * law.sigma2();
}

double extinction_probability(const GenerationLaw& law, const ExtinctionOptions& options) {
    if (law.mu() <= 1.0) return 1.0;
    // Iterates approach q from below at the geometric rate rho = Pi'(q) < 1,
    // so the remaining gap is about step * rho / (1 - rho). Stop once both the
    // step and that gap are below tol.
    double s = 0.0;
    double step = 0.0;
    double prev_step = 0.0;
    for (std::uint64_t i = 0; i < options.max_iter; ++i) {
        const double next = law.pgf(s);
        step = next - s;
        s = next;
        if (std::abs(step) < options.tol) {
            const double rho = prev_step > 0.0 ? step / prev_step : 0.0;
            if (step <= 0.0 || rho <= 0.0 || rho >= 1.0 || step * rho / (1.0 - rho) < options.tol) return s;
        }
        prev_step = step;
    }
    std::ostringstream os;
    os.precision(17);
    os << "extinction_probability: no convergence after " << options.max_iter
       << " iterations (last iterate " << s << ", step " << step << ")";
    throw ConvergenceError(os.str(), s, step);
}

}  // namespace jgw
