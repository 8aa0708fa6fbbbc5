#pragma once

// Galton-Watson generation arithmetic over the Janardan law at t = 1.

#include <cstdint>
#include <vector>

#include "jgw/janardan.hpp"

namespace jgw {

/// One-generation offspring law with its first two moments cached.
class GenerationLaw {
public:
    explicit GenerationLaw(const JanardanParams& offspring);

    const JanardanParams& offspring() const noexcept { return offspring_; }
    double mu() const noexcept { return mu_; }
    double sigma2() const noexcept { return sigma2_; }

    /// Pi(s) = pgf_eval(s, 1, offspring).
    double pgf(double s) const { return pgf_eval(s, 1.0, offspring_); }

private:
    JanardanParams offspring_;
    double mu_;
    double sigma2_;
};

/// |mu - 1| below this selects the critical branch of the moment formulas.
inline constexpr double kCriticalBand = 1e-9;

/// Pi_n(s): n-fold composition of the offspring pgf, Pi_0(s) = s.
double iterate_pgf(const GenerationLaw& law, std::uint64_t n, double s);

/// Pi_0(0), Pi_1(0), ..., Pi_count-1(0).
std::vector<double> extinction_sequence(const GenerationLaw& law, std::size_t count);

/// E[X_n] = mu^n for a single ancestor.
double expected_size(const GenerationLaw& law, std::uint64_t n);

/// Var[X_n] for a single ancestor.
double variance_size(const GenerationLaw& law, std::uint64_t n);

struct ExtinctionOptions {
    double tol = 1e-12;
    std::uint64_t max_iter = 1'000'000;
};

/// Smallest root of Pi(s) = s in [0, 1]. Exactly 1 when mu <= 1; otherwise
/// the limit of Pi_n(0) by monotone fixed-point iteration from 0. Throws
/// ConvergenceError if max_iter is reached.
double extinction_probability(const GenerationLaw& law, const ExtinctionOptions& options = {});

}  // namespace jgw
