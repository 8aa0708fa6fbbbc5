#pragma once

// Monte Carlo reference for the analytic operations. Each path draws from
// its own generator stream keyed by (seed, path index), so results do not
// depend on how paths are spread over threads.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "jgw/branching.hpp"
#include "jgw/subordinated.hpp"

namespace jgw {

/// xoshiro256** seeded through SplitMix64. Satisfies
/// UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    /// Independent stream for path `index` under `seed`.
    static Rng for_path(std::uint64_t seed, std::uint64_t index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Exponential waiting time with the given rate.
    double exponential(double rate) noexcept;

    std::uint64_t poisson(double mean);

private:
    std::uint64_t s_[4];
};

struct SimConfig {
    std::size_t n_paths = 100'000;
    std::uint64_t seed = 20190401;
    std::size_t max_population = 10'000'000;
    unsigned threads = 1;

    void validate() const;
};

/// Count of events in [0, t]: first after an Exp(lambda) wait, each later one
/// after an Exp(eta) wait.
std::uint64_t sample_offspring(const JanardanParams& params, double t, Rng& rng);

/// n_paths offspring draws, path i on stream (seed, i).
std::vector<std::uint64_t> sample_offspring_batch(const JanardanParams& params, double t, const SimConfig& config);

struct SampleStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;      ///< unbiased
    double se_mean = 0.0;
    double se_variance = 0.0;   ///< sqrt((m4 - s^4) / n) large-sample approximation
    double zero_fraction = 0.0;
    double se_zero_fraction = 0.0;
};

SampleStats summarize(std::span<const double> values);

struct GenerationSample {
    std::vector<std::uint64_t> sizes;  ///< X_n per path, single ancestor
    SampleStats stats;
};

/// X_n over n_paths independent trees. Throws PopulationCapError when a
/// generation exceeds config.max_population.
GenerationSample simulate_generations(const GenerationLaw& law, std::uint64_t generations, const SimConfig& config);

struct SubordinatedSample {
    std::vector<double> ratios;  ///< P(t) per path
    SampleStats stats;           ///< stats.zero_fraction estimates Pr(P(t) = 0)
};

/// Per path: N ~ Poisson(theta t), then N + offset generations from
/// round(x0) ancestors when x0 is integral (else one ancestor), ratio =
/// population / ancestors.
SubordinatedSample simulate_subordinated(const GenerationLaw& law, const SubordinationParams& sub, double t,
                                         const SimConfig& config);

/// Single-column CSV with `header` as its first line.
void write_samples_csv(std::ostream& os, const std::string& header, std::span<const double> values);

}  // namespace jgw
