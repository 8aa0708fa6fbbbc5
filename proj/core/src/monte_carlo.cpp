#include "jgw/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <random>
#include <thread>

#include "jgw/errors.hpp"
#include "jgw/text_format.hpp"

namespace jgw {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

// Runs body(i) for i in [0, n) over `threads` contiguous chunks. Any exception
// from the lowest-indexed failing chunk is rethrown.
template <class Body>
void parallel_paths(std::size_t n, unsigned threads, Body body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t end = std::min(n, (w + 1) * chunk);
                for (std::size_t i = w * chunk; i < end; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::uint64_t grow(const JanardanParams& params, std::uint64_t population, std::uint64_t generations,
                   std::size_t cap, Rng& rng) {
    for (std::uint64_t g = 0; g < generations && population > 0; ++g) {
        std::uint64_t next = 0;
        for (std::uint64_t i = 0; i < population; ++i) next += sample_offspring(params, 1.0, rng);
        if (next > cap) {
            throw PopulationCapError("simulation: population " + std::to_string(next) + " exceeds cap " +
                                         std::to_string(cap) + " at generation " + std::to_string(g + 1),
                                     next);
        }
        population = next;
    }
    return population;
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) word = splitmix64(state);
}

Rng Rng::for_path(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed;
    const std::uint64_t base = splitmix64(state);
    std::uint64_t mix = index ^ 0xd1b54a32d192ed03ULL;
    return Rng(base ^ splitmix64(mix));
}

Rng::result_type Rng::operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

std::uint64_t Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(*this);
}

void SimConfig::validate() const {
    if (n_paths < 1) throw DomainError("simulation: n_paths must be >= 1");
    if (max_population < 1) throw DomainError("simulation: max_population must be >= 1");
}

std::uint64_t sample_offspring(const JanardanParams& params, double t, Rng& rng) {
    double clock = rng.exponential(params.lambda());
    if (clock > t) return 0;
    std::uint64_t count = 1;
    for (;;) {
        clock += rng.exponential(params.eta());
        if (clock > t) return count;
        ++count;
    }
}

std::vector<std::uint64_t> sample_offspring_batch(const JanardanParams& params, double t, const SimConfig& config) {
    config.validate();
    if (!(t > 0.0)) throw DomainError("sample_offspring: t must be > 0");
    std::vector<std::uint64_t> out(config.n_paths);
    parallel_paths(config.n_paths, config.threads, [&](std::size_t i) {
        Rng rng = Rng::for_path(config.seed, i);
        out[i] = sample_offspring(params, t, rng);
    });
    return out;
}

SampleStats summarize(std::span<const double> values) {
    SampleStats s;
    s.count = values.size();
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    std::size_t zeros = 0;
    for (double v : values) {
        sum += v;
        zeros += v == 0.0;
    }
    s.mean = sum / n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    s.variance = values.size() > 1 ? m2 * n / (n - 1.0) : 0.0;
    s.se_mean = std::sqrt(s.variance / n);
    s.se_variance = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    s.zero_fraction = static_cast<double>(zeros) / n;
    s.se_zero_fraction = std::sqrt(s.zero_fraction * (1.0 - s.zero_fraction) / n);
    return s;
}

GenerationSample simulate_generations(const GenerationLaw& law, std::uint64_t generations, const SimConfig& config) {
    config.validate();
    GenerationSample out;
    out.sizes.resize(config.n_paths);
    parallel_paths(config.n_paths, config.threads, [&](std::size_t i) {
        Rng rng = Rng::for_path(config.seed, i);
        out.sizes[i] = grow(law.offspring(), 1, generations, config.max_population, rng);
    });
    std::vector<double> values(out.sizes.begin(), out.sizes.end());
    out.stats = summarize(values);
    return out;
}

SubordinatedSample simulate_subordinated(const GenerationLaw& law, const SubordinationParams& sub, double t,
                                         const SimConfig& config) {
    config.validate();
    if (!(t >= 0.0)) throw DomainError("simulate_subordinated: t must be >= 0");
    const double x0 = sub.x0();
    const bool integral = x0 == std::floor(x0) && x0 <= static_cast<double>(config.max_population);
    const std::uint64_t ancestors = integral ? static_cast<std::uint64_t>(x0) : 1;
    const double clock_mean = sub.theta() * t;

    SubordinatedSample out;
    out.ratios.resize(config.n_paths);
    parallel_paths(config.n_paths, config.threads, [&](std::size_t i) {
        Rng rng = Rng::for_path(config.seed, i);
        const std::uint64_t generations = rng.poisson(clock_mean) + static_cast<std::uint64_t>(sub.offset());
        const std::uint64_t size = grow(law.offspring(), ancestors, generations, config.max_population, rng);
        out.ratios[i] = static_cast<double>(size) / static_cast<double>(ancestors);
    });
    out.stats = summarize(out.ratios);
    return out;
}

void write_samples_csv(std::ostream& os, const std::string& header, std::span<const double> values) {
    os << header << '\n';
    for (double v : values) os << format_double(v, 17) << '\n';
}

}  // namespace jgw
