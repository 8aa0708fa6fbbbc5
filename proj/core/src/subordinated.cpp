#include "jgw/subordinated.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "jgw/errors.hpp"
#include "jgw/text_format.hpp"

namespace jgw {

SubordinationParams::SubordinationParams(double theta, double horizon_t, double x0, int offset)
    : theta_(theta), horizon_t_(horizon_t), x0_(x0), offset_(offset) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("subordination: theta must be > 0");
    if (!(horizon_t >= 0.0) || !std::isfinite(horizon_t)) {
        throw DomainError("subordination: horizon_t must be >= 0");
    }
    if (!(x0 > 0.0) || !std::isfinite(x0)) throw DomainError("subordination: x0 must be > 0");
    if (offset != 0 && offset != 1) throw DomainError("subordination: offset must be 0 or 1");
}

SubordinationParams SubordinationParams::from_horizon(double rate, double horizon_days, double x0, int offset) {
    if (!(horizon_days > 0.0)) throw DomainError("subordination: horizon_days must be > 0");
    return {rate / horizon_days, horizon_days, x0, offset};
}

double expected_ratio(const GenerationLaw& law, const SubordinationParams& sub, double t) {
    if (!(t >= 0.0)) throw DomainError("expected_ratio: t must be >= 0");
    return std::exp(sub.theta() * t * (law.mu() - 1.0));
}

double ratio_variance(const GenerationLaw& law, const SubordinationParams& sub, double t) {
    if (!(t >= 0.0)) throw DomainError("ratio_variance: t must be >= 0");
    const double mu = law.mu();
    const double clock = sub.theta() * t;
    if (std::abs(mu - 1.0) < kCriticalBand) return law.sigma2() * clock / sub.x0();
    const double second = std::exp(clock * (mu * mu - 1.0));
    const double first = std::exp(clock * (mu - 1.0));
    return law.sigma2() / (sub.x0() * mu * (mu - 1.0)) * (second - first) +
           (second - std::exp(2.0 * clock * (mu - 1.0)));
}

std::size_t prob_zero_truncation(double clock_mean, double tail_tol) {
    if (!(tail_tol > 0.0)) throw DomainError("prob_zero: tail_tol must be > 0");
    if (clock_mean <= 0.0) return 1;
    const double log_rate = std::log(clock_mean);
    // For n + 2 > rate the Poisson tail beyond n is dominated by a geometric
    // series: sum_{j>n} w_j <= w_{n+1} / (1 - rate / (n + 2)).
    for (std::size_t n = 0;; ++n) {
        const double next = static_cast<double>(n + 1);
        const double log_w = -clock_mean + next * log_rate - std::lgamma(next + 1.0);
        const double ratio = clock_mean / (next + 1.0);
        if (ratio < 1.0) {
            const double bound = std::exp(log_w) / (1.0 - ratio);
            if (bound < tail_tol) return n + 1;
        }
    }
}

double prob_zero_terms(const GenerationLaw& law, const SubordinationParams& sub, double t, std::size_t terms) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("prob_zero: t must be finite and >= 0");
    const double clock_mean = sub.theta() * t;
    double extinct = 0.0;  // Pi_k(0), starting at k = 0
    for (int i = 0; i < sub.offset(); ++i) extinct = law.pgf(extinct);

    if (clock_mean == 0.0) return extinct;
    const double log_rate = std::log(clock_mean);
    double total = 0.0;
    for (std::size_t n = 0; n < terms; ++n) {
        const double nd = static_cast<double>(n);
        const double weight = std::exp(-clock_mean + nd * log_rate - std::lgamma(nd + 1.0));
        total += weight * extinct;
        extinct = law.pgf(extinct);
    }
    return std::min(total, 1.0);
}

double prob_zero(const GenerationLaw& law, const SubordinationParams& sub, double t, double tail_tol) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("prob_zero: t must be finite and >= 0");
    return prob_zero_terms(law, sub, t, prob_zero_truncation(sub.theta() * t, tail_tol));
}

CurveTable::CurveTable(std::vector<CurvePoint> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].t) || !std::isfinite(points_[i].value)) {
            throw DomainError("curve: non-finite point at index " + std::to_string(i));
        }
        if (i > 0 && !(points_[i].t > points_[i - 1].t)) {
            throw DomainError("curve: t must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }
}

void write_csv(std::ostream& os, const CurveTable& table) {
    os << "t,value\n";
    for (const auto& p : table.points()) {
        os << format_double(p.t) << ',' << format_double(p.value) << '\n';
    }
}

std::vector<double> make_grid(double t_max, double step) {
    if (!(t_max >= 0.0) || !(step > 0.0)) throw DomainError("grid: need t_max >= 0 and step > 0");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * step;
        if (t > t_max * (1.0 + 1e-12)) break;
        grid.push_back(t);
    }
    if (grid.back() < t_max * (1.0 - 1e-12)) grid.push_back(t_max);
    return grid;
}

namespace {

void check_grid(std::span<const double> t_grid) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0 && t_grid[i] <= kMaxCurveTime)) {
            throw DomainError("curve: grid times must lie in [0, 1e4] days");
        }
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
            throw DomainError("curve: grid must be strictly increasing");
        }
    }
}

}  // namespace

CurveTable expected_return_curve(const GenerationLaw& law, const SubordinationParams& sub,
                                 std::span<const double> t_grid) {
    check_grid(t_grid);
    std::vector<CurvePoint> points;
    points.reserve(t_grid.size());
    for (double t : t_grid) points.push_back({t, expected_ratio(law, sub, t) - 1.0});
    return CurveTable(std::move(points));
}

CurveTable extinction_curve(const GenerationLaw& law, const SubordinationParams& sub,
                            std::span<const double> t_grid, double tail_tol) {
    check_grid(t_grid);
    std::vector<CurvePoint> points;
    points.reserve(t_grid.size());
    for (double t : t_grid) points.push_back({t, prob_zero(law, sub, t, tail_tol)});
    return CurveTable(std::move(points));
}

}  // namespace jgw
