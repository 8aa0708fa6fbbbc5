#pragma once

// Price-ratio process P(t) = X_{N(t)} / X_0 where N(t) ~ Poisson(theta t)
// counts generations of the branching process.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "jgw/branching.hpp"

namespace jgw {

/// Generation-clock settings. theta is per day; x0 is the ancestor weight
/// entering the variance; offset shifts the generation index in the
/// zero-probability series (1 counts the first generation as already elapsed).
class SubordinationParams {
public:
    SubordinationParams(double theta, double horizon_t = 0.0, double x0 = 1.0, int offset = 1);

    /// theta = rate / horizon_days, the calibration convention for the clock.
    static SubordinationParams from_horizon(double rate, double horizon_days, double x0 = 1.0, int offset = 1);

    double theta() const noexcept { return theta_; }
    double horizon_t() const noexcept { return horizon_t_; }
    double x0() const noexcept { return x0_; }
    int offset() const noexcept { return offset_; }

private:
    double theta_;
    double horizon_t_;
    double x0_;
    int offset_;
};

inline constexpr double kDefaultTailTol = 1e-10;

/// E[P(t)] = exp(theta t (mu - 1)).
double expected_ratio(const GenerationLaw& law, const SubordinationParams& sub, double t);

/// Var[P(t)] with x0 ancestors.
double ratio_variance(const GenerationLaw& law, const SubordinationParams& sub, double t);

/// Pr(P(t) = 0) = sum_n Pi_{n+offset}(0) Pr(N(t) = n), truncated once the
/// remaining Poisson mass is below tail_tol. Throws DomainError for t < 0.
double prob_zero(const GenerationLaw& law, const SubordinationParams& sub, double t,
                 double tail_tol = kDefaultTailTol);

/// Same series summed over exactly `terms` Poisson terms (n = 0 .. terms-1).
double prob_zero_terms(const GenerationLaw& law, const SubordinationParams& sub, double t,
                       std::size_t terms);

/// Number of Poisson terms prob_zero uses for this (theta t, tail_tol).
std::size_t prob_zero_truncation(double clock_mean, double tail_tol);

struct CurvePoint {
    double t;
    double value;
};

/// Ordered (t, value) samples. t strictly increasing, values finite.
class CurveTable {
public:
    CurveTable() = default;
    explicit CurveTable(std::vector<CurvePoint> points);

    const std::vector<CurvePoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const CurvePoint& operator[](std::size_t i) const { return points_[i]; }
    const CurvePoint& back() const { return points_.back(); }

private:
    std::vector<CurvePoint> points_;
};

/// Two-column CSV: header `t,value`, one row per point.
void write_csv(std::ostream& os, const CurveTable& table);

/// Grid 0, step, 2 step, ..., up to and including t_max (t_max appended when
/// not a multiple of step).
std::vector<double> make_grid(double t_max, double step);

inline constexpr double kMaxCurveTime = 1e4;

/// E[P(t)] - 1 at each grid time.
CurveTable expected_return_curve(const GenerationLaw& law, const SubordinationParams& sub,
                                 std::span<const double> t_grid);

/// Pr(P(t) = 0) at each grid time.
CurveTable extinction_curve(const GenerationLaw& law, const SubordinationParams& sub,
                            std::span<const double> t_grid, double tail_tol = kDefaultTailTol);

}  // namespace jgw
