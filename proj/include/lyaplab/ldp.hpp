#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lyaplab/cocycle.hpp"

namespace lyaplab::ldp {

struct PressureCurve {
    std::vector<double> s;
    std::vector<double> value;      // convexified
    std::vector<double> raw;        // log-mean-exp estimates before the envelope
    std::vector<double> std_error;  // batch-means error per point
    long n = 0;
    long trials = 0;
    std::uint64_t seed = 0;
};

struct RateFunction {
    std::vector<double> eps;
    std::vector<double> value;
    std::vector<bool> at_grid_edge;  // sup attained at an s-grid endpoint: value is a lower
                                     // sentinel for a possibly unbounded transform
    double argmin = 0.0;
};

// Greatest convex minorant of (x, y) samples, evaluated back on x.
std::vector<double> lower_convex_envelope(std::span<const double> x, std::span<const double> y);

// Pressure curve by log-mean-exp over common trajectories (the same sample of
// log ||A_x^n v|| feeds every s). Grid points with |s| > s_max are dropped;
// s_max <= 0 selects the default 5 / log ecc.
PressureCurve estimate_pressure(const measures::FiniteMatrixMeasure& nu,
                                std::span<const double> s_grid, long n, long trials,
                                std::uint64_t seed, const gl::ProjectivePoint& v,
                                double s_max = 0.0, mc::Execution exec = mc::Execution::Parallel);

RateFunction legendre_transform(const PressureCurve& curve, std::span<const double> eps_grid);

struct ConcentrationCheck {
    double empirical_tail = 0.0;
    double bound = 0.0;            // 2 exp(-n eps^2 / (4 sigma^2))
    double bound_hoeffding = 0.0;  // 2 exp(-n eps^2 / (2 C_HA))
    bool pass = false;
    double lambda_ref = 0.0;
    double sigma2_used = 0.0;
    long trials = 0;
};

// Tail frequency of |lambda_n(v) - lambda_ref| > eps against the explicit
// bounds; pass compares to the sigma bound with one-sided 99% binomial slack.
ConcentrationCheck concentration_check(const measures::FiniteMatrixMeasure& nu,
                                       const gl::ProjectivePoint& v, double eps, long n,
                                       long trials, std::uint64_t seed,
                                       std::optional<double> sigma2_proxy = std::nullopt,
                                       mc::Execution exec = mc::Execution::Parallel);

}  // namespace lyaplab::ldp
