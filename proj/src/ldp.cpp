#include "lyaplab/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lyaplab::ldp {

namespace {

// log of the mean of exp(x_i), max-shifted, summed in index order
double log_mean_exp(std::span<const double> x) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : x) m = std::max(m, v);
    double s = 0.0;
    for (double v : x) s += std::exp(v - m);
    return m + std::log(s / static_cast<double>(x.size()));
}

}  // namespace

std::vector<double> lower_convex_envelope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n == 0) throw BadGrid("envelope: empty or mismatched samples");
    // lower hull by monotone chain; x assumed strictly increasing
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (x[i] - x[a]) * (y[b] - y[a]);
            if (cross <= 0.0)
                hull.pop_back();  // b lies above the chord a--i
            else
                break;
        }
        hull.push_back(i);
    }
    std::vector<double> env(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (seg + 1 < hull.size() && x[hull[seg + 1]] < x[i]) ++seg;
        if (seg + 1 >= hull.size()) {
            env[i] = y[hull.back()];
            continue;
        }
        const std::size_t a = hull[seg], b = hull[seg + 1];
        const double t = (x[i] - x[a]) / (x[b] - x[a]);
        env[i] = y[a] + t * (y[b] - y[a]);
    }
    return env;
}

PressureCurve estimate_pressure(const measures::FiniteMatrixMeasure& nu,
                                std::span<const double> s_grid, long n, long trials,
                                std::uint64_t seed, const gl::ProjectivePoint& v, double s_max,
                                mc::Execution exec) {
    if (n < 1 || trials < 1) throw InputError("estimate_pressure: n and trials must be >= 1");
    if (s_grid.empty()) throw BadGrid("estimate_pressure: empty s grid");
    for (std::size_t i = 0; i + 1 < s_grid.size(); ++i)
        if (!(s_grid[i] < s_grid[i + 1])) throw BadGrid("estimate_pressure: s grid must be strictly increasing");

    const double log_ecc = std::log(nu.eccentricity());
    if (s_max <= 0.0)
        s_max = log_ecc > 1e-12 ? 5.0 / log_ecc : std::numeric_limits<double>::infinity();

    PressureCurve curve;
    for (double s : s_grid)
        if (std::abs(s) <= s_max) curve.s.push_back(s);
    if (curve.s.empty()) throw BadGrid("estimate_pressure: every grid point exceeds s_max");

    curve.n = n;
    curve.trials = trials;
    curve.seed = seed;

    // one set of trajectories for the whole curve (common random numbers)
    const auto lam = mc::finite_time_average(nu, v, n, trials, seed, exec);
    std::vector<double> S(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) S[i] = lam[i] * static_cast<double>(n);

    const long B = std::min<long>(trials, 32);
    std::vector<double> scaled(S.size());
    std::vector<double> batch_vals;
    for (double s : curve.s) {
        for (std::size_t i = 0; i < S.size(); ++i) scaled[i] = s * S[i];
        curve.raw.push_back(log_mean_exp(scaled) / static_cast<double>(n));
        // batch-means error
        double se = 0.0;
        if (B >= 2 && trials >= 2 * B) {
            batch_vals.clear();
            const long base = trials / B;
            long start = 0;
            for (long b = 0; b < B; ++b) {
                const long len = base + (b < trials % B ? 1 : 0);
                batch_vals.push_back(
                    log_mean_exp(std::span<const double>(scaled).subspan(static_cast<std::size_t>(start),
                                                                         static_cast<std::size_t>(len))) /
                    static_cast<double>(n));
                start += len;
            }
            double mean = 0.0;
            for (double x : batch_vals) mean += x;
            mean /= static_cast<double>(B);
            double ss = 0.0;
            for (double x : batch_vals) ss += (x - mean) * (x - mean);
            se = std::sqrt(ss / (static_cast<double>(B - 1) * static_cast<double>(B)));
        }
        curve.std_error.push_back(se);
    }
    curve.value = lower_convex_envelope(curve.s, curve.raw);
    return curve;
}

RateFunction legendre_transform(const PressureCurve& curve, std::span<const double> eps_grid) {
    if (curve.s.empty() || curve.value.size() != curve.s.size())
        throw BadGrid("legendre_transform: pressure curve not populated");
    if (eps_grid.empty()) throw BadGrid("legendre_transform: empty epsilon grid");
    RateFunction rate;
    for (double e : eps_grid) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < curve.s.size(); ++j) {
            const double val = curve.s[j] * e - curve.value[j];
            if (val > best) {
                best = val;
                arg = j;
            }
        }
        rate.eps.push_back(e);
        rate.value.push_back(std::max(best, 0.0));
        rate.at_grid_edge.push_back(arg == 0 || arg + 1 == curve.s.size());
    }
    std::size_t amin = 0;
    for (std::size_t i = 1; i < rate.value.size(); ++i)
        if (rate.value[i] < rate.value[amin]) amin = i;
    rate.argmin = rate.eps[amin];
    return rate;
}

ConcentrationCheck concentration_check(const measures::FiniteMatrixMeasure& nu,
                                       const gl::ProjectivePoint& v, double eps, long n,
                                       long trials, std::uint64_t seed,
                                       std::optional<double> sigma2_proxy, mc::Execution exec) {
    if (!(eps > 0.0)) throw InputError("concentration_check: eps must be positive");
    if (n < 1 || trials < 1) throw InputError("concentration_check: n and trials must be >= 1");

    mc::CocycleRunConfig ref_cfg;
    ref_cfg.steps = std::max<long>(n, 20000);
    ref_cfg.trajectories = 64;
    ref_cfg.burn_in = std::min<long>(1000, ref_cfg.steps / 10);
    ref_cfg.seed = CounterRng::derive(seed, 0xC0);
    const auto ref = mc::estimate_top_exponent(nu, ref_cfg, exec);

    ConcentrationCheck out;
    out.lambda_ref = ref.value;
    out.trials = trials;

    const auto lam = mc::finite_time_average(nu, v, n, trials, CounterRng::derive(seed, 0xC1), exec);
    long exceed = 0;
    for (double x : lam)
        if (std::abs(x - ref.value) > eps) ++exceed;
    out.empirical_tail = static_cast<double>(exceed) / static_cast<double>(trials);

    double sigma2;
    if (sigma2_proxy) {
        sigma2 = *sigma2_proxy;
    } else {
        mc::CocycleRunConfig var_cfg;
        var_cfg.steps = 2000;
        var_cfg.trajectories = 2000;
        var_cfg.burn_in = 0;
        var_cfg.seed = CounterRng::derive(seed, 0xC2);
        var_cfg.initial_direction = v;
        sigma2 = mc::estimate_asymptotic_variance(nu, var_cfg, exec).value;
    }
    out.sigma2_used = sigma2;
    out.bound = sigma2 > 0.0 ? 2.0 * std::exp(-static_cast<double>(n) * eps * eps / (4.0 * sigma2)) : 0.0;

    const double log_ecc = std::log(nu.eccentricity());
    const double c_ha = 2.0 * log_ecc * log_ecc;
    out.bound_hoeffding =
        c_ha > 0.0 ? 2.0 * std::exp(-static_cast<double>(n) * eps * eps / (2.0 * c_ha)) : 0.0;

    const double b = std::min(out.bound, 1.0);
    const double slack = 2.326 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
    out.pass = out.empirical_tail <= b + slack;
    return out;
}

}  // namespace lyaplab::ldp
