#include "lyaplab/schrodinger.hpp"

#include <algorithm>
#include <cmath>

namespace lyaplab::schrodinger {

DisorderDistribution DisorderDistribution::finite_atoms(std::vector<double> values,
                                                        std::vector<double> weights) {
    if (values.empty() || values.size() != weights.size())
        throw InputError("finite_atoms: values/weights must be nonempty and same length");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InputError("finite_atoms: weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InputError("finite_atoms: weights must sum to 1");
    DisorderDistribution d;
    d.kind_ = Kind::FiniteAtoms;
    d.values_ = std::move(values);
    d.weights_ = std::move(weights);
    d.lo_ = *std::min_element(d.values_.begin(), d.values_.end());
    d.hi_ = *std::max_element(d.values_.begin(), d.values_.end());
    d.cumulative_.resize(d.weights_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.weights_.size(); ++i) {
        acc += d.weights_[i];
        d.cumulative_[i] = acc;
    }
    d.cumulative_.back() = 1.0;
    return d;
}

DisorderDistribution DisorderDistribution::uniform(double a, double b) {
    if (!(a < b)) throw InputError("uniform: need a < b");
    DisorderDistribution d;
    d.kind_ = Kind::Uniform;
    d.lo_ = a;
    d.hi_ = b;
    return d;
}

DisorderDistribution DisorderDistribution::truncated_gaussian(double mean, double sd, double a,
                                                              double b) {
    if (!(a < b)) throw InputError("truncated_gaussian: need a < b");
    if (!(sd > 0.0)) throw InputError("truncated_gaussian: need sd > 0");
    // keep the acceptance region non-negligible so rejection sampling stays bounded
    if (a > mean + 8.0 * sd || b < mean - 8.0 * sd)
        throw InputError("truncated_gaussian: window is more than 8 sd away from the mean");
    DisorderDistribution d;
    d.kind_ = Kind::TruncatedGaussian;
    d.lo_ = a;
    d.hi_ = b;
    d.mean_ = mean;
    d.sd_ = sd;
    return d;
}

double DisorderDistribution::max_abs_support() const {
    return std::max(std::abs(lo_), std::abs(hi_));
}

double DisorderDistribution::sample(CounterRng& rng) const {
    switch (kind_) {
        case Kind::FiniteAtoms:
            return values_[rng.next_weighted(cumulative_)];
        case Kind::Uniform:
            return lo_ + (hi_ - lo_) * rng.next_unit();
        case Kind::TruncatedGaussian: {
            for (int tries = 0; tries < 100000; ++tries) {
                const double x = mean_ + sd_ * rng.next_normal();
                if (x >= lo_ && x <= hi_) return x;
            }
            throw NumericalError("truncated_gaussian: rejection sampling did not terminate");
        }
    }
    throw NumericalError("unreachable disorder kind");
}

gl::SquareMatrix transfer_matrix(double E, double V) {
    Eigen::MatrixXd t(2, 2);
    t << E - V, -1.0, 1.0, 0.0;
    return gl::SquareMatrix(std::move(t));
}

measures::FiniteMatrixMeasure transfer_cocycle_measure(const DisorderDistribution& mu, double E,
                                                       long samples, std::uint64_t seed) {
    std::vector<gl::SquareMatrix> atoms;
    std::vector<double> weights;
    if (mu.kind() == DisorderDistribution::Kind::FiniteAtoms) {
        for (std::size_t i = 0; i < mu.values().size(); ++i) {
            atoms.push_back(transfer_matrix(E, mu.values()[i]));
            weights.push_back(mu.weights()[i]);
        }
    } else {
        if (samples < 1) throw InputError("transfer_cocycle_measure: samples must be >= 1");
        CounterRng rng = CounterRng::stream(seed, 0x7Cull);
        const double w = 1.0 / static_cast<double>(samples);
        for (long i = 0; i < samples; ++i) {
            atoms.push_back(transfer_matrix(E, mu.sample(rng)));
            weights.push_back(w);
        }
    }
    return measures::FiniteMatrixMeasure(std::move(atoms), std::move(weights));
}

std::vector<EnergyPoint> lyapunov_energy_curve(const DisorderDistribution& mu,
                                               std::span<const double> E_grid,
                                               const mc::CocycleRunConfig& cfg,
                                               long samples_per_measure, mc::Execution exec) {
    cfg.validate();
    std::vector<EnergyPoint> out;
    out.reserve(E_grid.size());
    for (std::size_t i = 0; i < E_grid.size(); ++i) {
        const double E = E_grid[i];
        const auto nu = transfer_cocycle_measure(mu, E, samples_per_measure,
                                                 CounterRng::derive(cfg.seed, 0xE000 + i));
        const auto est = mc::estimate_top_exponent(
            nu, cfg.with_seed(CounterRng::derive(cfg.seed, 0xF000 + i)), exec);
        EnergyPoint p;
        p.E = E;
        p.raw = est.value;
        p.std_error = est.std_error;
        p.gamma = std::max(est.value, 0.0);
        p.clamped_beyond_noise = est.value < -3.0 * est.std_error;
        out.push_back(p);
    }
    return out;
}

long sturm_count_at_or_below(std::span<const double> diagonal, double E) {
    // LDL^T sign count for the Jacobi matrix with unit off-diagonals: d_0 =
    // v_0 - E, d_i = (v_i - E) - 1/d_{i-1}; the number of negative pivots is
    // the number of eigenvalues < E.  A zero pivot means E is an eigenvalue;
    // treating it as -tiny counts it, giving the "<= E" convention.
    long count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < diagonal.size(); ++i) {
        d = (diagonal[i] - E) - (i == 0 ? 0.0 : 1.0 / d);
        if (d == 0.0) d = -1e-300;
        if (d < 0.0) ++count;
    }
    return count;
}

IDSCurve ids_curve(const DisorderDistribution& mu, std::span<const double> E_grid, long L,
                   long realizations, std::uint64_t seed, mc::Execution exec) {
    if (L < 10) throw BadOrder("ids_curve: box size L must be >= 10");
    if (realizations < 1) throw InputError("ids_curve: realizations must be >= 1");
    if (E_grid.empty()) throw BadGrid("ids_curve: empty energy grid");
    for (std::size_t i = 0; i + 1 < E_grid.size(); ++i)
        if (!(E_grid[i] < E_grid[i + 1])) throw BadGrid("ids_curve: energy grid must be strictly increasing");

    const long sites = 2 * L + 1;
    const std::size_t ne = E_grid.size();
    std::vector<std::vector<long>> counts(static_cast<std::size_t>(realizations));

    const auto run_one = [&](long r) {
        std::vector<double> v(static_cast<std::size_t>(sites));
        for (long s = 0; s < sites; ++s) {
            CounterRng rng = CounterRng::stream(seed, static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(sites) +
                                                          static_cast<std::uint64_t>(s));
            v[static_cast<std::size_t>(s)] = mu.sample(rng);
        }
        auto& c = counts[static_cast<std::size_t>(r)];
        c.resize(ne);
        for (std::size_t e = 0; e < ne; ++e) c[e] = sturm_count_at_or_below(v, E_grid[e]);
        return 0.0;
    };
    if (exec == mc::Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long r = 0; r < realizations; ++r) run_one(r);
    } else {
        for (long r = 0; r < realizations; ++r) run_one(r);
    }

    IDSCurve curve;
    curve.energies.assign(E_grid.begin(), E_grid.end());
    curve.values.assign(ne, 0.0);
    for (long r = 0; r < realizations; ++r)
        for (std::size_t e = 0; e < ne; ++e)
            curve.values[e] += static_cast<double>(counts[static_cast<std::size_t>(r)][e]);
    for (std::size_t e = 0; e < ne; ++e)
        curve.values[e] /= static_cast<double>(realizations) * static_cast<double>(sites);
    curve.box_size = L;
    curve.realizations = realizations;
    curve.seed = seed;
    return curve;
}

double smoothed_ids(const IDSCurve& curve, double eta, double E) {
    if (!(eta > 0.0)) throw InputError("smoothed_ids: eta must be positive");
    if (curve.energies.size() < 2) throw BadGrid("smoothed_ids: curve needs at least two points");
    const double lo = curve.energies.front(), hi = curve.energies.back();
    if (E - 10.0 * eta < lo || E + 10.0 * eta > hi)
        throw BadWindow("smoothed_ids: E must sit at least 10*eta inside the grid");

    constexpr double kPi = 3.14159265358979323846264338327950;
    // The Cauchy kernel integrates in closed form against the
    // piecewise-linear interpolant of N, so the quadrature carries exact
    // kernel mass cell by cell (a plain trapezoid under-resolves the peak
    // when eta is comparable to the grid step).
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < curve.energies.size(); ++i) {
        const double x0 = curve.energies[i], x1 = curve.energies[i + 1];
        const double n0 = curve.values[i], n1 = curve.values[i + 1];
        const double slope = (n1 - n0) / (x1 - x0);
        const double u0 = x0 - E, u1 = x1 - E;
        const double atan_term = (std::atan(u1 / eta) - std::atan(u0 / eta)) / kPi;
        const double log_term =
            0.5 * eta * (std::log(u1 * u1 + eta * eta) - std::log(u0 * u0 + eta * eta)) / kPi;
        // integral of (n0 + slope (x - x0)) K_eta(E - x) over the cell
        acc += (n0 - slope * u0) * atan_term + slope * log_term;
    }
    // plateau tails: kernel mass outside the grid times the edge values
    const double left_mass = 0.5 + std::atan((lo - E) / eta) / kPi;
    const double right_mass = 0.5 - std::atan((hi - E) / eta) / kPi;
    acc += left_mass * curve.values.front() + right_mass * curve.values.back();
    return acc;
}

namespace {

// integral of log|E - x| dx, antiderivative evaluated with u log|u| - u
double log_kernel_antideriv(double x, double E) {
    const double u = x - E;
    if (u == 0.0) return 0.0;
    return u * std::log(std::abs(u)) - u;
}

}  // namespace

ThoulessResult thouless_check(const DisorderDistribution& mu, double E,
                              const mc::CocycleRunConfig& cfg, const IDSCurve& ids,
                              long samples_per_measure, mc::Execution exec) {
    if (ids.energies.size() < 2) throw BadGrid("thouless_check: IDS curve needs at least two points");
    if (ids.values.front() > 1e-9 || ids.values.back() < 1.0 - 1e-9)
        throw BadWindow("thouless_check: IDS grid must bracket the whole spectrum");

    const auto nu = transfer_cocycle_measure(mu, E, samples_per_measure,
                                             CounterRng::derive(cfg.seed, 0x7E));
    const auto est = mc::estimate_top_exponent(nu, cfg, exec);

    // Stieltjes integral against piecewise-linear N: within a cell dN is the
    // uniform density DeltaN / DeltaE, and log|E - x| integrates exactly.
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < ids.energies.size(); ++i) {
        const double dN = ids.values[i + 1] - ids.values[i];
        if (dN == 0.0) continue;
        const double a = ids.energies[i], b = ids.energies[i + 1];
        integral += dN * (log_kernel_antideriv(b, E) - log_kernel_antideriv(a, E)) / (b - a);
    }

    ThoulessResult r;
    r.gamma_direct = std::max(est.value, 0.0);
    r.se_direct = est.std_error;
    r.gamma_thouless = integral;
    r.residual = std::abs(r.gamma_direct - r.gamma_thouless);
    return r;
}

double ids_exponent(double theta, constants::Regime regime) {
    if (!(theta > 0.0 && theta <= 1.0)) throw BadTheta("theta must lie in (0, 1]");
    if (regime == constants::Regime::MH) return theta / (3.0 * (2.0 + theta));
    return theta / (24.0 * (1.0 + theta));
}

}  // namespace lyaplab::schrodinger
