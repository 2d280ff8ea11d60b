#include "lyaplab/cocycle.hpp"

#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lyaplab::mc {

namespace {

constexpr std::uint64_t kTagBottom = 0xB0;
constexpr std::uint64_t kTagPartial = 0xA100;
constexpr std::uint64_t kTagReversed = 0x9E;

template <class F>
std::vector<double> run_indexed(long count, Execution exec, const F& body) {
    std::vector<double> out(static_cast<std::size_t>(count));
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long t = 0; t < count; ++t) out[static_cast<std::size_t>(t)] = body(t);
    } else {
        // serial reference path; must stay byte-identical with the loop above
        for (long t = 0; t < count; ++t) out[static_cast<std::size_t>(t)] = body(t);
    }
    return out;
}

CocycleEstimate reduce_means(const std::vector<double>& means, long steps, std::uint64_t seed) {
    CocycleEstimate est;
    est.steps = steps;
    est.trajectories = static_cast<long>(means.size());
    est.seed = seed;
    double sum = 0.0;
    for (double x : means) sum += x;
    est.value = sum / static_cast<double>(means.size());
    if (means.size() > 1) {
        double ss = 0.0;
        for (double x : means) ss += (x - est.value) * (x - est.value);
        est.std_error = std::sqrt(ss / (static_cast<double>(means.size() - 1) * static_cast<double>(means.size())));
    }
    return est;
}

template <int N>
Eigen::Matrix<double, N, 1> random_unit(CounterRng& rng, int dim) {
    Eigen::Matrix<double, N, 1> v(dim);
    while (true) {
        for (int i = 0; i < dim; ++i) v[i] = rng.next_normal();
        const double n = v.norm();
        if (n > 1e-12) return v / n;
    }
}

template <int N>
struct AtomSet {
    std::vector<Eigen::Matrix<double, N, N>> mats;
    std::vector<double> cumulative;
    int dim;
};

template <int N>
AtomSet<N> load_atoms(const measures::FiniteMatrixMeasure& nu) {
    AtomSet<N> set;
    set.dim = nu.dim();
    set.mats.reserve(nu.size());
    for (const auto& a : nu.atoms()) set.mats.emplace_back(a.entries());
    set.cumulative = nu.cumulative_weights();
    return set;
}

// One trajectory of the projective chain. Direction renormalized every step;
// the log of the growth factor is accumulated from burn_in on.
template <int N>
double trajectory_mean(const AtomSet<N>& set, long steps, long burn_in,
                       const std::optional<Eigen::VectorXd>& init, CounterRng rng) {
    Eigen::Matrix<double, N, 1> v(set.dim);
    if (init)
        v = *init;
    else
        v = random_unit<N>(rng, set.dim);
    double acc = 0.0;
    const std::size_t natoms = set.mats.size();
    Eigen::Matrix<double, N, 1> w(set.dim);
    for (long k = 0; k < steps; ++k) {
        const std::size_t j = natoms == 1 ? 0 : rng.next_weighted(set.cumulative);
        w.noalias() = set.mats[j] * v;
        const double nw = w.norm();
        if (k >= burn_in) acc += std::log(nw);
        v = w / nw;
    }
    return acc / static_cast<double>(steps - burn_in);
}

template <int N>
std::vector<double> trajectory_means(const measures::FiniteMatrixMeasure& nu,
                                     const CocycleRunConfig& cfg, Execution exec) {
    const AtomSet<N> set = load_atoms<N>(nu);
    std::optional<Eigen::VectorXd> init;
    if (cfg.initial_direction) init = cfg.initial_direction->rep();
    return run_indexed(cfg.trajectories, exec, [&](long t) {
        return trajectory_mean<N>(set, cfg.steps, cfg.burn_in, init,
                                  CounterRng::stream(cfg.seed, static_cast<std::uint64_t>(t)));
    });
}

}  // namespace

void CocycleRunConfig::validate() const {
    if (steps < 1) throw InputError("steps_per_trajectory must be >= 1");
    if (trajectories < 1) throw InputError("trajectories must be >= 1");
    if (burn_in < 0 || burn_in >= steps) throw InputError("burn_in must lie in [0, steps)");
}

CocycleEstimate estimate_top_exponent(const measures::FiniteMatrixMeasure& nu,
                                      const CocycleRunConfig& cfg, Execution exec) {
    cfg.validate();
    if (cfg.initial_direction && cfg.initial_direction->dim() != nu.dim())
        throw DimMismatch("estimate_top_exponent: initial direction dimension mismatch");
    const auto means = nu.dim() == 2 ? trajectory_means<2>(nu, cfg, exec)
                                     : trajectory_means<Eigen::Dynamic>(nu, cfg, exec);
    return reduce_means(means, cfg.steps, cfg.seed);
}

CocycleEstimate estimate_bottom_exponent(const measures::FiniteMatrixMeasure& nu,
                                         const CocycleRunConfig& cfg, Execution exec) {
    // sub-seeded so that top/bottom errors combine in quadrature
    auto est = estimate_top_exponent(nu.inverse_pushforward(),
                                     cfg.with_seed(CounterRng::derive(cfg.seed, kTagBottom)), exec);
    est.value = -est.value;
    est.seed = cfg.seed;
    return est;
}

CocycleEstimate estimate_partial_sum(const measures::FiniteMatrixMeasure& nu, int k,
                                     const CocycleRunConfig& cfg, Execution exec) {
    if (k < 1 || k > nu.dim()) throw BadOrder("estimate_partial_sum: need 1 <= k <= dim");
    if (k == 1) return estimate_top_exponent(nu, cfg, exec);
    CocycleRunConfig lifted_cfg = cfg;
    lifted_cfg.initial_direction.reset();  // base directions do not lift
    return estimate_top_exponent(nu.exterior_lift(k), lifted_cfg, exec);
}

CocycleEstimate individual_exponent(const measures::FiniteMatrixMeasure& nu, int k,
                                    const CocycleRunConfig& cfg, Execution exec) {
    if (k < 1 || k > nu.dim()) throw BadOrder("individual_exponent: need 1 <= k <= dim");
    const auto upper = estimate_partial_sum(
        nu, k, cfg.with_seed(CounterRng::derive(cfg.seed, kTagPartial + static_cast<std::uint64_t>(k))), exec);
    CocycleEstimate est = upper;
    est.seed = cfg.seed;
    if (k >= 2) {
        const auto lower = estimate_partial_sum(
            nu, k - 1,
            cfg.with_seed(CounterRng::derive(cfg.seed, kTagPartial + static_cast<std::uint64_t>(k - 1))), exec);
        est.value = upper.value - lower.value;
        est.std_error = std::sqrt(upper.std_error * upper.std_error + lower.std_error * lower.std_error);
    }
    return est;
}

std::vector<double> finite_time_average(const measures::FiniteMatrixMeasure& nu,
                                        const gl::ProjectivePoint& v, long n, long trials,
                                        std::uint64_t seed, Execution exec) {
    if (n < 1) throw InputError("finite_time_average: n must be >= 1");
    if (trials < 1) throw InputError("finite_time_average: trials must be >= 1");
    if (v.dim() != nu.dim()) throw DimMismatch("finite_time_average: direction dimension mismatch");
    CocycleRunConfig cfg;
    cfg.steps = n;
    cfg.trajectories = trials;
    cfg.burn_in = 0;
    cfg.seed = seed;
    cfg.initial_direction = v;
    return nu.dim() == 2 ? trajectory_means<2>(nu, cfg, exec)
                         : trajectory_means<Eigen::Dynamic>(nu, cfg, exec);
}

CocycleEstimate estimate_asymptotic_variance(const measures::FiniteMatrixMeasure& nu,
                                             const CocycleRunConfig& cfg, Execution exec) {
    cfg.validate();
    const gl::ProjectivePoint v =
        cfg.initial_direction ? *cfg.initial_direction : gl::ProjectivePoint::axis(nu.dim(), 0);
    const auto samples = finite_time_average(nu, v, cfg.steps, cfg.trajectories, cfg.seed, exec);
    const long T = static_cast<long>(samples.size());
    const double n = static_cast<double>(cfg.steps);

    CocycleEstimate est;
    est.steps = cfg.steps;
    est.trajectories = T;
    est.seed = cfg.seed;
    if (T < 2) return est;

    // two-pass variance: centered sums stay exact for constant samples
    double s1 = 0.0;
    for (double x : samples) s1 += x;
    const double mean = s1 / static_cast<double>(T);
    double c1 = 0.0, c2 = 0.0;
    for (double x : samples) {
        c1 += x - mean;
        c2 += (x - mean) * (x - mean);
    }
    // Var over a subset = (sum (x-m)^2 - (sum (x-m))^2 / count) / (count - 1)
    // for any fixed shift m, so the global mean works for the jackknife too.
    const auto var_of = [](double csum, double csumsq, double count) {
        return (csumsq - csum * csum / count) / (count - 1.0);
    };
    est.value = n * var_of(c1, c2, static_cast<double>(T));

    // jackknife over contiguous trajectory batches
    const long B = std::min<long>(T, 32);
    if (B >= 2 && T >= 2 * B) {
        std::vector<double> theta(B);
        const long base = T / B;
        long start = 0;
        for (long b = 0; b < B; ++b) {
            const long len = base + (b < T % B ? 1 : 0);
            double b1 = 0.0, b2 = 0.0;
            for (long i = start; i < start + len; ++i) {
                const double x = samples[static_cast<std::size_t>(i)];
                b1 += x - mean;
                b2 += (x - mean) * (x - mean);
            }
            theta[static_cast<std::size_t>(b)] =
                n * var_of(c1 - b1, c2 - b2, static_cast<double>(T - len));
            start += len;
        }
        double tbar = 0.0;
        for (double x : theta) tbar += x;
        tbar /= static_cast<double>(B);
        double ss = 0.0;
        for (double x : theta) ss += (x - tbar) * (x - tbar);
        est.std_error = std::sqrt(ss * static_cast<double>(B - 1) / static_cast<double>(B));
    }
    return est;
}

EmpiricalProjectiveMeasure sample_stationary_measure(const measures::FiniteMatrixMeasure& nu,
                                                     const CocycleRunConfig& cfg, Execution exec) {
    cfg.validate();
    const int dim = nu.dim();
    const long per_traj = cfg.steps - cfg.burn_in;
    std::vector<std::vector<Eigen::VectorXd>> buckets(static_cast<std::size_t>(cfg.trajectories));

    const auto run_one = [&](long t) {
        CounterRng rng = CounterRng::stream(cfg.seed, static_cast<std::uint64_t>(t));
        Eigen::VectorXd v(dim);
        if (cfg.initial_direction)
            v = cfg.initial_direction->rep();
        else
            v = random_unit<Eigen::Dynamic>(rng, dim);
        auto& out = buckets[static_cast<std::size_t>(t)];
        out.reserve(static_cast<std::size_t>(per_traj));
        const auto& cum = nu.cumulative_weights();
        for (long k = 0; k < cfg.steps; ++k) {
            const std::size_t j = nu.size() == 1 ? 0 : rng.next_weighted(cum);
            Eigen::VectorXd w = nu.atom(j).entries() * v;
            v = w / w.norm();
            if (k >= cfg.burn_in) out.push_back(v);
        }
        return 0.0;
    };
    run_indexed(cfg.trajectories, exec, run_one);

    EmpiricalProjectiveMeasure eta;
    eta.samples.reserve(static_cast<std::size_t>(per_traj * cfg.trajectories));
    for (auto& b : buckets)
        for (auto& v : b) eta.samples.emplace_back(std::move(v));
    return eta;
}

double furstenberg_khasminskii_integral(const measures::FiniteMatrixMeasure& nu,
                                        const EmpiricalProjectiveMeasure& eta) {
    if (eta.samples.empty()) throw InputError("empirical measure is empty");
    if (eta.samples.front().dim() != nu.dim())
        throw DimMismatch("furstenberg_khasminskii_integral: dimension mismatch");
    double total = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
        const Eigen::MatrixXd& g = nu.atom(j).entries();
        double s = 0.0;
        for (const auto& p : eta.samples) s += std::log((g * p.rep()).norm());
        total += nu.weight(j) * s / static_cast<double>(eta.samples.size());
    }
    return total;
}

namespace {

using BoolMat = std::vector<std::vector<char>>;

BoolMat bool_of(const Eigen::MatrixXd& P) {
    const int n = static_cast<int>(P.rows());
    BoolMat b(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i][j] = P(i, j) > 0.0 ? 1 : 0;
    return b;
}

BoolMat bool_mul(const BoolMat& a, const BoolMat& b) {
    const int n = static_cast<int>(a.size());
    BoolMat c(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (a[i][k])
                for (int j = 0; j < n; ++j)
                    if (b[k][j]) c[i][j] = 1;
    return c;
}

bool all_positive(const BoolMat& a) {
    for (const auto& row : a)
        for (char x : row)
            if (!x) return false;
    return true;
}

void check_stochastic(const Eigen::MatrixXd& P) {
    if (P.rows() != P.cols() || P.rows() < 1) throw InputError("transition matrix must be square");
    for (int i = 0; i < P.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < P.cols(); ++j) {
            if (P(i, j) < -1e-15) throw InputError("transition matrix entries must be nonnegative");
            s += P(i, j);
        }
        if (std::abs(s - 1.0) > 1e-10) {
            std::ostringstream os;
            os << "transition row " << i << " sums to " << s;
            throw InputError(os.str());
        }
    }
}

void check_irreducible_aperiodic(const Eigen::MatrixXd& P) {
    const int n = static_cast<int>(P.rows());
    if (n == 1) return;
    // irreducibility: (I + B)^(n-1) entrywise positive
    BoolMat b = bool_of(P);
    BoolMat reach = b;
    for (int i = 0; i < n; ++i) reach[i][i] = 1;
    BoolMat acc = reach;
    for (int k = 1; k < n - 1; ++k) acc = bool_mul(acc, reach);
    if (!all_positive(acc)) throw NotIrreducible("transition matrix is not irreducible");
    // primitivity via the Wielandt exponent n^2 - 2n + 2
    const int wielandt = n * n - 2 * n + 2;
    BoolMat power = b;
    int k = 1;
    while (k < wielandt && !all_positive(power)) {
        power = bool_mul(power, b);
        ++k;
    }
    if (!all_positive(power)) throw NotAperiodic("transition matrix is periodic");
}

}  // namespace

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P) {
    check_stochastic(P);
    check_irreducible_aperiodic(P);
    const int n = static_cast<int>(P.rows());
    // solve pi^T P = pi^T, sum pi = 1 as an (n+1) x n least-squares system
    Eigen::MatrixXd A(n + 1, n);
    A.topRows(n) = P.transpose() - Eigen::MatrixXd::Identity(n, n);
    A.row(n).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    b[n] = 1.0;
    Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
    const double err = (P.transpose() * pi - pi).cwiseAbs().maxCoeff();
    if (err > 1e-10 || !(pi.minCoeff() > -1e-12))
        throw NumericalError("stationary distribution solve failed");
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    return pi;
}

double chain_spectral_gap(const Eigen::MatrixXd& P) {
    check_stochastic(P);
    check_irreducible_aperiodic(P);
    const int n = static_cast<int>(P.rows());
    if (n == 1) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(P);
    std::vector<double> moduli;
    for (int i = 0; i < n; ++i) moduli.push_back(std::abs(es.eigenvalues()[i]));
    // discard the Perron root (closest to 1)
    std::size_t perron = 0;
    for (std::size_t i = 1; i < moduli.size(); ++i)
        if (std::abs(moduli[i] - 1.0) < std::abs(moduli[perron] - 1.0)) perron = i;
    double rho = 0.0;
    for (std::size_t i = 0; i < moduli.size(); ++i)
        if (i != perron) rho = std::max(rho, moduli[i]);
    return std::min(rho, 1.0 - 1e-15);
}

MarkovCocycle::MarkovCocycle(Eigen::MatrixXd transition, std::vector<gl::SquareMatrix> fibers)
    : transition_(std::move(transition)), fibers_(std::move(fibers)) {
    check_stochastic(transition_);
    check_irreducible_aperiodic(transition_);
    if (static_cast<long>(fibers_.size()) != transition_.rows())
        throw IndexMismatch("MarkovCocycle: one fiber matrix per state required");
    const int d = fibers_.front().dim();
    for (const auto& f : fibers_)
        if (f.dim() != d) throw DimMismatch("MarkovCocycle: fibers must share one dimension");
    stationary_ = stationary_distribution(transition_);
}

MarkovCocycle MarkovCocycle::time_reversed_inverse() const {
    const int n = states();
    Eigen::MatrixXd rev(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rev(i, j) = stationary_[j] * transition_(j, i) / stationary_[i];
    // normalize away rounding dust so the reversed rows pass validation
    for (int i = 0; i < n; ++i) rev.row(i) /= rev.row(i).sum();
    std::vector<gl::SquareMatrix> inv_fibers;
    inv_fibers.reserve(fibers_.size());
    for (const auto& f : fibers_) inv_fibers.push_back(f.inverse());
    return MarkovCocycle(std::move(rev), std::move(inv_fibers));
}

namespace {

double markov_trajectory_mean(const MarkovCocycle& chain, const CocycleRunConfig& cfg,
                              CounterRng rng) {
    const int n = chain.states();
    std::vector<double> pi_cum(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += chain.stationary()[i];
        pi_cum[static_cast<std::size_t>(i)] = acc;
    }
    pi_cum.back() = 1.0;
    std::vector<std::vector<double>> row_cum(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        double c = 0.0;
        for (int j = 0; j < n; ++j) {
            c += chain.transition()(i, j);
            row_cum[i][j] = c;
        }
        row_cum[i][n - 1] = 1.0;
    }

    std::size_t state = rng.next_weighted(pi_cum);
    Eigen::VectorXd v(chain.dim());
    if (cfg.initial_direction)
        v = cfg.initial_direction->rep();
    else
        v = random_unit<Eigen::Dynamic>(rng, chain.dim());
    double sum = 0.0;
    for (long k = 0; k < cfg.steps; ++k) {
        Eigen::VectorXd w = chain.fibers()[state].entries() * v;
        const double nw = w.norm();
        if (k >= cfg.burn_in) sum += std::log(nw);
        v = w / nw;
        state = n == 1 ? 0 : rng.next_weighted(row_cum[state]);
    }
    return sum / static_cast<double>(cfg.steps - cfg.burn_in);
}

}  // namespace

std::pair<CocycleEstimate, CocycleEstimate> estimate_markov_exponents(const MarkovCocycle& chain,
                                                                      const CocycleRunConfig& cfg,
                                                                      Execution exec) {
    cfg.validate();
    if (cfg.initial_direction && cfg.initial_direction->dim() != chain.dim())
        throw DimMismatch("estimate_markov_exponents: initial direction dimension mismatch");
    const auto top_means = run_indexed(cfg.trajectories, exec, [&](long t) {
        return markov_trajectory_mean(chain, cfg, CounterRng::stream(cfg.seed, static_cast<std::uint64_t>(t)));
    });
    CocycleEstimate top = reduce_means(top_means, cfg.steps, cfg.seed);

    const MarkovCocycle reversed = chain.time_reversed_inverse();
    const CocycleRunConfig rev_cfg = cfg.with_seed(CounterRng::derive(cfg.seed, kTagReversed));
    const auto bot_means = run_indexed(cfg.trajectories, exec, [&](long t) {
        return markov_trajectory_mean(reversed, rev_cfg,
                                      CounterRng::stream(rev_cfg.seed, static_cast<std::uint64_t>(t)));
    });
    CocycleEstimate bottom = reduce_means(bot_means, cfg.steps, rev_cfg.seed);
    bottom.value = -bottom.value;
    return {top, bottom};
}

}  // namespace lyaplab::mc
