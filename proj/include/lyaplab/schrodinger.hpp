#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lyaplab/cocycle.hpp"
#include "lyaplab/constants.hpp"

namespace lyaplab::schrodinger {

// Compactly supported single-site disorder distribution.
class DisorderDistribution {
  public:
    enum class Kind { FiniteAtoms, Uniform, TruncatedGaussian };

    static DisorderDistribution finite_atoms(std::vector<double> values, std::vector<double> weights);
    static DisorderDistribution uniform(double a, double b);
    static DisorderDistribution truncated_gaussian(double mean, double sd, double a, double b);

    Kind kind() const { return kind_; }
    double support_min() const { return lo_; }
    double support_max() const { return hi_; }
    double max_abs_support() const;
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& weights() const { return weights_; }

    double sample(CounterRng& rng) const;

  private:
    DisorderDistribution() = default;
    Kind kind_ = Kind::FiniteAtoms;
    std::vector<double> values_, weights_, cumulative_;
    double lo_ = 0.0, hi_ = 0.0;
    double mean_ = 0.0, sd_ = 1.0;
};

// T(E, V) = [[E - V, -1], [1, 0]]; det = 1 by construction.
gl::SquareMatrix transfer_matrix(double E, double V);

// FiniteAtoms: exact pushforward. Continuous: empirical measure of `samples`
// i.i.d. draws with equal weights.
measures::FiniteMatrixMeasure transfer_cocycle_measure(const DisorderDistribution& mu, double E,
                                                       long samples, std::uint64_t seed);

struct EnergyPoint {
    double E = 0.0;
    double gamma = 0.0;  // clamped at 0 (det = 1 forces lambda_+ >= 0)
    double std_error = 0.0;
    double raw = 0.0;  // unclamped estimate
    bool clamped_beyond_noise = false;
};

std::vector<EnergyPoint> lyapunov_energy_curve(const DisorderDistribution& mu,
                                               std::span<const double> E_grid,
                                               const mc::CocycleRunConfig& cfg,
                                               long samples_per_measure,
                                               mc::Execution exec = mc::Execution::Parallel);

struct IDSCurve {
    std::vector<double> energies;
    std::vector<double> values;  // N(E) in [0, 1], non-decreasing
    long box_size = 0;           // L; the box is [-L, L]
    long realizations = 0;
    std::uint64_t seed = 0;
};

// Number of eigenvalues <= E of the Jacobi matrix with the given diagonal and
// unit off-diagonals, by the Sturm / LDL^T sign count.
long sturm_count_at_or_below(std::span<const double> diagonal, double E);

IDSCurve ids_curve(const DisorderDistribution& mu, std::span<const double> E_grid, long L,
                   long realizations, std::uint64_t seed,
                   mc::Execution exec = mc::Execution::Parallel);

// Cauchy-kernel smoothing of the IDS at energy E, trapezoid on the grid with
// plateau tails.
double smoothed_ids(const IDSCurve& curve, double eta, double E);

struct ThoulessResult {
    double gamma_direct = 0.0;
    double se_direct = 0.0;
    double gamma_thouless = 0.0;
    double residual = 0.0;
};

// gamma(E) two ways: Monte-Carlo on the transfer cocycle vs the Stieltjes
// integral of log|E - E'| against dN (exact on the piecewise-linear IDS).
ThoulessResult thouless_check(const DisorderDistribution& mu, double E,
                              const mc::CocycleRunConfig& cfg, const IDSCurve& ids,
                              long samples_per_measure,
                              mc::Execution exec = mc::Execution::Parallel);

// theta/(3(2+theta)) under MH, theta/(24(1+theta)) in the perpetuity regime.
double ids_exponent(double theta, constants::Regime regime);

}  // namespace lyaplab::schrodinger
