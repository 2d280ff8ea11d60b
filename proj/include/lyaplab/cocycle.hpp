#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lyaplab/measures.hpp"
#include "lyaplab/rng.hpp"

namespace lyaplab::mc {

// Every estimator below runs one counter-seeded stream per trajectory and
// reduces in trajectory order, so Serial and Parallel produce identical bytes.
enum class Execution { Serial, Parallel };

struct CocycleRunConfig {
    long steps = 10000;
    long trajectories = 32;
    long burn_in = 1000;
    std::uint64_t seed = 0;
    std::optional<gl::ProjectivePoint> initial_direction;  // nullopt: random per trajectory

    void validate() const;
    CocycleRunConfig with_seed(std::uint64_t s) const {
        CocycleRunConfig c = *this;
        c.seed = s;
        return c;
    }
};

struct CocycleEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 1-sigma standard error across trajectory means
    long steps = 0;
    long trajectories = 0;
    std::uint64_t seed = 0;
};

struct EmpiricalProjectiveMeasure {
    std::vector<gl::ProjectivePoint> samples;
};

CocycleEstimate estimate_top_exponent(const measures::FiniteMatrixMeasure& nu,
                                      const CocycleRunConfig& cfg,
                                      Execution exec = Execution::Parallel);

// -lambda_plus of the pushforward under g -> g^-1.
CocycleEstimate estimate_bottom_exponent(const measures::FiniteMatrixMeasure& nu,
                                         const CocycleRunConfig& cfg,
                                         Execution exec = Execution::Parallel);

// Lambda_k = lambda_1 + ... + lambda_k via the exterior-power lift.
CocycleEstimate estimate_partial_sum(const measures::FiniteMatrixMeasure& nu, int k,
                                     const CocycleRunConfig& cfg,
                                     Execution exec = Execution::Parallel);

// lambda_k = Lambda_k - Lambda_{k-1}, independent sub-seeds, errors in quadrature.
CocycleEstimate individual_exponent(const measures::FiniteMatrixMeasure& nu, int k,
                                    const CocycleRunConfig& cfg,
                                    Execution exec = Execution::Parallel);

// Independent samples of lambda_n(v) = (1/n) log ||A_x^n v||.
std::vector<double> finite_time_average(const measures::FiniteMatrixMeasure& nu,
                                        const gl::ProjectivePoint& v, long n, long trials,
                                        std::uint64_t seed, Execution exec = Execution::Parallel);

// n * Var(lambda_n(v)); std error by jackknife over trajectory batches.
CocycleEstimate estimate_asymptotic_variance(const measures::FiniteMatrixMeasure& nu,
                                             const CocycleRunConfig& cfg,
                                             Execution exec = Execution::Parallel);

EmpiricalProjectiveMeasure sample_stationary_measure(const measures::FiniteMatrixMeasure& nu,
                                                     const CocycleRunConfig& cfg,
                                                     Execution exec = Execution::Parallel);

// Exact double sum of phi(g, [v]) over atoms x samples.
double furstenberg_khasminskii_integral(const measures::FiniteMatrixMeasure& nu,
                                        const EmpiricalProjectiveMeasure& eta);

// Irreducible aperiodic chain driving one fiber matrix per state.
class MarkovCocycle {
  public:
    MarkovCocycle(Eigen::MatrixXd transition, std::vector<gl::SquareMatrix> fibers);

    int states() const { return static_cast<int>(transition_.rows()); }
    int dim() const { return fibers_.front().dim(); }
    const Eigen::MatrixXd& transition() const { return transition_; }
    const std::vector<gl::SquareMatrix>& fibers() const { return fibers_; }
    const Eigen::VectorXd& stationary() const { return stationary_; }

    // Reversal P_hat(i,j) = pi_j P(j,i) / pi_i with inverted fibers; drives the
    // bottom exponent.
    MarkovCocycle time_reversed_inverse() const;

  private:
    Eigen::MatrixXd transition_;
    std::vector<gl::SquareMatrix> fibers_;
    Eigen::VectorXd stationary_;
};

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P);

// rho_P: second-largest eigenvalue modulus of an irreducible aperiodic chain.
double chain_spectral_gap(const Eigen::MatrixXd& P);

std::pair<CocycleEstimate, CocycleEstimate> estimate_markov_exponents(
    const MarkovCocycle& chain, const CocycleRunConfig& cfg, Execution exec = Execution::Parallel);

}  // namespace lyaplab::mc
