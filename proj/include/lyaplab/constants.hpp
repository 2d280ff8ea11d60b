#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lyaplab/errors.hpp"

namespace lyaplab::constants {

// Data feeding the Holder package: eccentricity of the support, Lyapunov gap
// (lambda_+ - lambda_-, or lambda_1 - lambda_2, or lambda_k - lambda_{k+1}
// depending on context), Holder index, and diam^theta of the support.
struct SpectralInputs {
    double ecc = 1.0;
    double gap = 0.0;
    double theta = 1.0;
    double diam_theta = 1.0;
};

struct ConstantsReport {
    long n0 = 0;
    double tau0 = 0.0;
    long N_theta = 0;
    double tau = 0.0;
    double beta_star = 0.0;
    double r_star = 0.0;
    double C_star = 0.0;
    double gamma = 0.0;  // beta_star = gamma / (1 + gamma)
    SpectralInputs inputs;
};

enum class Regime { MH, Perpetuity };

struct LogHolderReport {
    Regime regime = Regime::Perpetuity;
    double theta = 1.0;
    double kappa_star = 0.0;
};

// Ceiling with values within 1e-9 of an integer snapped first, so 10.67
// stays 11 and 96.000000001 stays 96.
long ceil_snap(double x);

// The GL(2) package: n0, tau0, N_theta, tau, beta*, r*, C*.
ConstantsReport holder_package_gl2(const SpectralInputs& in);

// Same closed forms with gap = lambda_1 - lambda_2.
ConstantsReport holder_package_gld(const SpectralInputs& in);

LogHolderReport log_holder_package(double theta, Regime regime);

struct OptimalityCurve {
    std::vector<std::pair<double, double>> points;  // (alpha, beta(alpha))
    double gamma = 0.0;
    double alpha_star = 0.0;  // 1 / (1 + gamma)
    double beta_max = 0.0;    // gamma / (1 + gamma) = beta_star
};

// beta(alpha) = min(1 - alpha, alpha * gamma) on the grid; alpha_star is
// always appended so the grid maximum equals the closed form exactly.
OptimalityCurve method_optimality_curve(const SpectralInputs& in, std::span<const double> alphas);

struct SubtopReport {
    int d = 0;
    int k = 0;
    double E_k = 0.0;  // C(d,k) ecc^k
    double beta_k = 0.0;
    std::optional<double> tau_k;  // caller-supplied; no closed form exists
    std::optional<double> C_k;    // present only when tau_k is
};

SubtopReport subtop_package(double ecc, double gap_k, double theta, int d, int k,
                            std::optional<double> tau_k = std::nullopt);

// Markov-chain package: fiber contraction parameters n0, tau0(A) = e^{-n0
// theta gap / 2}, combined with the base gap rho_P.
ConstantsReport markov_package(double rho_P, const SpectralInputs& fiber);

struct ConcentrationConstants {
    double C_HA = 0.0;         // 2 (log ecc)^2
    double sigma2_bound = 0.0; // (log ecc)^2 (1 + 2 tau / (1 - tau))
};

ConcentrationConstants concentration_constants(double ecc, double tau, double theta);

}  // namespace lyaplab::constants
