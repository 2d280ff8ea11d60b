#include "lyaplab/constants.hpp"

#include <algorithm>
#include <cmath>

#include "lyaplab/gl.hpp"

namespace lyaplab::constants {

namespace {

constexpr double kLog2 = 0.69314718055994530941723212145818;

void check_theta(double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw BadTheta("theta must lie in (0, 1]");
}

}  // namespace

long ceil_snap(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9) return static_cast<long>(r);
    return static_cast<long>(std::ceil(x));
}

ConstantsReport holder_package_gl2(const SpectralInputs& in) {
    check_theta(in.theta);
    if (!(in.gap > 0.0)) throw DegenerateGap("gap must be positive; use the log-Holder package otherwise");
    if (!(in.ecc > 1.0)) throw BadEccentricity("eccentricity must exceed 1");
    if (!(in.diam_theta >= 0.0)) throw InputError("diam_theta must be nonnegative");

    ConstantsReport r;
    r.inputs = in;
    r.n0 = ceil_snap(2.0 * kLog2 / (in.theta * in.gap));
    r.tau0 = 1.0 - kLog2 / (4.0 * std::log(2.0 * in.ecc));
    const double C1 = in.ecc;
    const double C2 = in.ecc * in.ecc;
    const double L = 2.0 * in.ecc;
    const double E2 = in.ecc * in.ecc;
    const long blocks = ceil_snap(3.0 * std::log(C2) / std::log(1.0 / r.tau0));
    r.N_theta = r.n0 * blocks;
    r.tau = std::pow(r.tau0, static_cast<double>(r.N_theta) / (3.0 * static_cast<double>(r.n0)));
    const double neg_log_tau = -std::log(r.tau);
    const double ratio = static_cast<double>(r.N_theta) / static_cast<double>(r.n0);
    r.beta_star = neg_log_tau / (neg_log_tau + ratio * std::log(C2));
    r.gamma = neg_log_tau / (ratio * std::log(C2));
    r.r_star = std::min(1.0 / (2.0 * (in.ecc + 1.0) * (in.ecc + 1.0)), (1.0 - r.tau) / (4.0 * in.ecc));
    r.C_star = L * std::pow(in.diam_theta, 1.0 - in.theta) +
               (L + E2) * 2.0 * std::pow(C1, in.theta) / (1.0 - r.tau);
    return r;
}

ConstantsReport holder_package_gld(const SpectralInputs& in) {
    // identical closed forms; the gap is read as lambda_1 - lambda_2
    return holder_package_gl2(in);
}

LogHolderReport log_holder_package(double theta, Regime regime) {
    check_theta(theta);
    LogHolderReport r;
    r.regime = regime;
    r.theta = theta;
    r.kappa_star =
        regime == Regime::MH ? theta / (2.0 + theta) : theta / (8.0 * (1.0 + theta));
    return r;
}

OptimalityCurve method_optimality_curve(const SpectralInputs& in, std::span<const double> alphas) {
    const ConstantsReport pkg = holder_package_gl2(in);
    OptimalityCurve curve;
    curve.gamma = pkg.gamma;
    curve.alpha_star = 1.0 / (1.0 + pkg.gamma);
    curve.beta_max = pkg.gamma / (1.0 + pkg.gamma);

    std::vector<double> grid(alphas.begin(), alphas.end());
    grid.push_back(curve.alpha_star);
    std::sort(grid.begin(), grid.end());
    for (double a : grid) {
        if (!(a > 0.0 && a < 1.0)) throw BadGrid("alpha grid must lie in (0, 1)");
        curve.points.emplace_back(a, std::min(1.0 - a, a * pkg.gamma));
    }
    return curve;
}

SubtopReport subtop_package(double ecc, double gap_k, double theta, int d, int k,
                            std::optional<double> tau_k) {
    check_theta(theta);
    if (!(ecc >= 1.0)) throw BadEccentricity("eccentricity must be >= 1");
    if (d < 2 || k < 1 || k > d - 1) throw BadOrder("subtop_package: need 1 <= k <= d-1");
    if (!(gap_k > 0.0)) throw DegenerateGap("subtop_package: gap must be positive");
    SubtopReport r;
    r.d = d;
    r.k = k;
    const double choose = static_cast<double>(gl::binom(d, k));
    r.E_k = choose * std::pow(ecc, k);
    r.beta_k = theta * gap_k / (theta * gap_k + 4.0 * std::log(r.E_k + 1.0));
    if (tau_k) {
        if (!(*tau_k > 0.0 && *tau_k < 1.0)) throw BadTau("tau_k must lie in (0, 1)");
        r.tau_k = tau_k;
        r.C_k = 4.0 * choose * std::pow(ecc, 2 * k) / (1.0 - *tau_k);
    }
    return r;
}

ConstantsReport markov_package(double rho_P, const SpectralInputs& fiber) {
    check_theta(fiber.theta);
    if (!(rho_P >= 0.0 && rho_P < 1.0)) throw BadRho("rho_P must lie in [0, 1)");
    if (!(fiber.gap > 0.0)) throw DegenerateGap("markov_package: fiber gap must be positive");
    if (!(fiber.ecc > 1.0)) throw BadEccentricity("eccentricity must exceed 1");

    ConstantsReport r;
    r.inputs = fiber;
    r.n0 = ceil_snap(2.0 * kLog2 / (fiber.theta * fiber.gap));
    // fiber contraction tau0(A) = e^{-n0 theta gap / 2} <= 1/2
    r.tau0 = std::exp(-static_cast<double>(r.n0) * fiber.theta * fiber.gap / 2.0);
    const double C1 = fiber.ecc;
    const double C2 = fiber.ecc * fiber.ecc;
    const double L = 2.0 * fiber.ecc;
    const double E2 = fiber.ecc * fiber.ecc;

    const long fiber_blocks = ceil_snap(3.0 * std::log(C2) / std::log(1.0 / r.tau0));
    const long N_theta_A = r.n0 * fiber_blocks;
    const double slow = std::max(r.tau0, rho_P);
    const long combined_blocks = ceil_snap(3.0 * std::log(C2) / std::log(1.0 / slow));
    r.N_theta = N_theta_A * combined_blocks;
    r.tau = std::pow(slow, static_cast<double>(r.N_theta) / (3.0 * static_cast<double>(N_theta_A)));

    const double neg_log_tau = -std::log(r.tau);
    const double ratio = static_cast<double>(r.N_theta) / static_cast<double>(r.n0);
    r.beta_star = neg_log_tau / (neg_log_tau + ratio * std::log(C2));
    r.gamma = neg_log_tau / (ratio * std::log(C2));
    r.r_star = std::min(1.0 / (2.0 * (fiber.ecc + 1.0) * (fiber.ecc + 1.0)),
                        (1.0 - r.tau) / (4.0 * fiber.ecc));
    r.C_star = L * std::pow(fiber.diam_theta, 1.0 - fiber.theta) +
               (L + E2) * 2.0 * std::pow(C1, fiber.theta) / (1.0 - r.tau);
    return r;
}

ConcentrationConstants concentration_constants(double ecc, double tau, double theta) {
    check_theta(theta);
    if (!(ecc > 1.0)) throw BadEccentricity("eccentricity must exceed 1");
    if (!(tau > 0.0 && tau < 1.0)) throw BadTau("tau must lie in (0, 1)");
    ConcentrationConstants c;
    const double le = std::log(ecc);
    c.C_HA = 2.0 * le * le;
    c.sigma2_bound = le * le * (1.0 + 2.0 * tau / (1.0 - tau));
    return c;
}

}  // namespace lyaplab::constants
