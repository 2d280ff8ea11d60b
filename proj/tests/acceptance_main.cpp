// Acceptance suite: every end-to-end requirement gets one [PASS]/[FAIL] line
// with its measured runtime. Exits with the number of failed criteria.
//
// argv[1] must be the path to the lyaplab CLI binary (wired up by ctest).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lyaplab/cocycle.hpp"
#include "lyaplab/constants.hpp"
#include "lyaplab/io.hpp"
#include "lyaplab/ldp.hpp"
#include "lyaplab/schrodinger.hpp"
#include "oracles.hpp"

using namespace lyaplab;
using gl::ProjectivePoint;
using gl::SquareMatrix;
using measures::FiniteMatrixMeasure;

namespace {

const double kPi = 3.14159265358979323846264338327950;
std::string g_cli;
std::filesystem::path g_dir;
int g_failures = 0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

void run_criterion(const std::string& id, const std::string& name, double limit_s,
                   const std::function<Outcome()>& body, bool expected_fail = false) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= limit_s;
    const bool pass = out.pass && in_time;
    std::printf("[%s] %s %s (%.3fs of %.0fs budget)%s%s%s\n", pass ? "PASS" : "FAIL", id.c_str(),
                name.c_str(), secs, limit_s, out.detail.empty() ? "" : " -- ",
                out.detail.c_str(),
                (!pass && expected_fail)
                    ? "  [expected: reference value not reproducible; see decisions notes]"
                    : "");
    if (!pass) ++g_failures;
}

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::vector<std::string>& args) {
    static int counter = 0;
    const std::string out_path = (g_dir / ("cli_out_" + std::to_string(counter++) + ".txt")).string();
    std::string cmd = shell_quote(g_cli);
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " > " + shell_quote(out_path) + " 2>&1";
    const int rc = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

double grab_value(const std::string& text, const std::string& key) {
    // matches both "key 1.25" report lines and "\"quantity\":\"key\",...\"value\":1.25" records
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + " ", 0) == 0) return std::stod(line.substr(key.size() + 1));
        const std::string needle = "\"quantity\":\"" + key + "\"";
        if (line.find(needle) != std::string::npos) {
            const auto pos = line.find("\"value\":");
            if (pos != std::string::npos) return std::stod(line.substr(pos + 8));
        }
    }
    throw std::runtime_error("missing key in CLI output: " + key);
}

FiniteMatrixMeasure two_matrix_family(double a, double psi, double p) {
    const auto A0 = SquareMatrix::diagonal({a, 1.0 / a});
    const auto R = SquareMatrix::rotation2(psi);
    const auto A1 = SquareMatrix(Eigen::MatrixXd(R.entries() * A0.entries() * R.inverse_entries()));
    return FiniteMatrixMeasure({A0, A1}, {p, 1.0 - p});
}

FiniteMatrixMeasure random_gl2_measure(CounterRng& rng, bool sl2) {
    const std::size_t natoms = 2 + rng.next_u64() % 3;
    std::vector<SquareMatrix> atoms;
    std::vector<double> w;
    double sum = 0.0;
    for (std::size_t i = 0; i < natoms; ++i) {
        if (sl2) {
            atoms.emplace_back(Eigen::MatrixXd(oracles::random_sl2(rng)));
        } else {
            const double s = std::exp(0.5 * rng.next_signed_unit());
            atoms.emplace_back(Eigen::MatrixXd(s * oracles::random_sl2(rng)));
        }
        const double wi = 0.2 + rng.next_unit();
        w.push_back(wi);
        sum += wi;
    }
    for (auto& x : w) x /= sum;
    return FiniteMatrixMeasure(std::move(atoms), std::move(w));
}

// ---------------------------------------------------------------------------

Outcome section9_constants() {
    constants::SpectralInputs in;
    in.ecc = 4.0;
    in.gap = 0.2599;
    in.theta = 0.5;
    in.diam_theta = 1.0;
    constants::holder_package_gl2(in);  // warm
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = constants::holder_package_gl2(in);
    const double lib_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto cli = run_cli({"constants", "--ecc", "4", "--gap", "0.2599", "--theta", "0.5",
                              "--normalized-diam"});
    Outcome o;
    const bool values_ok = r.n0 == 11 && r.tau0 >= 0.9166 && r.tau0 <= 0.9168 &&
                           r.N_theta == 1056 && r.tau >= 0.0615 && r.tau <= 0.0621 &&
                           r.beta_star >= 0.0103 && r.beta_star <= 0.0104 && r.C_star >= 109.0 &&
                           r.C_star <= 112.0;
    const bool cli_ok = cli.exit_code == 0 && grab_value(cli.out, "n0") == 11.0 &&
                        grab_value(cli.out, "N_theta") == 1056.0;
    o.pass = values_ok && cli_ok && lib_s < 1e-3;
    std::ostringstream os;
    os << "n0=" << r.n0 << " tau0=" << r.tau0 << " N_theta=" << r.N_theta << " tau=" << r.tau
       << " beta*=" << r.beta_star << " C*=" << r.C_star << " eval=" << lib_s * 1e6 << "us";
    o.detail = os.str();
    return o;
}

Outcome section9_gap() {
    const auto nu = two_matrix_family(2.0, kPi / 3.0, 0.5);
    const std::string mpath = (g_dir / "section9.json").string();
    io::write_measure_file(mpath, nu);
    const auto cli = run_cli({"--threads", "1", "estimate", "--measure", mpath, "--n", "100000",
                              "--T", "64", "--seed", "7"});
    Outcome o;
    if (cli.exit_code != 0) {
        o.detail = "estimate exited " + std::to_string(cli.exit_code);
        return o;
    }
    const double gap = grab_value(cli.out, "gap");
    o.pass = gap >= 0.25 && gap <= 0.27;
    std::ostringstream os;
    os << "gap=" << gap << " target=[0.25,0.27] (reference 0.2599)";
    o.detail = os.str();
    return o;
}

Outcome method_optimality() {
    constants::SpectralInputs in;
    in.ecc = 4.0;
    in.gap = 0.2599;
    in.theta = 0.5;
    in.diam_theta = 1.0;
    std::vector<double> alphas;
    for (int i = 1; i < 400; ++i) alphas.push_back(i / 400.0);
    const auto curve = constants::method_optimality_curve(in, alphas);
    const auto pkg = constants::holder_package_gl2(in);
    double grid_max = 0.0;
    for (const auto& [a, b] : curve.points) grid_max = std::max(grid_max, b);
    Outcome o;
    o.pass = std::abs(grid_max - pkg.beta_star) <= 1e-12;
    std::ostringstream os;
    os << "max beta(alpha)=" << grid_max << " beta*=" << pkg.beta_star
       << " |diff|=" << std::abs(grid_max - pkg.beta_star);
    o.detail = os.str();
    return o;
}

Outcome kappa_table() {
    using constants::Regime;
    const double mh1 = constants::log_holder_package(1.0, Regime::MH).kappa_star;
    const double per1 = constants::log_holder_package(1.0, Regime::Perpetuity).kappa_star;
    const double mh_half = constants::log_holder_package(0.5, Regime::MH).kappa_star;
    Outcome o;
    o.pass = mh1 == 1.0 / 3.0 && per1 == 1.0 / 16.0 && mh_half == 0.2;
    std::ostringstream os;
    os << "kappa(1,MH)=" << mh1 << " kappa(1,perp)=" << per1 << " kappa(1/2,MH)=" << mh_half;
    o.detail = os.str();
    return o;
}

Outcome determinant_sum() {
    CounterRng rng(101);
    int ok = 0;
    const int total = 25;
    for (int t = 0; t < total; ++t) {
        const auto nu = random_gl2_measure(rng, t % 2 == 0);
        mc::CocycleRunConfig cfg;
        cfg.steps = 20000;
        cfg.trajectories = 32;
        cfg.burn_in = 1000;
        cfg.seed = 1000 + static_cast<std::uint64_t>(t);
        const auto top = mc::estimate_top_exponent(nu, cfg);
        const auto bot = mc::estimate_bottom_exponent(nu, cfg);
        const double se =
            std::sqrt(top.std_error * top.std_error + bot.std_error * bot.std_error);
        if (std::abs(top.value + bot.value - nu.mean_log_abs_det()) <= 3.0 * se + 1e-9) ++ok;
    }
    Outcome o;
    o.pass = ok >= 24;
    o.detail = std::to_string(ok) + "/25 within 3 combined std errors";
    return o;
}

Outcome isometry_null() {
    FiniteMatrixMeasure rots({SquareMatrix::rotation2(0.7), SquareMatrix::rotation2(2.1),
                              SquareMatrix::rotation2(-1.3)},
                             {0.3, 0.3, 0.4});
    mc::CocycleRunConfig cfg;
    cfg.steps = 10000;
    cfg.trajectories = 32;
    cfg.burn_in = 100;
    cfg.seed = 5;
    const auto top = mc::estimate_top_exponent(rots, cfg);
    const auto bot = mc::estimate_bottom_exponent(rots, cfg);
    // 1e-15 floor: rounding of log||Rv|| biases the estimate at the 1e-18
    // scale, far below any statistical error of interest
    const bool iso_ok = std::abs(top.value) < 3.0 * top.std_error + 1e-15 &&
                        std::abs(bot.value) < 3.0 * bot.std_error + 1e-15;

    FiniteMatrixMeasure diag({SquareMatrix::diagonal({2.0, 0.5})}, {1.0});
    mc::CocycleRunConfig dcfg;
    dcfg.steps = 20000;
    dcfg.trajectories = 8;
    dcfg.burn_in = 1000;
    dcfg.seed = 7;
    const auto l2 = mc::estimate_top_exponent(diag, dcfg);
    const bool det_ok = std::abs(l2.value - std::log(2.0)) < 1e-10;

    Outcome o;
    o.pass = iso_ok && det_ok;
    std::ostringstream os;
    os << "|rot lambda|=" << std::abs(top.value) << " (3se+floor="
       << 3.0 * top.std_error + 1e-15 << "), |diag-log2|=" << std::abs(l2.value - std::log(2.0));
    o.detail = os.str();
    return o;
}

Outcome kantorovich() {
    CounterRng rng(211);
    Outcome o;
    for (int t = 0; t < 100; ++t) {
        const std::size_t atoms = 2 + rng.next_u64() % 3;  // up to 4
        std::vector<SquareMatrix> a1, a2;
        std::vector<double> w1, w2;
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < atoms; ++i) {
            a1.emplace_back(oracles::random_matrix(rng, 2));
            Eigen::MatrixXd nudged = a1.back().entries();
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) nudged(r, c) += 0.15 * rng.next_signed_unit();
            a2.emplace_back(nudged);
            const double x = 0.2 + rng.next_unit(), y = 0.2 + rng.next_unit();
            w1.push_back(x);
            w2.push_back(y);
            s1 += x;
            s2 += y;
        }
        for (auto& x : w1) x /= s1;
        for (auto& x : w2) x /= s2;
        FiniteMatrixMeasure mu(a1, w1), nuu(a2, w2);
        if (mu.size() != atoms || nuu.size() != atoms) continue;
        const double theta = 0.4 + 0.6 * rng.next_unit();

        const auto coupling = measures::optimal_coupling(mu, nuu, theta);
        Eigen::MatrixXd cost(atoms, atoms);
        for (std::size_t i = 0; i < atoms; ++i)
            for (std::size_t j = 0; j < atoms; ++j)
                cost(i, j) = std::pow(gl::group_delta(mu.atom(i), nuu.atom(j)), theta);

        // sampled dual potentials never exceed the primal
        for (int s = 0; s < 32; ++s) {
            std::vector<double> psi(atoms);
            for (auto& x : psi) x = rng.next_signed_unit();
            double value = 0.0;
            std::vector<double> phi(atoms);
            for (std::size_t j = 0; j < atoms; ++j) {
                double m = 1e300;
                for (std::size_t i = 0; i < atoms; ++i) m = std::min(m, cost(i, j) - psi[i]);
                phi[j] = m;
            }
            for (std::size_t i = 0; i < atoms; ++i) value += psi[i] * mu.weight(i);
            for (std::size_t j = 0; j < atoms; ++j) value += phi[j] * nuu.weight(j);
            if (value > coupling.cost + 1e-9) {
                o.detail = "dual value exceeded primal at instance " + std::to_string(t);
                return o;
            }
        }
        // primal below the paired closed-form bound
        if (coupling.cost > measures::finite_support_upper_bound(mu, nuu, theta) + 1e-9) {
            o.detail = "upper bound violated at instance " + std::to_string(t);
            return o;
        }
        // exactness against the brute-forced vertex optimum
        const double vertex = oracles::transport_vertex_minimum(mu.weights(), nuu.weights(), cost);
        if (std::abs(coupling.cost - vertex) > 1e-6) {
            std::ostringstream os;
            os << "lp=" << coupling.cost << " vertex=" << vertex << " at instance " << t;
            o.detail = os.str();
            return o;
        }
    }
    o.pass = true;
    o.detail = "100 instances: duals below, bound above, vertex optimum matched";
    return o;
}

Outcome ids_oracle() {
    const auto free_op = schrodinger::DisorderDistribution::finite_atoms({0.0}, {1.0});
    std::vector<double> grid;
    for (int i = 0; i < 41; ++i) grid.push_back(-2.5 + 5.0 * i / 40.0);
    const long L = 2000;
    const auto curve = schrodinger::ids_curve(free_op, grid, L, 1, 3);
    const auto eigs = oracles::free_box_eigenvalues(2 * L + 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max(worst, std::abs(curve.values[i] - oracles::free_box_ids(eigs, grid[i])));
    Outcome o;
    o.pass = worst < 2e-3;
    std::ostringstream os;
    os << "max |N - oracle| = " << worst;
    o.detail = os.str();
    return o;
}

Outcome free_lyapunov() {
    const auto free_op = schrodinger::DisorderDistribution::finite_atoms({0.0}, {1.0});
    mc::CocycleRunConfig cfg;
    cfg.steps = 5000;
    cfg.trajectories = 4;
    cfg.burn_in = 1000;
    cfg.seed = 11;
    const auto pts = schrodinger::lyapunov_energy_curve(free_op, std::vector<double>{3.0}, cfg, 0);
    const double expected = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    Outcome o;
    o.pass = std::abs(pts[0].gamma - expected) < 1e-6;
    std::ostringstream os;
    os << "gamma=" << pts[0].gamma << " expected=" << expected;
    o.detail = os.str();
    return o;
}

Outcome thouless() {
    const auto free_op = schrodinger::DisorderDistribution::finite_atoms({0.0}, {1.0});
    std::vector<double> grid;
    for (int i = 0; i < 201; ++i) grid.push_back(-2.5 + 5.0 * i / 200.0);
    const auto curve = schrodinger::ids_curve(free_op, grid, 2000, 1, 13);
    mc::CocycleRunConfig cfg;
    cfg.steps = 5000;
    cfg.trajectories = 4;
    cfg.burn_in = 1000;
    cfg.seed = 17;
    Outcome o;
    std::ostringstream os;
    o.pass = true;
    for (double E : {2.5, 3.0}) {
        const auto th = schrodinger::thouless_check(free_op, E, cfg, curve, 0);
        os << "E=" << E << " residual=" << th.residual << "  ";
        if (!(th.residual < 0.02)) o.pass = false;
    }
    o.detail = os.str();
    return o;
}

Outcome concentration() {
    const auto nu = two_matrix_family(2.0, kPi / 3.0, 0.5);
    constants::SpectralInputs in;
    in.ecc = 4.0;
    in.gap = 0.2599;
    in.theta = 0.5;
    in.diam_theta = 1.0;
    const auto pkg = constants::holder_package_gl2(in);
    const auto cc = constants::concentration_constants(in.ecc, pkg.tau, in.theta);

    const auto check = ldp::concentration_check(nu, ProjectivePoint::axis(2, 0), 0.05, 10000,
                                                10000, 23, cc.sigma2_bound);
    const double bound_1e5 = 2.0 * std::exp(-1e5 * 0.0025 / (4.0 * cc.sigma2_bound));
    // "about 2 e^{-30.5}": same magnitude on the log scale (+-2)
    const bool bound_ok = std::abs(std::log(bound_1e5 / 2.0) + 30.5) <= 2.0;

    // tail at n = 1e5 directly
    const auto lam = mc::finite_time_average(nu, ProjectivePoint::axis(2, 0), 100000, 2000, 29);
    mc::CocycleRunConfig ref_cfg;
    ref_cfg.steps = 100000;
    ref_cfg.trajectories = 32;
    ref_cfg.burn_in = 1000;
    ref_cfg.seed = 31;
    const auto ref = mc::estimate_top_exponent(nu, ref_cfg);
    long exceed = 0;
    for (double x : lam)
        if (std::abs(x - ref.value) > 0.05) ++exceed;

    Outcome o;
    o.pass = check.pass && bound_ok && exceed == 0;
    std::ostringstream os;
    os << "tail(n=1e4)=" << check.empirical_tail << " bound=" << check.bound
       << " bound(n=1e5)=" << bound_1e5 << " tail(n=1e5)=" << exceed << "/2000";
    o.detail = os.str();
    return o;
}

Outcome pressure_slope() {
    CounterRng rng(307);
    Outcome o;
    o.pass = true;
    std::ostringstream os;
    for (int t = 0; t < 5; ++t) {
        const auto nu = random_gl2_measure(rng, t % 2 == 0);
        const long n = 200, trials = 20000;
        std::vector<double> grid;
        const double smax = 5.0 / std::max(std::log(nu.eccentricity()), 0.5);
        for (int i = 0; i < 21; ++i) grid.push_back(-smax + 2.0 * smax * i / 20.0);
        const auto curve = ldp::estimate_pressure(nu, grid, n, trials,
                                                  2000 + static_cast<std::uint64_t>(t),
                                                  ProjectivePoint::axis(2, 0), smax);
        std::size_t i0 = 0;
        for (std::size_t i = 0; i < curve.s.size(); ++i)
            if (std::abs(curve.s[i]) < std::abs(curve.s[i0])) i0 = i;
        const double slope =
            (curve.raw[i0 + 1] - curve.raw[i0 - 1]) / (curve.s[i0 + 1] - curve.s[i0 - 1]);
        const double slope_se = std::sqrt(curve.std_error[i0 + 1] * curve.std_error[i0 + 1] +
                                          curve.std_error[i0 - 1] * curve.std_error[i0 - 1]) /
                                (curve.s[i0 + 1] - curve.s[i0 - 1]);
        mc::CocycleRunConfig cfg;
        cfg.steps = 20000;
        cfg.trajectories = 32;
        cfg.burn_in = 1000;
        cfg.seed = 3000 + static_cast<std::uint64_t>(t);
        const auto top = mc::estimate_top_exponent(nu, cfg);
        const double diff = std::abs(slope - top.value);
        const double tol = 3.0 * (slope_se + top.std_error) + 0.01;  // + curvature over h
        os << "m" << t << ": |slope-lambda|=" << diff << " tol=" << tol << "  ";
        if (diff > tol) o.pass = false;
    }
    o.detail = os.str();
    return o;
}

Outcome markov_reduction() {
    const auto nu = two_matrix_family(2.0, kPi / 3.0, 0.5);
    Eigen::MatrixXd rank1(2, 2);
    rank1 << 0.5, 0.5, 0.5, 0.5;
    mc::MarkovCocycle chain(rank1, {nu.atom(0), nu.atom(1)});
    mc::CocycleRunConfig cfg;
    cfg.steps = 20000;
    cfg.trajectories = 32;
    cfg.burn_in = 1000;
    cfg.seed = 41;
    const auto [mk_top, mk_bot] = mc::estimate_markov_exponents(chain, cfg);
    const auto iid = mc::estimate_top_exponent(nu, cfg.with_seed(43));
    const double se =
        std::sqrt(mk_top.std_error * mk_top.std_error + iid.std_error * iid.std_error);
    bool ok = std::abs(mk_top.value - iid.value) <= 3.0 * se + 1e-4;

    std::ostringstream os;
    os << "|markov-iid|=" << std::abs(mk_top.value - iid.value) << " 3se=" << 3.0 * se << "; rho:";
    for (double q : {0.1, 0.25, 0.5}) {
        Eigen::MatrixXd P(2, 2);
        P << 1.0 - q, q, q, 1.0 - q;
        const double rho = mc::chain_spectral_gap(P);
        os << " " << rho;
        if (std::abs(rho - std::abs(1.0 - 2.0 * q)) > 1e-12) ok = false;
    }
    Outcome o;
    o.pass = ok;
    o.detail = os.str();
    return o;
}

Outcome exterior_suite() {
    CounterRng rng(401);
    Outcome o;
    for (int t = 0; t < 200; ++t) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 5);
        const Eigen::MatrixXd a = oracles::random_matrix(rng, d);
        const Eigen::MatrixXd b = oracles::random_matrix(rng, d);
        const SquareMatrix ga(a), gb(b);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
        for (int k = 1; k <= d; ++k) {
            const auto la = gl::exterior_power(ga, k);
            double prod = 1.0;
            for (int i = 0; i < k; ++i) prod *= svd.singularValues()[i];
            if (std::abs(gl::operator_norm(la) - prod) > 1e-9 * prod) {
                o.detail = "norm identity failed at t=" + std::to_string(t);
                return o;
            }
            const auto lb = gl::exterior_power(gb, k);
            const auto lab = gl::exterior_power(SquareMatrix(Eigen::MatrixXd(a * b)), k);
            const double rel =
                gl::operator_norm(Eigen::MatrixXd(lab.entries() - la.entries() * lb.entries())) /
                gl::operator_norm(lab);
            if (rel > 1e-9) {
                o.detail = "functoriality failed at t=" + std::to_string(t);
                return o;
            }
        }
    }
    FiniteMatrixMeasure d321({SquareMatrix::diagonal({3.0, 2.0, 1.0})}, {1.0});
    mc::CocycleRunConfig cfg;
    cfg.steps = 4000;
    cfg.trajectories = 4;
    cfg.burn_in = 1000;
    cfg.seed = 47;
    const double expected[3] = {std::log(3.0), std::log(6.0), std::log(6.0)};
    for (int k = 1; k <= 3; ++k) {
        const auto est = mc::estimate_partial_sum(d321, k, cfg);
        if (std::abs(est.value - expected[k - 1]) > 1e-10) {
            o.detail = "partial sum k=" + std::to_string(k) + " off by " +
                       std::to_string(std::abs(est.value - expected[k - 1]));
            return o;
        }
    }
    o.pass = true;
    o.detail = "200 matrices, all k: norm + functoriality within 1e-9; partial sums exact";
    return o;
}

Outcome determinism() {
    // identical manifests (same flags, same paths); only the thread count
    // changes between the two runs
    const std::string dir = (g_dir / "det").string();
    const auto r1 = run_cli({"--threads", "1", "example9", "--seed", "42", "--out-dir", dir});
    const std::string f1 = io::read_text_file(dir + "/example9_report.csv");
    const auto r2 = run_cli({"--threads", "8", "example9", "--seed", "42", "--out-dir", dir});
    const std::string f2 = io::read_text_file(dir + "/example9_report.csv");
    Outcome o;
    if (r1.exit_code != 0 || r2.exit_code != 0) {
        o.detail = "example9 exited " + std::to_string(r1.exit_code) + "/" +
                   std::to_string(r2.exit_code);
        return o;
    }
    o.pass = !f1.empty() && f1 == f2;
    o.detail = o.pass ? "1-thread and 8-thread outputs byte-identical"
                      : "outputs differ between thread counts";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-lyaplab-cli>\n", argv[0]);
        return 64;
    }
    g_cli = argv[1];
    g_dir = std::filesystem::temp_directory_path() / "lyaplab_acceptance";
    std::filesystem::create_directories(g_dir);

    run_criterion("C01", "worked-example constants reproduction", 10, section9_constants);
    run_criterion("C02", "worked-example Lyapunov gap window", 30, section9_gap, true);
    run_criterion("C03", "method-optimality consistency", 10, method_optimality);
    run_criterion("C04", "log-Holder exponent table", 10, kappa_table);
    run_criterion("C05", "determinant-sum identity over random measures", 120, determinant_sum);
    run_criterion("C06", "isometry null and deterministic exponent", 30, isometry_null);
    run_criterion("C07", "Kantorovich duality at desk scale", 60, kantorovich);
    run_criterion("C08", "free-operator IDS against the box oracle", 10, ids_oracle);
    run_criterion("C09", "free-operator Lyapunov exponent at E=3", 1, free_lyapunov);
    run_criterion("C10", "Thouless residual for the free operator", 30, thouless);
    run_criterion("C11", "concentration harness", 300, concentration);
    run_criterion("C12", "pressure slope equals the top exponent", 180, pressure_slope);
    run_criterion("C13", "Markov rank-one reduction and chain gap", 60, markov_reduction);
    run_criterion("C14", "exterior-power suite", 60, exterior_suite);
    run_criterion("C15", "byte-identical outputs across thread counts", 240, determinism);

    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
