// Times the OpenMP trajectory/realization kernels against the serial
// reference implementations on a fixed workload and checks they agree bit
// for bit.

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lyaplab/cocycle.hpp"
#include "lyaplab/schrodinger.hpp"

using namespace lyaplab;

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

measures::FiniteMatrixMeasure two_matrix_family(double a, double psi, double p) {
    const auto A0 = gl::SquareMatrix::diagonal({a, 1.0 / a});
    const auto R = gl::SquareMatrix::rotation2(psi);
    const auto A1 =
        gl::SquareMatrix(Eigen::MatrixXd(R.entries() * A0.entries() * R.inverse_entries()));
    return measures::FiniteMatrixMeasure({A0, A1}, {p, 1.0 - p});
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("omp max threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif
    const auto nu = two_matrix_family(2.0, 3.14159265358979323846 / 3.0, 0.5);

    {
        mc::CocycleRunConfig cfg;
        cfg.steps = 50000;
        cfg.trajectories = 64;
        cfg.burn_in = 1000;
        cfg.seed = 7;

        const auto t0 = std::chrono::steady_clock::now();
        const auto serial = mc::estimate_top_exponent(nu, cfg, mc::Execution::Serial);
        const auto t1 = std::chrono::steady_clock::now();
        const auto parallel = mc::estimate_top_exponent(nu, cfg, mc::Execution::Parallel);
        const auto t2 = std::chrono::steady_clock::now();

        const bool same = std::memcmp(&serial.value, &parallel.value, sizeof(double)) == 0 &&
                          std::memcmp(&serial.std_error, &parallel.std_error, sizeof(double)) == 0;
        const double ts = seconds(t0, t1), tp = seconds(t1, t2);
        std::printf("cocycle   serial %.3fs  openmp %.3fs  speedup %.2fx  bit-identical %s\n", ts,
                    tp, ts / tp, same ? "yes" : "NO");
        if (!same) return 1;
    }

    {
        const auto dist = schrodinger::DisorderDistribution::uniform(-1.0, 1.0);
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(-3.0 + 6.0 * i / 40.0);

        const auto t0 = std::chrono::steady_clock::now();
        const auto serial = schrodinger::ids_curve(dist, grid, 1000, 16, 11, mc::Execution::Serial);
        const auto t1 = std::chrono::steady_clock::now();
        const auto parallel =
            schrodinger::ids_curve(dist, grid, 1000, 16, 11, mc::Execution::Parallel);
        const auto t2 = std::chrono::steady_clock::now();

        bool same = serial.values.size() == parallel.values.size();
        if (same)
            same = std::memcmp(serial.values.data(), parallel.values.data(),
                               serial.values.size() * sizeof(double)) == 0;
        const double ts = seconds(t0, t1), tp = seconds(t1, t2);
        std::printf("ids       serial %.3fs  openmp %.3fs  speedup %.2fx  bit-identical %s\n", ts,
                    tp, ts / tp, same ? "yes" : "NO");
        if (!same) return 1;
    }
    return 0;
}
