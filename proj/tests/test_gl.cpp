#include <doctest.h>

#include <cmath>

#include "lyaplab/gl.hpp"
#include "lyaplab/rng.hpp"
#include "oracles.hpp"

using namespace lyaplab;
using gl::ProjectivePoint;
using gl::SquareMatrix;

namespace {

SquareMatrix mat2(double a, double b, double c, double d) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;
    return SquareMatrix(std::move(m));
}

}  // namespace

TEST_CASE("operator norm") {
    CHECK(gl::operator_norm(SquareMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gl::operator_norm(SquareMatrix::diagonal({2.0, 0.5})) == doctest::Approx(2.0).epsilon(1e-14));
    // shear [[1,1],[0,1]]: top singular value is the golden ratio
    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    CHECK(gl::operator_norm(mat2(1, 1, 0, 1)) == doctest::Approx(golden).epsilon(1e-12));

    CounterRng rng(11);
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 5);
        const Eigen::MatrixXd m = oracles::random_matrix(rng, d);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        CHECK(gl::operator_norm(m) ==
              doctest::Approx(svd.singularValues().maxCoeff()).epsilon(1e-10));
    }
}

TEST_CASE("eccentricity") {
    CHECK(gl::eccentricity(SquareMatrix::identity(2)) == doctest::Approx(1.0));
    CHECK(gl::eccentricity(SquareMatrix::diagonal({2.0, 0.5})) == doctest::Approx(4.0));
    CHECK(gl::eccentricity(SquareMatrix::rotation2(3.14159 / 3.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(mat2(1, 0, 0, 0), SingularMatrix);
    CHECK_THROWS_AS(mat2(1, 1, 1, 1), SingularMatrix);
}

TEST_CASE("group delta") {
    const auto g = SquareMatrix::diagonal({2.0, 0.5});
    CHECK(gl::group_delta(g, g) == 0.0);
    CHECK(gl::group_delta(SquareMatrix::identity(2),
                          SquareMatrix::diagonal({2.0, 2.0})) == doctest::Approx(1.5));
    // inversion symmetry
    const auto h = SquareMatrix::rotation2(3.14159265358979323846 / 3.0);
    CHECK(gl::group_delta(g, h) ==
          doctest::Approx(gl::group_delta(g.inverse(), h.inverse())).epsilon(1e-12));
    CHECK_THROWS_AS(gl::group_delta(g, SquareMatrix::identity(3)), DimMismatch);
}

TEST_CASE("delta vs euclidean equivalence and group-op lipschitz") {
    CounterRng rng(23);
    std::vector<SquareMatrix> pool;
    double E = 1.0;
    for (int t = 0; t < 12; ++t) {
        pool.emplace_back(oracles::random_matrix(rng, 2));
        E = std::max(E, gl::eccentricity(pool.back()));
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = 0; j < pool.size(); ++j) {
            const double delta = gl::group_delta(pool[i], pool[j]);
            const double eucl = gl::operator_norm(
                Eigen::MatrixXd(pool[i].entries() - pool[j].entries()));
            CHECK(delta >= eucl - 1e-12);
            CHECK(delta <= (1.0 + E * E) * eucl + 1e-12);
            CHECK(delta == doctest::Approx(gl::group_delta(pool[j], pool[i])));
            if (i != j) CHECK(delta > 0.0);
        }
    }
    // delta(gh, g'h') <= 2E (delta(g,g') + delta(h,h'))
    for (int t = 0; t < 40; ++t) {
        const auto& g = pool[rng.next_u64() % pool.size()];
        const auto& gp = pool[rng.next_u64() % pool.size()];
        const auto& h = pool[rng.next_u64() % pool.size()];
        const auto& hp = pool[rng.next_u64() % pool.size()];
        const SquareMatrix gh(Eigen::MatrixXd(g.entries() * h.entries()));
        const SquareMatrix gphp(Eigen::MatrixXd(gp.entries() * hp.entries()));
        CHECK(gl::group_delta(gh, gphp) <=
              2.0 * E * (gl::group_delta(g, gp) + gl::group_delta(h, hp)) + 1e-10);
    }
}

TEST_CASE("projective metric") {
    const auto e1 = ProjectivePoint::axis(2, 0);
    const auto e2 = ProjectivePoint::axis(2, 1);
    CHECK(gl::projective_metric(e1, e1) == 0.0);
    CHECK(gl::projective_metric(e1, e2) == doctest::Approx(1.0));
    const ProjectivePoint diag{Eigen::VectorXd(Eigen::Vector2d(1.0, 1.0))};
    CHECK(gl::projective_metric(e1, diag) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    // sign invariance via the canonical representative
    const ProjectivePoint minus{Eigen::VectorXd(Eigen::Vector2d(-1.0, -1.0))};
    CHECK(gl::projective_metric(diag, minus) == 0.0);
    CHECK((diag.rep() - minus.rep()).norm() == 0.0);
    CHECK_THROWS_AS(gl::projective_metric(e1, ProjectivePoint::axis(3, 0)), DimMismatch);
}

TEST_CASE("projective action") {
    const auto e1 = ProjectivePoint::axis(2, 0);
    const auto e2 = ProjectivePoint::axis(2, 1);
    const auto g = SquareMatrix::diagonal({2.0, 0.5});
    CHECK(gl::projective_metric(gl::projective_act(SquareMatrix::identity(2), e1), e1) == 0.0);
    CHECK(gl::projective_metric(gl::projective_act(g, e1), e1) == 0.0);
    CHECK(gl::projective_metric(
              gl::projective_act(SquareMatrix::rotation2(3.14159265358979323846 / 2.0), e1), e2) <
          1e-12);

    // contraction d(g[u], g[v]) <= ecc(g)^2 d([u],[v]) in d = 2 and d = 3
    CounterRng rng(37);
    for (int d = 2; d <= 3; ++d) {
        for (int t = 0; t < 60; ++t) {
            const SquareMatrix g2(oracles::random_matrix(rng, d));
            Eigen::VectorXd u(d), v(d);
            for (int i = 0; i < d; ++i) {
                u[i] = rng.next_normal();
                v[i] = rng.next_normal();
            }
            const ProjectivePoint pu{u}, pv{v};
            const double ecc = gl::eccentricity(g2);
            CHECK(gl::projective_metric(gl::projective_act(g2, pu), gl::projective_act(g2, pv)) <=
                  ecc * ecc * gl::projective_metric(pu, pv) + 1e-12);
        }
    }

    // displacement d(g[v], g'[v]) <= max(||g^-1||, ||g'^-1||) ||g - g'||
    for (int t = 0; t < 60; ++t) {
        const SquareMatrix g1(oracles::random_matrix(rng, 2));
        const SquareMatrix g2(oracles::random_matrix(rng, 2));
        Eigen::VectorXd v(2);
        v << rng.next_normal(), rng.next_normal();
        const ProjectivePoint pv{v};
        const double lhs = gl::projective_metric(gl::projective_act(g1, pv), gl::projective_act(g2, pv));
        const double bound = std::max(gl::operator_norm(g1.inverse_entries()),
                                      gl::operator_norm(g2.inverse_entries())) *
                             gl::operator_norm(Eigen::MatrixXd(g1.entries() - g2.entries()));
        CHECK(lhs <= bound + 1e-12);
    }
}

TEST_CASE("log-norm cocycle") {
    const auto e1 = ProjectivePoint::axis(2, 0);
    const auto g = SquareMatrix::diagonal({2.0, 0.5});
    CHECK(gl::log_norm_cocycle(SquareMatrix::identity(2), e1) == doctest::Approx(0.0));
    CHECK(gl::log_norm_cocycle(g, e1) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    const ProjectivePoint diag{Eigen::VectorXd(Eigen::Vector2d(1.0, 1.0))};
    CHECK(gl::log_norm_cocycle(g, diag) ==
          doctest::Approx(0.5 * std::log(17.0 / 8.0)).epsilon(1e-13));

    CounterRng rng(41);
    for (int t = 0; t < 60; ++t) {
        const SquareMatrix g1(oracles::random_matrix(rng, 2));
        const SquareMatrix g2(oracles::random_matrix(rng, 2));
        Eigen::VectorXd v(2);
        v << rng.next_normal(), rng.next_normal();
        const ProjectivePoint pv{v};
        // -log||g^-1|| <= phi <= log||g||; on SL(2) this gives |phi| <= log ecc
        CHECK(gl::log_norm_cocycle(g1, pv) <= std::log(gl::operator_norm(g1)) + 1e-12);
        CHECK(gl::log_norm_cocycle(g1, pv) >=
              -std::log(gl::operator_norm(g1.inverse_entries())) - 1e-12);
        const SquareMatrix sl(oracles::random_sl2(rng));
        CHECK(std::abs(gl::log_norm_cocycle(sl, pv)) <= std::log(gl::eccentricity(sl)) + 1e-12);
        // |phi(g,.) - phi(g',.)| <= max(||g^-1||,||g'^-1||) ||g-g'||
        const double lhs = std::abs(gl::log_norm_cocycle(g1, pv) - gl::log_norm_cocycle(g2, pv));
        const double bound = std::max(gl::operator_norm(g1.inverse_entries()),
                                      gl::operator_norm(g2.inverse_entries())) *
                             gl::operator_norm(Eigen::MatrixXd(g1.entries() - g2.entries()));
        CHECK(lhs <= bound + 1e-12);
        // sign invariance
        const ProjectivePoint neg{Eigen::VectorXd(-v)};
        CHECK(gl::log_norm_cocycle(g1, pv) == gl::log_norm_cocycle(g1, neg));
    }
}

TEST_CASE("exterior power") {
    const auto g = mat2(1, 2, 3, 4);  // det -2
    CHECK(gl::exterior_power(g, 1).entries() == g.entries());
    const auto top = gl::exterior_power(g, 2);
    REQUIRE(top.dim() == 1);
    CHECK(top.entries()(0, 0) == doctest::Approx(-2.0).epsilon(1e-14));

    const auto d321 = SquareMatrix::diagonal({3.0, 2.0, 1.0});
    const auto lift = gl::exterior_power(d321, 2);
    REQUIRE(lift.dim() == 3);
    // lexicographic pairs {0,1},{0,2},{1,2} -> products 6, 3, 2
    CHECK(lift.entries()(0, 0) == doctest::Approx(6.0));
    CHECK(lift.entries()(1, 1) == doctest::Approx(3.0));
    CHECK(lift.entries()(2, 2) == doctest::Approx(2.0));
    CHECK(lift.entries().cwiseAbs().sum() == doctest::Approx(11.0));

    CHECK_THROWS_AS(gl::exterior_power(g, 0), BadOrder);
    CHECK_THROWS_AS(gl::exterior_power(g, 3), BadOrder);

    // norm identity and functoriality on random matrices up to d = 6
    CounterRng rng(53);
    for (int t = 0; t < 60; ++t) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 5);
        const Eigen::MatrixXd a = oracles::random_matrix(rng, d);
        const Eigen::MatrixXd b = oracles::random_matrix(rng, d);
        const SquareMatrix ga(a), gb(b);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
        for (int k = 1; k <= d; ++k) {
            const auto lifted = gl::exterior_power(ga, k);
            double prod = 1.0;
            for (int i = 0; i < k; ++i) prod *= svd.singularValues()[i];
            CHECK(gl::operator_norm(lifted) == doctest::Approx(prod).epsilon(1e-9));

            const auto lift_b = gl::exterior_power(gb, k);
            const auto lift_ab = gl::exterior_power(SquareMatrix(Eigen::MatrixXd(a * b)), k);
            const double rel = gl::operator_norm(Eigen::MatrixXd(
                                   lift_ab.entries() - lifted.entries() * lift_b.entries())) /
                               gl::operator_norm(lift_ab);
            CHECK(rel < 1e-9);
        }
    }
}

TEST_CASE("square matrix validation") {
    Eigen::MatrixXd nan2 = Eigen::MatrixXd::Identity(2, 2);
    nan2(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(SquareMatrix{nan2}, InputError);
    CHECK_THROWS_AS(SquareMatrix{Eigen::MatrixXd::Identity(2, 3)}, DimMismatch);
    CHECK(SquareMatrix::identity(5).log_abs_det() == doctest::Approx(0.0));

    gl::MetricConstants mc = gl::MetricConstants::from_ecc(3.0, 0.5);
    CHECK(mc.C1 == 3.0);
    CHECK(mc.C2 == 9.0);
    CHECK(mc.L == 6.0);
    CHECK_THROWS_AS(gl::MetricConstants::from_ecc(0.5, 0.0), BadEccentricity);
}
