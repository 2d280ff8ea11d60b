#include "lyaplab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "transport_simplex.hpp"

namespace lyaplab::measures {

namespace {

double atom_merge_tol(const gl::SquareMatrix& a) {
    // Frobenius norms bound the operator norms from above; the scale factor
    // of the merge tolerance only needs the right magnitude
    return 1e-12 * (1.0 + a.entries().norm() + a.inverse_entries().norm());
}

void check_same_dim(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu, const char* what) {
    if (mu.dim() != nu.dim()) throw DimMismatch(std::string(what) + ": dimension mismatch");
}

void check_theta(double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw BadTheta("theta must lie in (0, 1]");
}

}  // namespace

FiniteMatrixMeasure::FiniteMatrixMeasure(std::vector<gl::SquareMatrix> atoms, std::vector<double> weights,
                                         bool renormalize) {
    if (atoms.empty()) throw InputError("measure needs at least one atom");
    if (atoms.size() != weights.size()) throw IndexMismatch("atom/weight counts differ");
    const int d = atoms.front().dim();
    for (const auto& a : atoms)
        if (a.dim() != d) throw DimMismatch("measure atoms must share one dimension");

    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InputError("weights must be nonnegative");
        sum += w;
    }
    if (renormalize) {
        if (sum <= 0.0) throw InputError("weights sum to zero");
        for (double& w : weights) w /= sum;
    } else if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "weights must sum to 1 (got " << sum << ")";
        throw InputError(os.str());
    }

    // Merge duplicate atoms and drop zero weights. Pairs that can merge are
    // close in any linear key (|sum a - sum b| <= d^{3/2} group_delta), so a
    // sorted key window prunes the quadratic group_delta scan; empirical
    // pushforward measures with 1e4 atoms stay cheap.
    const std::size_t n_in = atoms.size();
    std::vector<double> key(n_in);
    double tol = 0.0;
    for (std::size_t j = 0; j < n_in; ++j) {
        key[j] = atoms[j].entries().sum();
        tol = std::max(tol, atom_merge_tol(atoms[j]));
    }
    const double window = std::pow(static_cast<double>(d), 1.5) * tol;

    std::vector<std::size_t> order(n_in);
    for (std::size_t j = 0; j < n_in; ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });

    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> root(n_in, kNone);
    std::vector<std::pair<double, std::size_t>> kept_roots;  // (key, index), key-sorted
    for (std::size_t pos = 0; pos < n_in; ++pos) {
        const std::size_t j = order[pos];
        if (weights[j] <= 0.0) continue;
        std::size_t match = kNone;
        for (std::size_t q = kept_roots.size(); q-- > 0;) {
            if (key[j] - kept_roots[q].first > window) break;
            const std::size_t i = kept_roots[q].second;
            if (gl::group_delta(atoms[i], atoms[j]) <= atom_merge_tol(atoms[i])) {
                match = i;
                break;
            }
        }
        if (match == kNone) {
            root[j] = j;
            kept_roots.emplace_back(key[j], j);
        } else {
            root[j] = match;
        }
    }

    // emit representatives in first-occurrence order
    std::vector<std::size_t> slot(n_in, kNone);
    for (std::size_t j = 0; j < n_in; ++j) {
        if (root[j] == kNone) continue;
        const std::size_t r = root[j];
        if (slot[r] == kNone) {
            slot[r] = atoms_.size();
            atoms_.push_back(atoms[r]);
            weights_.push_back(0.0);
        }
        weights_[slot[r]] += weights[j];
    }
    if (atoms_.empty()) throw InputError("measure has no atoms with positive weight");

    cumulative_.resize(weights_.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        acc += weights_[j];
        cumulative_[j] = acc;
    }
    cumulative_.back() = 1.0;
}

double FiniteMatrixMeasure::eccentricity() const {
    double e = 1.0;
    for (const auto& a : atoms_) e = std::max(e, gl::eccentricity(a));
    return e;
}

double FiniteMatrixMeasure::diam() const {
    double d = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        for (std::size_t j = i + 1; j < atoms_.size(); ++j)
            d = std::max(d, gl::group_delta(atoms_[i], atoms_[j]));
    return d;
}

double FiniteMatrixMeasure::diam_theta(double theta) const {
    check_theta(theta);
    return std::pow(diam(), theta);
}

double FiniteMatrixMeasure::mean_log_abs_det() const {
    double s = 0.0;
    for (std::size_t j = 0; j < atoms_.size(); ++j) s += weights_[j] * atoms_[j].log_abs_det();
    return s;
}

FiniteMatrixMeasure FiniteMatrixMeasure::inverse_pushforward() const {
    std::vector<gl::SquareMatrix> inv;
    inv.reserve(atoms_.size());
    for (const auto& a : atoms_) inv.push_back(a.inverse());
    return FiniteMatrixMeasure(std::move(inv), weights_);
}

FiniteMatrixMeasure FiniteMatrixMeasure::exterior_lift(int k) const {
    std::vector<gl::SquareMatrix> lifted;
    lifted.reserve(atoms_.size());
    for (const auto& a : atoms_) lifted.push_back(gl::exterior_power(a, k));
    return FiniteMatrixMeasure(std::move(lifted), weights_);
}

Coupling optimal_coupling(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu, double theta) {
    check_same_dim(mu, nu, "optimal_coupling");
    check_theta(theta);
    const std::size_t m = mu.size(), n = nu.size();
    Eigen::MatrixXd cost(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cost(static_cast<int>(i), static_cast<int>(j)) =
                std::pow(gl::group_delta(mu.atom(i), nu.atom(j)), theta);
    auto sol = detail::solve_transport(mu.weights(), nu.weights(), cost);
    Coupling c;
    c.plan = std::move(sol.plan);
    c.cost = sol.cost;
    c.row_potential = std::move(sol.u);
    c.col_potential = std::move(sol.v);
    return c;
}

double wasserstein_theta(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu, double theta) {
    return optimal_coupling(mu, nu, theta).cost;
}

double hausdorff_distance(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu) {
    check_same_dim(mu, nu, "hausdorff_distance");
    double h = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < nu.size(); ++j)
            best = std::min(best, gl::group_delta(mu.atom(i), nu.atom(j)));
        h = std::max(h, best);
    }
    for (std::size_t j = 0; j < nu.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < mu.size(); ++i)
            best = std::min(best, gl::group_delta(mu.atom(i), nu.atom(j)));
        h = std::max(h, best);
    }
    return h;
}

double support_topology_distance(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu,
                                 double theta) {
    return wasserstein_theta(mu, nu, theta) + hausdorff_distance(mu, nu);
}

double finite_support_upper_bound(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu,
                                  double theta) {
    check_same_dim(mu, nu, "finite_support_upper_bound");
    check_theta(theta);
    if (mu.size() != nu.size())
        throw IndexMismatch("finite_support_upper_bound: measures must be index-paired");
    const double D_theta = mu.diam_theta(theta);
    double bound = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        bound += D_theta * std::abs(mu.weight(j) - nu.weight(j)) +
                 nu.weight(j) * std::pow(gl::group_delta(mu.atom(j), nu.atom(j)), theta);
    }
    return bound;
}

FiniteMatrixMeasure convolve(const FiniteMatrixMeasure& first, const FiniteMatrixMeasure& second) {
    check_same_dim(first, second, "convolve");
    std::vector<gl::SquareMatrix> atoms;
    std::vector<double> weights;
    atoms.reserve(first.size() * second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        for (std::size_t j = 0; j < second.size(); ++j) {
            atoms.emplace_back(Eigen::MatrixXd(second.atom(j).entries() * first.atom(i).entries()));
            weights.push_back(first.weight(i) * second.weight(j));
        }
    }
    return FiniteMatrixMeasure(std::move(atoms), std::move(weights));
}

namespace {

// real eigendirections of a 2x2 matrix, empty when the spectrum is complex
std::vector<gl::ProjectivePoint> real_eigendirections(const Eigen::Matrix2d& a, bool* degenerate) {
    std::vector<gl::ProjectivePoint> out;
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = tr * tr - 4.0 * det;
    const double scale = a.cwiseAbs().maxCoeff();
    if (disc < -1e-14 * scale * scale) return out;  // complex pair
    const double sq = std::sqrt(std::max(disc, 0.0));
    for (double lam : {0.5 * (tr + sq), 0.5 * (tr - sq)}) {
        // kernel of (a - lam I)
        const Eigen::Matrix2d b = a - lam * Eigen::Matrix2d::Identity();
        Eigen::Vector2d v;
        // pick the larger row to solve against
        if (b.row(0).norm() >= b.row(1).norm() && b.row(0).norm() > 1e-13 * (1.0 + scale))
            v = Eigen::Vector2d(-b(0, 1), b(0, 0));
        else if (b.row(1).norm() > 1e-13 * (1.0 + scale))
            v = Eigen::Vector2d(-b(1, 1), b(1, 0));
        else {
            // a is (numerically) a multiple of the identity
            if (degenerate) *degenerate = true;
            continue;
        }
        if (v.norm() < 1e-13) {
            if (degenerate) *degenerate = true;
            continue;
        }
        out.emplace_back(Eigen::VectorXd(v));
    }
    return out;
}

bool contains_line(const std::vector<gl::ProjectivePoint>& set, const gl::ProjectivePoint& p,
                   double tol) {
    for (const auto& q : set)
        if (gl::projective_metric(q, p) <= tol) return true;
    return false;
}

}  // namespace

IrreducibilityReport strong_irreducibility_check_d2(const FiniteMatrixMeasure& mu,
                                                    std::size_t max_lines, double line_tol) {
    if (mu.dim() != 2) throw BadOrder("strong_irreducibility_check_d2: dim must be 2");
    IrreducibilityReport report;

    bool degenerate = false;
    std::vector<gl::ProjectivePoint> seeds;
    for (const auto& a : mu.atoms()) {
        for (auto& p : real_eigendirections(a.entries(), &degenerate))
            if (!contains_line(seeds, p, line_tol)) seeds.push_back(std::move(p));
    }
    // products of pairs catch unions permuted by the individual atoms
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < mu.size(); ++j) {
            const Eigen::Matrix2d prod = mu.atom(i).entries() * mu.atom(j).entries();
            for (auto& p : real_eigendirections(prod, &degenerate))
                if (!contains_line(seeds, p, line_tol)) seeds.push_back(std::move(p));
        }
    }
    if (seeds.empty()) {
        // no real eigendirection anywhere (e.g. rotation-only support): fall
        // back to canonical lines; rational-angle supports still close up
        seeds.push_back(gl::ProjectivePoint::axis(2, 0));
        seeds.push_back(gl::ProjectivePoint::axis(2, 1));
        seeds.emplace_back(Eigen::VectorXd(Eigen::Vector2d(1.0, 1.0)));
    }

    for (const auto& seed : seeds) {
        std::vector<gl::ProjectivePoint> orbit{seed};
        bool escaped = false;
        for (std::size_t head = 0; head < orbit.size(); ++head) {
            const gl::ProjectivePoint cur = orbit[head];
            for (const auto& a : mu.atoms()) {
                auto img = gl::projective_act(a, cur);
                if (!contains_line(orbit, img, line_tol)) {
                    orbit.push_back(std::move(img));
                    if (orbit.size() > max_lines) {
                        escaped = true;
                        break;
                    }
                }
            }
            if (escaped) break;
        }
        if (!escaped) {
            report.status = IrreducibilityStatus::Reducible;
            report.invariant_lines = std::move(orbit);
            return report;
        }
    }
    if (degenerate) {
        // an atom's eigen-structure was numerically unresolvable and no
        // witness surfaced: refuse to certify either way
        report.status = IrreducibilityStatus::Inconclusive;
        report.note = "eigendirection extraction degenerate; no invariant union found within bound";
        return report;
    }
    report.status = IrreducibilityStatus::Irreducible;
    return report;
}

}  // namespace lyaplab::measures
