#include "lyaplab/gl.hpp"

#include <cmath>
#include <sstream>

namespace lyaplab::gl {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<std::vector<int>> k_subsets(int d, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == d - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

SquareMatrix::SquareMatrix(Eigen::MatrixXd entries, double det_rel_tol) : mat_(std::move(entries)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
        throw DimMismatch("SquareMatrix: entries must be square and nonempty");
    // Base group elements live in d <= 10; compound (exterior-power) lifts go
    // up to C(10,5) = 252.
    if (mat_.rows() > kMaxCompoundDim)
        throw BadOrder("SquareMatrix: dimension cap is " + std::to_string(kMaxCompoundDim));
    if (!mat_.allFinite())
        throw InputError("SquareMatrix: entries must be finite");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(mat_);
    det_ = lu.determinant();
    log_abs_det_ = 0.0;
    for (int i = 0; i < mat_.rows(); ++i) log_abs_det_ += std::log(std::abs(lu.matrixLU()(i, i)));
    const double scale = operator_norm(mat_);
    const int d = dim();
    // |det| >= tol * ||g||^d, compared in log space so lifted matrices do not
    // overflow the threshold.
    if (!(log_abs_det_ >= std::log(det_rel_tol) + d * std::log(scale)) || !std::isfinite(log_abs_det_)) {
        std::ostringstream os;
        os << "SquareMatrix: numerically singular (log|det| = " << log_abs_det_
           << ", threshold = " << std::log(det_rel_tol) + d * std::log(scale) << ")";
        throw SingularMatrix(os.str());
    }
    inv_ = lu.inverse();
    if (!inv_.allFinite()) throw SingularMatrix("SquareMatrix: inverse overflowed");
}

SquareMatrix SquareMatrix::inverse() const {
    return SquareMatrix(inv_);
}

SquareMatrix SquareMatrix::identity(int d) {
    return SquareMatrix(Eigen::MatrixXd::Identity(d, d));
}

SquareMatrix SquareMatrix::diagonal(const std::vector<double>& diag) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<int>(diag.size()), static_cast<int>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = diag[i];
    return SquareMatrix(std::move(m));
}

SquareMatrix SquareMatrix::rotation2(double angle) {
    Eigen::MatrixXd m(2, 2);
    const double c = std::cos(angle), s = std::sin(angle);
    m << c, -s, s, c;
    return SquareMatrix(std::move(m));
}

SquareMatrix SquareMatrix::from_parts(Eigen::MatrixXd m, Eigen::MatrixXd inv, double det,
                                      double log_abs_det) {
    if (m.rows() != m.cols() || m.rows() != inv.rows() || inv.rows() != inv.cols())
        throw DimMismatch("from_parts: shapes disagree");
    if (!m.allFinite() || !inv.allFinite())
        throw SingularMatrix("from_parts: non-finite entries");
    const double resid = (m * inv - Eigen::MatrixXd::Identity(m.rows(), m.cols()))
                             .cwiseAbs()
                             .maxCoeff();
    if (!(resid < 1e-6 * (1.0 + std::sqrt(static_cast<double>(m.rows())))))
        throw SingularMatrix("from_parts: inverse residual too large");
    SquareMatrix out;
    out.mat_ = std::move(m);
    out.inv_ = std::move(inv);
    out.det_ = det;
    out.log_abs_det_ = log_abs_det;
    return out;
}

ProjectivePoint::ProjectivePoint(Eigen::VectorXd rep) : rep_(std::move(rep)) {
    if (rep_.size() < 1) throw DimMismatch("ProjectivePoint: empty vector");
    if (!rep_.allFinite()) throw InputError("ProjectivePoint: entries must be finite");
    const double n = rep_.norm();
    if (n < 1e-300) throw InputError("ProjectivePoint: zero vector does not define a line");
    rep_ /= n;
    // canonical sign: first coordinate of meaningful size positive
    for (int i = 0; i < rep_.size(); ++i) {
        if (std::abs(rep_[i]) > 1e-12) {
            if (rep_[i] < 0) rep_ = -rep_;
            break;
        }
    }
}

ProjectivePoint ProjectivePoint::axis(int d, int i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v[i] = 1.0;
    return ProjectivePoint(std::move(v));
}

MetricConstants MetricConstants::from_ecc(double ecc, double diam_theta) {
    if (ecc < 1.0) throw BadEccentricity("eccentricity must be >= 1");
    MetricConstants mc;
    mc.ecc = ecc;
    mc.C1 = ecc;
    mc.C2 = ecc * ecc;
    mc.L = 2.0 * ecc;
    mc.diam_theta = diam_theta;
    return mc;
}

double operator_norm(const Eigen::MatrixXd& m) {
    // largest singular value via the symmetric eigenproblem for m^T m
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(top, 0.0));
}

double operator_norm(const SquareMatrix& g) { return operator_norm(g.entries()); }

std::vector<double> singular_values(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    std::vector<double> out(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
    return out;
}

double eccentricity(const SquareMatrix& g) {
    return operator_norm(g.entries()) * operator_norm(g.inverse_entries());
}

double group_delta(const SquareMatrix& g, const SquareMatrix& h) {
    if (g.dim() != h.dim()) throw DimMismatch("group_delta: dimension mismatch");
    return operator_norm(Eigen::MatrixXd(g.entries() - h.entries())) +
           operator_norm(Eigen::MatrixXd(g.inverse_entries() - h.inverse_entries()));
}

double projective_metric(const ProjectivePoint& p, const ProjectivePoint& q) {
    if (p.dim() != q.dim()) throw DimMismatch("projective_metric: dimension mismatch");
    // ||u ^ v||^2 summed over coordinate 2-planes; the sqrt(1 - <u,v>^2) form
    // loses half the digits near coincident lines
    const auto& u = p.rep();
    const auto& v = q.rep();
    double s2 = 0.0;
    for (int i = 0; i < u.size(); ++i)
        for (int j = i + 1; j < u.size(); ++j) {
            const double w = u[i] * v[j] - u[j] * v[i];
            s2 += w * w;
        }
    return std::min(1.0, std::sqrt(s2));
}

ProjectivePoint projective_act(const SquareMatrix& g, const ProjectivePoint& p) {
    if (g.dim() != p.dim()) throw DimMismatch("projective_act: dimension mismatch");
    return ProjectivePoint(g.entries() * p.rep());
}

double log_norm_cocycle(const SquareMatrix& g, const ProjectivePoint& p) {
    if (g.dim() != p.dim()) throw DimMismatch("log_norm_cocycle: dimension mismatch");
    return std::log((g.entries() * p.rep()).norm());
}

namespace {

Eigen::MatrixXd compound_matrix(const Eigen::MatrixXd& g, const std::vector<std::vector<int>>& subsets,
                                int k) {
    const long m = static_cast<long>(subsets.size());
    Eigen::MatrixXd out(m, m);
    Eigen::MatrixXd minor_(k, k);
    for (long r = 0; r < m; ++r) {
        for (long c = 0; c < m; ++c) {
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) minor_(i, j) = g(subsets[r][i], subsets[c][j]);
            out(r, c) = minor_.determinant();
        }
    }
    return out;
}

}  // namespace

SquareMatrix exterior_power(const SquareMatrix& g, int k) {
    const int d = g.dim();
    if (d > kMaxDim) throw BadOrder("exterior_power: base dimension cap is " + std::to_string(kMaxDim));
    if (k < 1 || k > d) throw BadOrder("exterior_power: need 1 <= k <= dim");
    if (k == 1) return g;
    const long m = binom(d, k);
    if (m > kMaxCompoundDim) throw BadOrder("exterior_power: compound dimension exceeds cap");
    const auto subsets = k_subsets(d, k);
    Eigen::MatrixXd lifted = compound_matrix(g.entries(), subsets, k);
    // the inverse lift is the lift of the inverse, and det(L^k g) =
    // (det g)^binom(d-1, k-1) by functoriality
    Eigen::MatrixXd lifted_inv = compound_matrix(g.inverse_entries(), subsets, k);
    const long det_power = binom(d - 1, k - 1);
    const double log_abs_det = static_cast<double>(det_power) * g.log_abs_det();
    const double sign = (g.det() < 0.0 && det_power % 2 == 1) ? -1.0 : 1.0;
    return SquareMatrix::from_parts(std::move(lifted), std::move(lifted_inv),
                                    sign * std::exp(log_abs_det), log_abs_det);
}

}  // namespace lyaplab::gl
