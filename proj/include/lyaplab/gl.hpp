#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lyaplab/errors.hpp"

namespace lyaplab::gl {

inline constexpr int kMaxDim = 10;
inline constexpr long kMaxCompoundDim = 252;  // C(10,5)
inline constexpr double kDetRelTol = 1e-12;

long binom(int n, int k);

// Lexicographically ordered k-subsets of {0, ..., d-1}.
std::vector<std::vector<int>> k_subsets(int d, int k);

// Invertible dense d x d real matrix. Inverse and determinant are computed
// at construction; numerically singular input (|det| < tol * ||g||^d) is
// rejected.
class SquareMatrix {
  public:
    explicit SquareMatrix(Eigen::MatrixXd entries, double det_rel_tol = kDetRelTol);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXd& entries() const { return mat_; }
    const Eigen::MatrixXd& inverse_entries() const { return inv_; }
    double det() const { return det_; }
    double log_abs_det() const { return log_abs_det_; }

    SquareMatrix inverse() const;

    static SquareMatrix identity(int d);
    static SquareMatrix diagonal(const std::vector<double>& diag);
    static SquareMatrix rotation2(double angle);

    // Trusted assembly from a precomputed inverse (used by the exterior-power
    // lift, whose inverse is the lift of the inverse). Checks the residual
    // ||m * inv - I|| instead of the base-group determinant threshold.
    static SquareMatrix from_parts(Eigen::MatrixXd m, Eigen::MatrixXd inv, double det,
                                   double log_abs_det);

  private:
    SquareMatrix() = default;

    Eigen::MatrixXd mat_;
    Eigen::MatrixXd inv_;
    double det_ = 0.0;
    double log_abs_det_ = 0.0;
};

// A line in R^d, stored as a unit vector with the first nonzero coordinate
// positive so that equal lines have equal representatives.
class ProjectivePoint {
  public:
    explicit ProjectivePoint(Eigen::VectorXd rep);

    int dim() const { return static_cast<int>(rep_.size()); }
    const Eigen::VectorXd& rep() const { return rep_; }

    static ProjectivePoint axis(int d, int i);

  private:
    Eigen::VectorXd rep_;
};

// The package (ecc, C1, C2, L, diam_theta) attached to a compact support.
struct MetricConstants {
    double ecc = 1.0;
    double C1 = 1.0;    // = ecc
    double C2 = 1.0;    // = ecc^2
    double L = 2.0;     // = 2 ecc
    double diam_theta = 0.0;

    static MetricConstants from_ecc(double ecc, double diam_theta);
};

double operator_norm(const SquareMatrix& g);
double operator_norm(const Eigen::MatrixXd& m);

// Top-k singular values, descending.
std::vector<double> singular_values(const Eigen::MatrixXd& m);

double eccentricity(const SquareMatrix& g);

// delta(g, h) = ||g - h|| + ||g^-1 - h^-1||.
double group_delta(const SquareMatrix& g, const SquareMatrix& h);

// sin of the angle between lines (Fubini-Study for d >= 3); in [0, 1].
double projective_metric(const ProjectivePoint& p, const ProjectivePoint& q);

ProjectivePoint projective_act(const SquareMatrix& g, const ProjectivePoint& p);

// phi(g, [v]) = log(||g v|| / ||v||).
double log_norm_cocycle(const SquareMatrix& g, const ProjectivePoint& p);

// Compound matrix: the induced action on Lambda^k R^d, rows/columns indexed
// by lexicographic k-subsets.
SquareMatrix exterior_power(const SquareMatrix& g, int k);

}  // namespace lyaplab::gl
