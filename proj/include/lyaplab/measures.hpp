#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lyaplab/gl.hpp"

namespace lyaplab::measures {

// Finitely supported probability measure on GL(d, R): atom list + weights.
// Construction merges atoms that coincide under group_delta, drops zero
// weights, and checks the weight sum.
class FiniteMatrixMeasure {
  public:
    FiniteMatrixMeasure(std::vector<gl::SquareMatrix> atoms, std::vector<double> weights,
                        bool renormalize = false);

    int dim() const { return atoms_.front().dim(); }
    std::size_t size() const { return atoms_.size(); }
    const gl::SquareMatrix& atom(std::size_t j) const { return atoms_[j]; }
    double weight(std::size_t j) const { return weights_[j]; }
    const std::vector<gl::SquareMatrix>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& cumulative_weights() const { return cumulative_; }

    double eccentricity() const;
    double diam() const;                     // max pairwise group_delta
    double diam_theta(double theta) const;   // diam()^theta
    double mean_log_abs_det() const;         // sum_j p_j log|det A_j|

    FiniteMatrixMeasure inverse_pushforward() const;
    FiniteMatrixMeasure exterior_lift(int k) const;

  private:
    std::vector<gl::SquareMatrix> atoms_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

// A transport plan between two finite measures, with the dual potentials that
// certify optimality (u_i + v_j <= cost_ij, equality on the support).
struct Coupling {
    Eigen::MatrixXd plan;
    double cost = 0.0;
    std::vector<double> row_potential;
    std::vector<double> col_potential;
};

Coupling optimal_coupling(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu, double theta);

double wasserstein_theta(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu, double theta);

double hausdorff_distance(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu);

// W_theta + Hausdorff.
double support_topology_distance(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu,
                                 double theta);

// Index-paired upper bound sum_j (D^theta |p_j - p'_j| + p'_j delta(A_j, A'_j)^theta).
double finite_support_upper_bound(const FiniteMatrixMeasure& mu, const FiniteMatrixMeasure& nu,
                                  double theta);

// Product pushforward (g1, g2) -> g2 g1, duplicates merged.
FiniteMatrixMeasure convolve(const FiniteMatrixMeasure& first, const FiniteMatrixMeasure& second);

enum class IrreducibilityStatus { Irreducible, Reducible, Inconclusive };

struct IrreducibilityReport {
    IrreducibilityStatus status = IrreducibilityStatus::Inconclusive;
    std::vector<gl::ProjectivePoint> invariant_lines;  // witness when Reducible
    std::string note;
};

// Searches for a finite union of lines invariant under every atom (d = 2).
IrreducibilityReport strong_irreducibility_check_d2(const FiniteMatrixMeasure& mu,
                                                    std::size_t max_lines = 64,
                                                    double line_tol = 1e-9);

}  // namespace lyaplab::measures
