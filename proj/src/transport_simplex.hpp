#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lyaplab::measures::detail {

struct TransportSolution {
    Eigen::MatrixXd plan;
    double cost = 0.0;
    std::vector<double> u;  // row duals
    std::vector<double> v;  // column duals
};

// Exact transportation simplex (MODI) for the dense balanced problem
//   min sum_ij cost(i,j) x(i,j),  x >= 0, row sums = supply, col sums = demand.
// Sizes here are tiny (tens of atoms), so the dense tree-based pivoting is
// fine.
TransportSolution solve_transport(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const Eigen::MatrixXd& cost);

}  // namespace lyaplab::measures::detail
