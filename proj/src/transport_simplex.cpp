#include "transport_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "lyaplab/errors.hpp"

namespace lyaplab::measures::detail {

namespace {

struct Cell {
    int i;
    int j;
};

// Path between two nodes of the basis tree. Nodes: rows are 0..m-1, columns
// are m..m+n-1; edges are the basic cells.
std::vector<int> tree_path(int m, int n, const std::vector<Cell>& basis, int from, int to) {
    const int nodes = m + n;
    std::vector<std::vector<std::pair<int, int>>> adj(nodes);  // (neighbor, basis index)
    for (std::size_t b = 0; b < basis.size(); ++b) {
        const int r = basis[b].i, c = m + basis[b].j;
        adj[r].push_back({c, static_cast<int>(b)});
        adj[c].push_back({r, static_cast<int>(b)});
    }
    std::vector<int> parent_edge(nodes, -1), parent(nodes, -1);
    std::vector<char> seen(nodes, 0);
    std::deque<int> q{from};
    seen[from] = 1;
    while (!q.empty()) {
        const int x = q.front();
        q.pop_front();
        if (x == to) break;
        for (auto [y, b] : adj[x]) {
            if (!seen[y]) {
                seen[y] = 1;
                parent[y] = x;
                parent_edge[y] = b;
                q.push_back(y);
            }
        }
    }
    std::vector<int> edges;
    for (int x = to; x != from; x = parent[x]) {
        if (parent[x] < 0) throw NumericalError("transport simplex: basis is not connected");
        edges.push_back(parent_edge[x]);
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
}

}  // namespace

TransportSolution solve_transport(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const Eigen::MatrixXd& cost) {
    const int m = static_cast<int>(supply.size());
    const int n = static_cast<int>(demand.size());
    Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(m, n);

    // Northwest-corner start; advancing one index per step yields exactly
    // m+n-1 basic cells (some possibly zero).
    std::vector<Cell> basis;
    basis.reserve(m + n - 1);
    {
        std::vector<double> rs = supply, rd = demand;
        int i = 0, j = 0;
        while (true) {
            const double a = std::min(rs[i], rd[j]);
            plan(i, j) = a;
            basis.push_back({i, j});
            rs[i] -= a;
            rd[j] -= a;
            if (i == m - 1 && j == n - 1) break;
            if (j == n - 1)
                ++i;
            else if (i == m - 1)
                ++j;
            else if (rs[i] <= rd[j])
                ++i;
            else
                ++j;
        }
    }

    const double tol = 1e-12 * (1.0 + cost.cwiseAbs().maxCoeff());
    const long max_iter = 1000L * (m + n) * (m + n);
    std::vector<double> u(m), v(n);
    bool optimal = false;

    for (long iter = 0; iter < max_iter; ++iter) {
        // duals from the tree: u_i + v_j = c_ij on basic cells, u_0 = 0
        {
            std::vector<char> ur(m, 0), vc(n, 0);
            u.assign(m, 0.0);
            v.assign(n, 0.0);
            ur[0] = 1;
            std::deque<int> q{0};  // nodes, rows 0..m-1, cols m..m+n-1
            std::vector<std::vector<std::pair<int, int>>> adj(m + n);
            for (std::size_t b = 0; b < basis.size(); ++b) {
                adj[basis[b].i].push_back({m + basis[b].j, static_cast<int>(b)});
                adj[m + basis[b].j].push_back({basis[b].i, static_cast<int>(b)});
            }
            std::vector<char> seen(m + n, 0);
            seen[0] = 1;
            while (!q.empty()) {
                const int x = q.front();
                q.pop_front();
                for (auto [y, b] : adj[x]) {
                    if (seen[y]) continue;
                    seen[y] = 1;
                    const Cell& cell = basis[b];
                    if (y >= m)
                        v[y - m] = cost(cell.i, cell.j) - u[cell.i];
                    else
                        u[y] = cost(cell.i, cell.j) - v[cell.j];
                    q.push_back(y);
                }
            }
            for (int x = 0; x < m + n; ++x)
                if (!seen[x]) throw NumericalError("transport simplex: degenerate basis forest");
        }

        // entering cell: most negative reduced cost (smallest index late in
        // the budget, to break potential cycling)
        int bi = -1, bj = -1;
        double best = -tol;
        const bool bland = iter > max_iter / 2;
        for (int i = 0; i < m && (bi < 0 || !bland); ++i) {
            for (int j = 0; j < n; ++j) {
                const double r = cost(i, j) - u[i] - v[j];
                if (r < best) {
                    best = r;
                    bi = i;
                    bj = j;
                    if (bland) break;
                }
            }
        }
        if (bi < 0) {
            optimal = true;
            break;
        }

        // unique cycle: entering cell plus the tree path col->row
        const auto path = tree_path(m, n, basis, m + bj, bi);
        // walk: entering gets +theta; path edges alternate -,+ starting with -
        double theta = std::numeric_limits<double>::infinity();
        int leave = -1;
        for (std::size_t k = 0; k < path.size(); k += 2) {
            const Cell& cell = basis[path[k]];
            if (plan(cell.i, cell.j) < theta) {
                theta = plan(cell.i, cell.j);
                leave = path[k];
            }
        }
        if (leave < 0) throw NumericalError("transport simplex: no leaving variable");
        plan(bi, bj) += theta;
        for (std::size_t k = 0; k < path.size(); ++k) {
            Cell& cell = basis[path[k]];
            plan(cell.i, cell.j) += (k % 2 == 0) ? -theta : theta;
        }
        plan(basis[leave].i, basis[leave].j) = 0.0;  // clear rounding dust
        basis[leave] = {bi, bj};
    }

    if (!optimal) throw NumericalError("transport simplex: iteration budget exhausted");

    TransportSolution sol;
    sol.plan = std::move(plan);
    sol.cost = (sol.plan.array() * cost.array()).sum();
    sol.u = std::move(u);
    sol.v = std::move(v);
    return sol;
}

}  // namespace lyaplab::measures::detail
