#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lipfree/rational.hpp"

namespace lipfree {

/// Optimal solution of a balanced transportation problem
///   min sum_ij cost(i,j) x_ij,  sum_j x_ij = supply_i,  sum_i x_ij = demand_j,  x >= 0
/// together with dual potentials satisfying u_i + v_j <= cost(i,j), with
/// equality on basic cells.
template <class Scalar>
struct TransportSolution {
  struct Cell {
    Eigen::Index source;
    Eigen::Index sink;
    Scalar mass;
  };
  std::vector<Cell> basis;  // spanning-tree basis; degenerate cells carry zero mass
  std::vector<Scalar> u;    // source potentials
  std::vector<Scalar> v;    // sink potentials
  Scalar cost{0};
  std::size_t pivots = 0;
};

/// Transportation simplex (network simplex specialised to a complete bipartite
/// graph). Start: north-west corner rule. Entering cell: first cell in row-major
/// order with negative reduced cost. Leaving cell: first cell, in row-major
/// order, among those attaining the ratio-test minimum. With exact rationals
/// this is Bland's rule and terminates without perturbation.
template <class Scalar>
TransportSolution<Scalar> solve_transport(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& cost,
    const std::vector<Scalar>& supply, const std::vector<Scalar>& demand,
    std::size_t max_pivots = 1'000'000) {
  using Traits = ScalarTraits<Scalar>;
  using Index = Eigen::Index;
  const auto m = static_cast<Index>(supply.size());
  const auto n = static_cast<Index>(demand.size());
  if (cost.rows() != m || cost.cols() != n) throw std::invalid_argument("cost shape mismatch");
  TransportSolution<Scalar> sol;
  if (m == 0 || n == 0) {
    if (m != 0 || n != 0) throw std::invalid_argument("unbalanced transport problem");
    return sol;
  }

  // Basic flows in a dense table; `basic` marks tree cells.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> flow =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Constant(m, n, Scalar(0));
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> basic =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(m, n, false);

  {
    std::vector<Scalar> s = supply, t = demand;
    Index i = 0, j = 0;
    while (i < m && j < n) {
      const Scalar x = Traits::less(t[j], s[i]) ? t[j] : s[i];
      flow(i, j) = x;
      basic(i, j) = true;
      s[i] -= x;
      t[j] -= x;
      if (i == m - 1) {
        ++j;
      } else if (j == n - 1) {
        ++i;
      } else if (Traits::is_zero(s[i])) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // Node numbering for the tree: sources 0..m-1, sinks m..m+n-1.
  std::vector<Scalar> u(static_cast<std::size_t>(m)), v(static_cast<std::size_t>(n));
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(m + n));
  std::vector<Index> parent(static_cast<std::size_t>(m + n)), order;

  auto rebuild = [&] {
    for (auto& a : adj) a.clear();
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (basic(i, j)) {
          adj[static_cast<std::size_t>(i)].push_back(m + j);
          adj[static_cast<std::size_t>(m + j)].push_back(i);
        }
      }
    }
    // Potentials by DFS from source 0 with u_0 = 0.
    std::vector<bool> seen(static_cast<std::size_t>(m + n), false);
    order.clear();
    std::vector<Index> stack{0};
    seen[0] = true;
    parent[0] = -1;
    u[0] = 0;
    while (!stack.empty()) {
      const Index a = stack.back();
      stack.pop_back();
      order.push_back(a);
      for (Index b : adj[static_cast<std::size_t>(a)]) {
        if (seen[static_cast<std::size_t>(b)]) continue;
        seen[static_cast<std::size_t>(b)] = true;
        parent[static_cast<std::size_t>(b)] = a;
        if (b >= m) {
          v[static_cast<std::size_t>(b - m)] = cost(a, b - m) - u[static_cast<std::size_t>(a)];
        } else {
          u[static_cast<std::size_t>(b)] = cost(b, a - m) - v[static_cast<std::size_t>(a - m)];
        }
        stack.push_back(b);
      }
    }
    if (static_cast<Index>(order.size()) != m + n) {
      throw std::logic_error("transport basis is not a spanning tree");
    }
  };

  auto path_to_root = [&](Index node) {
    std::vector<Index> path{node};
    while (parent[static_cast<std::size_t>(path.back())] >= 0) {
      path.push_back(parent[static_cast<std::size_t>(path.back())]);
    }
    return path;
  };

  for (;;) {
    rebuild();
    Index ei = -1, ej = -1;
    for (Index i = 0; i < m && ei < 0; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (basic(i, j)) continue;
        const Scalar reduced = cost(i, j) - u[static_cast<std::size_t>(i)] -
                               v[static_cast<std::size_t>(j)];
        if (Traits::is_negative(reduced)) {
          ei = i;
          ej = j;
          break;
        }
      }
    }
    if (ei < 0) break;
    if (++sol.pivots > max_pivots) throw std::runtime_error("transport simplex pivot limit reached");

    // Tree path from sink ej to source ei; together with (ei, ej) it is the cycle.
    auto pa = path_to_root(m + ej);
    auto pb = path_to_root(ei);
    while (pa.size() > 1 && pb.size() > 1 && pa[pa.size() - 2] == pb[pb.size() - 2]) {
      pa.pop_back();
      pb.pop_back();
    }
    // pa: m+ej ... lca, pb: ei ... lca (lca shared at the back).
    std::vector<Index> nodes(pa.begin(), pa.end());
    for (auto it = pb.rbegin() + 1; it != pb.rend(); ++it) nodes.push_back(*it);
    // Cycle edges along nodes: alternate -, +, -, ... starting at the sink end.
    struct Edge {
      Index i, j;
      bool minus;
    };
    std::vector<Edge> cycle;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      Index a = nodes[k], b = nodes[k + 1];
      if (a >= m) std::swap(a, b);
      cycle.push_back({a, b - m, k % 2 == 0});
    }
    // Ratio test with row-major tie-breaking.
    Index li = -1, lj = -1;
    Scalar theta(0);
    for (const auto& e : cycle) {
      if (!e.minus) continue;
      const Scalar& x = flow(e.i, e.j);
      const bool better = li < 0 || Traits::less(x, theta) ||
                          (!Traits::less(theta, x) && std::pair(e.i, e.j) < std::pair(li, lj));
      if (better) {
        li = e.i;
        lj = e.j;
        theta = x;
      }
    }
    for (const auto& e : cycle) {
      if (e.minus) {
        flow(e.i, e.j) -= theta;
      } else {
        flow(e.i, e.j) += theta;
      }
    }
    flow(ei, ej) = theta;
    basic(ei, ej) = true;
    basic(li, lj) = false;
    flow(li, lj) = 0;
  }

  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!basic(i, j)) continue;
      sol.basis.push_back({i, j, flow(i, j)});
      sol.cost += flow(i, j) * cost(i, j);
    }
  }
  sol.u = std::move(u);
  sol.v = std::move(v);
  return sol;
}

}  // namespace lipfree
