#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "csr.hpp"

namespace chainpart {

/// new_to_old[r] is the original index placed at position r.
struct Permutation {
    std::vector<index_t> new_to_old;

    index_t size() const { return static_cast<index_t>(new_to_old.size()); }

    std::vector<index_t> inverse() const {
        std::vector<index_t> inv(new_to_old.size());
        for (index_t r = 0; r < size(); ++r) inv[new_to_old[r]] = r;
        return inv;
    }

    bool is_bijection() const {
        std::vector<char> seen(new_to_old.size(), 0);
        for (index_t v : new_to_old) {
            if (v < 0 || v >= size() || seen[v]) return false;
            seen[v] = 1;
        }
        return true;
    }
};

struct Reordering {
    Permutation rows;
    Permutation cols;
};

inline bool pattern_symmetric(const CsrMatrix& A) {
    if (A.rows() != A.cols()) return false;
    const auto T = transpose(A);
    return std::equal(A.pos().begin(), A.pos().end(), T.pos().begin()) &&
           std::equal(A.idx().begin(), A.idx().end(), T.idx().begin());
}

inline index_t bandwidth(const CsrMatrix& A) {
    index_t bw = 0;
    for (index_t i = 0; i < A.rows(); ++i)
        for (index_t j : A.row(i)) bw = std::max(bw, std::abs(i - j));
    return bw;
}

namespace detail {

/// Undirected graph in CSR form with neighbor lists sorted by ascending degree.
struct Graph {
    std::vector<index_t> ptr;
    std::vector<index_t> adj;
    index_t vertices() const { return static_cast<index_t>(ptr.size()) - 1; }
    index_t degree(index_t v) const { return ptr[v + 1] - ptr[v]; }
};

/// Rebuilds adjacency so every neighbor list is ordered by degree, in O(V + E).
inline Graph degree_sorted(const std::vector<std::vector<index_t>>& nbrs) {
    const auto V = static_cast<index_t>(nbrs.size());
    index_t max_deg = 0;
    for (const auto& l : nbrs) max_deg = std::max<index_t>(max_deg, static_cast<index_t>(l.size()));
    std::vector<index_t> bucket(max_deg + 2, 0);
    for (const auto& l : nbrs) ++bucket[l.size() + 1];
    for (index_t d = 0; d <= max_deg; ++d) bucket[d + 1] += bucket[d];
    std::vector<index_t> by_degree(V);
    for (index_t v = 0; v < V; ++v) by_degree[bucket[nbrs[v].size()]++] = v;

    Graph g;
    g.ptr.assign(V + 1, 0);
    for (index_t v = 0; v < V; ++v) g.ptr[v + 1] = g.ptr[v] + static_cast<index_t>(nbrs[v].size());
    g.adj.resize(g.ptr[V]);
    std::vector<index_t> fill(g.ptr.begin(), g.ptr.end() - 1);
    for (index_t u : by_degree)
        for (index_t v : nbrs[u]) g.adj[fill[v]++] = u;
    return g;
}

inline std::vector<index_t> cuthill_mckee(const Graph& g) {
    const index_t V = g.vertices();
    std::vector<index_t> seeds(V);
    for (index_t v = 0; v < V; ++v) seeds[v] = v;
    std::stable_sort(seeds.begin(), seeds.end(),
                     [&](index_t a, index_t b) { return g.degree(a) < g.degree(b); });
    std::vector<char> visited(V, 0);
    std::vector<index_t> order;
    order.reserve(V);
    for (index_t seed : seeds) {
        if (visited[seed]) continue;
        visited[seed] = 1;
        auto head = order.size();
        order.push_back(seed);
        while (head < order.size()) {
            index_t u = order[head++];
            for (index_t q = g.ptr[u]; q < g.ptr[u + 1]; ++q) {
                index_t v = g.adj[q];
                if (!visited[v]) {
                    visited[v] = 1;
                    order.push_back(v);
                }
            }
        }
    }
    return order;
}

}  // namespace detail

/**
 * @brief Reverse Cuthill-McKee ordering.
 *
 * Symmetric patterns are ordered through their adjacency graph. Any other
 * pattern is ordered through the bipartite row/column graph, and the row and
 * column permutations are read off the joint order.
 */
inline Reordering rcm_order(const CsrMatrix& A) {
    const index_t m = A.rows(), n = A.cols();
    Reordering out;
    if (pattern_symmetric(A)) {
        std::vector<std::vector<index_t>> nbrs(m);
        for (index_t i = 0; i < m; ++i)
            for (index_t j : A.row(i))
                if (j != i) nbrs[i].push_back(j);
        auto order = detail::cuthill_mckee(detail::degree_sorted(nbrs));
        std::reverse(order.begin(), order.end());
        out.rows.new_to_old = order;
        out.cols.new_to_old = std::move(order);
        return out;
    }
    std::vector<std::vector<index_t>> nbrs(m + n);
    for (index_t i = 0; i < m; ++i)
        for (index_t j : A.row(i)) {
            nbrs[i].push_back(m + j);
            nbrs[m + j].push_back(i);
        }
    auto order = detail::cuthill_mckee(detail::degree_sorted(nbrs));
    std::reverse(order.begin(), order.end());
    for (index_t v : order) {
        if (v < m)
            out.rows.new_to_old.push_back(v);
        else
            out.cols.new_to_old.push_back(v - m);
    }
    return out;
}

/// B[r, c] = A[rows[r], cols[c]].
inline CsrMatrix permute(const CsrMatrix& A, const Permutation& rows, const Permutation& cols) {
    if (rows.size() != A.rows() || cols.size() != A.cols()) throw DimensionError("permutation size mismatch");
    const auto col_new = cols.inverse();
    std::vector<index_t> pos{0};
    std::vector<index_t> idx;
    std::vector<double> val;
    std::vector<std::pair<index_t, double>> scratch;
    for (index_t r = 0; r < A.rows(); ++r) {
        const index_t i = rows.new_to_old[r];
        scratch.clear();
        for (index_t q = A.pos()[i]; q < A.pos()[i + 1]; ++q) scratch.emplace_back(col_new[A.idx()[q]], A.value(q));
        std::sort(scratch.begin(), scratch.end());
        for (auto [c, v] : scratch) {
            idx.push_back(c);
            if (A.has_values()) val.push_back(v);
        }
        pos.push_back(static_cast<index_t>(idx.size()));
    }
    return CsrMatrix(A.rows(), A.cols(), std::move(pos), std::move(idx), std::move(val));
}

}  // namespace chainpart
