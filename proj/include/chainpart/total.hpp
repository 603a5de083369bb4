#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "evaluation.hpp"
#include "lws.hpp"
#include "objective.hpp"

namespace chainpart {

enum class TotalAlgorithm { Dynamic, DynamicSimul, Quadrangle };

struct TotalResult {
    SplitPartition partition;
    double cost = kInf;   // sum of partwise costs
    index_t offset = 0;   // add to cost for the conventional metric
    bool feasible = false;
    index_t queries = 0;  // cost evaluations
};

/// Prefix weights of the rows under a threshold's weight kind.
inline std::vector<index_t> weight_prefix(const CsrMatrix& A, WeightKind kind) {
    if (kind == WeightKind::Entries) return {A.pos().begin(), A.pos().end()};
    std::vector<index_t> w(A.rows() + 1);
    for (index_t i = 0; i <= A.rows(); ++i) w[i] = i;
    return w;
}

/// Entry budget (1 + eps) N / K per part.
inline Threshold balance_threshold(const CsrMatrix& A, index_t K, double eps) {
    if (K < 1) throw Error("need at least one part");
    if (eps < 0) throw Error("balance slack must be nonnegative");
    return Threshold{WeightKind::Entries, (1.0 + eps) * static_cast<double>(A.nnz()) / static_cast<double>(K)};
}

/// Range of split k over all K-partitions into nonempty parts within the weight limit.
struct Corridor {
    std::vector<index_t> low, high;
    bool feasible = false;
};

/**
 * Greedy sweeps: from the top each part takes as many rows as the limit
 * allows (leaving one row per remaining part), from the bottom likewise.
 */
inline Corridor split_corridor(const std::vector<index_t>& weight, index_t K, double w_max) {
    const index_t m = static_cast<index_t>(weight.size()) - 1;
    Corridor c;
    c.low.assign(K + 1, 0);
    c.high.assign(K + 1, m);
    if (K < 1 || K > m) return c;
    auto fits = [&](index_t i, index_t j) { return static_cast<double>(weight[j] - weight[i]) <= w_max; };
    c.high[0] = 0;
    for (index_t k = 1; k <= K; ++k) {
        index_t x = c.high[k - 1];
        const index_t cap = m - (K - k);
        while (x < cap && fits(c.high[k - 1], x + 1)) ++x;
        if (x == c.high[k - 1]) return c;
        c.high[k] = x;
    }
    c.low[K] = m;
    for (index_t k = K - 1; k >= 0; --k) {
        index_t x = c.low[k + 1];
        while (x > k && fits(x - 1, c.low[k + 1])) --x;
        if (x == c.low[k + 1]) return c;
        c.low[k] = x;
    }
    c.feasible = c.high[K] == m && c.low[0] == 0;
    for (index_t k = 0; k <= K; ++k) c.feasible = c.feasible && c.low[k] <= c.high[k];
    return c;
}

namespace detail {

inline Shape shape_of(const Objective& base) {
    const auto f = base.flags();
    if (f.convex) return Shape::Convex;
    if (f.concave) return Shape::Concave;
    return Shape::General;
}

inline SplitPartition trace(const std::vector<std::vector<index_t>>& p, index_t m, index_t K) {
    SplitPartition P;
    P.splits.assign(K + 1, 0);
    P.splits[K] = m;
    for (index_t k = K; k >= 1; --k) P.splits[k - 1] = p[k][P.splits[k]];
    return P;
}

}  // namespace detail

/**
 * @brief Minimum total cost contiguous K-partition into nonempty parts.
 *
 * The objective's threshold becomes the weight limit of every part and the
 * remaining base cost is summed. Round k solves an LWS seeded with the
 * costs of round k-1, restricted to the corridor of split k.
 */
inline TotalResult total_partition(const CsrMatrix& A, const Objective& obj, index_t K, TotalAlgorithm alg,
                                   const MapPartition* phi = nullptr) {
    if (K < 1) throw Error("need at least one part");
    if (obj.needs_phi() && !phi) throw Error("objective needs a fixed column partition");
    const index_t m = A.rows();
    Objective base = obj;
    base.threshold.reset();
    const Threshold limit = obj.threshold.value_or(Threshold{});
    const auto weight = weight_prefix(A, limit.weight);
    const auto cor = split_corridor(weight, K, limit.w_max);

    TotalResult r;
    r.offset = objective_offset(A, obj.kind);
    if (!cor.feasible) return r;

    std::vector<std::vector<double>> c(K + 1, std::vector<double>(m + 1, kInf));
    std::vector<std::vector<index_t>> p(K + 1, std::vector<index_t>(m + 1, -1));
    c[0][0] = 0.0;

    if (alg == TotalAlgorithm::DynamicSimul) {
        if (!base.uniform()) throw Error("simultaneous recurrences need the same cost for every part");
        SweepOracle f(A, base, phi);
        for (index_t j = 1; j <= m; ++j) {
            for (index_t i = j - 1; i >= 0; --i) {
                if (static_cast<double>(weight[j] - weight[i]) > limit.w_max) break;
                double v = kInf;
                for (index_t k = 1; k <= K; ++k) {
                    if (j < cor.low[k] || j > cor.high[k] || c[k - 1][i] == kInf) continue;
                    if (v == kInf) v = f(0, i, j);
                    const double cand = c[k - 1][i] + v;
                    if (cand < c[k][j]) {
                        c[k][j] = cand;
                        p[k][j] = i;
                    }
                }
            }
        }
        r.queries = f.calls();
    } else {
        std::unique_ptr<SweepOracle> sweep;
        std::unique_ptr<CostOracle> offline;
        Shape shape = Shape::General;
        if (alg == TotalAlgorithm::Dynamic) {
            sweep = std::make_unique<SweepOracle>(A, base, phi);
        } else {
            shape = detail::shape_of(base);
            if (shape == Shape::General)
                throw ShapeError(std::string("objective ") + to_string(obj.kind) + " is neither convex nor concave");
            offline = std::make_unique<CostOracle>(A, base, phi);
        }
        for (index_t k = 1; k <= K; ++k) {
            LwsProblem P;
            P.base = cor.low[k - 1];
            P.top = cor.high[k];
            P.d.assign(P.top + 1, kInf);
            for (index_t i = cor.low[k - 1]; i <= std::min(cor.high[k - 1], P.top); ++i) P.d[i] = c[k - 1][i];
            P.weight = weight;
            P.w_max = limit.w_max;
            P.shape = shape;
            const index_t part = k - 1;
            if (sweep) P.f = [&, part](index_t i, index_t j) { return (*sweep)(part, i, j); };
            else P.f = [&, part](index_t i, index_t j) { return (*offline)(part, i, j); };
            const auto s = sweep ? lws_dp(P) : lws_solve(P);
            r.queries += s.queries;
            for (index_t j = cor.low[k]; j <= cor.high[k]; ++j) {
                c[k][j] = s.c[j];
                p[k][j] = s.p[j];
            }
        }
    }
    if (c[K][m] == kInf) return r;
    r.partition = detail::trace(p, m, K);
    r.cost = c[K][m];
    r.feasible = true;
    return r;
}

/**
 * @brief Variable part count with at most C rows per part, minimizing the total.
 *
 * With connectivity as the cost this counts the cache misses on x when each
 * block of rows runs with a cold cache.
 */
inline TotalResult block_partition(const CsrMatrix& A, const Objective& obj, index_t C, TotalAlgorithm alg) {
    if (C < 1) throw Error("block size must be positive");
    if (obj.needs_phi()) throw Error("block partitioning needs a uniform cost");
    const index_t m = A.rows();
    Objective base = obj;
    base.threshold.reset();
    LwsProblem P;
    P.base = 0;
    P.top = m;
    P.weight = weight_prefix(A, WeightKind::Rows);
    P.w_max = static_cast<double>(C);
    TotalResult r;
    r.offset = objective_offset(A, obj.kind);
    LwsSolution s;
    if (alg == TotalAlgorithm::Quadrangle) {
        P.shape = detail::shape_of(base);
        if (P.shape == Shape::General) throw ShapeError("block partitioning by quadrangle needs a convex or concave cost");
        CostOracle f(A, base);
        P.f = [&](index_t i, index_t j) { return f(0, i, j); };
        s = lws_solve(P);
    } else {
        SweepOracle f(A, base);
        P.f = [&](index_t i, index_t j) { return f(0, i, j); };
        s = lws_dp(P);
    }
    r.queries = s.queries;
    std::vector<index_t> splits{m};
    for (index_t j = m; j > 0; j = s.p[j]) splits.push_back(s.p[j]);
    if (m == 0) splits.push_back(0);
    std::reverse(splits.begin(), splits.end());
    r.partition.splits = std::move(splits);
    r.cost = s.c[m];
    r.feasible = true;
    return r;
}

/// Fixed stride C: parts [0, C), [C, 2C), ...
inline SplitPartition block_equally(index_t m, index_t C) {
    if (C < 1) throw Error("block size must be positive");
    SplitPartition P;
    for (index_t i = 0; i < m; i += C) P.splits.push_back(i);
    P.splits.push_back(m);
    if (m == 0) P.splits.insert(P.splits.begin(), 0);
    return P;
}

}  // namespace chainpart
