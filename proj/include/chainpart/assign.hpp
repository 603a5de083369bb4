#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "csr.hpp"
#include "evaluation.hpp"
#include "objective.hpp"

namespace chainpart {

/// mt19937_64 with its own bounded draws, so seeded runs match across standard libraries.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, n) by rejection.
    index_t index(index_t n) {
        const std::uint64_t range = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x;
        do x = gen_();
        while (x >= limit);
        return static_cast<index_t>(x % range);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (index_t i = static_cast<index_t>(v.size()) - 1; i > 0; --i) std::swap(v[i], v[index(i + 1)]);
    }

private:
    std::mt19937_64 gen_;
};

/// Fixed row partition the columns are assigned against.
struct AssignContext {
    const CsrMatrix& A;
    SplitPartition rows;
    std::uint64_t seed = 0;
    Coefficients coef;
};

enum class AssignStrategy { Local, GreedyConn, Any };

namespace detail {

struct ColumnView {
    CsrMatrix At;                // columns as rows, entries are row indices
    std::vector<index_t> owner;  // part of every row
    index_t K = 0;
};

inline ColumnView column_view(const AssignContext& ctx) {
    if (!ctx.rows.valid_for(ctx.A.rows())) throw DimensionError("row partition does not match the matrix rows");
    return {transpose(ctx.A), ctx.rows.owners(), ctx.rows.parts()};
}

/// Empty columns carry no cost and are dealt out in turn.
struct RoundRobin {
    index_t K, next = 0;
    index_t operator()() {
        const index_t k = next;
        next = (next + 1) % K;
        return k;
    }
};

}  // namespace detail

/// Each column goes to the part of a uniformly chosen incident row.
inline MapPartition assign_local(const AssignContext& ctx) {
    const auto v = detail::column_view(ctx);
    SplitRng rng(ctx.seed);
    detail::RoundRobin spare{v.K};
    MapPartition phi{v.K, std::vector<index_t>(ctx.A.cols())};
    for (index_t j = 0; j < ctx.A.cols(); ++j) {
        const auto rows = v.At.row(j);
        phi.asgn[j] = rows.empty() ? spare() : v.owner[rows[rng.index(static_cast<index_t>(rows.size()))]];
    }
    return phi;
}

/// Each column goes to the part of its first nonzero.
inline MapPartition assign_any_incident(const AssignContext& ctx) {
    const auto v = detail::column_view(ctx);
    detail::RoundRobin spare{v.K};
    MapPartition phi{v.K, std::vector<index_t>(ctx.A.cols())};
    for (index_t j = 0; j < ctx.A.cols(); ++j) {
        const auto rows = v.At.row(j);
        phi.asgn[j] = rows.empty() ? spare() : v.owner[rows[0]];
    }
    return phi;
}

/**
 * @brief Columns in random order, each to its costliest incident part.
 *
 * Running costs start from the column-free model (every incident column is
 * received) and the chosen part stops paying c_message for the column.
 * Ties go to the lowest part index. Final part costs land in part_costs.
 */
inline MapPartition assign_greedy_conn(const AssignContext& ctx, std::vector<double>* part_costs = nullptr) {
    const auto v = detail::column_view(ctx);
    const auto initial = evaluate(ctx.A, Objective(ObjectiveKind::NonsymInitial, ctx.coef), ctx.rows);
    std::vector<double> cost = initial.part_costs;
    SplitRng rng(ctx.seed);
    std::vector<index_t> order(ctx.A.cols());
    std::iota(order.begin(), order.end(), index_t{0});
    rng.shuffle(order);
    detail::RoundRobin spare{v.K};
    MapPartition phi{v.K, std::vector<index_t>(ctx.A.cols(), -1)};
    for (index_t j : order) {
        const auto rows = v.At.row(j);
        if (rows.empty()) continue;
        // rows are sorted, so incident parts arrive in increasing order
        index_t best = -1;
        for (index_t i : rows) {
            const index_t k = v.owner[i];
            if (best < 0 || cost[k] > cost[best]) best = k;
        }
        phi.asgn[j] = best;
        cost[best] -= ctx.coef.c_message;
    }
    for (index_t j = 0; j < ctx.A.cols(); ++j)
        if (phi.asgn[j] < 0) phi.asgn[j] = spare();
    if (part_costs) *part_costs = std::move(cost);
    return phi;
}

inline MapPartition assign_columns(const AssignContext& ctx, AssignStrategy s) {
    switch (s) {
        case AssignStrategy::Local: return assign_local(ctx);
        case AssignStrategy::GreedyConn: return assign_greedy_conn(ctx);
        case AssignStrategy::Any: return assign_any_incident(ctx);
    }
    throw Error("unknown assignment strategy");
}

}  // namespace chainpart
