#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <chainpart/assign.hpp>
#include <chainpart/bottleneck.hpp>
#include <chainpart/evaluation.hpp>
#include <chainpart/matrix_market.hpp>
#include <chainpart/total.hpp>

#include "partition_io.hpp"

namespace chainpart::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kIo = 3, kSelftestFailed = 4 };

/// Objective and algorithm that cannot be combined, or bad parameters.
struct UsageError : Error {
    using Error::Error;
};

struct InfeasibleError : Error {
    using Error::Error;
};

enum class Family { Fixed, Bottleneck, Total, Block, Assign };
enum class Algorithm { None, Exact, Approx, Lazy, Dynamic, DynamicSimul, Quadrangle };

struct Strategy {
    const char* name;
    Family family;
    ObjectiveKind kind;
    Algorithm default_alg;
    bool randomized = false;
};

inline const std::vector<Strategy>& strategies() {
    using K = ObjectiveKind;
    static const std::vector<Strategy> table = {
        {"split-equally", Family::Fixed, K::NonsymInitial, Algorithm::None},
        {"balance-work", Family::Bottleneck, K::Work, Algorithm::Exact},
        {"balance-mono-conn", Family::Bottleneck, K::MonoSymmetric, Algorithm::Exact},
        {"balance-conn", Family::Bottleneck, K::NonsymInitial, Algorithm::Exact},
        {"chains-on-chains", Family::Bottleneck, K::ChainsOnChains, Algorithm::Exact},
        {"balance-hyper-cut", Family::Bottleneck, K::HyperedgeCut, Algorithm::Exact},
        {"split-simple-cut", Family::Total, K::EdgeCut, Algorithm::Dynamic},
        {"split-hyper-cut", Family::Total, K::HyperedgeCut, Algorithm::Dynamic},
        {"split-conn", Family::Total, K::Connectivity, Algorithm::Dynamic},
        {"block-equally", Family::Block, K::Connectivity, Algorithm::None},
        {"block-conn", Family::Block, K::Connectivity, Algorithm::Dynamic},
        {"assign-local", Family::Assign, K::Nonsym, Algorithm::Exact, true},
        {"assign-greedy-conn", Family::Assign, K::Nonsym, Algorithm::Exact, true},
        {"assign-any", Family::Assign, K::Nonsym, Algorithm::Exact},
    };
    return table;
}

inline const Strategy& strategy(const std::string& name) {
    for (const auto& s : strategies())
        if (name == s.name) return s;
    throw UsageError("unknown objective '" + name + "'");
}

inline const std::vector<std::pair<const char*, Algorithm>>& algorithm_names() {
    static const std::vector<std::pair<const char*, Algorithm>> names = {
        {"exact", Algorithm::Exact},       {"approx", Algorithm::Approx},
        {"lazy", Algorithm::Lazy},         {"dynamic", Algorithm::Dynamic},
        {"dynamic-simul", Algorithm::DynamicSimul}, {"quadrangle", Algorithm::Quadrangle},
    };
    return names;
}

inline Algorithm parse_algorithm(const std::string& name) {
    if (name.empty()) return Algorithm::None;
    for (auto [n, a] : algorithm_names())
        if (name == n) return a;
    throw UsageError("unknown algorithm '" + name + "'");
}

inline std::string to_string(Algorithm a) {
    for (auto [n, x] : algorithm_names())
        if (x == a) return n;
    return "none";
}

/// Everything one partitioning run needs.
struct RunConfig {
    std::string matrix;
    std::string obj = "balance-conn";
    std::string alg;  // empty: the strategy's default
    index_t K = 2;
    double eps = 0.1;
    std::optional<double> c_row, c_entry, c_message;
    std::optional<index_t> w_min;
    double balance = 0.1;  // negative: no balance constraint
    index_t block_size = 64;
    std::uint64_t seed = 0;
    bool symmetric = false;
    std::string fixed_phi, fixed_pi, out;
};

/**
 * Defaults overridden by flags. Without --w-min the monotonized symmetric
 * cost raises w_min until it is increasing; underfull rows then count as
 * holding w_min entries.
 */
inline Coefficients coefficients(const RunConfig& cfg, const CsrMatrix& A, ObjectiveKind kind) {
    Coefficients c = Coefficients::defaults_for(A);
    if (cfg.c_row) c.c_row = *cfg.c_row;
    if (cfg.c_entry) c.c_entry = *cfg.c_entry;
    if (cfg.c_message) c.c_message = *cfg.c_message;
    if (cfg.w_min) c.w_min = *cfg.w_min;
    if (!c.nonnegative()) throw UsageError("coefficients must be nonnegative");
    if (kind == ObjectiveKind::MonoSymmetric && !cfg.w_min && !c.monotone_symmetric() && c.c_entry > 0)
        c.w_min = std::max(c.w_min, static_cast<index_t>(std::ceil((c.c_message - c.c_row) / c.c_entry)));
    return c;
}

/// Pattern of A + A^T, for square matrices.
inline CsrMatrix symmetrize(const CsrMatrix& A) {
    if (A.rows() != A.cols()) throw UsageError("--symmetric needs a square matrix");
    const auto T = transpose(A);
    std::vector<std::vector<index_t>> rows(A.rows());
    for (index_t i = 0; i < A.rows(); ++i) {
        const auto a = A.row(i), t = T.row(i);
        std::set_union(a.begin(), a.end(), t.begin(), t.end(), std::back_inserter(rows[i]));
    }
    return CsrMatrix::from_rows(A.cols(), rows);
}

inline CsrMatrix load_input(const RunConfig& cfg) {
    if (cfg.matrix.empty()) throw UsageError("no matrix given");
    auto A = load_matrix_market(cfg.matrix);
    return cfg.symmetric ? symmetrize(A) : A;
}

/// Outcome of one run; exactly one of split and map is set.
struct Outcome {
    std::optional<SplitPartition> split;
    std::optional<MapPartition> map;
    SplitPartition rows;  // row partition the map refers to
    std::string objective;
    std::string algorithm;
    double cost = kInf;
    index_t offset = 0;
    double metric = kInf;  // cost plus offset
    index_t probes = 0;
    index_t queries = 0;
};

inline json to_json(const Outcome& o) {
    json j = {{"objective", o.objective}, {"algorithm", o.algorithm}, {"cost", o.cost},   {"offset", o.offset},
              {"metric", o.metric},       {"probes", o.probes},       {"queries", o.queries}};
    if (o.split) j["partition"] = to_json(*o.split);
    if (o.map) {
        j["partition"] = to_json(*o.map);
        j["rows"] = to_json(o.rows);
    }
    return j;
}

inline PartitionResult solve_bottleneck(const CsrMatrix& A, const Objective& obj, index_t K, Algorithm alg, double eps,
                                        const MapPartition* phi) {
    Direction dir;
    try {
        dir = direction_of(obj);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const auto b = bounds_for(A, obj, K, phi);
    const index_t m = A.rows();
    auto need_positive = [&] {
        if (!(eps > 0.0)) throw UsageError("approximate partitioners need --eps > 0");
        if (!(b.low > 0.0)) throw UsageError("approximate partitioners need a positive lower cost bound; use --alg exact");
    };
    switch (alg) {
        case Algorithm::Exact: {
            CostOracle f(A, obj, phi);
            return nicol_partition(f, m, K, b.low, b.high, dir);
        }
        case Algorithm::Approx: {
            need_positive();
            CostOracle f(A, obj, phi);
            return bisect_partition(f, m, K, b.low, b.high, eps, dir);
        }
        case Algorithm::Lazy: {
            if (dir != Direction::Increasing) throw UsageError("lazy needs an increasing objective");
            if (obj.required_atoms() & (atom::Within | atom::Contained)) throw UsageError("lazy cannot track cut costs");
            need_positive();
            return lazy_bisect_partition(A, obj, K, b.low, b.high, eps, phi);
        }
        default: throw UsageError(to_string(alg) + " is not a bottleneck algorithm");
    }
}

inline TotalAlgorithm total_algorithm(Algorithm a) {
    switch (a) {
        case Algorithm::Dynamic: return TotalAlgorithm::Dynamic;
        case Algorithm::DynamicSimul: return TotalAlgorithm::DynamicSimul;
        case Algorithm::Quadrangle: return TotalAlgorithm::Quadrangle;
        default: throw UsageError(to_string(a) + " is not a total-cost algorithm");
    }
}

inline double max_of(const std::vector<double>& v) { return v.empty() ? -kInf : *std::max_element(v.begin(), v.end()); }

/**
 * @brief Runs one strategy on A.
 *
 * phi is a fixed column partition (balance-conn then balances the
 * nonsymmetric cost), pi a fixed row partition for the assign strategies.
 */
inline Outcome run_partition(const CsrMatrix& A, const RunConfig& cfg, const MapPartition* phi = nullptr,
                             const SplitPartition* pi = nullptr) {
    const Strategy& s = strategy(cfg.obj);
    const Algorithm alg = cfg.alg.empty() ? s.default_alg : parse_algorithm(cfg.alg);
    const Coefficients coef = coefficients(cfg, A, s.kind);
    if (cfg.K < 1) throw UsageError("-K must be at least 1");
    if (phi && (phi->K < 1 || static_cast<index_t>(phi->asgn.size()) != A.cols()))
        throw DimensionError("column partition length differs from the column count");
    Outcome o;
    o.objective = s.name;
    o.algorithm = to_string(alg);
    auto no_algorithm = [&] {
        if (alg != Algorithm::None) throw UsageError(std::string(s.name) + " takes no algorithm");
    };

    switch (s.family) {
        case Family::Fixed: {
            no_algorithm();
            o.split = SplitPartition::equal(A.rows(), cfg.K);
            o.cost = evaluate(A, Objective(s.kind, coef), *o.split).bottleneck;
            break;
        }
        case Family::Bottleneck: {
            ObjectiveKind kind = s.kind;
            if (phi) {
                if (s.kind != ObjectiveKind::NonsymInitial) throw UsageError("--fixed-phi only applies to balance-conn");
                kind = ObjectiveKind::Nonsym;
            }
            if (kind == ObjectiveKind::MonoSymmetric && A.rows() != A.cols())
                throw UsageError("balance-mono-conn needs a square matrix");
            const auto r = solve_bottleneck(A, Objective(kind, coef), cfg.K, alg, cfg.eps, phi);
            if (!r.feasible) throw InfeasibleError("no partition within the cost bounds");
            o.split = r.partition;
            o.cost = r.cost;
            o.probes = r.probes;
            o.queries = r.calls;
            break;
        }
        case Family::Total: {
            std::optional<Threshold> t;
            if (cfg.balance >= 0) t = balance_threshold(A, cfg.K, cfg.balance);
            const auto r = total_partition(A, Objective(s.kind, coef, t), cfg.K, total_algorithm(alg));
            if (!r.feasible) throw InfeasibleError("no " + std::to_string(cfg.K) + "-partition meets the balance constraint");
            o.split = r.partition;
            o.cost = r.cost;
            o.offset = r.offset;
            o.queries = r.queries;
            break;
        }
        case Family::Block: {
            if (cfg.block_size < 1) throw UsageError("--block-size must be positive");
            const Objective obj(s.kind, coef);
            if (s.default_alg == Algorithm::None) {
                no_algorithm();
                o.split = block_equally(A.rows(), cfg.block_size);
                o.cost = evaluate(A, obj, *o.split).total;
            } else {
                if (alg == Algorithm::DynamicSimul) throw UsageError("block-conn has no simultaneous recurrences");
                const auto r = block_partition(A, obj, cfg.block_size, total_algorithm(alg));
                o.split = r.partition;
                o.cost = r.cost;
                o.queries = r.queries;
            }
            break;
        }
        case Family::Assign: {
            if (phi) throw UsageError("assign strategies compute the column partition themselves");
            if (pi) {
                if (!pi->valid_for(A.rows())) throw DimensionError("row partition does not match the matrix rows");
                o.rows = *pi;
                o.algorithm = "fixed";
            } else {
                const auto r = solve_bottleneck(A, Objective(ObjectiveKind::NonsymInitial, coef), cfg.K,
                                                alg == Algorithm::None ? Algorithm::Exact : alg, cfg.eps, nullptr);
                if (!r.feasible) throw InfeasibleError("no row partition within the cost bounds");
                o.rows = r.partition;
                o.probes = r.probes;
                o.queries = r.calls;
            }
            const AssignStrategy how = s.name == std::string("assign-local")     ? AssignStrategy::Local
                                       : s.name == std::string("assign-any") ? AssignStrategy::Any
                                                                                  : AssignStrategy::GreedyConn;
            o.map = assign_columns(AssignContext{A, o.rows, cfg.seed, coef}, how);
            o.cost = evaluate(A, Objective(ObjectiveKind::Nonsym, coef), o.rows, &*o.map).bottleneck;
            break;
        }
    }
    o.metric = o.cost + static_cast<double>(o.offset);
    return o;
}

/// Cost report of a stored partition; cost follows the strategy's family.
inline json run_evaluate(const CsrMatrix& A, const RunConfig& cfg, const SplitPartition& P,
                         const MapPartition* phi) {
    const Strategy& s = strategy(cfg.obj);
    const Coefficients coef = coefficients(cfg, A, s.kind);
    if (!P.valid_for(A.rows())) throw DimensionError("partition does not match the matrix rows");
    ObjectiveKind kind = s.kind;
    if (s.family == Family::Bottleneck && phi) {
        if (s.kind != ObjectiveKind::NonsymInitial) throw UsageError("--fixed-phi only applies to balance-conn");
        kind = ObjectiveKind::Nonsym;
    }
    if (kind == ObjectiveKind::Nonsym && !phi) throw UsageError(std::string(s.name) + " needs --fixed-phi");
    if (phi && static_cast<index_t>(phi->asgn.size()) != A.cols())
        throw DimensionError("column partition length differs from the column count");
    const auto rep = evaluate(A, Objective(kind, coef), P, kind == ObjectiveKind::Nonsym ? phi : nullptr);
    const bool summed = s.family == Family::Total || s.family == Family::Block;
    const index_t offset = s.family == Family::Total ? rep.offset : 0;
    const double cost = summed ? rep.total : rep.bottleneck;
    return {{"objective", s.name},
            {"K", P.parts()},
            {"part_costs", rep.part_costs},
            {"bottleneck", rep.bottleneck},
            {"total", rep.total},
            {"cost", cost},
            {"offset", offset},
            {"metric", cost + static_cast<double>(offset)},
            {"edge_cut", rep.edge_cut},
            {"hyperedge_cut", rep.hyperedge_cut},
            {"connectivity", rep.connectivity}};
}

}  // namespace chainpart::cli
