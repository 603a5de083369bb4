#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <chainpart/lws.hpp>
#include <chainpart/total.hpp>

#include "support.hpp"

using namespace chainpart;
using testing_support::for_each_split;
using testing_support::uniform;
using testing_support::uniform_real;

namespace {

struct Synthetic {
    std::vector<double> W;  // prefix weights
    std::vector<double> A;  // additive part
    Shape shape;
    double operator()(index_t i, index_t j) const {
        const double w = W[j] - W[i];
        const double core = shape == Shape::Convex ? std::sqrt(w) : w * w;
        return core + A[j] - A[i];
    }
};

Synthetic random_synthetic(std::mt19937_64& rng, index_t m, Shape shape) {
    Synthetic s{std::vector<double>(m + 1, 0.0), std::vector<double>(m + 1, 0.0), shape};
    for (index_t i = 1; i <= m; ++i) {
        s.W[i] = s.W[i - 1] + uniform(rng, 1, 9);
        s.A[i] = s.A[i - 1] + uniform(rng, -5, 5);
    }
    return s;
}

std::vector<index_t> random_weights(std::mt19937_64& rng, index_t m) {
    std::vector<index_t> w(m + 1, 0);
    for (index_t i = 1; i <= m; ++i) w[i] = w[i - 1] + uniform(rng, 1, 6);
    return w;
}

void expect_same_costs(const LwsSolution& a, const LwsSolution& b) {
    ASSERT_EQ(a.c.size(), b.c.size());
    for (std::size_t j = 0; j < a.c.size(); ++j) EXPECT_EQ(a.c[j], b.c[j]) << "position " << j;
}

/// Minimum summed cost over K nonempty parts, each within the threshold.
double enumerate_total(const CostOracle& f, index_t m, index_t K) {
    double best = kInf;
    for_each_split(m, K, true, [&](const std::vector<index_t>& s) {
        double t = 0;
        for (index_t k = 0; k < K; ++k) t += f.peek(k, s[k], s[k + 1]);
        best = std::min(best, t);
    });
    return best;
}

double log2m(index_t m) { return std::log2(static_cast<double>(std::max<index_t>(m, 2))); }

}  // namespace

TEST(Envelope, ConvexAndConcaveMatchScan) {
    std::mt19937_64 rng(2);
    for (Shape shape : {Shape::Convex, Shape::Concave}) {
        for (int t = 0; t < 30; ++t) {
            const index_t m = uniform(rng, 1, 40);
            auto f = random_synthetic(rng, m, shape);
            std::vector<double> d(m + 1);
            for (auto& x : d) x = uniform(rng, 0, 20);
            MongeEnvelope env(shape, m, [&](index_t i, index_t q) { return d[i] + f(i, q + 1); }, true);
            for (index_t j = 1; j <= m; ++j) {
                env.add(j - 1);
                auto [i, v] = env.query();
                double best = kInf;
                for (index_t s = 0; s < j; ++s) best = std::min(best, d[s] + f(s, j));
                EXPECT_EQ(v, best);
                EXPECT_EQ(v, d[i] + f(i, j));
            }
        }
    }
}

TEST(Envelope, RejectsGeneralShape) {
    EXPECT_THROW(MongeEnvelope(Shape::General, 3, [](index_t, index_t) { return 0.0; }), ShapeError);
}

TEST(Envelope, VerifyCatchesNoise) {
    std::mt19937_64 rng(4);
    bool caught = false;
    for (int t = 0; t < 50 && !caught; ++t) {
        std::vector<std::vector<double>> table(31, std::vector<double>(31));
        for (auto& row : table)
            for (auto& x : row) x = uniform(rng, 0, 100);
        try {
            LwsProblem P;
            P.top = 30;
            P.f = [&](index_t i, index_t j) { return table[i][j]; };
            P.shape = Shape::Convex;
            lws_quadrangle(P, true);
        } catch (const ShapeError&) {
            caught = true;
        }
    }
    EXPECT_TRUE(caught);
}

TEST(LwsDp, ZeroCostKeepsLastStart) {
    LwsProblem P;
    P.top = 6;
    P.f = [](index_t, index_t) { return 0.0; };
    auto s = lws_dp(P);
    for (index_t j = 1; j <= 6; ++j) {
        EXPECT_EQ(s.c[j], 0.0);
        EXPECT_EQ(s.p[j], j - 1);
    }
}

TEST(LwsDp, UnitPartCostTakesOnePart) {
    LwsProblem P;
    P.top = 6;
    P.f = [](index_t, index_t) { return 1.0; };
    auto s = lws_dp(P);
    for (index_t j = 1; j <= 6; ++j) EXPECT_EQ(s.c[j], 1.0);
}

TEST(LwsDp, ConnectivityWithRowLimitMatchesEnumeration) {
    std::mt19937_64 rng(6);
    auto A = testing_support::random_matrix(rng, 10, 10, 0.3);
    Objective obj(ObjectiveKind::Connectivity, {}, Threshold{WeightKind::Rows, 3});
    CostOracle f(A, obj);
    LwsProblem P;
    P.top = 10;
    P.f = [&](index_t i, index_t j) { return f(0, i, j); };
    P.weight = weight_prefix(A, WeightKind::Rows);
    P.w_max = 3;
    auto s = lws_dp(P);
    double best = kInf;
    for (index_t K = 1; K <= 10; ++K) best = std::min(best, enumerate_total(f, 10, K));
    EXPECT_EQ(s.c[10], best);
}

TEST(Lws, QuadrangleMatchesDp) {
    std::mt19937_64 rng(8);
    for (Shape shape : {Shape::Convex, Shape::Concave}) {
        for (int t = 0; t < 40; ++t) {
            const index_t m = uniform(rng, 1, 200);
            auto f = random_synthetic(rng, m, shape);
            LwsProblem P;
            P.top = m;
            P.f = f;
            P.shape = shape;
            auto fast = lws_quadrangle(P, true);
            expect_same_costs(fast, lws_dp(P));
            EXPECT_LE(static_cast<double>(fast.queries), 4.0 * m * log2m(m) + 8) << "m=" << m;
        }
    }
}

TEST(Lws, QuadrangleOnConnectivity) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 20; ++t) {
        const index_t m = uniform(rng, 1, 120), n = uniform(rng, 1, 80);
        auto A = testing_support::random_matrix(rng, m, n, uniform_real(rng, 0.01, 0.2));
        CostOracle f(A, Objective(ObjectiveKind::Connectivity));
        for (double sign : {1.0, -1.0}) {
            LwsProblem P;
            P.top = m;
            P.f = [&](index_t i, index_t j) { return sign * f(0, i, j); };
            P.shape = sign > 0 ? Shape::Convex : Shape::Concave;
            expect_same_costs(lws_quadrangle(P, true), lws_dp(P));
        }
    }
}

TEST(Lws, ConcaveWithLimitFoldsIntoCost) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 30; ++t) {
        const index_t m = uniform(rng, 1, 100);
        auto f = random_synthetic(rng, m, Shape::Concave);
        LwsProblem P;
        P.top = m;
        P.f = f;
        P.shape = Shape::Concave;
        P.weight = random_weights(rng, m);
        P.w_max = uniform(rng, 3, 30);
        expect_same_costs(lws_solve(P, true), lws_dp(P));
    }
}

TEST(Lws, ConstrainedConvexMatchesDp) {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 60; ++t) {
        const index_t m = uniform(rng, 1, 200);
        auto f = random_synthetic(rng, m, Shape::Convex);
        LwsProblem P;
        P.top = m;
        P.f = f;
        P.shape = Shape::Convex;
        P.weight = random_weights(rng, m);
        P.w_max = uniform(rng, 1, 40);
        auto fast = lws_constrained_convex(P, true);
        expect_same_costs(fast, lws_dp(P));
    }
}

TEST(Lws, ConstrainedConvexExplicitStartsAndOffsetBase) {
    std::mt19937_64 rng(16);
    for (int t = 0; t < 40; ++t) {
        const index_t m = uniform(rng, 2, 80);
        auto f = random_synthetic(rng, m, Shape::Convex);
        LwsProblem P;
        P.base = uniform(rng, 0, m / 2);
        P.top = m;
        P.f = f;
        P.shape = Shape::Convex;
        P.weight = random_weights(rng, m);
        P.w_max = uniform(rng, 1, 25);
        P.d.assign(m + 1, kInf);
        for (index_t i = P.base; i <= m; ++i)
            if (uniform(rng, 0, 3) > 0) P.d[i] = uniform(rng, 0, 50);
        expect_same_costs(lws_constrained_convex(P, true), lws_dp(P));
    }
}

TEST(Lws, ConstrainedConvexOnConnectivityWithEntryLimit) {
    std::mt19937_64 rng(18);
    for (int t = 0; t < 20; ++t) {
        const index_t m = uniform(rng, 1, 150), n = uniform(rng, 1, 60);
        auto A = testing_support::random_matrix(rng, m, n, uniform_real(rng, 0.02, 0.2));
        CostOracle f(A, Objective(ObjectiveKind::Connectivity));
        LwsProblem P;
        P.top = m;
        P.f = [&](index_t i, index_t j) { return f(0, i, j); };
        P.shape = Shape::Convex;
        P.weight = weight_prefix(A, WeightKind::Entries);
        P.w_max = uniform(rng, 1, 3 * n / 2 + 1);
        expect_same_costs(lws_constrained_convex(P), lws_dp(P));
    }
}

TEST(Lws, UnlimitedAndSingletonLimits) {
    std::mt19937_64 rng(20);
    const index_t m = 50;
    auto f = random_synthetic(rng, m, Shape::Convex);
    LwsProblem P;
    P.top = m;
    P.f = f;
    P.shape = Shape::Convex;
    expect_same_costs(lws_constrained_convex(P), lws_quadrangle(P));
    P.weight = weight_prefix(CsrMatrix::identity(m), WeightKind::Rows);
    P.w_max = 1;
    auto s = lws_constrained_convex(P);
    double sum = 0;
    for (index_t j = 1; j <= m; ++j) {
        sum += f(j - 1, j);
        EXPECT_EQ(s.p[j], j - 1);
    }
    EXPECT_NEAR(s.c[m], sum, 1e-9);
}

TEST(Lws, SetupTokensCoverExactlyTheFeasiblePairs) {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 200; ++t) {
        const index_t m = uniform(rng, 2, 40);
        auto w = random_weights(rng, m);
        LwsProblem P;
        P.top = m;
        P.weight = w;
        P.w_max = uniform(rng, 2, 30);
        const auto p_low = detail::least_starts(P);
        for (index_t b = 1; b <= m; ++b) {
            const index_t a = p_low[b];
            if (a == b || a == 0) continue;
            const auto tokens = detail::setup_tokens(p_low, a, b);
            std::set<std::pair<index_t, index_t>> seen;
            std::vector<index_t> starts;
            for (const auto& tk : tokens) {
                if (!tk.is_end) {
                    starts.push_back(tk.index);
                    continue;
                }
                for (index_t s : starts) {
                    EXPECT_TRUE(P.feasible(s, tk.index));
                    seen.insert({s, tk.index});
                }
            }
            for (index_t e = a + 1; e <= b; ++e)
                for (index_t s = 0; s < a; ++s)
                    if (P.feasible(s, e)) {
                        EXPECT_TRUE(seen.count({s, e})) << s << "," << e;
                    }
        }
    }
}

TEST(Lws, LeastStartsAreMonotone) {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 50; ++t) {
        const index_t m = uniform(rng, 1, 60);
        LwsProblem P;
        P.top = m;
        P.weight = random_weights(rng, m);
        P.w_max = uniform(rng, 1, 20);
        const auto p = detail::least_starts(P);
        for (index_t j = 2; j <= m; ++j) EXPECT_LE(p[j - 1], p[j]);
    }
}

TEST(Corridor, BoundsEveryFeasibleSplit) {
    std::mt19937_64 rng(26);
    for (int t = 0; t < 60; ++t) {
        const index_t m = uniform(rng, 1, 12), K = uniform(rng, 1, 4);
        auto w = random_weights(rng, m);
        const double w_max = uniform(rng, 3, 30);
        auto c = split_corridor(w, K, w_max);
        bool any = false;
        std::vector<index_t> lo(K + 1, m + 1), hi(K + 1, -1);
        for_each_split(m, K, true, [&](const std::vector<index_t>& s) {
            for (index_t k = 0; k < K; ++k)
                if (w[s[k + 1]] - w[s[k]] > w_max) return;
            any = true;
            for (index_t k = 0; k <= K; ++k) {
                lo[k] = std::min(lo[k], s[k]);
                hi[k] = std::max(hi[k], s[k]);
            }
        });
        ASSERT_EQ(c.feasible, any) << "m=" << m << " K=" << K;
        if (any) {
            EXPECT_EQ(c.low, lo);
            EXPECT_EQ(c.high, hi);
        }
    }
}

TEST(Total, IdentityConnectivityIsAdditive) {
    auto A = CsrMatrix::identity(7);
    for (auto alg : {TotalAlgorithm::Dynamic, TotalAlgorithm::DynamicSimul, TotalAlgorithm::Quadrangle}) {
        auto r = total_partition(A, Objective(ObjectiveKind::Connectivity), 2, alg);
        EXPECT_TRUE(r.feasible);
        EXPECT_EQ(r.cost, 7.0);
    }
}

TEST(Total, EntryThresholdExample) {
    auto A = CsrMatrix::from_rows(4, {{0, 1, 2}, {1}, {2, 3}, {0, 1, 2, 3}});
    Objective obj(ObjectiveKind::ChainsOnChains, {}, Threshold{WeightKind::Entries, 6});
    for (auto alg : {TotalAlgorithm::Dynamic, TotalAlgorithm::DynamicSimul, TotalAlgorithm::Quadrangle}) {
        auto r = total_partition(A, obj, 2, alg);
        ASSERT_TRUE(r.feasible);
        EXPECT_EQ(r.cost, 10.0);
        EXPECT_EQ(r.partition.splits, (std::vector<index_t>{0, 3, 4}));
    }
}

TEST(Total, SinglePart) {
    std::mt19937_64 rng(28);
    auto A = testing_support::random_matrix(rng, 9, 9, 0.3);
    CostOracle f(A, Objective(ObjectiveKind::Connectivity));
    auto r = total_partition(A, Objective(ObjectiveKind::Connectivity), 1, TotalAlgorithm::Quadrangle);
    EXPECT_EQ(r.partition.splits, (std::vector<index_t>{0, 9}));
    EXPECT_EQ(r.cost, f.peek(0, 0, 9));
}

TEST(Total, MatchesEnumerationUnderBalance) {
    std::mt19937_64 rng(30);
    int feasible = 0;
    for (int t = 0; t < 60; ++t) {
        const index_t m = uniform(rng, 1, 12), K = uniform(rng, 1, std::min<index_t>(4, m));
        auto A = testing_support::random_matrix(rng, m, uniform(rng, 1, 14), uniform_real(rng, 0.1, 0.5));
        for (auto kind : {ObjectiveKind::Connectivity, ObjectiveKind::HyperedgeCut, ObjectiveKind::EdgeCut}) {
            Objective obj(kind, {}, balance_threshold(A, K, 0.1));
            CostOracle f(A, obj);
            const double best = enumerate_total(f, m, K);
            for (auto alg : {TotalAlgorithm::Dynamic, TotalAlgorithm::DynamicSimul, TotalAlgorithm::Quadrangle}) {
                auto r = total_partition(A, obj, K, alg);
                EXPECT_EQ(r.feasible, best < kInf) << to_string(kind);
                if (!r.feasible) continue;
                ++feasible;
                EXPECT_EQ(r.cost, best) << to_string(kind) << " m=" << m << " K=" << K;
                double sum = 0;
                for (index_t k = 0; k < K; ++k) sum += f.peek(k, r.partition.begin(k), r.partition.end(k));
                EXPECT_EQ(sum, r.cost);
            }
        }
    }
    EXPECT_GT(feasible, 100);
}

TEST(Total, NonsymPerPartCosts) {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 25; ++t) {
        const index_t m = uniform(rng, 2, 10), K = uniform(rng, 2, std::min<index_t>(3, m));
        auto A = testing_support::random_nonempty_rows(rng, m, 0.3);
        MapPartition phi{K, std::vector<index_t>(m)};
        for (auto& k : phi.asgn) k = uniform(rng, 0, K - 1);
        Objective obj(ObjectiveKind::Nonsym, Coefficients::defaults_for(A), balance_threshold(A, K, 0.5));
        CostOracle f(A, obj, &phi);
        const double best = enumerate_total(f, m, K);
        for (auto alg : {TotalAlgorithm::Dynamic, TotalAlgorithm::Quadrangle}) {
            auto r = total_partition(A, obj, K, alg, &phi);
            if (best == kInf) {
                EXPECT_FALSE(r.feasible);
                continue;
            }
            EXPECT_EQ(r.cost, best);
        }
        EXPECT_THROW(total_partition(A, obj, K, TotalAlgorithm::DynamicSimul, &phi), Error);
    }
}

TEST(Total, InfeasibleWhenTooManyParts) {
    auto A = CsrMatrix::identity(3);
    EXPECT_FALSE(total_partition(A, Objective(ObjectiveKind::Connectivity), 4, TotalAlgorithm::Dynamic).feasible);
}

TEST(Total, OffsetsRecoverConventionalMetrics) {
    std::mt19937_64 rng(34);
    auto A = testing_support::random_matrix(rng, 10, 10, 0.3);
    for (auto kind : {ObjectiveKind::Connectivity, ObjectiveKind::HyperedgeCut, ObjectiveKind::EdgeCut}) {
        auto r = total_partition(A, Objective(kind), 3, TotalAlgorithm::Quadrangle);
        auto rep = evaluate(A, Objective(kind), r.partition);
        const double metric = r.cost + static_cast<double>(r.offset);
        const index_t expect = kind == ObjectiveKind::Connectivity   ? rep.connectivity
                               : kind == ObjectiveKind::HyperedgeCut ? rep.hyperedge_cut
                                                                     : rep.edge_cut;
        EXPECT_EQ(metric, static_cast<double>(expect)) << to_string(kind);
    }
}

TEST(Block, WholeAndSingletonBlocks) {
    std::mt19937_64 rng(36);
    auto A = testing_support::random_matrix(rng, 12, 12, 0.3);
    Objective conn(ObjectiveKind::Connectivity);
    for (auto alg : {TotalAlgorithm::Dynamic, TotalAlgorithm::Quadrangle}) {
        auto whole = block_partition(A, conn, 12, alg);
        EXPECT_EQ(whole.cost, static_cast<double>(nonempty_columns(A)));
        auto single = block_partition(A, conn, 1, alg);
        EXPECT_EQ(single.cost, static_cast<double>(A.nnz()));
        EXPECT_EQ(single.partition.parts(), 12);
    }
}

TEST(Block, DpAndQuadrangleAgreeAndRespectSize) {
    std::mt19937_64 rng(38);
    for (int t = 0; t < 10; ++t) {
        auto A = testing_support::random_matrix(rng, 30, 30, uniform_real(rng, 0.05, 0.3));
        Objective conn(ObjectiveKind::Connectivity);
        auto dp = block_partition(A, conn, 5, TotalAlgorithm::Dynamic);
        auto q = block_partition(A, conn, 5, TotalAlgorithm::Quadrangle);
        EXPECT_EQ(dp.cost, q.cost);
        for (const auto& r : {dp, q}) {
            ASSERT_TRUE(r.partition.valid_for(30));
            for (index_t k = 0; k < r.partition.parts(); ++k) {
                EXPECT_GE(r.partition.end(k) - r.partition.begin(k), 1);
                EXPECT_LE(r.partition.end(k) - r.partition.begin(k), 5);
            }
            EXPECT_EQ(evaluate(A, conn, r.partition).total, r.cost);
        }
        EXPECT_LE(dp.cost, evaluate(A, conn, block_equally(30, 5)).total);
    }
}

TEST(Block, EqualStride) {
    EXPECT_EQ(block_equally(10, 4).splits, (std::vector<index_t>{0, 4, 8, 10}));
    EXPECT_EQ(block_equally(8, 4).splits, (std::vector<index_t>{0, 4, 8}));
}
