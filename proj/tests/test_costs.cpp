#include <gtest/gtest.h>

#include <random>

#include <chainpart/atoms.hpp>
#include <chainpart/bounds.hpp>
#include <chainpart/evaluation.hpp>
#include <chainpart/objective.hpp>
#include <chainpart/properties.hpp>

#include "support.hpp"

using namespace chainpart;
using testing_support::set_atoms;
using testing_support::uniform;

namespace {

CostAtoms to_atoms(const testing_support::SetAtoms& s) {
    return {s.row, s.entry, s.delta_entry, s.within, s.contained, s.incident, s.local, s.diagonal};
}

MapPartition random_phi(std::mt19937_64& rng, index_t n, index_t K) {
    MapPartition phi{K, std::vector<index_t>(n)};
    for (auto& k : phi.asgn) k = uniform(rng, 0, K - 1);
    return phi;
}

CsrMatrix degrees_3124() {
    return CsrMatrix::from_rows(4, {{0, 1, 2}, {1}, {2, 3}, {0, 1, 2, 3}});
}

}  // namespace

TEST(Atoms, EmptyWindowIsZero) {
    auto A = CsrMatrix::identity(4);
    OfflineAtoms off(A, atom::All & ~atom::Local, 1);
    for (index_t i = 0; i <= 4; ++i) EXPECT_EQ(off.atoms(i, i), CostAtoms{});
}

TEST(Atoms, IdentityFullRange) {
    const index_t m = 6;
    auto A = CsrMatrix::identity(m);
    OfflineAtoms off(A, atom::All & ~atom::Local, 1);
    auto x = off.atoms(0, m);
    EXPECT_EQ(x.row, m);
    EXPECT_EQ(x.entry, m);
    EXPECT_EQ(x.incident, m);
    EXPECT_EQ(x.diagonal, m);
    EXPECT_EQ(x.within, m);
    EXPECT_EQ(x.contained, m);
}

TEST(Atoms, BackendsAgreeWithSetAlgebra) {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 25; ++t) {
        const index_t m = uniform(rng, 1, 20), n = uniform(rng, 1, 24), K = uniform(rng, 1, 4);
        auto A = testing_support::random_matrix(rng, m, n, testing_support::uniform_real(rng, 0.05, 0.5));
        auto phi = random_phi(rng, n, K);
        const index_t w_min = min_row_degree(A);
        OfflineAtoms off(A, atom::All, w_min, &phi);
        OnlineAtoms on(A, atom::All, w_min, &phi);
        for (index_t hi = 0; hi <= m; ++hi)
            for (index_t lo = hi; lo >= 0; --lo)
                for (index_t k = 0; k < K; ++k) {
                    const auto want = to_atoms(set_atoms(A, lo, hi, w_min, &phi.asgn, k));
                    ASSERT_EQ(off.atoms(lo, hi, k), want) << lo << " " << hi << " " << k;
                    on.seek(lo, hi);
                    ASSERT_EQ(on.atoms(k), want) << lo << " " << hi << " " << k;
                }
    }
}

TEST(Atoms, InvariantsHold) {
    std::mt19937_64 rng(73);
    for (int t = 0; t < 10; ++t) {
        const index_t m = uniform(rng, 1, 16), n = uniform(rng, 1, 16);
        auto A = testing_support::random_matrix(rng, m, n, 0.3);
        auto phi = random_phi(rng, n, 3);
        OfflineAtoms off(A, atom::All, min_row_degree(A), &phi);
        for (index_t lo = 0; lo <= m; ++lo)
            for (index_t hi = lo; hi <= m; ++hi) {
                auto x = off.atoms(lo, hi, 1);
                EXPECT_LE(x.local, x.incident);
                EXPECT_LE(x.incident, x.entry);
                EXPECT_LE(x.incident, x.diagonal);
                EXPECT_LE(x.diagonal, x.incident + x.row);
                EXPECT_LE(x.within, x.entry);
                EXPECT_LE(x.delta_entry, x.entry);
            }
    }
}

TEST(Atoms, LocalNeedsPhi) {
    auto A = CsrMatrix::identity(3);
    EXPECT_THROW(OfflineAtoms(A, atom::Local, 0), Error);
    EXPECT_THROW(OnlineAtoms(A, atom::Local, 0), Error);
    EXPECT_THROW(CostOracle(A, Objective(ObjectiveKind::Nonsym)), Error);
}

TEST(Atoms, LinkIdentity) {
    std::mt19937_64 rng(79);
    for (int t = 0; t < 25; ++t) {
        const index_t m = uniform(rng, 1, 32);
        auto A = testing_support::random_matrix(rng, m, uniform(rng, 1, 32), 0.2);
        OfflineAtoms off(A, atom::Incident, 0);
        for (index_t lo = 0; lo <= m; ++lo)
            for (index_t hi = lo; hi <= m; ++hi) {
                std::set<index_t> cols;
                index_t entries = 0;
                for (index_t i = lo; i < hi; ++i) {
                    entries += A.degree(i);
                    cols.insert(A.row(i).begin(), A.row(i).end());
                }
                ASSERT_EQ(entries - off.links(lo, hi), static_cast<index_t>(cols.size()));
            }
    }
}

TEST(Objective, EmptyPartCostsZero) {
    auto A = degrees_3124();
    for (auto kind : {ObjectiveKind::EdgeCut, ObjectiveKind::HyperedgeCut, ObjectiveKind::Connectivity,
                      ObjectiveKind::ChainsOnChains, ObjectiveKind::Work, ObjectiveKind::NonsymInitial,
                      ObjectiveKind::MonoSymmetric})
        EXPECT_EQ(CostOracle(A, Objective(kind, Coefficients::defaults_for(A)))(0, 2, 2), 0.0);
}

TEST(Objective, MonoSymmetricIdentityHandValue) {
    const index_t m = 5;
    auto A = CsrMatrix::identity(m);
    Coefficients c{2.0, 1.0, 3.0, 1};
    CostOracle f(A, Objective(ObjectiveKind::MonoSymmetric, c));
    EXPECT_DOUBLE_EQ(f(0, 0, m), 3.0 * m);
}

TEST(Objective, ChainsOnChainsIsEntryCount) {
    CostOracle f(degrees_3124(), Objective(ObjectiveKind::ChainsOnChains));
    EXPECT_EQ(f(0, 0, 3), 6.0);
    EXPECT_EQ(f.calls(), 1);
}

TEST(Objective, ThresholdTripsToInfinity) {
    Objective obj(ObjectiveKind::ChainsOnChains, {}, Threshold{WeightKind::Entries, 6});
    CostOracle f(degrees_3124(), obj);
    EXPECT_EQ(f(0, 0, 3), 6.0);
    EXPECT_EQ(f(0, 0, 4), kInf);
    EXPECT_EQ(xmul(0.0, kInf), 0.0);
    EXPECT_EQ(xmul(2.0, kInf), kInf);
}

TEST(Objective, SumsMatchConventionalMetrics) {
    std::mt19937_64 rng(83);
    for (int t = 0; t < 30; ++t) {
        const index_t m = uniform(rng, 1, 14);
        auto A = testing_support::random_matrix(rng, m, uniform(rng, 1, 14), 0.3);
        const index_t K = uniform(rng, 1, 4);
        std::vector<index_t> s{0};
        for (index_t k = 1; k < K; ++k) s.push_back(uniform(rng, s.back(), m));
        s.push_back(m);
        SplitPartition P{s};
        auto owner = P.owners();

        // direct computation of the three metrics
        index_t edge = 0, hyper = 0, lambda = 0;
        for (index_t i = 0; i < m; ++i)
            for (index_t j : A.row(i)) edge += j < m && owner[i] != owner[j];
        auto T = transpose(A);
        for (index_t j = 0; j < A.cols(); ++j) {
            std::set<index_t> parts;
            for (index_t i : T.row(j)) parts.insert(owner[i]);
            if (parts.empty()) continue;
            hyper += parts.size() > 1;
            lambda += static_cast<index_t>(parts.size()) - 1;
        }

        auto sum = [&](ObjectiveKind kind) {
            CostOracle f(A, Objective(kind));
            double total = 0;
            for (index_t k = 0; k < K; ++k) total += f(k, P.begin(k), P.end(k));
            return static_cast<index_t>(total) + objective_offset(A, kind);
        };
        EXPECT_EQ(sum(ObjectiveKind::EdgeCut), edge);
        EXPECT_EQ(sum(ObjectiveKind::HyperedgeCut), hyper);
        EXPECT_EQ(sum(ObjectiveKind::Connectivity), lambda);

        auto report = evaluate(A, Objective(ObjectiveKind::Connectivity), P);
        EXPECT_EQ(report.edge_cut, edge);
        EXPECT_EQ(report.hyperedge_cut, hyper);
        EXPECT_EQ(report.connectivity, lambda);
        EXPECT_EQ(static_cast<index_t>(report.total) + report.offset, lambda);
    }
}

TEST(Properties, ChainsOnChainsIsIncreasingAndAdditive) {
    auto A = degrees_3124();
    Objective obj(ObjectiveKind::ChainsOnChains);
    for (auto p : {Property::Increasing, Property::Subadditive, Property::Superadditive, Property::Convex,
                   Property::Concave})
        EXPECT_TRUE(check_property(obj, A, p).holds) << to_string(p);
    EXPECT_FALSE(check_property(obj, A, Property::Decreasing).holds);
}

TEST(Properties, DeclaredFlagsHoldOnRandomMatrices) {
    std::mt19937_64 rng(89);
    const Property all[] = {Property::Increasing, Property::Decreasing, Property::Subadditive,
                            Property::Superadditive, Property::Convex, Property::Concave};
    for (int t = 0; t < 15; ++t) {
        const index_t m = uniform(rng, 1, 18);
        auto A = testing_support::random_matrix(rng, m, uniform(rng, 1, 18), 0.3);
        auto phi = random_phi(rng, A.cols(), 2);
        auto coef = Coefficients::defaults_for(A);
        coef.c_message = coef.c_row + coef.w_min * coef.c_entry;  // keep the symmetric cost monotone
        for (auto kind : {ObjectiveKind::EdgeCut, ObjectiveKind::HyperedgeCut, ObjectiveKind::Connectivity,
                          ObjectiveKind::ChainsOnChains, ObjectiveKind::Work, ObjectiveKind::NonsymInitial,
                          ObjectiveKind::Nonsym, ObjectiveKind::MonoSymmetric}) {
            Objective obj(kind, coef);
            for (auto p : all)
                if (obj.flags().has(p)) {
                    auto v = check_property(obj, A, p, &phi);
                    EXPECT_TRUE(v.holds) << to_string(kind) << " " << v.describe();
                }
        }
        Objective capped(ObjectiveKind::ChainsOnChains, coef, Threshold{WeightKind::Rows, 3});
        for (auto p : all)
            if (capped.flags().has(p)) {
                EXPECT_TRUE(check_property(capped, A, p).holds) << to_string(p);
            }
    }
}

TEST(Properties, MonoSymmetricViolationYieldsCounterexample) {
    // two identical dense rows: the second row adds no new column or diagonal cell
    auto A = CsrMatrix::from_rows(2, {{0, 1}, {0, 1}});
    Objective obj(ObjectiveKind::MonoSymmetric, Coefficients::defaults_for(A));
    ASSERT_FALSE(obj.coef.monotone_symmetric());
    EXPECT_FALSE(obj.flags().increasing);
    auto v = check_property(obj, A, Property::Increasing);
    EXPECT_FALSE(v.holds);
    EXPECT_GT(v.lhs, v.rhs);
}

TEST(Properties, SampledModeOnLargerMatrix) {
    std::mt19937_64 rng(97);
    auto A = testing_support::random_matrix(rng, 100, 100, 0.05);
    Objective obj(ObjectiveKind::Connectivity);
    EXPECT_TRUE(check_property(obj, A, Property::Convex, nullptr, 64).holds);
    EXPECT_TRUE(check_property(obj, A, Property::Increasing, nullptr, 64).holds);
    EXPECT_FALSE(check_property(obj, A, Property::Concave, nullptr, 64).holds);
}

TEST(Bounds, ChainsOnChainsHandValues) {
    auto A = degrees_3124();
    auto b = bounds_for(A, Objective(ObjectiveKind::ChainsOnChains), 2);
    EXPECT_EQ(b.low, 5.0);
    EXPECT_EQ(b.high, 10.0);
    auto one = bounds_for(A, Objective(ObjectiveKind::ChainsOnChains), 1);
    EXPECT_EQ(one.low, 10.0);
    EXPECT_EQ(one.high, 10.0);
}

TEST(Bounds, DecreasingAndNonMonotone) {
    auto A = CsrMatrix::identity(4);
    auto b = bounds_for(A, Objective(ObjectiveKind::HyperedgeCut), 2);
    EXPECT_EQ(b.low, -4.0);
    EXPECT_EQ(b.high, 0.0);
    auto heavy = CsrMatrix::from_rows(2, {{0, 1}, {0, 1}});
    EXPECT_THROW(bounds_for(heavy, Objective(ObjectiveKind::MonoSymmetric, Coefficients::defaults_for(heavy)), 2),
                 Error);
}

TEST(Bounds, SubadditiveLowerBoundBelowOptimum) {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 30; ++t) {
        const index_t m = uniform(rng, 2, 12), K = uniform(rng, 1, 4);
        auto A = testing_support::random_matrix(rng, m, m, 0.3);
        Objective obj(ObjectiveKind::NonsymInitial, Coefficients::defaults_for(A));
        CostOracle f(A, obj);
        double best = kInf;
        testing_support::for_each_split(m, K, false, [&](const std::vector<index_t>& s) {
            double c = -kInf;
            for (index_t k = 0; k < K; ++k) c = std::max(c, f.peek(k, s[k], s[k + 1]));
            best = std::min(best, c);
        });
        auto b = bounds_for(A, obj, K);
        EXPECT_LE(b.low, best);
        EXPECT_GE(b.high, best);
        EXPECT_GE(best, f.peek(0, 0, m) / K - 1e-9);
    }
}
