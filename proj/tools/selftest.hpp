#pragma once

// Quick oracle checks shipped with the binary.

#include <functional>
#include <ostream>
#include <random>
#include <set>

#include <chainpart/bottleneck.hpp>
#include <chainpart/dominance.hpp>
#include <chainpart/total.hpp>

namespace chainpart::cli {

namespace selftest_detail {

inline CsrMatrix random_matrix(std::mt19937_64& rng, index_t m, index_t n, double density) {
    std::bernoulli_distribution coin(density);
    std::vector<std::vector<index_t>> rows(m);
    for (auto& r : rows)
        for (index_t j = 0; j < n; ++j)
            if (coin(rng)) r.push_back(j);
    return CsrMatrix::from_rows(n, rows);
}

inline index_t draw(std::mt19937_64& rng, index_t lo, index_t hi) {
    return std::uniform_int_distribution<index_t>(lo, hi)(rng);
}

using Check = std::pair<const char*, std::function<bool()>>;

inline bool dominance_grid() {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        const index_t m = draw(rng, 1, 64), n = draw(rng, 1, 64);
        const auto A = random_matrix(rng, m, n, std::uniform_real_distribution<double>(0.01, 0.5)(rng));
        std::vector<std::pair<index_t, index_t>> pts;
        for (index_t i = 0; i < m; ++i)
            for (index_t j : A.row(i)) pts.emplace_back(i, j);
        const auto ps = make_point_set(m, n, pts);
        for (const auto& params : {CounterParams::chazelle(n), CounterParams::constant_passes(n)}) {
            const OfflineDominanceCounter ctr(ps, params);
            for (index_t i = 0; i <= m; ++i)
                for (index_t j = 0; j <= n; ++j) {
                    index_t want = 0;
                    for (auto [a, b] : pts) want += a < i && b < j;
                    if (ctr.count(i, j) != want) return false;
                }
        }
    }
    return true;
}

inline bool prefix_sums() {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        const index_t rows = draw(rng, 1, 64), cols = draw(rng, 1, 64);
        std::vector<std::pair<index_t, index_t>> pts(draw(rng, 0, 300));
        std::vector<std::vector<long>> dense(rows + 1, std::vector<long>(cols + 1, 0));
        for (auto& p : pts) p = {draw(rng, 0, rows - 1), draw(rng, 0, cols - 1)};
        const auto ps = make_point_set(rows, cols, pts);
        // values follow the sorted point order of the set
        std::vector<long> vals(ps.size());
        for (index_t r = 0, q = 0; r < rows; ++r)
            for (; q < ps.ptr[r + 1]; ++q) {
                vals[q] = static_cast<long>(draw(rng, -50, 50));
                dense[r + 1][ps.key[q] + 1] += vals[q];
            }
        for (index_t i = 1; i <= rows; ++i)
            for (index_t j = 1; j <= cols; ++j) dense[i][j] += dense[i - 1][j] + dense[i][j - 1] - dense[i - 1][j - 1];
        const SparsePrefixSum<long> sums(ps, std::span<const long>(vals), CounterParams::constant_passes(cols));
        for (index_t i = 0; i <= rows; ++i)
            for (index_t j = 0; j <= cols; ++j)
                if (sums.sum(i, j) != dense[i][j]) return false;
    }
    return true;
}

inline bool atom_backends() {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        const index_t m = draw(rng, 1, 24), n = draw(rng, 1, 24);
        const auto A = random_matrix(rng, m, n, 0.2);
        const unsigned mask = atom::All & ~atom::Local;
        OfflineAtoms off(A, mask, min_row_degree(A));
        OnlineAtoms on(A, mask, min_row_degree(A));
        for (index_t lo = 0; lo <= m; ++lo)
            for (index_t hi = lo; hi <= m; ++hi) {
                on.seek(lo, hi);
                const auto x = off.atoms(lo, hi);
                if (!(x == on.atoms())) return false;
                std::set<index_t> cols;
                for (index_t i = lo; i < hi; ++i) cols.insert(A.row(i).begin(), A.row(i).end());
                if (x.incident != static_cast<index_t>(cols.size())) return false;
            }
    }
    return true;
}

inline bool exact_bottleneck() {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const index_t m = draw(rng, 2, 10), K = draw(rng, 2, 3);
        const auto A = random_matrix(rng, m, draw(rng, 1, 10), 0.3);
        const Objective obj(ObjectiveKind::NonsymInitial, Coefficients::defaults_for(A));
        CostOracle f(A, obj);
        const auto r = nicol_partition(f, m, K, Direction::Increasing);
        double best = kInf;
        std::vector<index_t> s(K + 1, 0);
        s[K] = m;
        std::function<void(index_t)> rec = [&](index_t k) {
            if (k == K) {
                double c = -kInf;
                for (index_t p = 0; p < K; ++p) c = std::max(c, f.peek(0, s[p], s[p + 1]));
                best = std::min(best, c);
                return;
            }
            for (s[k] = s[k - 1]; s[k] <= m; ++s[k]) rec(k + 1);
        };
        rec(1);
        if (r.cost != best) return false;
    }
    return true;
}

inline bool lws_agreement() {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const index_t m = draw(rng, 1, 60);
        const auto A = random_matrix(rng, m, draw(rng, 1, 60), 0.1);
        CostOracle f(A, Objective(ObjectiveKind::Connectivity));
        LwsProblem P;
        P.top = m;
        P.f = [&](index_t i, index_t j) { return f(0, i, j); };
        P.shape = Shape::Convex;
        if (lws_dp(P).c != lws_quadrangle(P).c) return false;
    }
    return true;
}

}  // namespace selftest_detail

/// Prints one line per check; true when all pass.
inline bool run_selftest(std::ostream& out, bool dominance_only) {
    using namespace selftest_detail;
    std::vector<Check> checks = {{"dominance grid vs scan", dominance_grid}, {"prefix sums vs dense", prefix_sums}};
    if (!dominance_only) {
        checks.emplace_back("online vs offline atoms", atom_backends);
        checks.emplace_back("exact bottleneck vs enumeration", exact_bottleneck);
        checks.emplace_back("quadrangle vs dp", lws_agreement);
    }
    bool ok = true;
    for (const auto& [name, check] : checks) {
        const bool pass = check();
        ok = ok && pass;
        out << (pass ? "PASS " : "FAIL ") << name << '\n';
    }
    return ok;
}

}  // namespace chainpart::cli
