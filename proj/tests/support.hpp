#pragma once

// Shared generators and brute-force oracles for the test binaries.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <chainpart/csr.hpp>

namespace testing_support {

using chainpart::CsrMatrix;
using chainpart::index_t;

inline CsrMatrix random_matrix(std::mt19937_64& rng, index_t m, index_t n, double density) {
    std::bernoulli_distribution coin(density);
    std::vector<std::vector<index_t>> rows(m);
    for (index_t i = 0; i < m; ++i)
        for (index_t j = 0; j < n; ++j)
            if (coin(rng)) rows[i].push_back(j);
    return CsrMatrix::from_rows(n, rows);
}

/// Random square matrix with every row holding at least one entry.
inline CsrMatrix random_nonempty_rows(std::mt19937_64& rng, index_t m, double density) {
    std::bernoulli_distribution coin(density);
    std::uniform_int_distribution<index_t> pick(0, m - 1);
    std::vector<std::vector<index_t>> rows(m);
    for (index_t i = 0; i < m; ++i) {
        for (index_t j = 0; j < m; ++j)
            if (coin(rng)) rows[i].push_back(j);
        if (rows[i].empty()) rows[i].push_back(pick(rng));
    }
    return CsrMatrix::from_rows(m, rows);
}

inline index_t uniform(std::mt19937_64& rng, index_t lo, index_t hi) {
    return std::uniform_int_distribution<index_t>(lo, hi)(rng);
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Points with primary < i and secondary < j.
inline index_t naive_dominance(const std::vector<std::pair<index_t, index_t>>& pts, index_t i, index_t j) {
    index_t c = 0;
    for (auto [a, b] : pts) c += (a < i && b < j);
    return c;
}

/// Calls visit(splits) for every nondecreasing split vector 0 = s0 <= ... <= sK = m.
inline void for_each_split(index_t m, index_t K, bool nonempty,
                           const std::function<void(const std::vector<index_t>&)>& visit) {
    std::vector<index_t> s(K + 1, 0);
    s[K] = m;
    std::function<void(index_t)> rec = [&](index_t k) {
        if (k == K) {
            visit(s);
            return;
        }
        const index_t lo = nonempty ? s[k - 1] + 1 : s[k - 1];
        const index_t hi = nonempty ? m - (K - k) : m;
        for (index_t v = lo; v <= hi; ++v) {
            s[k] = v;
            rec(k + 1);
        }
    };
    if (K == 1) {
        if (!nonempty || m >= 1) visit(s);
        return;
    }
    rec(1);
}

/// Explicit set algebra for a row window, the reference for every cost atom.
struct SetAtoms {
    index_t row = 0, entry = 0, delta_entry = 0, within = 0, contained = 0, incident = 0, local = 0, diagonal = 0;
};

inline SetAtoms set_atoms(const CsrMatrix& A, index_t lo, index_t hi, index_t w_min,
                          const std::vector<index_t>* phi = nullptr, index_t part = 0) {
    SetAtoms x;
    std::set<index_t> cols, diag;
    x.row = hi - lo;
    for (index_t i = lo; i < hi; ++i) {
        x.entry += A.degree(i);
        x.delta_entry += std::max<index_t>(A.degree(i) - w_min, 0);
        for (index_t j : A.row(i)) {
            cols.insert(j);
            diag.insert(j);
            if (j >= lo && j < hi) ++x.within;
        }
        if (i < A.cols()) diag.insert(i);
    }
    x.incident = static_cast<index_t>(cols.size());
    x.diagonal = static_cast<index_t>(diag.size());
    std::vector<char> outside(A.cols(), 0), seen(A.cols(), 0);
    for (index_t i = 0; i < A.rows(); ++i)
        for (index_t j : A.row(i)) {
            seen[j] = 1;
            if (i < lo || i >= hi) outside[j] = 1;
        }
    for (index_t j = 0; j < A.cols(); ++j) x.contained += seen[j] && !outside[j];
    if (phi)
        for (index_t j : cols) x.local += (*phi)[j] == part;
    return x;
}

}  // namespace testing_support
