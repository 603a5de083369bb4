#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "objective.hpp"

namespace chainpart {

struct PropertyVerdict {
    bool holds = true;
    Property property = Property::Increasing;
    index_t part = 0;
    std::array<index_t, 4> witness{};  // window bounds of the violated inequality
    double lhs = 0.0, rhs = 0.0;       // violated: lhs <= rhs

    std::string describe() const {
        std::ostringstream os;
        os << to_string(property) << (holds ? " holds" : " fails");
        if (!holds)
            os << " at (" << witness[0] << ", " << witness[1] << ", " << witness[2] << ", " << witness[3]
               << ") part " << part << ": " << lhs << " > " << rhs;
        return os.str();
    }
};

namespace detail {

/// a <= b up to rounding, with +inf handled exactly.
inline bool approx_le(double a, double b) {
    if (a == b) return true;
    if (std::isinf(a) || std::isinf(b)) return a < b;
    return a <= b + 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Sum that keeps +inf absorbing; the objectives never produce -inf.
inline double ext_add(double a, double b) { return a + b; }

template <class F>
PropertyVerdict check_table(F&& f, index_t m, Property p, bool exhaustive, std::uint64_t seed, index_t samples) {
    PropertyVerdict v;
    v.property = p;
    auto fail = [&](std::array<index_t, 4> w, double lhs, double rhs) {
        v.holds = false;
        v.witness = w;
        v.lhs = lhs;
        v.rhs = rhs;
    };
    // f(i, j) <= g: recorded as a violation when it does not hold
    auto le = [&](double lhs, double rhs, std::array<index_t, 4> w) {
        if (!approx_le(lhs, rhs)) {
            fail(w, lhs, rhs);
            return false;
        }
        return true;
    };
    // containment test shared by both monotone directions: smaller window [i, j) in larger [a, b)
    auto monotone = [&](index_t i, index_t j, index_t a, index_t b) {
        const double small = f(i, j), large = f(a, b);
        return p == Property::Increasing ? le(small, large, {i, j, a, b}) : le(large, small, {i, j, a, b});
    };
    auto additive = [&](index_t i, index_t l, index_t j) {
        const double whole = f(i, j), split = ext_add(f(i, l), f(l, j));
        return p == Property::Subadditive ? le(whole, split, {i, l, l, j}) : le(split, whole, {i, l, l, j});
    };
    // quadrangle over i <= a <= j <= b
    auto quadrangle = [&](index_t i, index_t a, index_t j, index_t b) {
        const double inner = ext_add(f(i, j), f(a, b)), outer = ext_add(f(i, b), f(a, j));
        return p == Property::Concave ? le(inner, outer, {i, a, j, b}) : le(outer, inner, {i, a, j, b});
    };

    if (exhaustive) {
        switch (p) {
            case Property::Increasing:
            case Property::Decreasing:
                for (index_t a = 0; a <= m; ++a)
                    for (index_t b = a; b <= m; ++b) {
                        // every empty window is contained in every window
                        for (index_t e = 0; e <= m; ++e)
                            if (!monotone(e, e, a, b)) return v;
                        for (index_t i = a; i <= b; ++i)
                            for (index_t j = i + 1; j <= b; ++j)
                                if (!monotone(i, j, a, b)) return v;
                    }
                return v;
            case Property::Subadditive:
            case Property::Superadditive:
                for (index_t i = 0; i <= m; ++i)
                    for (index_t j = i; j <= m; ++j)
                        for (index_t l = i; l <= j; ++l)
                            if (!additive(i, l, j)) return v;
                return v;
            case Property::Convex:
            case Property::Concave:
                for (index_t i = 0; i <= m; ++i)
                    for (index_t a = i; a <= m; ++a)
                        for (index_t j = a; j <= m; ++j)
                            for (index_t b = j; b <= m; ++b)
                                if (!quadrangle(i, a, j, b)) return v;
                return v;
        }
        return v;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<index_t> pick(0, m);
    for (index_t s = 0; s < samples; ++s) {
        std::array<index_t, 4> q{pick(rng), pick(rng), pick(rng), pick(rng)};
        std::sort(q.begin(), q.end());
        bool ok = true;
        switch (p) {
            case Property::Increasing:
            case Property::Decreasing: ok = monotone(q[1], q[2], q[0], q[3]); break;
            case Property::Subadditive:
            case Property::Superadditive: ok = additive(q[0], q[1], q[3]); break;
            case Property::Convex:
            case Property::Concave: ok = quadrangle(q[0], q[1], q[2], q[3]); break;
        }
        if (!ok) return v;
    }
    return v;
}

}  // namespace detail

/**
 * @brief Checks one defining inequality of a property for a window cost f(lo, hi).
 *
 * Windows up to `exhaustive_limit` rows are checked over every index tuple,
 * larger ones on `samples` random sorted tuples. Costs are tabulated first.
 */
template <class F>
PropertyVerdict check_property(F&& f, index_t m, Property p, index_t exhaustive_limit = 64, std::uint64_t seed = 1,
                               index_t samples = 200000) {
    if (m <= exhaustive_limit) {
        std::vector<double> table((m + 1) * (m + 1), 0.0);
        for (index_t i = 0; i <= m; ++i)
            for (index_t j = i; j <= m; ++j) table[i * (m + 1) + j] = f(i, j);
        auto lookup = [&](index_t i, index_t j) { return table[i * (m + 1) + j]; };
        return detail::check_table(lookup, m, p, true, seed, samples);
    }
    return detail::check_table(f, m, p, false, seed, samples);
}

/// Checks the objective on A for every part index it distinguishes.
inline PropertyVerdict check_property(const Objective& obj, const CsrMatrix& A, Property p,
                                      const MapPartition* phi = nullptr, index_t exhaustive_limit = 64) {
    CostOracle oracle(A, obj, phi);
    const index_t parts = obj.uniform() ? 1 : phi->K;
    PropertyVerdict v;
    v.property = p;
    for (index_t k = 0; k < parts; ++k) {
        v = check_property([&](index_t i, index_t j) { return oracle.peek(k, i, j); }, A.rows(), p, exhaustive_limit);
        v.part = k;
        if (!v.holds) return v;
    }
    return v;
}

}  // namespace chainpart
