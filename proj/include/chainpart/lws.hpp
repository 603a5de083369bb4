#pragma once

#include <deque>
#include <functional>
#include <vector>

#include "csr.hpp"
#include "objective.hpp"

namespace chainpart {

/// Quadrangle shape of a cost on ranges [i, i').
///  Convex:  f(a,c) + f(b,d) >= f(a,d) + f(b,c) for a <= b <= c <= d (union size, cuts)
///  Concave: the reverse inequality
enum class Shape { Convex, Concave, General };

inline const char* to_string(Shape s) {
    switch (s) {
        case Shape::Convex: return "convex";
        case Shape::Concave: return "concave";
        case Shape::General: return "general";
    }
    return "?";
}

struct ShapeError : Error {
    using Error::Error;
};

/**
 * @brief Lower envelope of candidates queried at increasing positions.
 *
 * Candidates arrive in order and each one is eligible for every query from
 * the current position on. Under the quadrangle condition the positions
 * where a newer candidate is at least as good as an older one form a prefix
 * (convex) or a suffix (concave), so the envelope is a stack or a deque of
 * regions with binary-searched boundaries. Ties go to the newer candidate.
 *
 * value(cand, q) must return the candidate's total at query position q.
 */
class MongeEnvelope {
public:
    using Value = std::function<double(index_t, index_t)>;

    MongeEnvelope(Shape shape, index_t positions, Value value, bool verify = false)
        : shape_(shape), Q_(positions), value_(std::move(value)), verify_(verify) {
        if (shape == Shape::General) throw ShapeError("envelope needs a convex or concave cost");
    }

    index_t position() const { return q_; }
    index_t evaluations() const { return evals_; }

    void add(index_t cand) {
        if (q_ >= Q_) return;
        if (shape_ == Shape::Convex) add_convex(cand);
        else add_concave(cand);
    }

    /// Best candidate at the current position, then advances. Returns (-1, inf) when empty.
    std::pair<index_t, double> query() {
        std::pair<index_t, double> r{-1, kInf};
        if (shape_ == Shape::Convex) {
            while (!stack_.empty() && stack_.back().bound <= q_) stack_.pop_back();
            if (!stack_.empty()) r = {stack_.back().cand, eval(stack_.back().cand, q_)};
        } else {
            while (queue_.size() >= 2 && queue_[1].bound <= q_) queue_.pop_front();
            if (!queue_.empty()) r = {queue_.front().cand, eval(queue_.front().cand, q_)};
        }
        ++q_;
        return r;
    }

private:
    struct Region {
        index_t cand;
        index_t bound;  // convex: exclusive end; concave: first position
    };

    double eval(index_t cand, index_t q) {
        ++evals_;
        return value_(cand, q);
    }

    bool beats(index_t fresh, index_t old, index_t q) { return eval(fresh, q) <= eval(old, q); }

    void violation() const { throw ShapeError(std::string("cost violates the ") + to_string(shape_) + " quadrangle shape"); }

    // newer candidates win on a prefix of the remaining positions
    void add_convex(index_t cand) {
        while (!stack_.empty() && stack_.back().bound <= q_) stack_.pop_back();
        index_t start = q_;
        while (!stack_.empty()) {
            const Region top = stack_.back();
            if (beats(cand, top.cand, top.bound - 1)) {
                if (verify_ && !beats(cand, top.cand, start)) violation();
                stack_.pop_back();
                start = top.bound;
                continue;
            }
            // last position in [start, top.bound - 1) where cand still wins
            index_t lo = start, hi = top.bound - 2, last = start - 1;
            while (lo <= hi) {
                const index_t mid = lo + (hi - lo) / 2;
                if (beats(cand, top.cand, mid)) {
                    last = mid;
                    lo = mid + 1;
                } else {
                    hi = mid - 1;
                }
            }
            if (last >= start) start = last + 1;
            break;
        }
        if (stack_.empty()) start = Q_;
        if (start > q_) stack_.push_back({cand, start});
    }

    // newer candidates win on a suffix of the remaining positions
    void add_concave(index_t cand) {
        while (queue_.size() >= 2 && queue_[1].bound <= q_) queue_.pop_front();
        index_t first = q_;
        bool popped = false;
        while (!queue_.empty()) {
            const Region back = queue_.back();
            const index_t s = std::max(back.bound, q_);
            if (beats(cand, back.cand, s)) {
                queue_.pop_back();
                popped = true;
                first = s;
                continue;
            }
            index_t lo = s + 1, hi = Q_ - 1, found = Q_;
            while (lo <= hi) {
                const index_t mid = lo + (hi - lo) / 2;
                if (beats(cand, back.cand, mid)) {
                    found = mid;
                    hi = mid - 1;
                } else {
                    lo = mid + 1;
                }
            }
            if (verify_ && popped && found > first) violation();
            first = found;
            break;
        }
        if (first < Q_) queue_.push_back({cand, first});
    }

    Shape shape_;
    index_t Q_;
    Value value_;
    bool verify_;
    index_t q_ = 0;
    index_t evals_ = 0;
    std::vector<Region> stack_;
    std::deque<Region> queue_;
};

/**
 * @brief c[i'] = min_{base <= i < i'} d[i] + f(i, i') for i' in (base, top].
 *
 * Positions are absolute split points. With an empty d the problem feeds on
 * itself (d = c, c[base] = 0). An optional prefix weight bounds the parts:
 * (i, i') is feasible when weight[i'] - weight[i] <= w_max.
 */
struct LwsProblem {
    index_t base = 0;
    index_t top = 0;
    std::function<double(index_t, index_t)> f;
    std::vector<double> d;
    std::vector<index_t> weight;
    double w_max = kInf;
    Shape shape = Shape::General;

    bool self() const { return d.empty(); }
    bool constrained() const { return !weight.empty() && w_max < kInf; }
    bool feasible(index_t i, index_t j) const {
        return !constrained() || static_cast<double>(weight[j] - weight[i]) <= w_max;
    }
};

struct LwsSolution {
    std::vector<double> c;   // indexed by absolute position, +inf where unreachable
    std::vector<index_t> p;  // back pointers, -1 where unreachable
    index_t queries = 0;     // calls to f
};

namespace detail {

inline LwsSolution lws_init(const LwsProblem& P) {
    if (P.base < 0 || P.top < P.base) throw Error("LWS range is empty or negative");
    if (!P.self() && static_cast<index_t>(P.d.size()) <= P.top) throw DimensionError("LWS initial costs too short");
    if (P.constrained() && static_cast<index_t>(P.weight.size()) <= P.top) throw DimensionError("LWS weights too short");
    LwsSolution s;
    s.c.assign(P.top + 1, kInf);
    s.p.assign(P.top + 1, -1);
    if (P.self()) s.c[P.base] = 0.0;
    return s;
}

inline double start_cost(const LwsProblem& P, const LwsSolution& s, index_t i) { return P.self() ? s.c[i] : P.d[i]; }

}  // namespace detail

/**
 * @brief Reference dynamic program.
 *
 * The inner loop walks starts downwards so that a sweep oracle only ever
 * extends its window to the left, and stops at the first start that breaks
 * the weight limit. Ties keep the largest start.
 */
inline LwsSolution lws_dp(const LwsProblem& P) {
    auto s = detail::lws_init(P);
    for (index_t j = P.base + 1; j <= P.top; ++j) {
        for (index_t i = j - 1; i >= P.base; --i) {
            if (!P.feasible(i, j)) break;
            const double di = detail::start_cost(P, s, i);
            if (di == kInf) continue;
            ++s.queries;
            const double v = di + P.f(i, j);
            if (v < s.c[j]) {
                s.c[j] = v;
                s.p[j] = i;
            }
        }
    }
    return s;
}

/**
 * @brief Log-linear LWS for convex or concave costs.
 *
 * A weight limit is folded into the cost as +inf, which keeps concave costs
 * concave; convex costs with a limit go through lws_constrained_convex.
 */
inline LwsSolution lws_quadrangle(const LwsProblem& P, bool verify = false) {
    if (P.shape == Shape::General) throw ShapeError("quadrangle LWS needs a convex or concave cost");
    if (P.shape == Shape::Convex && P.constrained())
        throw ShapeError("convex LWS with a weight limit needs the constrained solver");
    auto s = detail::lws_init(P);
    const index_t first = P.base + 1;
    auto value = [&](index_t i, index_t q) {
        const index_t j = first + q;
        ++s.queries;
        if (!P.feasible(i, j)) return kInf;
        return detail::start_cost(P, s, i) + P.f(i, j);
    };
    MongeEnvelope env(P.shape, P.top - P.base, value, verify);
    for (index_t j = first; j <= P.top; ++j) {
        if (detail::start_cost(P, s, j - 1) < kInf) env.add(j - 1);
        auto [i, v] = env.query();
        if (i >= 0 && v < kInf) {
            s.c[j] = v;
            s.p[j] = i;
        }
    }
    return s;
}

namespace detail {

/// Least feasible start for every end in (base, top]; equals the end when row end-1 alone is too heavy.
inline std::vector<index_t> least_starts(const LwsProblem& P) {
    std::vector<index_t> p_low(P.top + 1, 0);
    index_t i = P.base;
    for (index_t j = P.base + 1; j <= P.top; ++j) {
        while (i < j && !P.feasible(i, j)) ++i;
        p_low[j] = i;
    }
    return p_low;
}

/// One token of a setup phase: a start becoming eligible, or an end being read.
struct SetupToken {
    bool is_end;
    index_t index;
};

/**
 * Token order for the setup phase of segment (a, b], a = p_low[b]: ends
 * run from b down to a+1, and before each end e come the starts
 * [p_low[e], p_low[e+1]) in descending order (p_low[b+1] read as a). Every
 * start then precedes exactly the ends it can reach, so all pairs are
 * feasible and the reversed orders keep the convex shape.
 */
inline std::vector<SetupToken> setup_tokens(const std::vector<index_t>& p_low, index_t a, index_t b) {
    std::vector<SetupToken> t;
    index_t upper = a;
    for (index_t e = b; e > a; --e) {
        for (index_t s = upper - 1; s >= p_low[e]; --s) t.push_back({false, s});
        upper = std::min(upper, p_low[e]);
        t.push_back({true, e});
    }
    return t;
}

}  // namespace detail

/**
 * @brief Log-linear LWS for a convex cost under a monotone weight limit.
 *
 * Following least feasible starts back from the top cuts the range into
 * segments (a, b] with a = p_low[b]. Within a segment, starts at or after a
 * reach every end (cleanup phase, plain convex LWS); starts before a reach a
 * prefix of the ends and are handled by the reordered setup phase.
 */
inline LwsSolution lws_constrained_convex(const LwsProblem& P, bool verify = false) {
    if (P.shape != Shape::Convex) throw ShapeError("constrained solver needs a convex cost");
    if (!P.constrained()) return lws_quadrangle(P, verify);
    auto s = detail::lws_init(P);
    const auto p_low = detail::least_starts(P);
    auto f = [&](index_t i, index_t j) {
        ++s.queries;
        return detail::start_cost(P, s, i) + P.f(i, j);
    };

    // blocks between rows that are too heavy on their own
    index_t lo = P.base;
    while (lo < P.top) {
        if (p_low[lo + 1] == lo + 1) {
            // row lo alone breaks the limit
            ++lo;
            continue;
        }
        index_t hi = lo + 1;
        while (hi < P.top && p_low[hi + 1] != hi + 1) ++hi;
        std::vector<std::pair<index_t, index_t>> segments;
        for (index_t t = hi; t > lo; t = p_low[t]) segments.push_back({p_low[t], t});
        for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
            const auto [a, b] = *it;
            std::vector<double> setup(b - a + 1, kInf);
            std::vector<index_t> setup_p(b - a + 1, -1);
            if (a > lo) {
                const auto tokens = detail::setup_tokens(p_low, a, b);
                std::vector<index_t> ends;
                for (const auto& tk : tokens)
                    if (tk.is_end) ends.push_back(tk.index);
                MongeEnvelope env(Shape::Convex, static_cast<index_t>(ends.size()),
                                  [&](index_t i, index_t q) { return f(i, ends[q]); }, verify);
                for (const auto& tk : tokens) {
                    if (!tk.is_end) {
                        if (detail::start_cost(P, s, tk.index) < kInf) env.add(tk.index);
                        continue;
                    }
                    auto [i, v] = env.query();
                    setup[tk.index - a] = v;
                    setup_p[tk.index - a] = i;
                }
            }
            MongeEnvelope env(Shape::Convex, b - a, [&](index_t i, index_t q) { return f(i, a + 1 + q); }, verify);
            for (index_t e = a + 1; e <= b; ++e) {
                if (detail::start_cost(P, s, e - 1) < kInf) env.add(e - 1);
                auto [i, v] = env.query();
                if (setup_p[e - a] >= 0 && setup[e - a] < v) {
                    i = setup_p[e - a];
                    v = setup[e - a];
                }
                if (i >= 0 && v < kInf) {
                    s.c[e] = v;
                    s.p[e] = i;
                }
            }
        }
        lo = hi;
    }
    return s;
}

/// Picks the log-linear solver matching the shape and constraint.
inline LwsSolution lws_solve(const LwsProblem& P, bool verify = false) {
    if (P.shape == Shape::Convex && P.constrained()) return lws_constrained_convex(P, verify);
    return lws_quadrangle(P, verify);
}

}  // namespace chainpart
