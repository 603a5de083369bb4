#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "atoms.hpp"
#include "bounds.hpp"
#include "csr.hpp"
#include "objective.hpp"

namespace chainpart {

enum class Direction { Increasing, Decreasing };

inline Direction direction_of(const Objective& obj) {
    const auto f = obj.flags();
    if (f.increasing) return Direction::Increasing;
    if (f.decreasing) return Direction::Decreasing;
    throw Error(std::string("objective ") + to_string(obj.kind) + " is not monotone under these settings");
}

struct PartitionResult {
    SplitPartition partition;
    double cost = kInf;     // max_k f_k over the returned partition
    index_t calls = 0;      // cost evaluations made by the partitioner itself
    index_t probes = 0;     // feasibility probes
    bool feasible = false;  // returned partition stays within the upper bound given
};

/**
 * Greatest (increasing) or least (decreasing) end i' in [max(i, lo), hi] with
 * f_k(i, i') <= c. Misses return max(i, lo) - 1 or hi + 1 respectively.
 */
template <class F>
index_t search(F& f, index_t k, index_t i, index_t lo, index_t hi, double c, Direction dir) {
    lo = std::max(i, lo);
    while (lo <= hi) {
        const index_t mid = (lo + hi) / 2;
        const bool fits = f(k, i, mid) <= c;
        if (dir == Direction::Increasing) {
            if (fits) lo = mid + 1;
            else hi = mid - 1;
        } else {
            if (fits) hi = mid - 1;
            else lo = mid + 1;
        }
    }
    return dir == Direction::Increasing ? hi : lo;
}

namespace detail {

/// Split vectors shared by the bisection and NICOL partitioners.
struct ProbeState {
    index_t m = 0, K = 0;
    Direction dir = Direction::Increasing;
    std::vector<index_t> s, s_low, s_high;

    ProbeState(index_t m_, index_t K_, Direction d) : m(m_), K(K_), dir(d), s(K_ + 1, 0), s_low(K_ + 1, 0), s_high(K_ + 1, m_) {
        s_high[0] = 0;
        s_low[K] = m;
        s[K] = m;
    }

    /// Greedy placement of the ends of parts first..K-2; true when the last part fits.
    template <class F>
    bool probe(F& f, double c, index_t first) {
        for (index_t k = first; k + 1 < K; ++k) {
            s[k + 1] = search(f, k, s[k], s_low[k + 1], s_high[k + 1], c, dir);
            if (dir == Direction::Increasing ? s[k + 1] < s[k] : s[k + 1] > m) {
                std::fill(s.begin() + k + 1, s.begin() + K, dir == Direction::Increasing ? s[k] : m);
                return false;
            }
        }
        return f(K - 1, s[K - 1], s[K]) <= c;
    }

    SplitPartition result() const {
        return SplitPartition{dir == Direction::Increasing ? s_high : s_low};
    }
};

template <class F>
void finish(F& f, PartitionResult& r, index_t calls_before, double c_high) {
    r.calls = f.calls() - calls_before;
    double cost = -kInf;
    for (index_t k = 0; k < r.partition.parts(); ++k)
        cost = std::max(cost, f(k, r.partition.begin(k), r.partition.end(k)));
    r.cost = cost;
    r.feasible = std::isfinite(cost) && cost <= c_high;
}

}  // namespace detail

/**
 * @brief (1+eps)-approximate bottleneck partition by bisection on the cost.
 *
 * Each probe places splits greedily with binary searches bounded by the
 * splits of earlier probes. Requires 0 < c_low <= c_high and eps > 0.
 */
template <class F>
PartitionResult bisect_partition(F& f, index_t m, index_t K, double c_low, double c_high, double eps, Direction dir) {
    if (K < 1) throw Error("need at least one part");
    if (!(eps > 0.0)) throw Error("bisection needs eps > 0; use the exact partitioner instead");
    if (!(c_low > 0.0) || !(c_low <= c_high) || !std::isfinite(c_high))
        throw Error("bisection needs finite bounds with 0 < c_low <= c_high");
    const index_t before = f.calls();
    const double c_top = c_high;
    detail::ProbeState st(m, K, dir);
    PartitionResult r;
    while (c_low * (1.0 + eps) < c_high) {
        const double c = (c_low + c_high) / 2.0;
        ++r.probes;
        if (st.probe(f, c, 0)) {
            c_high = c;
            (dir == Direction::Increasing ? st.s_high : st.s_low) = st.s;
        } else {
            c_low = c;
            (dir == Direction::Increasing ? st.s_low : st.s_high) = st.s;
        }
    }
    r.partition = st.result();
    detail::finish(f, r, before, c_top);
    return r;
}

/**
 * @brief Optimal bottleneck partition by searching split points (NICOL+).
 *
 * Bounds are optional and only prune; without them the naive bounds of the
 * objective should be supplied by the caller or left infinite.
 */
template <class F>
PartitionResult nicol_partition(F& f, index_t m, index_t K, double c_low, double c_high, Direction dir) {
    if (K < 1) throw Error("need at least one part");
    const index_t before = f.calls();
    const double c_top = c_high;
    detail::ProbeState st(m, K, dir);
    PartitionResult r;
    const bool inc = dir == Direction::Increasing;
    for (index_t k = 0; k < K; ++k) {
        const index_t i = st.s[k];
        index_t hi = st.s_high[k + 1];
        index_t lo = std::max(st.s[k], st.s_low[k + 1]);
        while (lo <= hi) {
            const index_t mid = (lo + hi) / 2;
            const double c = f(k, i, mid);
            if (c_low <= c && c < c_high) {
                st.s[k + 1] = mid;
                ++r.probes;
                if (st.probe(f, c, k + 1)) {
                    c_high = c;
                    if (inc) hi = mid - 1;
                    else lo = mid + 1;
                    (inc ? st.s_high : st.s_low) = st.s;
                } else {
                    c_low = c;
                    if (inc) lo = mid + 1;
                    else hi = mid - 1;
                    (inc ? st.s_low : st.s_high) = st.s;
                }
            } else if (c >= c_high) {
                if (inc) hi = mid - 1;
                else lo = mid + 1;
            } else {
                if (inc) lo = mid + 1;
                else hi = mid - 1;
            }
        }
        if (inc ? hi < st.s[k] : lo > m) break;
        st.s[k + 1] = inc ? hi : lo;
    }
    r.partition = st.result();
    detail::finish(f, r, before, c_top);
    return r;
}

/// NICOL with the naive bounds of the objective.
template <class F>
PartitionResult nicol_partition(F& f, index_t m, index_t K, Direction dir) {
    return nicol_partition(f, m, K, -kInf, kInf, dir);
}

/**
 * @brief Probe fused into one pass over the rows.
 *
 * Maintains the atoms of the open part incrementally: hst[j] remembers the
 * last row (plus one) that touched column j, drt/lcl hold the per-part entry
 * counts of the current row. Supports the row, entry, delta_entry, incident,
 * local and diagonal atoms.
 */
class LazyProbe {
public:
    LazyProbe(const CsrMatrix& A, const Objective& obj, index_t K, const MapPartition* phi = nullptr)
        : A_(A), obj_(obj), K_(K), phi_(phi) {
        const unsigned unsupported = atom::Within | atom::Contained;
        if (obj.required_atoms() & unsupported) throw Error("lazy probe cannot track cut atoms");
        if (obj.needs_phi() && !phi) throw Error("objective needs a fixed column partition");
        if (phi && static_cast<index_t>(phi->asgn.size()) != A.cols())
            throw DimensionError("column partition length differs from column count");
        hst_.assign(A.cols(), 0);
        parts_ = phi ? phi->K : 1;
        drt_.assign(parts_, 0);
        lcl_.assign(parts_, 0);
    }

    /// Greedy splits for cost c; s receives K+1 splits (unplaced ones are left as m).
    bool operator()(double c, std::vector<index_t>& s) {
        const index_t m = A_.rows(), n = A_.cols();
        const auto pos = A_.pos();
        const auto idx = A_.idx();
        const index_t w_min = obj_.coef.w_min;
        std::fill(hst_.begin(), hst_.end(), 0);
        std::fill(drt_.begin(), drt_.end(), 0);
        s.assign(K_ + 1, m);
        s[0] = 0;
        index_t i = 0, k = 0;
        CostAtoms x;
        // hst and drt store row + 1 so that zero means "never"
        for (index_t r = 0; r < m; ++r) {
            const index_t tag = r + 1;
            const index_t deg = pos[r + 1] - pos[r];
            x.row += 1;
            x.entry += deg;
            x.delta_entry += std::max<index_t>(deg - w_min, 0);
            for (index_t q = pos[r]; q < pos[r + 1]; ++q) {
                const index_t j = idx[q];
                const index_t kp = phi_ ? phi_->asgn[j] : 0;
                if (drt_[kp] < tag) lcl_[kp] = 0;
                ++lcl_[kp];
                drt_[kp] = tag;
                const bool fresh = hst_[j] <= i;
                if (fresh) {
                    ++x.incident;
                    if (kp == k) ++x.local;
                    // a column already counted as a diagonal cell of an earlier row of the part
                    if (!(i <= j && j < r)) ++x.diagonal;
                }
                hst_[j] = tag;
            }
            if (r < n && hst_[r] <= i) ++x.diagonal;

            while (obj_.eval(x) > c) {
                if (k == K_ - 1) return false;
                s[k + 1] = r;
                i = r;
                ++k;
                x.row = 1;
                x.entry = deg;
                x.delta_entry = std::max<index_t>(deg - w_min, 0);
                x.incident = deg;
                x.diagonal = deg;
                if (r < n && hst_[r] <= r) ++x.diagonal;
                x.local = (k < parts_ && drt_[k] == tag) ? lcl_[k] : 0;
            }
        }
        for (index_t kk = k + 1; kk <= K_; ++kk) s[kk] = m;
        return true;
    }

private:
    const CsrMatrix& A_;
    Objective obj_;
    index_t K_;
    const MapPartition* phi_;
    index_t parts_ = 1;
    std::vector<index_t> hst_, drt_, lcl_;
};

/**
 * @brief Bisection driven by the fused probe.
 *
 * Needs an increasing objective and c_low at least the empty-part cost.
 */
inline PartitionResult lazy_bisect_partition(const CsrMatrix& A, const Objective& obj, index_t K, double c_low,
                                             double c_high, double eps, const MapPartition* phi = nullptr) {
    if (K < 1) throw Error("need at least one part");
    if (!obj.flags().increasing) throw Error("lazy probe needs an increasing objective");
    if (!(eps > 0.0)) throw Error("bisection needs eps > 0; use the exact partitioner instead");
    if (!(c_low > 0.0) || !(c_low <= c_high) || !std::isfinite(c_high))
        throw Error("bisection needs finite bounds with 0 < c_low <= c_high");
    LazyProbe probe(A, obj, K, phi);
    const index_t m = A.rows();
    const double c_top = c_high;
    std::vector<index_t> s_high(K + 1, m), s;
    s_high[0] = 0;
    PartitionResult r;
    while (c_low * (1.0 + eps) < c_high) {
        const double c = (c_low + c_high) / 2.0;
        ++r.probes;
        if (probe(c, s)) {
            c_high = c;
            s_high = s;
        } else {
            c_low = c;
        }
    }
    r.partition = SplitPartition{s_high};
    // the fused probe makes no separate oracle calls; report the achieved cost by one sweep
    OnlineAtoms atoms(A, obj.required_atoms(), obj.coef.w_min, phi);
    double cost = -kInf;
    for (index_t k = 0; k < K; ++k) {
        atoms.seek(r.partition.begin(k), r.partition.end(k));
        cost = std::max(cost, obj.eval(atoms.atoms(k)));
    }
    r.cost = cost;
    r.feasible = std::isfinite(cost) && cost <= c_top;
    return r;
}

}  // namespace chainpart
