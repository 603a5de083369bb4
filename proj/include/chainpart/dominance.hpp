#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "csr.hpp"
#include "structure.hpp"

namespace chainpart {

/**
 * @brief Incremental interval-containment counter over rows 0..m-1.
 *
 * Tracks a window [lo, hi) and the number c of stored intervals [s, e] with
 * lo <= s and e < hi. delta[s] holds the number of intervals starting at s
 * that end before hi. Growing hi costs the number of intervals ending at the
 * new row; growing the window to the front or collapsing it costs O(1).
 */
class OnlineDominanceCounter {
public:
    OnlineDominanceCounter() = default;

    explicit OnlineDominanceCounter(const IntervalPoints& pts) : m_(pts.m), ptr_(pts.m + 1, 0), delta_(pts.m + 1, 0) {
        for (auto [s, e] : pts.spans) ++ptr_[e + 1];
        for (index_t r = 0; r < m_; ++r) ptr_[r + 1] += ptr_[r];
        starts_.resize(pts.spans.size());
        std::vector<index_t> next(ptr_.begin(), ptr_.end() - 1);
        for (auto [s, e] : pts.spans) starts_[next[e]++] = s;
    }

    index_t lo() const { return lo_; }
    index_t hi() const { return hi_; }
    index_t count() const { return c_; }
    index_t rows() const { return m_; }

    /// Window [lo, hi) -> [lo, hi + 1).
    void push_back() {
        if (hi_ >= m_) throw Error("online counter: window end past last row");
        for (index_t q = ptr_[hi_]; q < ptr_[hi_ + 1]; ++q) {
            const index_t s = starts_[q];
            ++delta_[s];
            if (s >= lo_) ++c_;
        }
        ++hi_;
    }

    /// Window [lo, hi) -> [lo - 1, hi).
    void push_front() {
        if (lo_ == 0) throw Error("online counter: window start before first row");
        --lo_;
        c_ += delta_[lo_];
    }

    /// Window [lo, hi) -> [hi, hi).
    void restart() {
        lo_ = hi_;
        c_ = 0;
    }

    /// Back to the empty window [0, 0).
    void reset() {
        std::fill(delta_.begin(), delta_.end(), 0);
        lo_ = hi_ = c_ = 0;
    }

private:
    index_t m_ = 0;
    std::vector<index_t> ptr_;     // intervals grouped by end row
    std::vector<index_t> starts_;
    std::vector<index_t> delta_;
    index_t lo_ = 0, hi_ = 0, c_ = 0;
};

/// One online counter per label, moved in lockstep; push_front costs O(labels).
class PartitionedOnlineCounter {
public:
    PartitionedOnlineCounter() = default;

    PartitionedOnlineCounter(const IntervalPoints& pts, std::span<const index_t> labels, index_t parts) {
        std::vector<IntervalPoints> split(parts, IntervalPoints{pts.m, {}});
        for (std::size_t t = 0; t < pts.spans.size(); ++t) split[labels[t]].spans.push_back(pts.spans[t]);
        counters_.reserve(parts);
        for (const auto& p : split) counters_.emplace_back(p);
    }

    index_t count(index_t part) const { return counters_[part].count(); }
    void push_back() { for (auto& c : counters_) c.push_back(); }
    void push_front() { for (auto& c : counters_) c.push_front(); }
    void restart() { for (auto& c : counters_) c.restart(); }
    void reset() { for (auto& c : counters_) c.reset(); }

private:
    std::vector<OnlineDominanceCounter> counters_;
};

enum class CounterMode { ChazelleBits, ConstantPasses };

/**
 * @brief Digit layout of the offline counter.
 *
 * passes digits of digit_bits bits each must cover every query key 0..n,
 * and cached counts are stored once every 2^stride_bits positions.
 */
struct CounterParams {
    CounterMode mode = CounterMode::ConstantPasses;
    int passes = 3;       // H
    int digit_bits = 1;   // b
    int stride_bits = 0;  // b'

    /// One-bit digits, one pass per bit of n, stride ceil(log2 H).
    static CounterParams chazelle(index_t n) {
        CounterParams p;
        p.mode = CounterMode::ChazelleBits;
        p.digit_bits = 1;
        p.passes = std::max(1, ceil_log2(n + 1));
        p.stride_bits = ceil_log2(p.passes);
        return p;
    }

    /// H passes with the narrowest digits that cover n; stride with 2^b' >= H 2^b.
    static CounterParams constant_passes(index_t n, int passes = 3) {
        CounterParams p;
        p.mode = CounterMode::ConstantPasses;
        p.passes = std::max(1, passes);
        p.digit_bits = 1;
        while (!p.covers(n)) ++p.digit_bits;
        p.stride_bits = p.digit_bits + ceil_log2(p.passes);
        return p;
    }

    bool covers(index_t n) const {
        const int total = passes * digit_bits;
        return total >= 63 || (index_t{1} << total) >= n + 1;
    }

    static int ceil_log2(index_t x) {
        return x <= 1 ? 0 : static_cast<int>(std::bit_width(static_cast<std::uint64_t>(x - 1)));
    }
};

/**
 * @brief Offline two-dimensional dominance counter (radix-sort wake).
 *
 * Stores points grouped by primary coordinate (ptr, as in CSR) with
 * secondary keys in [0, n). count(i, j) returns the number of points with
 * primary < i and key < j. Each pass refines a stable sort of the keys by one
 * more digit, most significant first. byt packs the digit each pass sees at
 * every position into a single word per point; cnt caches per-digit prefix
 * counts every 2^b' positions of each pass.
 *
 * A query follows the bucket of j down the passes: at each pass the points
 * of the current bucket whose digit is smaller than j's are dominated, and
 * the ones with an equal digit form a prefix of the next bucket.
 */
class OfflineDominanceCounter {
public:
    OfflineDominanceCounter() = default;

    OfflineDominanceCounter(const PointSet& pts, CounterParams params)
        : OfflineDominanceCounter(pts.rows, pts.cols, pts.ptr, pts.key, params) {}

    /// ptr may be empty, in which case point q has primary coordinate q.
    OfflineDominanceCounter(index_t rows, index_t cols, std::vector<index_t> ptr, std::span<const index_t> keys,
                            CounterParams params)
        : rows_(rows), cols_(cols), params_(params), ptr_(std::move(ptr)) {
        if (!params_.covers(cols_)) throw Error("counter parameters do not cover the key range");
        if (params_.passes * params_.digit_bits > 63) throw Error("counter digits exceed one word");
        const auto N = static_cast<index_t>(keys.size());
        n_points_ = N;
        if (!ptr_.empty() && (static_cast<index_t>(ptr_.size()) != rows_ + 1 || ptr_.back() != N))
            throw DimensionError("point pointer array does not match point count");
        if (ptr_.empty() && rows_ != N) throw DimensionError("identity layout needs one point per row");

        qos_.assign(cols_ + 2, 0);
        for (index_t k : keys) {
            if (k < 0 || k >= cols_) throw DimensionError("point key out of range");
            ++qos_[k + 1];
        }
        for (index_t v = 0; v <= cols_; ++v) qos_[v + 1] += qos_[v];

        const int H = params_.passes, b = params_.digit_bits;
        const index_t radix = index_t{1} << b;
        const index_t stride = index_t{1} << params_.stride_bits;
        blocks_ = N / stride + 1;
        byt_.assign(N, 0);
        cnt_.assign(static_cast<std::size_t>(H) * blocks_ * radix, 0);

        std::vector<index_t> cur(keys.begin(), keys.end());
        std::vector<index_t> next(N);
        std::vector<index_t> hist(radix);
        for (int L = 0; L < H; ++L) {
            const int shift = this->shift(L);
            for (index_t q = 0; q < N; ++q)
                byt_[q] |= static_cast<std::uint64_t>((cur[q] >> shift) & (radix - 1)) << shift;

            std::fill(hist.begin(), hist.end(), 0);
            index_t* level = cnt_.data() + static_cast<std::size_t>(L) * blocks_ * radix;
            for (index_t blk = 0; blk < blocks_; ++blk) {
                index_t acc = 0;
                for (index_t d = 0; d < radix; ++d) {
                    acc += hist[d];
                    level[blk * radix + d] = acc;
                }
                const index_t end = std::min(N, (blk + 1) * stride);
                for (index_t q = blk * stride; q < end; ++q) ++hist[(cur[q] >> shift) & (radix - 1)];
            }

            if (L + 1 < H) {
                // stable scatter into buckets of one more digit; bucket starts come from qos
                const index_t buckets = (cols_ >> shift) + 1;
                std::vector<index_t> slot(buckets);
                for (index_t p = 0; p < buckets; ++p) slot[p] = qos_at(p << shift);
                for (index_t q = 0; q < N; ++q) next[slot[cur[q] >> shift]++] = cur[q];
                std::swap(cur, next);
            }
        }
    }

    /// Number of points with primary < i and key < j, for 0 <= i <= rows, 0 <= j <= cols.
    index_t count(index_t i, index_t j) const {
        if (i < 0 || i > rows_ || j < 0 || j > cols_) throw Error("dominance query outside the grid");
        index_t t = ptr_.empty() ? i : ptr_[i];
        index_t c = 0;
        const index_t mask = (index_t{1} << params_.digit_bits) - 1;
        for (int L = 0; L < params_.passes && t > 0; ++L) {
            const int shift = this->shift(L);
            const index_t start = bucket_start(L, j);
            const index_t d = (j >> shift) & mask;
            auto [lt_a, le_a] = prefix(L, start, d);
            auto [lt_b, le_b] = prefix(L, start + t, d);
            c += lt_b - lt_a;
            t = (le_b - lt_b) - (le_a - lt_a);
        }
        return c;
    }

    /// Inclusive form: points with primary <= i and key <= j; negative bounds select nothing.
    index_t count_inclusive(index_t i, index_t j) const {
        if (i < 0 || j < 0) return 0;
        return count(std::min(i + 1, rows_), std::min(j + 1, cols_));
    }

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    index_t size() const { return n_points_; }
    const CounterParams& params() const { return params_; }

    /// Words held by ptr, qos, byt and cnt.
    std::size_t storage_words() const { return ptr_.size() + qos_.size() + byt_.size() + cnt_.size(); }

    // Pass-level access, shared with SparsePrefixSum.
    int shift(int L) const { return (params_.passes - 1 - L) * params_.digit_bits; }
    index_t digit_at(int L, index_t q) const {
        return static_cast<index_t>((byt_[q] >> shift(L)) & ((std::uint64_t{1} << params_.digit_bits) - 1));
    }
    index_t bucket_start(int L, index_t j) const {
        const int up = shift(L) + params_.digit_bits;
        return qos_at(up >= 63 ? 0 : (j >> up) << up);
    }
    index_t primary_prefix(index_t i) const { return ptr_.empty() ? i : ptr_[i]; }

    /// (#digit < d, #digit <= d) among pass-L positions [0, p).
    std::pair<index_t, index_t> prefix(int L, index_t p, index_t d) const {
        const index_t radix = index_t{1} << params_.digit_bits;
        const int sb = params_.stride_bits;
        const index_t blk = p >> sb;
        const index_t* level = cnt_.data() + (static_cast<std::size_t>(L) * blocks_ + blk) * radix;
        index_t lt = d > 0 ? level[d - 1] : 0;
        index_t le = level[d];
        for (index_t q = blk << sb; q < p; ++q) {
            const index_t dig = digit_at(L, q);
            lt += dig < d;
            le += dig <= d;
        }
        return {lt, le};
    }

private:
    index_t qos_at(index_t v) const { return qos_[std::min(v, cols_ + 1)]; }

    index_t rows_ = 0;
    index_t cols_ = 0;
    index_t n_points_ = 0;
    CounterParams params_;
    std::vector<index_t> ptr_;
    std::vector<index_t> qos_;
    std::vector<std::uint64_t> byt_;
    std::vector<index_t> cnt_;  // [pass][block][digit]: count of digits < digit+1 before the block
    index_t blocks_ = 0;
};

/**
 * @brief Sparse prefix sums over the same radix wake.
 *
 * Keeps the point values in every pass order and caches their per-digit
 * prefix sums alongside the counts.
 */
template <class Value>
class SparsePrefixSum {
public:
    SparsePrefixSum() = default;

    SparsePrefixSum(const PointSet& pts, std::span<const Value> values, CounterParams params)
        : counter_(pts, params) {
        const auto N = pts.size();
        if (static_cast<index_t>(values.size()) != N) throw DimensionError("one value per point required");
        const int H = params.passes, b = params.digit_bits;
        const index_t radix = index_t{1} << b;
        const index_t stride = index_t{1} << params.stride_bits;
        blocks_ = N / stride + 1;
        vals_.assign(static_cast<std::size_t>(H) * N, Value{});
        sums_.assign(static_cast<std::size_t>(H) * blocks_ * radix, Value{});

        // replay the construction order: keys paired with values
        std::vector<std::pair<index_t, Value>> cur(N), next(N);
        for (index_t q = 0; q < N; ++q) cur[q] = {pts.key[q], values[q]};
        std::vector<Value> hist(radix);
        for (int L = 0; L < H; ++L) {
            const int shift = counter_.shift(L);
            Value* lv = vals_.data() + static_cast<std::size_t>(L) * N;
            for (index_t q = 0; q < N; ++q) lv[q] = cur[q].second;
            std::fill(hist.begin(), hist.end(), Value{});
            Value* level = sums_.data() + static_cast<std::size_t>(L) * blocks_ * radix;
            for (index_t blk = 0; blk < blocks_; ++blk) {
                Value acc{};
                for (index_t d = 0; d < radix; ++d) {
                    acc += hist[d];
                    level[blk * radix + d] = acc;
                }
                const index_t end = std::min(N, (blk + 1) * stride);
                for (index_t q = blk * stride; q < end; ++q) hist[(cur[q].first >> shift) & (radix - 1)] += cur[q].second;
            }
            if (L + 1 < H) {
                const index_t buckets = (pts.cols >> shift) + 1;
                std::vector<index_t> slot(buckets);
                for (index_t p = 0; p < buckets; ++p) slot[p] = counter_.bucket_start(L + 1, p << shift);
                for (index_t q = 0; q < N; ++q) next[slot[cur[q].first >> shift]++] = cur[q];
                std::swap(cur, next);
            }
        }
    }

    /// Sum of values of points with primary < i and key < j.
    Value sum(index_t i, index_t j) const {
        if (i < 0 || i > counter_.rows() || j < 0 || j > counter_.cols()) throw Error("prefix sum query outside the grid");
        const auto& P = counter_.params();
        index_t t = counter_.primary_prefix(i);
        Value total{};
        const index_t mask = (index_t{1} << P.digit_bits) - 1;
        for (int L = 0; L < P.passes && t > 0; ++L) {
            const int shift = counter_.shift(L);
            const index_t start = counter_.bucket_start(L, j);
            const index_t d = (j >> shift) & mask;
            total += value_below(L, start + t, d) - value_below(L, start, d);
            auto [lt_a, le_a] = counter_.prefix(L, start, d);
            auto [lt_b, le_b] = counter_.prefix(L, start + t, d);
            t = (le_b - lt_b) - (le_a - lt_a);
        }
        return total;
    }

    const OfflineDominanceCounter& counter() const { return counter_; }

    std::size_t storage_words() const { return counter_.storage_words() + vals_.size() + sums_.size(); }

private:
    Value value_below(int L, index_t p, index_t d) const {
        const auto& P = counter_.params();
        const index_t radix = index_t{1} << P.digit_bits;
        const index_t blk = p >> P.stride_bits;
        const Value* level = sums_.data() + (static_cast<std::size_t>(L) * blocks_ + blk) * radix;
        Value acc = d > 0 ? level[d - 1] : Value{};
        const Value* lv = vals_.data() + static_cast<std::size_t>(L) * counter_.size();
        for (index_t q = blk << P.stride_bits; q < p; ++q)
            if (counter_.digit_at(L, q) < d) acc += lv[q];
        return acc;
    }

    OfflineDominanceCounter counter_;
    std::vector<Value> vals_;  // values in each pass order
    std::vector<Value> sums_;  // [pass][block][digit]
    index_t blocks_ = 0;
};

/**
 * @brief Offline counter over arbitrary points in rank space.
 *
 * Points are given i-major; queries in original coordinates are translated by
 * binary search over the stored coordinate orders.
 */
class RankSpaceCounter {
public:
    RankSpaceCounter() = default;

    RankSpaceCounter(const std::vector<std::pair<index_t, index_t>>& points, CounterParams params)
        : rs_(rank_space_transform(points)) {
        const auto N = static_cast<index_t>(points.size());
        counter_ = OfflineDominanceCounter(N, N, {}, rs_.rank, params);
    }

    static RankSpaceCounter with_default_params(const std::vector<std::pair<index_t, index_t>>& points) {
        return RankSpaceCounter(points, CounterParams::constant_passes(static_cast<index_t>(points.size())));
    }

    /// Points with i < qi and j < qj.
    index_t count(index_t qi, index_t qj) const {
        const auto ib = std::lower_bound(rs_.i_order.begin(), rs_.i_order.end(), qi) - rs_.i_order.begin();
        const auto jb = std::lower_bound(rs_.j_order.begin(), rs_.j_order.end(), qj) - rs_.j_order.begin();
        return counter_.count(ib, jb);
    }

    /// Points with i <= qi and j <= qj.
    index_t count_inclusive(index_t qi, index_t qj) const {
        return counter_.count(rs_.i_bound(qi), rs_.j_bound(qj));
    }

    index_t size() const { return counter_.size(); }
    const RankSpace& rank_space() const { return rs_; }
    std::size_t storage_words() const { return counter_.storage_words() + rs_.i_order.size() + rs_.j_order.size(); }

private:
    RankSpace rs_;
    OfflineDominanceCounter counter_;
};

/**
 * @brief Labelled interval-containment counts from one concatenated problem.
 *
 * Interval [s, e] with label k becomes the point (k(m+1) + e, k(m+1) + m-1-s).
 * Every point of a smaller label is dominated by any query of label k, so the
 * per-label answer is the concatenated count minus the label's offset.
 */
class SegmentedIntervalCounter {
public:
    SegmentedIntervalCounter() = default;

    SegmentedIntervalCounter(const IntervalPoints& pts, std::span<const index_t> labels, index_t parts)
        : m_(pts.m), offset_(parts + 1, 0) {
        std::vector<std::pair<index_t, index_t>> points;
        points.reserve(pts.spans.size());
        for (std::size_t t = 0; t < pts.spans.size(); ++t) {
            const index_t k = labels[t];
            const auto [s, e] = pts.spans[t];
            points.emplace_back(k * (m_ + 1) + e, k * (m_ + 1) + (m_ - 1 - s));
            ++offset_[k + 1];
        }
        for (index_t k = 0; k < parts; ++k) offset_[k + 1] += offset_[k];
        std::sort(points.begin(), points.end());
        counter_ = RankSpaceCounter::with_default_params(points);
    }

    /// Intervals of label k inside rows [lo, hi).
    index_t count(index_t k, index_t lo, index_t hi) const {
        if (lo >= hi) return 0;
        const index_t base = k * (m_ + 1);
        return counter_.count(base + hi, base + (m_ - lo)) - offset_[k];
    }

private:
    index_t m_ = 0;
    std::vector<index_t> offset_;
    RankSpaceCounter counter_;
};

/// Interval-containment queries backed by the offline counter.
class OfflineIntervalCounter {
public:
    OfflineIntervalCounter() = default;

    OfflineIntervalCounter(const IntervalPoints& pts, std::optional<CounterParams> params = std::nullopt)
        : m_(pts.m),
          counter_(pts.to_point_set(), params.value_or(CounterParams::constant_passes(pts.m))) {}

    /// Intervals inside rows [lo, hi).
    index_t count(index_t lo, index_t hi) const {
        if (lo >= hi) return 0;
        return counter_.count(hi, m_ - lo);
    }

    const OfflineDominanceCounter& counter() const { return counter_; }

private:
    index_t m_ = 0;
    OfflineDominanceCounter counter_;
};

}  // namespace chainpart
