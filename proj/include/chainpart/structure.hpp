#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "csr.hpp"

namespace chainpart {

/**
 * @brief Pairs of vertically consecutive nonzeros, one per repeated column entry.
 *
 * Link l joins rows start[l] < end[l] in a shared column. Links are grouped
 * by their end row: links ending at row r occupy ptr[r] .. ptr[r+1]-1, in the
 * column order of row r.
 */
struct LinkSet {
    index_t rows = 0;
    std::vector<index_t> ptr;
    std::vector<index_t> start;
    std::vector<index_t> column;

    index_t size() const { return static_cast<index_t>(start.size()); }
    index_t end_row(index_t l) const {
        return static_cast<index_t>(std::upper_bound(ptr.begin(), ptr.end(), l) - ptr.begin()) - 1;
    }
};

/**
 * @brief Computes links in one top-to-bottom sweep.
 *
 * With fill_diagonal, every row i < n is treated as holding entry (i, i),
 * which yields the links of A + I without materializing it.
 */
inline LinkSet compute_links(const CsrMatrix& A, bool fill_diagonal = false) {
    const index_t m = A.rows(), n = A.cols();
    LinkSet links;
    links.rows = m;
    links.ptr.assign(m + 1, 0);
    links.start.reserve(A.nnz());
    links.column.reserve(A.nnz());
    std::vector<index_t> last(n, -1);
    auto visit = [&](index_t i, index_t j) {
        if (last[j] >= 0) {
            links.start.push_back(last[j]);
            links.column.push_back(j);
        }
        last[j] = i;
    };
    for (index_t i = 0; i < m; ++i) {
        bool diagonal_pending = fill_diagonal && i < n;
        for (index_t j : A.row(i)) {
            if (diagonal_pending && j >= i) {
                if (j != i) visit(i, i);
                diagonal_pending = false;
            }
            visit(i, j);
        }
        if (diagonal_pending) visit(i, i);
        links.ptr[i + 1] = links.size();
    }
    return links;
}

/// Smallest and largest row holding an entry, per column; (-1, -1) for empty columns.
inline std::vector<std::pair<index_t, index_t>> column_extents(const CsrMatrix& A) {
    std::vector<std::pair<index_t, index_t>> ext(A.cols(), {-1, -1});
    for (index_t i = 0; i < A.rows(); ++i) {
        for (index_t j : A.row(i)) {
            if (ext[j].first < 0) ext[j].first = i;
            ext[j].second = i;
        }
    }
    return ext;
}

/**
 * @brief Points grouped by a primary coordinate, CSR style.
 *
 * Point q has primary coordinate r where ptr[r] <= q < ptr[r+1] and secondary
 * coordinate key[q]. This is the input shape of the dominance counters.
 */
struct PointSet {
    index_t rows = 0;  // primary extent
    index_t cols = 0;  // secondary extent
    std::vector<index_t> ptr;
    std::vector<index_t> key;

    index_t size() const { return static_cast<index_t>(key.size()); }
};

/// Builds a PointSet from unsorted (primary, secondary) pairs by histogram sort.
inline PointSet make_point_set(index_t rows, index_t cols,
                               const std::vector<std::pair<index_t, index_t>>& pts) {
    PointSet ps;
    ps.rows = rows;
    ps.cols = cols;
    ps.ptr.assign(rows + 1, 0);
    for (auto [r, c] : pts) ++ps.ptr[r + 1];
    for (index_t r = 0; r < rows; ++r) ps.ptr[r + 1] += ps.ptr[r];
    ps.key.resize(pts.size());
    std::vector<index_t> next(ps.ptr.begin(), ps.ptr.end() - 1);
    for (auto [r, c] : pts) ps.key[next[r]++] = c;
    for (index_t r = 0; r < rows; ++r) std::sort(ps.key.begin() + ps.ptr[r], ps.key.begin() + ps.ptr[r + 1]);
    return ps;
}

/**
 * Interval-containment points over rows 0..m-1.
 *
 * An interval [s, e] (s <= e) lies inside the window [lo, hi) exactly when
 * e < hi and m-1-s < m-lo. Storing it as primary e, secondary m-1-s turns
 * containment into a two-sided dominance query. The reflection replaces the
 * negated coordinate of the textbook reduction.
 */
struct IntervalPoints {
    index_t m = 0;
    std::vector<std::pair<index_t, index_t>> spans;  // (start, end), inclusive

    PointSet to_point_set() const {
        std::vector<std::pair<index_t, index_t>> pts;
        pts.reserve(spans.size());
        for (auto [s, e] : spans) pts.emplace_back(e, m - 1 - s);
        return make_point_set(m, m, pts);
    }
};

inline IntervalPoints link_intervals(const LinkSet& links) {
    IntervalPoints out{links.rows, {}};
    out.spans.reserve(links.size());
    for (index_t r = 0; r < links.rows; ++r)
        for (index_t l = links.ptr[r]; l < links.ptr[r + 1]; ++l) out.spans.emplace_back(links.start[l], r);
    return out;
}

/// One interval per entry (i, j) with j < m: [min(i,j), max(i,j)].
inline IntervalPoints within_intervals(const CsrMatrix& A) {
    IntervalPoints out{A.rows(), {}};
    for (index_t i = 0; i < A.rows(); ++i)
        for (index_t j : A.row(i))
            if (j < A.rows()) out.spans.emplace_back(std::min(i, j), std::max(i, j));
    return out;
}

inline IntervalPoints extent_intervals(const CsrMatrix& A) {
    IntervalPoints out{A.rows(), {}};
    for (auto [lo, hi] : column_extents(A))
        if (lo >= 0) out.spans.emplace_back(lo, hi);
    return out;
}

/**
 * @brief Coordinate compression of points into rank space.
 *
 * Input points are i-major, j-minor. Point q maps to (q, rank[q]) where rank
 * is the position of the point in j-major, i-minor order. The sorted
 * coordinate lists translate original queries into rank queries.
 */
struct RankSpace {
    std::vector<index_t> rank;     // j-major rank of each point
    std::vector<index_t> i_order;  // i coordinates in i-major order
    std::vector<index_t> j_order;  // j coordinates in j-major order

    /// Number of points with i <= qi (as a rank-space bound).
    index_t i_bound(index_t qi) const {
        return static_cast<index_t>(std::upper_bound(i_order.begin(), i_order.end(), qi) - i_order.begin());
    }
    index_t j_bound(index_t qj) const {
        return static_cast<index_t>(std::upper_bound(j_order.begin(), j_order.end(), qj) - j_order.begin());
    }
};

inline RankSpace rank_space_transform(const std::vector<std::pair<index_t, index_t>>& points) {
    const auto N = static_cast<index_t>(points.size());
    RankSpace rs;
    std::vector<index_t> order(N);
    for (index_t q = 0; q < N; ++q) order[q] = q;
    std::stable_sort(order.begin(), order.end(),
                     [&](index_t a, index_t b) { return points[a].second < points[b].second; });
    rs.rank.resize(N);
    rs.i_order.resize(N);
    rs.j_order.resize(N);
    for (index_t r = 0; r < N; ++r) {
        rs.rank[order[r]] = r;
        rs.j_order[r] = points[order[r]].second;
    }
    for (index_t q = 0; q < N; ++q) rs.i_order[q] = points[q].first;
    return rs;
}

}  // namespace chainpart
