#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainpart {

using index_t = std::int64_t;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

/**
 * @brief Compressed sparse row pattern with optional values.
 *
 * Indices are zero-based: row i owns idx[pos[i]] .. idx[pos[i+1]-1], sorted
 * strictly increasing. External formats (Matrix Market, partition files)
 * are one-based and converted at the boundary.
 */
class CsrMatrix {
public:
    CsrMatrix() = default;

    CsrMatrix(index_t m, index_t n, std::vector<index_t> pos, std::vector<index_t> idx,
              std::vector<double> val = {})
        : m_(m), n_(n), pos_(std::move(pos)), idx_(std::move(idx)), val_(std::move(val)) {
        validate();
    }

    /// Builds a pattern matrix from per-row column lists (zero-based).
    static CsrMatrix from_rows(index_t n, const std::vector<std::vector<index_t>>& rows) {
        std::vector<index_t> pos{0};
        std::vector<index_t> idx;
        for (auto row : rows) {
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
            idx.insert(idx.end(), row.begin(), row.end());
            pos.push_back(static_cast<index_t>(idx.size()));
        }
        return CsrMatrix(static_cast<index_t>(rows.size()), n, std::move(pos), std::move(idx));
    }

    static CsrMatrix identity(index_t m) {
        std::vector<index_t> pos(m + 1);
        std::iota(pos.begin(), pos.end(), index_t{0});
        std::vector<index_t> idx(m);
        std::iota(idx.begin(), idx.end(), index_t{0});
        return CsrMatrix(m, m, std::move(pos), std::move(idx));
    }

    index_t rows() const { return m_; }
    index_t cols() const { return n_; }
    index_t nnz() const { return pos_.empty() ? 0 : pos_.back(); }
    bool has_values() const { return !val_.empty(); }

    std::span<const index_t> pos() const { return pos_; }
    std::span<const index_t> idx() const { return idx_; }
    std::span<const double> val() const { return val_; }

    index_t degree(index_t i) const { return pos_[i + 1] - pos_[i]; }

    std::span<const index_t> row(index_t i) const {
        return std::span<const index_t>(idx_).subspan(pos_[i], degree(i));
    }

    double value(index_t q) const { return val_.empty() ? 1.0 : val_[q]; }

    friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

private:
    void validate() const {
        if (m_ < 0 || n_ < 0) throw DimensionError("negative matrix dimension");
        if (static_cast<index_t>(pos_.size()) != m_ + 1 || pos_.front() != 0)
            throw DimensionError("pos must have m+1 entries starting at 0");
        if (pos_.back() != static_cast<index_t>(idx_.size()))
            throw DimensionError("pos[m] must equal the number of stored entries");
        if (!val_.empty() && val_.size() != idx_.size())
            throw DimensionError("val and idx lengths differ");
        for (index_t i = 0; i < m_; ++i) {
            if (pos_[i] > pos_[i + 1]) throw DimensionError("pos must be nondecreasing");
            for (index_t q = pos_[i]; q < pos_[i + 1]; ++q) {
                if (idx_[q] < 0 || idx_[q] >= n_)
                    throw DimensionError("column index out of range in row " + std::to_string(i));
                if (q > pos_[i] && idx_[q - 1] >= idx_[q])
                    throw DimensionError("column indices must be strictly increasing in row " +
                                         std::to_string(i));
            }
        }
    }

    index_t m_ = 0;
    index_t n_ = 0;
    std::vector<index_t> pos_{0};
    std::vector<index_t> idx_;
    std::vector<double> val_;
};

/**
 * @brief Contiguous K-partition encoded by K+1 split points.
 *
 * Part k covers rows splits[k] .. splits[k+1]-1 (possibly empty), with
 * splits[0] = 0 and splits[K] = m.
 */
struct SplitPartition {
    std::vector<index_t> splits;

    index_t parts() const { return static_cast<index_t>(splits.size()) - 1; }
    index_t begin(index_t k) const { return splits[k]; }
    index_t end(index_t k) const { return splits[k + 1]; }

    bool valid_for(index_t m) const {
        if (splits.size() < 2 || splits.front() != 0 || splits.back() != m) return false;
        return std::is_sorted(splits.begin(), splits.end());
    }

    /// Part index of every element (length m).
    std::vector<index_t> owners() const {
        std::vector<index_t> out(splits.empty() ? 0 : splits.back());
        for (index_t k = 0; k < parts(); ++k)
            std::fill(out.begin() + splits[k], out.begin() + splits[k + 1], k);
        return out;
    }

    static SplitPartition equal(index_t m, index_t K) {
        SplitPartition p;
        p.splits.resize(K + 1);
        for (index_t k = 0; k <= K; ++k) p.splits[k] = k * m / K;
        return p;
    }

    friend bool operator==(const SplitPartition&, const SplitPartition&) = default;
};

/// Arbitrary assignment of elements to parts 0..K-1.
struct MapPartition {
    index_t K = 0;
    std::vector<index_t> asgn;

    bool valid() const {
        return std::all_of(asgn.begin(), asgn.end(), [&](index_t k) { return k >= 0 && k < K; });
    }

    friend bool operator==(const MapPartition&, const MapPartition&) = default;
};

inline CsrMatrix transpose(const CsrMatrix& A) {
    const index_t m = A.rows(), n = A.cols(), N = A.nnz();
    std::vector<index_t> pos(n + 1, 0);
    for (index_t j : A.idx()) ++pos[j + 1];
    std::partial_sum(pos.begin(), pos.end(), pos.begin());
    std::vector<index_t> next(pos.begin(), pos.end() - 1);
    std::vector<index_t> idx(N);
    std::vector<double> val(A.has_values() ? N : 0);
    for (index_t i = 0; i < m; ++i) {
        for (index_t q = A.pos()[i]; q < A.pos()[i + 1]; ++q) {
            index_t dst = next[A.idx()[q]]++;
            idx[dst] = i;
            if (A.has_values()) val[dst] = A.val()[q];
        }
    }
    return CsrMatrix(n, m, std::move(pos), std::move(idx), std::move(val));
}

/// y = A x, treating pattern matrices as all-ones.
inline void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
    if (static_cast<index_t>(x.size()) != A.cols() || static_cast<index_t>(y.size()) != A.rows())
        throw DimensionError("spmv dimension mismatch");
    const auto pos = A.pos();
    const auto idx = A.idx();
    const auto val = A.val();
    for (index_t i = 0; i < A.rows(); ++i) {
        double acc = 0.0;
        if (val.empty()) {
            for (index_t q = pos[i]; q < pos[i + 1]; ++q) acc += x[idx[q]];
        } else {
            for (index_t q = pos[i]; q < pos[i + 1]; ++q) acc += val[q] * x[idx[q]];
        }
        y[i] = acc;
    }
}

inline std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x) {
    std::vector<double> y(A.rows());
    spmv(A, x, y);
    return y;
}

/// Number of columns holding at least one entry.
inline index_t nonempty_columns(const CsrMatrix& A) {
    std::vector<char> seen(A.cols(), 0);
    index_t count = 0;
    for (index_t j : A.idx()) {
        if (!seen[j]) {
            seen[j] = 1;
            ++count;
        }
    }
    return count;
}

inline index_t min_row_degree(const CsrMatrix& A) {
    index_t w = A.rows() > 0 ? A.degree(0) : 0;
    for (index_t i = 1; i < A.rows(); ++i) w = std::min(w, A.degree(i));
    return w;
}

}  // namespace chainpart
