#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "csr.hpp"
#include "dominance.hpp"
#include "structure.hpp"

namespace chainpart {

/**
 * @brief Per-part quantities every built-in objective is a linear form of.
 *
 * For a row window W and its column part φ:
 *   row         |W|
 *   entry       Σ_{i∈W} |v_i|
 *   delta_entry Σ_{i∈W} max(|v_i| - w_min, 0)
 *   within      Σ_{i∈W} |v_i ∩ W|
 *   contained   columns whose entries all lie in W (nonempty columns only)
 *   incident    |∪_{i∈W} v_i|
 *   local       |∪_{i∈W} v_i ∩ φ|
 *   diagonal    |∪_{i∈W} v_i ∪ W|, counting only row indices that are also columns
 */
struct CostAtoms {
    index_t row = 0;
    index_t entry = 0;
    index_t delta_entry = 0;
    index_t within = 0;
    index_t contained = 0;
    index_t incident = 0;
    index_t local = 0;
    index_t diagonal = 0;

    friend bool operator==(const CostAtoms&, const CostAtoms&) = default;
};

namespace atom {
enum : unsigned {
    Row = 1u << 0,
    Entry = 1u << 1,
    DeltaEntry = 1u << 2,
    Within = 1u << 3,
    Contained = 1u << 4,
    Incident = 1u << 5,
    Local = 1u << 6,
    Diagonal = 1u << 7,
    All = (1u << 8) - 1,
};
}  // namespace atom

/// Prefix arrays behind the atoms that need no dominance counting.
class AtomPrefixes {
public:
    AtomPrefixes() = default;

    AtomPrefixes(const CsrMatrix& A, index_t w_min, const MapPartition* phi)
        : m_(A.rows()), entry_(A.pos().begin(), A.pos().end()), delta_(A.rows() + 1, 0), missing_diag_(A.rows() + 1, 0) {
        for (index_t i = 0; i < m_; ++i) {
            delta_[i + 1] = delta_[i] + std::max<index_t>(A.degree(i) - w_min, 0);
            bool missing = i < A.cols();
            if (missing) {
                const auto r = A.row(i);
                missing = !std::binary_search(r.begin(), r.end(), i);
            }
            missing_diag_[i + 1] = missing_diag_[i] + missing;
        }
        if (phi) {
            if (static_cast<index_t>(phi->asgn.size()) != A.cols())
                throw DimensionError("column partition length differs from column count");
            if (!phi->valid()) throw Error("column partition has out-of-range parts");
            local_rows_.assign(phi->K, {});
            for (index_t i = 0; i < m_; ++i)
                for (index_t j : A.row(i)) local_rows_[phi->asgn[j]].push_back(i);
        }
    }

    index_t entries(index_t lo, index_t hi) const { return entry_[hi] - entry_[lo]; }
    index_t delta_entries(index_t lo, index_t hi) const { return delta_[hi] - delta_[lo]; }
    index_t missing_diagonal(index_t lo, index_t hi) const { return missing_diag_[hi] - missing_diag_[lo]; }

    /// Entries in rows [lo, hi) whose column belongs to part k.
    index_t local_entries(index_t k, index_t lo, index_t hi) const {
        if (local_rows_.empty()) throw Error("local atom needs a fixed column partition");
        if (k < 0 || k >= static_cast<index_t>(local_rows_.size())) return 0;
        const auto& r = local_rows_[k];
        return std::lower_bound(r.begin(), r.end(), hi) - std::lower_bound(r.begin(), r.end(), lo);
    }

    bool has_phi() const { return !local_rows_.empty(); }
    index_t rows() const { return m_; }

private:
    index_t m_ = 0;
    std::vector<index_t> entry_;
    std::vector<index_t> delta_;
    std::vector<index_t> missing_diag_;
    std::vector<std::vector<index_t>> local_rows_;  // rows of the entries in each column part, sorted
};

/**
 * @brief Random-access atoms for arbitrary row windows via offline counters.
 *
 * Only the counters needed by `mask` are built.
 */
class OfflineAtoms {
public:
    OfflineAtoms() = default;

    OfflineAtoms(const CsrMatrix& A, unsigned mask, index_t w_min, const MapPartition* phi = nullptr,
                 std::optional<CounterParams> params = std::nullopt)
        : mask_(mask), prefix_(A, w_min, phi) {
        if ((mask & atom::Local) && !phi) throw Error("local atom needs a fixed column partition");
        if (mask & atom::Incident) links_ = OfflineIntervalCounter(link_intervals(compute_links(A)), params);
        if (mask & atom::Within) within_ = OfflineIntervalCounter(within_intervals(A), params);
        if (mask & atom::Contained) extents_ = OfflineIntervalCounter(extent_intervals(A), params);
        if (mask & atom::Diagonal) filled_ = OfflineIntervalCounter(link_intervals(compute_links(A, true)), params);
        if (mask & atom::Local) {
            const auto links = compute_links(A);
            std::vector<index_t> labels(links.size());
            for (index_t l = 0; l < links.size(); ++l) labels[l] = phi->asgn[links.column[l]];
            local_ = SegmentedIntervalCounter(link_intervals(links), labels, phi->K);
        }
    }

    /// Atoms of rows [lo, hi) against column part k; atoms outside the mask stay zero.
    CostAtoms atoms(index_t lo, index_t hi, index_t k = 0) const {
        if (lo < 0 || lo > hi || hi > prefix_.rows()) throw Error("row window out of range");
        CostAtoms x;
        if (lo == hi) return x;
        x.row = hi - lo;
        x.entry = prefix_.entries(lo, hi);
        x.delta_entry = prefix_.delta_entries(lo, hi);
        if (mask_ & atom::Within) x.within = within_.count(lo, hi);
        if (mask_ & atom::Contained) x.contained = extents_.count(lo, hi);
        if (mask_ & atom::Incident) x.incident = x.entry - links_.count(lo, hi);
        if (mask_ & atom::Local) x.local = prefix_.local_entries(k, lo, hi) - local_.count(k, lo, hi);
        if (mask_ & atom::Diagonal) x.diagonal = x.entry + prefix_.missing_diagonal(lo, hi) - filled_.count(lo, hi);
        return x;
    }

    /// Links with both ends in rows [lo, hi).
    index_t links(index_t lo, index_t hi) const { return links_.count(lo, hi); }

    unsigned mask() const { return mask_; }
    index_t rows() const { return prefix_.rows(); }

private:
    unsigned mask_ = 0;
    AtomPrefixes prefix_;
    OfflineIntervalCounter links_, within_, extents_, filled_;
    SegmentedIntervalCounter local_;
};

/**
 * @brief Atoms of a sliding window [lo, hi) maintained by online counters.
 *
 * Mirrors OnlineDominanceCounter: push_back extends the end, push_front
 * extends the start, restart collapses the window to [hi, hi).
 */
class OnlineAtoms {
public:
    OnlineAtoms() = default;

    OnlineAtoms(const CsrMatrix& A, unsigned mask, index_t w_min, const MapPartition* phi = nullptr)
        : mask_(mask), prefix_(A, w_min, phi) {
        if ((mask & atom::Local) && !phi) throw Error("local atom needs a fixed column partition");
        const IntervalPoints none{A.rows(), {}};
        links_ = OnlineDominanceCounter((mask & atom::Incident) ? link_intervals(compute_links(A)) : none);
        within_ = OnlineDominanceCounter((mask & atom::Within) ? within_intervals(A) : none);
        extents_ = OnlineDominanceCounter((mask & atom::Contained) ? extent_intervals(A) : none);
        filled_ = OnlineDominanceCounter((mask & atom::Diagonal) ? link_intervals(compute_links(A, true)) : none);
        if (mask & atom::Local) {
            const auto links = compute_links(A);
            std::vector<index_t> labels(links.size());
            for (index_t l = 0; l < links.size(); ++l) labels[l] = phi->asgn[links.column[l]];
            local_ = PartitionedOnlineCounter(link_intervals(links), labels, phi->K);
        }
    }

    index_t lo() const { return links_.lo(); }
    index_t hi() const { return links_.hi(); }

    void push_back() {
        links_.push_back();
        within_.push_back();
        extents_.push_back();
        filled_.push_back();
        if (mask_ & atom::Local) local_.push_back();
    }

    void push_front() {
        links_.push_front();
        within_.push_front();
        extents_.push_front();
        filled_.push_front();
        if (mask_ & atom::Local) local_.push_front();
    }

    void restart() {
        links_.restart();
        within_.restart();
        extents_.restart();
        filled_.restart();
        if (mask_ & atom::Local) local_.restart();
    }

    void reset() {
        links_.reset();
        within_.reset();
        extents_.reset();
        filled_.reset();
        if (mask_ & atom::Local) local_.reset();
    }

    /// Moves to window [lo, hi); hi may not decrease unless the counters are reset.
    void seek(index_t lo, index_t hi) {
        if (hi < this->hi()) reset();
        if (lo <= this->lo() && hi == this->hi()) {
            while (this->lo() > lo) push_front();
            return;
        }
        while (this->hi() < hi) push_back();
        restart();
        while (this->lo() > lo) push_front();
    }

    CostAtoms atoms(index_t k = 0) const {
        CostAtoms x;
        const index_t lo = this->lo(), hi = this->hi();
        if (lo == hi) return x;
        x.row = hi - lo;
        x.entry = prefix_.entries(lo, hi);
        x.delta_entry = prefix_.delta_entries(lo, hi);
        if (mask_ & atom::Within) x.within = within_.count();
        if (mask_ & atom::Contained) x.contained = extents_.count();
        if (mask_ & atom::Incident) x.incident = x.entry - links_.count();
        if (mask_ & atom::Local) x.local = prefix_.local_entries(k, lo, hi) - local_.count(k);
        if (mask_ & atom::Diagonal) x.diagonal = x.entry + prefix_.missing_diagonal(lo, hi) - filled_.count();
        return x;
    }

    unsigned mask() const { return mask_; }
    index_t rows() const { return prefix_.rows(); }

private:
    unsigned mask_ = 0;
    AtomPrefixes prefix_;
    OnlineDominanceCounter links_, within_, extents_, filled_;
    PartitionedOnlineCounter local_;
};

}  // namespace chainpart
