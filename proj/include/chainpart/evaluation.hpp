#pragma once

#include <algorithm>
#include <vector>

#include "atoms.hpp"
#include "objective.hpp"

namespace chainpart {

/// Costs of one partition together with the conventional cut metrics.
struct PartitionReport {
    std::vector<double> part_costs;
    double bottleneck = -kInf;
    double total = 0.0;
    index_t edge_cut = 0;       // entries (i, j), j < m, whose row and column land in different parts
    index_t hyperedge_cut = 0;  // nonempty columns touched by more than one part
    index_t connectivity = 0;   // sum over columns of (parts touched - 1)
    index_t offset = 0;         // constant turning the partwise total into the metric of the objective
};

/// Entries whose column index is also a row index.
inline index_t square_entries(const CsrMatrix& A) {
    index_t c = 0;
    for (index_t j : A.idx()) c += j < A.rows();
    return c;
}

/**
 * Constant added to the sum of partwise costs to recover the conventional
 * metric: edge cut, hyperedge cut or connectivity minus one.
 */
inline index_t objective_offset(const CsrMatrix& A, ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::EdgeCut: return square_entries(A);
        case ObjectiveKind::HyperedgeCut: return nonempty_columns(A);
        case ObjectiveKind::Connectivity: return -nonempty_columns(A);
        default: return 0;
    }
}

/// One sweep over the rows with online counters.
inline PartitionReport evaluate(const CsrMatrix& A, const Objective& obj, const SplitPartition& P,
                                const MapPartition* phi = nullptr) {
    if (!P.valid_for(A.rows())) throw DimensionError("partition does not match the matrix rows");
    if (obj.needs_phi() && !phi) throw Error("objective needs a fixed column partition");
    unsigned mask = atom::All & ~atom::Local;
    if (phi) mask |= atom::Local;
    OnlineAtoms atoms(A, mask, obj.coef.w_min, phi);
    PartitionReport r;
    index_t within = 0, contained = 0, incident = 0;
    for (index_t k = 0; k < P.parts(); ++k) {
        atoms.seek(P.begin(k), P.end(k));
        const CostAtoms x = atoms.atoms(k);
        const double c = obj.eval(x);
        r.part_costs.push_back(c);
        r.bottleneck = std::max(r.bottleneck, c);
        r.total += c;
        within += x.within;
        contained += x.contained;
        incident += x.incident;
    }
    const index_t cols = nonempty_columns(A);
    r.edge_cut = square_entries(A) - within;
    r.hyperedge_cut = cols - contained;
    r.connectivity = incident - cols;
    r.offset = objective_offset(A, obj.kind);
    return r;
}

/// Bottleneck cost through a random-access oracle, without counting calls.
template <class Oracle>
double bottleneck_cost(const Oracle& f, const SplitPartition& P) {
    double c = -kInf;
    for (index_t k = 0; k < P.parts(); ++k) c = std::max(c, f.peek(k, P.begin(k), P.end(k)));
    return c;
}

}  // namespace chainpart
