#pragma once

#include <algorithm>

#include "atoms.hpp"
#include "objective.hpp"

namespace chainpart {

struct CostBounds {
    double low = 0.0;
    double high = 0.0;
};

/**
 * @brief Naive bracket of the optimal bottleneck cost of a K-partition.
 *
 * Increasing costs: the costliest single row from below (raised to f(V)/K
 * for uniform subadditive costs) and f(V) from above. Costs that differ per
 * part are bounded from below by their work terms alone. Decreasing costs:
 * max_k f_k(V) from below and the empty-part cost from above.
 */
inline CostBounds bounds_for(const CsrMatrix& A, const Objective& obj, index_t K, const MapPartition* phi = nullptr) {
    if (K < 1) throw Error("need at least one part");
    const auto flags = obj.flags();
    if (!flags.increasing && !flags.decreasing) throw Error("bounds need a monotone objective");
    if (obj.needs_phi() && !phi) throw Error("objective needs a fixed column partition");
    const index_t m = A.rows();
    const index_t parts = obj.uniform() ? 1 : std::min<index_t>(K, phi->K);
    OnlineAtoms atoms(A, obj.required_atoms(), obj.coef.w_min, phi);

    atoms.seek(0, m);
    double whole = -kInf;
    for (index_t k = 0; k < parts; ++k) whole = std::max(whole, obj.eval(atoms.atoms(k)));
    CostBounds b;
    if (flags.decreasing) {
        b.low = whole;
        b.high = obj.eval(CostAtoms{});
        return b;
    }

    // per-part costs are bounded through their work terms, which every part shares
    const bool uniform = obj.uniform();
    const Objective minorant = uniform ? obj : Objective(ObjectiveKind::Work, obj.coef);
    double single = -kInf;
    atoms.reset();
    for (index_t i = 0; i < m; ++i) {
        atoms.seek(i, i + 1);
        single = std::max(single, minorant.eval(atoms.atoms(0)));
    }
    b.high = whole;
    b.low = single;
    if (minorant.flags().subadditive && std::isfinite(whole)) {
        atoms.seek(0, m);
        b.low = std::max(b.low, minorant.eval(atoms.atoms(0)) / static_cast<double>(K));
    }
    if (m == 0) b.low = b.high = obj.eval(CostAtoms{});
    return b;
}

}  // namespace chainpart
