#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "atoms.hpp"
#include "csr.hpp"

namespace chainpart {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Product with the convention 0 * inf = 0.
inline double xmul(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

enum class ObjectiveKind {
    EdgeCut,         // -within per part
    HyperedgeCut,    // -contained per part
    Connectivity,    // incident
    ChainsOnChains,  // entry
    Work,            // c_row row + c_entry entry
    NonsymInitial,   // work + c_message incident
    Nonsym,          // work + c_message (incident - local), needs a column partition
    MonoSymmetric,   // monotonized symmetric cost
};

inline const char* to_string(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::EdgeCut: return "edge-cut";
        case ObjectiveKind::HyperedgeCut: return "hyperedge-cut";
        case ObjectiveKind::Connectivity: return "connectivity";
        case ObjectiveKind::ChainsOnChains: return "chains-on-chains";
        case ObjectiveKind::Work: return "work";
        case ObjectiveKind::NonsymInitial: return "nonsym-initial";
        case ObjectiveKind::Nonsym: return "nonsym";
        case ObjectiveKind::MonoSymmetric: return "mono-symmetric";
    }
    return "?";
}

struct Coefficients {
    double c_row = 10.0;
    double c_entry = 1.0;
    double c_message = 100.0;
    index_t w_min = 0;

    /// Defaults with w_min taken from the matrix.
    static Coefficients defaults_for(const CsrMatrix& A) {
        Coefficients c;
        c.w_min = min_row_degree(A);
        return c;
    }

    bool nonnegative() const { return c_row >= 0 && c_entry >= 0 && c_message >= 0 && w_min >= 0; }

    /// Condition under which the monotonized symmetric cost is increasing.
    bool monotone_symmetric() const { return c_row + static_cast<double>(w_min) * c_entry >= c_message; }
};

enum class WeightKind { Rows, Entries };

/// tau(w): 0 while the part weight stays within w_max, +inf beyond.
struct Threshold {
    WeightKind weight = WeightKind::Entries;
    double w_max = kInf;

    double weight_of(const CostAtoms& x) const {
        return static_cast<double>(weight == WeightKind::Rows ? x.row : x.entry);
    }
    bool admits(const CostAtoms& x) const { return weight_of(x) <= w_max; }
};

enum class Property { Increasing, Decreasing, Subadditive, Superadditive, Convex, Concave };

inline const char* to_string(Property p) {
    switch (p) {
        case Property::Increasing: return "increasing";
        case Property::Decreasing: return "decreasing";
        case Property::Subadditive: return "subadditive";
        case Property::Superadditive: return "superadditive";
        case Property::Convex: return "convex";
        case Property::Concave: return "concave";
    }
    return "?";
}

struct PropertyFlags {
    bool increasing = false;
    bool decreasing = false;
    bool subadditive = false;
    bool superadditive = false;
    bool convex = false;
    bool concave = false;

    bool has(Property p) const {
        switch (p) {
            case Property::Increasing: return increasing;
            case Property::Decreasing: return decreasing;
            case Property::Subadditive: return subadditive;
            case Property::Superadditive: return superadditive;
            case Property::Convex: return convex;
            case Property::Concave: return concave;
        }
        return false;
    }

    /// Flags that survive adding two functions together.
    PropertyFlags operator&(const PropertyFlags& o) const {
        return {increasing && o.increasing, decreasing && o.decreasing, subadditive && o.subadditive,
                superadditive && o.superadditive, convex && o.convex, concave && o.concave};
    }

    static PropertyFlags additive_increasing() { return {true, false, true, true, true, true}; }
    static PropertyFlags coverage() { return {true, false, true, false, true, false}; }
    static PropertyFlags negated_coverage() { return {false, true, true, false, true, false}; }
    static PropertyFlags threshold() { return {true, false, false, true, false, true}; }
};

/**
 * @brief A named per-part cost function f_k(lo, hi) over row windows.
 *
 * Every kind is a linear combination of CostAtoms plus an optional threshold.
 */
struct Objective {
    ObjectiveKind kind = ObjectiveKind::Connectivity;
    Coefficients coef;
    std::optional<Threshold> threshold;

    Objective() = default;
    Objective(ObjectiveKind k, Coefficients c = {}, std::optional<Threshold> t = std::nullopt)
        : kind(k), coef(c), threshold(t) {}

    unsigned required_atoms() const {
        unsigned m = atom::Row | atom::Entry;
        switch (kind) {
            case ObjectiveKind::EdgeCut: m |= atom::Within; break;
            case ObjectiveKind::HyperedgeCut: m |= atom::Contained; break;
            case ObjectiveKind::Connectivity:
            case ObjectiveKind::NonsymInitial: m |= atom::Incident; break;
            case ObjectiveKind::Nonsym: m |= atom::Incident | atom::Local; break;
            case ObjectiveKind::MonoSymmetric: m |= atom::DeltaEntry | atom::Diagonal; break;
            default: break;
        }
        return m;
    }

    bool needs_phi() const { return kind == ObjectiveKind::Nonsym; }

    /// The same cost for every part index.
    bool uniform() const { return kind != ObjectiveKind::Nonsym; }

    /// Cost without the threshold term.
    double base(const CostAtoms& x) const {
        const double row = static_cast<double>(x.row), entry = static_cast<double>(x.entry);
        const double work = coef.c_row * row + coef.c_entry * entry;
        switch (kind) {
            case ObjectiveKind::EdgeCut: return -static_cast<double>(x.within);
            case ObjectiveKind::HyperedgeCut: return -static_cast<double>(x.contained);
            case ObjectiveKind::Connectivity: return static_cast<double>(x.incident);
            case ObjectiveKind::ChainsOnChains: return entry;
            case ObjectiveKind::Work: return work;
            case ObjectiveKind::NonsymInitial: return work + coef.c_message * static_cast<double>(x.incident);
            case ObjectiveKind::Nonsym:
                return work + coef.c_message * static_cast<double>(x.incident - x.local);
            case ObjectiveKind::MonoSymmetric: {
                const double lead = coef.c_row + static_cast<double>(coef.w_min) * coef.c_entry - coef.c_message;
                return lead * row + coef.c_entry * static_cast<double>(x.delta_entry) +
                       coef.c_message * static_cast<double>(x.diagonal);
            }
        }
        return 0.0;
    }

    double eval(const CostAtoms& x) const {
        if (threshold && !threshold->admits(x)) return kInf;
        return base(x);
    }

    PropertyFlags flags() const {
        PropertyFlags f;
        switch (kind) {
            case ObjectiveKind::EdgeCut:
            case ObjectiveKind::HyperedgeCut: f = PropertyFlags::negated_coverage(); break;
            case ObjectiveKind::ChainsOnChains: f = PropertyFlags::additive_increasing(); break;
            case ObjectiveKind::Work:
                f = PropertyFlags::additive_increasing();
                if (coef.c_row < 0 || coef.c_entry < 0) f.increasing = false;
                break;
            case ObjectiveKind::Connectivity:
            case ObjectiveKind::NonsymInitial:
            case ObjectiveKind::Nonsym: f = PropertyFlags::coverage(); break;
            case ObjectiveKind::MonoSymmetric:
                f = PropertyFlags::coverage();
                f.increasing = coef.monotone_symmetric();
                break;
        }
        if (threshold && std::isfinite(threshold->w_max)) f = f & PropertyFlags::threshold();
        return f;
    }

    bool increasing() const { return flags().increasing; }
    bool decreasing() const { return flags().decreasing; }
};

/**
 * @brief f_k(lo, hi) backed by offline counters, with a call counter.
 *
 * Holds what it needs by value, so it stays valid after the matrix goes away.
 */
class CostOracle {
public:
    CostOracle() = default;

    CostOracle(const CsrMatrix& A, Objective obj, const MapPartition* phi = nullptr,
               std::optional<CounterParams> params = std::nullopt)
        : obj_(obj),
          m_(A.rows()),
          K_(phi ? phi->K : 0),
          atoms_(std::make_shared<OfflineAtoms>(A, obj.required_atoms(), obj.coef.w_min, phi, params)) {
        if (obj.needs_phi() && !phi) throw Error("objective needs a fixed column partition");
    }

    double operator()(index_t k, index_t lo, index_t hi) const {
        ++calls_;
        return obj_.eval(atoms_->atoms(lo, hi, k));
    }

    /// Evaluation that does not count towards calls().
    double peek(index_t k, index_t lo, index_t hi) const { return obj_.eval(atoms_->atoms(lo, hi, k)); }

    CostAtoms atoms(index_t k, index_t lo, index_t hi) const { return atoms_->atoms(lo, hi, k); }

    index_t rows() const { return m_; }
    index_t phi_parts() const { return K_; }
    const Objective& objective() const { return obj_; }
    index_t calls() const { return calls_; }
    void reset_calls() const { calls_ = 0; }

private:
    Objective obj_;
    index_t m_ = 0;
    index_t K_ = 0;
    std::shared_ptr<const OfflineAtoms> atoms_;
    mutable index_t calls_ = 0;
};

/**
 * @brief f_k(lo, hi) backed by online counters.
 *
 * Cheap when successive windows share their end and move their start down,
 * or move their end forward; any other order falls back to a rescan.
 */
class SweepOracle {
public:
    SweepOracle(const CsrMatrix& A, Objective obj, const MapPartition* phi = nullptr)
        : obj_(obj), atoms_(A, obj.required_atoms(), obj.coef.w_min, phi) {
        if (obj.needs_phi() && !phi) throw Error("objective needs a fixed column partition");
    }

    double operator()(index_t k, index_t lo, index_t hi) {
        ++calls_;
        return obj_.eval(atoms(k, lo, hi));
    }

    CostAtoms atoms(index_t k, index_t lo, index_t hi) {
        if (lo < 0 || lo > hi || hi > atoms_.rows()) throw Error("row window out of range");
        atoms_.seek(lo, hi);
        return atoms_.atoms(k);
    }

    index_t rows() const { return atoms_.rows(); }
    const Objective& objective() const { return obj_; }
    index_t calls() const { return calls_; }
    void reset_calls() { calls_ = 0; }

private:
    Objective obj_;
    OnlineAtoms atoms_;
    index_t calls_ = 0;
};

}  // namespace chainpart
