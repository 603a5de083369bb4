#pragma once

// One-based JSON encodings of partitions and permutations.

#include <fstream>
#include <string>

#include <json.hpp>

#include <chainpart/csr.hpp>
#include <chainpart/matrix_market.hpp>
#include <chainpart/rcm.hpp>

namespace chainpart::cli {

using nlohmann::json;

/// Files that cannot be opened or written.
struct IoError : Error {
    using Error::Error;
};

inline json to_json(const SplitPartition& P) {
    json s = json::array();
    for (index_t x : P.splits) s.push_back(x + 1);
    return {{"kind", "split"}, {"K", P.parts()}, {"splits", s}};
}

inline json to_json(const MapPartition& P) {
    json a = json::array();
    for (index_t k : P.asgn) a.push_back(k + 1);
    return {{"kind", "map"}, {"K", P.K}, {"assign", a}};
}

inline json to_json(const Reordering& r) {
    json rows = json::array(), cols = json::array();
    for (index_t v : r.rows.new_to_old) rows.push_back(v + 1);
    for (index_t v : r.cols.new_to_old) cols.push_back(v + 1);
    return {{"kind", "permutation"}, {"rows", rows}, {"cols", cols}};
}

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump() + "\n"); }

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(what + ": missing field '" + key + "'");
    return j.at(key);
}

inline std::vector<index_t> one_based(const json& a, const std::string& what) {
    if (!a.is_array()) throw ParseError(what + ": expected an array");
    std::vector<index_t> out;
    out.reserve(a.size());
    for (const auto& v : a) {
        if (!v.is_number_integer() || v.get<index_t>() < 1) throw ParseError(what + ": entries must be integers >= 1");
        out.push_back(v.get<index_t>() - 1);
    }
    return out;
}

inline void expect_kind(const json& j, const char* kind, const std::string& what) {
    const auto& k = field(j, "kind", what);
    if (!k.is_string() || k.get<std::string>() != kind)
        throw ParseError(what + ": expected a partition of kind '" + kind + "'");
}

}  // namespace detail

inline SplitPartition split_from_json(const json& j, const std::string& what = "partition") {
    detail::expect_kind(j, "split", what);
    SplitPartition P{detail::one_based(detail::field(j, "splits", what), what)};
    const auto& K = detail::field(j, "K", what);
    if (!K.is_number_integer() || K.get<index_t>() != P.parts() || P.parts() < 1)
        throw ParseError(what + ": K disagrees with the number of splits");
    if (!std::is_sorted(P.splits.begin(), P.splits.end()) || P.splits.front() != 0)
        throw ParseError(what + ": splits must start at 1 and be nondecreasing");
    return P;
}

inline MapPartition map_from_json(const json& j, const std::string& what = "partition") {
    detail::expect_kind(j, "map", what);
    const auto& K = detail::field(j, "K", what);
    if (!K.is_number_integer() || K.get<index_t>() < 1) throw ParseError(what + ": K must be a positive integer");
    MapPartition P{K.get<index_t>(), detail::one_based(detail::field(j, "assign", what), what)};
    if (!P.valid()) throw ParseError(what + ": assignment outside 1..K");
    return P;
}

inline SplitPartition load_split(const std::string& path) { return split_from_json(read_json(path), "'" + path + "'"); }
inline MapPartition load_map(const std::string& path) { return map_from_json(read_json(path), "'" + path + "'"); }

}  // namespace chainpart::cli
