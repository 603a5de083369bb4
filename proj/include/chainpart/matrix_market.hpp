#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "csr.hpp"

namespace chainpart {

struct ParseError : Error {
    using Error::Error;
};

namespace detail {

inline std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

struct Triplet {
    index_t i, j;
    double v;
};

}  // namespace detail

/**
 * @brief Reads a Matrix Market coordinate file into CSR.
 *
 * Symmetric and skew-symmetric storage is expanded to the full pattern.
 * Duplicate coordinates are merged, their values summed.
 */
inline CsrMatrix read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty input");
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner");
    object = detail::lowercase(object);
    format = detail::lowercase(format);
    field = detail::lowercase(field);
    symmetry = detail::lowercase(symmetry);
    if (object != "matrix") throw ParseError("unsupported object '" + object + "'");
    if (format != "coordinate") throw ParseError("only coordinate format is supported");
    const bool pattern = field == "pattern";
    if (!pattern && field != "real" && field != "integer" && field != "double")
        throw ParseError("unsupported field '" + field + "'");
    const bool general = symmetry == "general";
    const bool skew = symmetry == "skew-symmetric";
    if (!general && !skew && symmetry != "symmetric")
        throw ParseError("unsupported symmetry '" + symmetry + "'");

    do {
        if (!std::getline(in, line)) throw ParseError("missing size line");
    } while (line.empty() || line[0] == '%');

    index_t m = 0, n = 0, entries = 0;
    {
        std::istringstream size_line(line);
        if (!(size_line >> m >> n >> entries)) throw ParseError("malformed size line");
    }
    if (m <= 0 || n <= 0) throw ParseError("empty matrix");
    if (entries < 0) throw ParseError("negative entry count");

    std::vector<detail::Triplet> trips;
    trips.reserve(general ? entries : 2 * entries);
    index_t read = 0;
    while (read < entries && std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream entry(line);
        index_t i = 0, j = 0;
        double v = 1.0;
        if (!(entry >> i >> j)) throw ParseError("malformed entry on data line " + std::to_string(read + 1));
        if (!pattern && !(entry >> v)) throw ParseError("missing value on data line " + std::to_string(read + 1));
        if (i < 1 || i > m || j < 1 || j > n)
            throw ParseError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") out of bounds");
        trips.push_back({i - 1, j - 1, v});
        if (!general && i != j) trips.push_back({j - 1, i - 1, skew ? -v : v});
        ++read;
    }
    if (read != entries) throw ParseError("expected " + std::to_string(entries) + " entries, found " +
                                          std::to_string(read));
    if (!general && m != n) throw ParseError("symmetric storage requires a square matrix");

    std::sort(trips.begin(), trips.end(),
              [](const auto& a, const auto& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
    std::vector<index_t> pos(m + 1, 0);
    std::vector<index_t> idx;
    std::vector<double> val;
    idx.reserve(trips.size());
    if (!pattern) val.reserve(trips.size());
    for (std::size_t t = 0; t < trips.size(); ++t) {
        if (t > 0 && trips[t].i == trips[t - 1].i && trips[t].j == trips[t - 1].j) {
            if (!pattern) val.back() += trips[t].v;
            continue;
        }
        idx.push_back(trips[t].j);
        if (!pattern) val.push_back(trips[t].v);
        ++pos[trips[t].i + 1];
    }
    for (index_t i = 0; i < m; ++i) pos[i + 1] += pos[i];
    return CsrMatrix(m, n, std::move(pos), std::move(idx), std::move(val));
}

inline CsrMatrix load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_matrix_market(in);
}

/// Writes general coordinate storage; pattern field when A has no values.
inline void write_matrix_market(std::ostream& out, const CsrMatrix& A) {
    out << "%%MatrixMarket matrix coordinate " << (A.has_values() ? "real" : "pattern") << " general\n";
    out << A.rows() << ' ' << A.cols() << ' ' << A.nnz() << '\n';
    out.precision(17);
    for (index_t i = 0; i < A.rows(); ++i) {
        for (index_t q = A.pos()[i]; q < A.pos()[i + 1]; ++q) {
            out << i + 1 << ' ' << A.idx()[q] + 1;
            if (A.has_values()) out << ' ' << A.val()[q];
            out << '\n';
        }
    }
}

inline void save_matrix_market(const std::string& path, const CsrMatrix& A) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_matrix_market(out, A);
}

}  // namespace chainpart
