#pragma once

#include "json.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "mvinterp/approx.hpp"
#include "mvinterp/error.hpp"
#include "mvinterp/multiindex.hpp"
#include "mvinterp/newton.hpp"
#include "mvinterp/nodes.hpp"
#include "mvinterp/transform.hpp"

namespace mvinterp::io {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// ---- text helpers ----

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

/// Numeric rows of a CSV file. Blank lines and lines starting with '#' are
/// skipped; a first line that does not parse as numbers is treated as a header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) {
            const auto b = cell.find_first_not_of(" \t"), e = cell.find_last_not_of(" \t");
            cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        }
        std::vector<double> row;
        bool numeric = true;
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || *end != '\0') {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) {
                t.header = cells;
                first = false;
                continue;
            }
            throw InvalidArgument("csv line " + std::to_string(lineno) + ": non-numeric value");
        }
        if (!t.rows.empty() && row.size() != t.rows.front().size())
            throw InvalidArgument("csv line " + std::to_string(lineno) + ": inconsistent column count");
        t.rows.push_back(std::move(row));
        first = false;
    }
    return t;
}

/// One point per row.
inline std::string points_to_csv(std::span<const double> flat, std::size_t m) {
    std::string s;
    for (std::size_t i = 0; i < flat.size(); i += m) {
        for (std::size_t d = 0; d < m; ++d) s += (d ? "," : "") + format_double(flat[i + d]);
        s += '\n';
    }
    return s;
}

/// Rows of exactly m (or m + 1 with values) columns, flattened.
struct PointTable {
    std::vector<double> points;
    std::vector<double> values;  // empty when no value column
};

inline PointTable points_from_csv(const std::string& text, std::size_t m) {
    CsvTable t = parse_csv(text);
    PointTable out;
    for (const auto& r : t.rows) {
        if (r.size() != m && r.size() != m + 1)
            throw DimensionError("point csv: expected " + std::to_string(m) + " or " + std::to_string(m + 1) +
                                 " columns, got " + std::to_string(r.size()));
        out.points.insert(out.points.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(m));
        if (r.size() == m + 1) out.values.push_back(r[m]);
    }
    if (!out.values.empty() && out.values.size() * m != out.points.size())
        throw InvalidArgument("point csv: value column present on some rows only");
    return out;
}

// ---- JSON ----

inline json degree_norm_to_json(DegreeNorm p) { return p.is_inf() ? json("inf") : json(p.p); }

inline DegreeNorm degree_norm_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return DegreeNorm::infinity();
        throw InvalidArgument("degree norm must be a number or \"inf\"");
    }
    return {j.get<double>()};
}

inline json set_to_json(const MultiIndexSet& A) {
    json j;
    j["m"] = A.dim();
    if (A.degree_spec()) {
        j["n"] = A.degree_spec()->n;
        j["p"] = degree_norm_to_json(A.degree_spec()->p);
    }
    json idx = json::array();
    for (std::size_t i = 0; i < A.size(); ++i) {
        auto a = A.at(i);
        idx.push_back(std::vector<Exponent>(a.begin(), a.end()));
    }
    j["indices"] = std::move(idx);
    return j;
}

inline MultiIndexSet set_from_json(const json& j) {
    try {
        const std::size_t m = j.at("m").get<std::size_t>();
        std::optional<DegreeSpec> spec;
        if (j.contains("n") && j.contains("p"))
            spec = DegreeSpec{j.at("n").get<Exponent>(), degree_norm_from_json(j.at("p"))};
        std::vector<MultiIndex> idx;
        for (const auto& a : j.at("indices")) idx.emplace_back(a.get<std::vector<Exponent>>());
        return MultiIndexSet::from_indices(m, std::move(idx), spec);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("multi-index set json: ") + e.what());
    }
}

inline json gp_to_json(const GeneratingNodes& gp) {
    json j;
    j["unscaled"] = gp.unscaled();
    j["nodes"] = gp.per_dimension();
    return j;
}

inline GeneratingNodes gp_from_json(const json& j) {
    try {
        return GeneratingNodes(j.at("nodes").get<std::vector<std::vector<double>>>(), j.value("unscaled", false));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("generating nodes json: ") + e.what());
    }
}

/// Newton coefficient bundle; carries everything needed to evaluate.
inline json newton_to_json(const NewtonPolynomial& Q) {
    json j;
    j["schema"] = schema_version;
    j["kind"] = "newton";
    j["set"] = set_to_json(Q.set());
    j["gp"] = gp_to_json(Q.gp());
    j["coefficients"] = std::vector<double>(Q.coefficients().begin(), Q.coefficients().end());
    return j;
}

inline void require_schema(const json& j, const char* kind) {
    if (!j.is_object() || j.value("schema", 0) != schema_version)
        throw InvalidArgument(std::string(kind) + " json: missing or unsupported schema version");
    if (j.value("kind", std::string()) != kind)
        throw InvalidArgument(std::string("expected a ") + kind + " bundle");
}

inline NewtonPolynomial newton_from_json(const json& j) {
    require_schema(j, "newton");
    auto A = std::make_shared<const MultiIndexSet>(set_from_json(j.at("set")));
    auto gp = std::make_shared<const GeneratingNodes>(gp_from_json(j.at("gp")));
    return NewtonPolynomial(A, gp, j.at("coefficients").get<std::vector<double>>());
}

/// FNV-1a over the dimension, the multi-indices and the bit patterns of the
/// generating values, as 16 hex digits.
inline std::string content_hash(const MultiIndexSet& A, const GeneratingNodes& gp) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(A.dim());
    mix(A.size());
    for (std::size_t i = 0; i < A.size(); ++i)
        for (Exponent e : A.at(i)) mix(e);
    mix(gp.unscaled());
    for (std::size_t d = 0; d < gp.dim(); ++d) {
        mix(gp[d].size());
        for (double v : gp[d]) mix(std::bit_cast<std::uint64_t>(v));
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

inline json matrix_to_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        std::vector<double> r(static_cast<std::size_t>(M.cols()));
        for (Eigen::Index j = 0; j < M.cols(); ++j) r[static_cast<std::size_t>(j)] = M(i, j);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    Matrix M(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != M.cols()) throw DimensionError("matrix json: ragged rows");
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    return M;
}

inline json transform_to_json(const TransformSet& T) {
    json j;
    j["schema"] = schema_version;
    j["kind"] = "transform";
    j["hash"] = content_hash(T.set(), T.nodes().gp());
    j["set"] = set_to_json(T.set());
    j["gp"] = gp_to_json(T.nodes().gp());
    j["NL"] = matrix_to_json(T.NL());
    j["LN"] = matrix_to_json(T.LN());
    j["CN"] = matrix_to_json(T.CN());
    j["NC"] = matrix_to_json(T.NC());
    return j;
}

/// Loads a cached transform set; throws if its hash does not match its content.
inline TransformSet transform_from_json(const json& j) {
    require_schema(j, "transform");
    auto A = std::make_shared<const MultiIndexSet>(set_from_json(j.at("set")));
    auto gp = std::make_shared<const GeneratingNodes>(gp_from_json(j.at("gp")));
    if (j.value("hash", std::string()) != content_hash(*A, *gp))
        throw InvalidArgument("transform cache: content hash mismatch");
    return TransformSet(UnisolventNodes(A, gp), matrix_from_json(j.at("NL")), matrix_from_json(j.at("LN")),
                        matrix_from_json(j.at("CN")), matrix_from_json(j.at("NC")));
}

// ---- benchmark CSV ----

inline const char* bench_csv_header = "m,n,p,cardinality,max_error,seconds,seed";

inline std::string bench_to_csv(std::span<const BenchmarkRecord> records, bool with_timing = true) {
    std::string s = std::string(bench_csv_header) + "\n";
    for (const auto& r : records) {
        s += std::to_string(r.m) + "," + std::to_string(r.n) + "," + r.p.to_string() + "," +
             std::to_string(r.cardinality) + "," + format_double(r.max_error) + "," +
             (with_timing ? format_double(r.seconds) : std::string("0")) + "," + std::to_string(r.seed) + "\n";
    }
    return s;
}

/// Reads the bench CSV schema; "inf" in the p column is accepted.
inline std::vector<BenchmarkRecord> bench_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<BenchmarkRecord> out;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            if (line.rfind("m,", 0) == 0) continue;
        }
        std::vector<std::string> c;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) c.push_back(cell);
        if (c.size() != 7) throw InvalidArgument("bench csv: expected 7 columns in '" + line + "'");
        try {
            BenchmarkRecord r;
            r.m = std::stoul(c[0]);
            r.n = static_cast<Exponent>(std::stoul(c[1]));
            r.p = c[2] == "inf" ? DegreeNorm::infinity() : DegreeNorm{std::stod(c[2])};
            r.cardinality = std::stoul(c[3]);
            r.max_error = std::stod(c[4]);
            r.seconds = std::stod(c[5]);
            r.seed = std::stoull(c[6]);
            out.push_back(r);
        } catch (const std::logic_error&) {
            throw InvalidArgument("bench csv: bad value in '" + line + "'");
        }
    }
    return out;
}

inline json rate_fit_to_json(const RateFit& f) {
    json j;
    j["rho"] = f.rho;
    j["c"] = f.c;
    j["n_lo"] = f.n_lo;
    j["n_hi"] = f.n_hi;
    j["r_squared"] = f.r_squared;
    j["points_used"] = f.points_used;
    j["points_excluded"] = f.points_floored;
    j["non_converging"] = f.non_converging;
    return j;
}

// ---- functions ----

/// Canonical coefficient CSV: columns alpha_1..alpha_m, c_alpha.
inline CanonicalPolynomial polynomial_from_csv(const std::string& text, std::size_t m) {
    CsvTable t = parse_csv(text);
    std::vector<std::pair<MultiIndex, double>> terms;
    for (const auto& r : t.rows) {
        if (r.size() != m + 1)
            throw DimensionError("coefficient csv: expected " + std::to_string(m + 1) + " columns, got " +
                                 std::to_string(r.size()));
        std::vector<Exponent> a(m);
        for (std::size_t d = 0; d < m; ++d) {
            if (r[d] < 0 || r[d] != std::floor(r[d])) throw InvalidArgument("coefficient csv: bad exponent");
            a[d] = static_cast<Exponent>(r[d]);
        }
        terms.emplace_back(MultiIndex(std::move(a)), r[m]);
    }
    return CanonicalPolynomial(m, std::move(terms));
}

inline std::string polynomial_to_csv(const CanonicalPolynomial& q) {
    std::string s;
    for (const auto& [a, c] : q.terms()) {
        for (std::size_t d = 0; d < q.dim(); ++d) s += std::to_string(a[d]) + ",";
        s += format_double(c) + "\n";
    }
    return s;
}

/// Built-in registry: "runge10", "runge1", or "poly" with a coefficient file.
inline Function function_by_name(const std::string& name, std::size_t m, const std::string& poly_path = {}) {
    if (name == "runge10") return [](std::span<const double> x) { return runge(x, 10.0); };
    if (name == "runge1") return [](std::span<const double> x) { return runge(x, 1.0); };
    if (name == "poly") {
        if (poly_path.empty()) throw InvalidArgument("function 'poly' needs a coefficient file");
        auto q = std::make_shared<const CanonicalPolynomial>(polynomial_from_csv(read_file(poly_path), m));
        return [q](std::span<const double> x) { return (*q)(x); };
    }
    throw InvalidArgument("unknown function '" + name + "' (expected runge10, runge1 or poly)");
}

}  // namespace mvinterp::io
