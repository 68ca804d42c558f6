#pragma once

// File formats.
//
//   matrix CSV   one row per classifier, comma-separated decimals, optional
//                leading header line "# p=<p> n=<n>" (checked when present).
//   labeled CSV  same layout; the last row holds the +-1 training labels.
//   vectors      JSON arrays of numbers (b, z, g).  An object with a "b"
//                member is also accepted where b is expected.
//   noise        JSON array (symmetric alpha) or {"lower": [...], "upper": [...]}.
//   report       one JSON object, see RunReport.

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "core.hpp"
#include "slack.hpp"

namespace minimax::io {

using json = nlohmann::ordered_json;

struct parse_error : error {
    parse_error(const std::string& source, std::size_t line, std::size_t column,
                const std::string& what)
        : error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line(line),
          column(column) {}
    std::size_t line;
    std::size_t column;
};

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error(path, 0, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    out << text;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

struct CsvTable {
    std::vector<Vector> rows;
    std::optional<std::size_t> header_p;
    std::optional<std::size_t> header_n;
    std::size_t header_line = 0;
};

inline bool parse_header_field(std::string_view token, std::string_view key, std::size_t& out) {
    if (token.substr(0, key.size()) != key) return false;
    token.remove_prefix(key.size());
    const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    return res.ec == std::errc{} && res.ptr == token.data() + token.size();
}

inline CsvTable parse_csv(const std::string& text, const std::string& source) {
    CsvTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line(text.data() + pos, end - pos);
        ++line_no;
        pos = end + 1;
        const auto body = trim(line);
        if (body.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (body.front() == '#') {
            if (!table.rows.empty())
                throw parse_error(source, line_no, 1, "header must precede data rows");
            std::istringstream hs{std::string(body.substr(1))};
            std::string tok;
            while (hs >> tok) {
                std::size_t v = 0;
                if (parse_header_field(tok, "p=", v))
                    table.header_p = v;
                else if (parse_header_field(tok, "n=", v) || parse_header_field(tok, "m=", v))
                    table.header_n = v;
                else
                    throw parse_error(source, line_no, 1, "unrecognized header token '" + tok + "'");
            }
            table.header_line = line_no;
            if (end == text.size()) break;
            continue;
        }
        Vector row;
        std::size_t col = 1;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            const std::size_t stop = comma == std::string_view::npos ? line.size() : comma;
            const auto field = trim(line.substr(start, stop - start));
            double v = 0.0;
            const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
            if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size())
                throw parse_error(source, line_no, col,
                                  "expected a number, got '" + std::string(field) + "'");
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
            ++col;
        }
        if (!table.rows.empty() && row.size() != table.rows.front().size())
            throw parse_error(source, line_no, row.size(),
                              "row has " + std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(table.rows.front().size()));
        table.rows.push_back(std::move(row));
        if (end == text.size()) break;
    }
    if (table.rows.empty()) throw parse_error(source, line_no, 1, "no data rows");
    return table;
}

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw parse_error(source, line, col, "malformed JSON");
    }
}

inline Vector numbers(const json& j, const std::string& source) {
    if (!j.is_array()) throw parse_error(source, 1, 1, "expected a JSON array of numbers");
    Vector out;
    out.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number())
            throw parse_error(source, 1, 1, "element " + std::to_string(k) + " is not a number");
        out.push_back(j[k].get<double>());
    }
    return out;
}

}  // namespace detail

inline PredictionMatrix parse_matrix_csv(const std::string& text, const std::string& source = "<matrix>") {
    auto table = detail::parse_csv(text, source);
    if (table.header_p && *table.header_p != table.rows.size())
        throw parse_error(source, table.header_line, 1,
                          "header says p=" + std::to_string(*table.header_p) + " but file has " +
                              std::to_string(table.rows.size()) + " rows");
    if (table.header_n && *table.header_n != table.rows.front().size())
        throw parse_error(source, table.header_line, 1,
                          "header says n=" + std::to_string(*table.header_n) + " but rows have " +
                              std::to_string(table.rows.front().size()) + " fields");
    return PredictionMatrix(table.rows);
}

inline PredictionMatrix read_matrix_csv(const std::string& path) {
    return parse_matrix_csv(read_file(path), path);
}

inline std::string format_matrix_csv(const PredictionMatrix& f) {
    std::string out = "# p=" + std::to_string(f.p()) + " n=" + std::to_string(f.n()) + "\n";
    for (std::size_t i = 0; i < f.p(); ++i) {
        for (std::size_t j = 0; j < f.n(); ++j) {
            if (j > 0) out += ',';
            out += format_double(f(i, j));
        }
        out += '\n';
    }
    return out;
}

/// Labeled training data: p prediction rows followed by one row of labels.
inline LabeledSet parse_labeled_csv(const std::string& text, const std::string& source = "<labeled>") {
    auto table = detail::parse_csv(text, source);
    if (table.rows.size() < 2)
        throw parse_error(source, 1, 1, "labeled file needs prediction rows and a label row");
    Vector labels = std::move(table.rows.back());
    table.rows.pop_back();
    if (table.header_p && *table.header_p != table.rows.size())
        throw parse_error(source, table.header_line, 1, "header p does not match prediction rows");
    if (table.header_n && *table.header_n != labels.size())
        throw parse_error(source, table.header_line, 1, "header m does not match row length");
    return LabeledSet(table.rows, std::move(labels));
}

inline LabeledSet read_labeled_csv(const std::string& path) {
    return parse_labeled_csv(read_file(path), path);
}

inline Vector parse_vector_json(const std::string& text, const std::string& source = "<vector>") {
    const json j = detail::parse_json(text, source);
    if (j.is_object() && j.contains("b")) return detail::numbers(j["b"], source);
    return detail::numbers(j, source);
}

inline Vector read_vector_json(const std::string& path) {
    return parse_vector_json(read_file(path), path);
}

inline std::string format_vector_json(const Vector& v) { return json(v).dump() + "\n"; }

inline NoiseProfile parse_noise_json(const std::string& text, const std::string& source = "<noise>") {
    const json j = detail::parse_json(text, source);
    if (j.is_array()) return NoiseProfile::symmetric(detail::numbers(j, source));
    if (j.is_object() && j.contains("lower") && j.contains("upper"))
        return NoiseProfile(detail::numbers(j["lower"], source), detail::numbers(j["upper"], source));
    throw parse_error(source, 1, 1, "noise must be an array or an object with lower/upper");
}

inline NoiseProfile read_noise_json(const std::string& path) {
    return parse_noise_json(read_file(path), path);
}

// ---------------------------------------------------------------------------

/// Machine-readable result of `solve`.  Field names are a stable interface.
struct RunReport {
    std::string status;
    std::optional<double> value;
    Vector b;
    Vector sigma;
    Vector g;
    Vector z;
    std::string partition;  // one of H / C / B per example
    bool zbr = false;
    std::optional<double> zbr_value;
    std::optional<double> duality_gap;
    std::optional<double> worst_case_correlation;
    Vector borderline_coeffs;
    double residual = 0.0;
    std::size_t iterations = 0;
    json config = json::object();
    std::optional<double> timing_ms;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

namespace detail {

inline json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

inline std::optional<double> read_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace detail

inline void to_json(json& j, const RunReport& r) {
    j = json::object();
    j["status"] = r.status;
    j["value"] = detail::optional_number(r.value);
    j["b"] = r.b;
    j["sigma"] = r.sigma;
    j["g"] = r.g;
    j["z"] = r.z;
    j["partition"] = r.partition;
    j["zbr"] = r.zbr;
    j["zbr_value"] = detail::optional_number(r.zbr_value);
    j["duality_gap"] = detail::optional_number(r.duality_gap);
    j["worst_case_correlation"] = detail::optional_number(r.worst_case_correlation);
    j["borderline_coeffs"] = r.borderline_coeffs;
    j["residual"] = r.residual;
    j["iterations"] = r.iterations;
    j["config"] = r.config;
    if (r.timing_ms) j["timing_ms"] = *r.timing_ms;
}

inline void from_json(const json& j, RunReport& r) {
    r.status = j.at("status").get<std::string>();
    r.value = detail::read_optional(j, "value");
    r.b = j.at("b").get<Vector>();
    r.sigma = j.at("sigma").get<Vector>();
    r.g = j.at("g").get<Vector>();
    r.z = j.at("z").get<Vector>();
    r.partition = j.at("partition").get<std::string>();
    r.zbr = j.at("zbr").get<bool>();
    r.zbr_value = detail::read_optional(j, "zbr_value");
    r.duality_gap = detail::read_optional(j, "duality_gap");
    r.worst_case_correlation = detail::read_optional(j, "worst_case_correlation");
    r.borderline_coeffs = j.at("borderline_coeffs").get<Vector>();
    r.residual = j.at("residual").get<double>();
    r.iterations = j.at("iterations").get<std::size_t>();
    r.config = j.at("config");
    r.timing_ms = detail::read_optional(j, "timing_ms");
}

inline std::string format_report(const RunReport& r) { return json(r).dump(2) + "\n"; }

inline RunReport parse_report(const std::string& text) {
    return detail::parse_json(text, "<report>").get<RunReport>();
}

}  // namespace minimax::io
