#ifndef SKEWPF_IO_HPP
#define SKEWPF_IO_HPP

#include <cctype>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skewpf/classify.hpp"
#include "skewpf/invariants.hpp"
#include "skewpf/normal_forms.hpp"

namespace skewpf {

using Json = nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Exact rationals as strings
// ---------------------------------------------------------------------------

// Accepts only exact integers and fractions ("3", "-2/7").  Decimal points
// and exponents are rejected so no precision is ever lost silently.
inline Rat parse_rational(const std::string& s) {
    auto fail = [&]() -> Rat {
        throw ParseError("invalid rational '" + s +
                         "': expected an exact integer or fraction like \"-3/7\" "
                         "(floating point forms are not accepted)");
    };
    std::size_t i = 0;
    auto digits = [&](std::size_t from) {
        std::size_t k = from;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        return k;
    };
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t after_num = digits(i);
    if (after_num == i) return fail();
    const std::string body = (s[0] == '+') ? s.substr(1) : s;  // GMP rejects a leading '+'
    if (after_num == s.size()) return Rat(mpq_class(body, 10));
    if (s[after_num] != '/') return fail();
    std::size_t den_start = after_num + 1;
    std::size_t after_den = digits(den_start);
    if (after_den == den_start || after_den != s.size()) return fail();
    mpq_class q(body, 10);
    if (q.get_den() == 0) throw ParseError("invalid rational '" + s + "': zero denominator");
    q.canonicalize();
    return q;
}

inline std::string rational_string(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    return c.get_str();
}

// ---------------------------------------------------------------------------
// MatrixDocument: {variables, entries (upper triangle), metadata}
// ---------------------------------------------------------------------------

// Each upper-triangle entry is a map {variable name: rational string}; the
// lower triangle and zero diagonal are implied by skew-symmetry.
inline Json matrix_to_json(const SkewLinMatrix& m, Json metadata = Json::object()) {
    Json doc;
    doc["variables"] = m.vars()->names();
    Json entries = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            Json cell = Json::object();
            for (std::size_t v = 0; v < m.vars()->size(); ++v) {
                Rat c = m.at(i, j).coeff_of_var(v);
                if (c != 0) cell[m.vars()->name(v)] = rational_string(c);
            }
            entries.push_back(std::move(cell));
        }
    doc["entries"] = std::move(entries);
    if (!metadata.is_null() && !(metadata.is_object() && metadata.empty()))
        doc["metadata"] = std::move(metadata);
    return doc;
}

inline SkewLinMatrix matrix_from_json(const Json& doc) {
    if (!doc.is_object()) throw ParseError("matrix document must be a JSON object");
    if (!doc.contains("variables") || !doc["variables"].is_array())
        throw ParseError("matrix document needs a \"variables\" array");
    std::vector<std::string> names;
    for (const auto& v : doc["variables"]) {
        if (!v.is_string()) throw ParseError("variable names must be strings");
        names.push_back(v.get<std::string>());
    }
    if (names.empty()) throw ParseError("matrix document needs at least one variable");
    auto vars = VariableSet::make(names);

    if (!doc.contains("entries") || !doc["entries"].is_array())
        throw ParseError("matrix document needs an \"entries\" array (upper triangle)");
    const auto& entries = doc["entries"];
    // n(n-1)/2 entries determine n
    std::size_t n = 0;
    while (n * (n - 1) / 2 < entries.size()) ++n;
    if (n * (n - 1) / 2 != entries.size() || n < 2)
        throw ParseError("entry count " + std::to_string(entries.size()) +
                         " is not a triangular number n(n-1)/2 with n >= 2");

    std::vector<Polynomial> upper;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& cell = entries[k];
        if (!cell.is_object())
            throw ParseError("entry " + std::to_string(k) +
                             " must be an object {variable: rational string}");
        std::vector<Rat> coeffs(vars->size(), Rat(0));
        for (const auto& [key, val] : cell.items()) {
            int idx = vars->index_of(key);
            if (idx < 0)
                throw ParseError("entry " + std::to_string(k) + " mentions unknown variable '" +
                                 key + "'");
            if (!val.is_string())
                throw ParseError("entry " + std::to_string(k) + ", variable '" + key +
                                 "': coefficients must be rational strings, not JSON numbers");
            coeffs[static_cast<std::size_t>(idx)] = parse_rational(val.get<std::string>());
        }
        upper.push_back(linear_form(vars, coeffs));
    }
    return SkewLinMatrix::from_upper_triangle(vars, n, upper);
}

inline Json matrix_document_parse_check(const std::string& text, SkewLinMatrix* out = nullptr) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
    auto m = matrix_from_json(doc);
    if (out) *out = std::move(m);
    return doc;
}

// ---------------------------------------------------------------------------
// Congruences, fingerprints, and reports
// ---------------------------------------------------------------------------

inline Json congruence_to_json(const Congruence& g) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < g.matrix().rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < g.matrix().cols(); ++j)
            row.push_back(rational_string(g.matrix()(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Congruence congruence_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("witness must be an array of rows");
    std::size_t n = j.size();
    QMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n)
            throw ParseError("witness must be a square array of rational strings");
        for (std::size_t k = 0; k < n; ++k) {
            if (!j[i][k].is_string())
                throw ParseError("witness entries must be rational strings");
            s(i, k) = parse_rational(j[i][k].get<std::string>());
        }
    }
    return Congruence(s);
}

inline Json fingerprint_to_json(const Fingerprint& fp) {
    Json j;
    j["entry_span"] = fp.r;
    j["d4"] = fp.d4;
    j["rank2"] = {{"dim", fp.rank2_dim},
                  {"deg", fp.rank2_deg},
                  {"empty", fp.rank2_dim == PROJ_EMPTY}};
    if (!fp.z_profile.empty()) {
        Json z = Json::array();
        for (const auto& [s, dim] : fp.z_profile)
            z.push_back({{"s", s}, {"dim", dim}, {"empty", dim == PROJ_EMPTY}});
        j["z_profile"] = std::move(z);
    }
    j["rank2_sing_dim"] = fp.rank2_sing_dim;
    return j;
}

inline Json report_to_json(const ClassificationReport& rep) {
    Json j;
    j["label"] = rep.label;
    j["verified"] = rep.verified;
    j["witness"] = rep.witness ? congruence_to_json(*rep.witness) : Json();
    j["p4_type"] = rep.p4_type ? Json(label_name(*rep.p4_type)) : Json();
    j["fingerprint"] = rep.fp ? fingerprint_to_json(*rep.fp) : Json();
    j["route"] = rep.route;
    j["caveats"] = rep.caveats;
    return j;
}

// ---------------------------------------------------------------------------
// Invariant tables, regenerated from scratch
// ---------------------------------------------------------------------------

inline std::string stability_word(Stability s) {
    switch (s) {
        case Stability::STABLE: return "stable";
        case Stability::STRICTLY_SEMISTABLE: return "strictly semistable";
        case Stability::POLYSTABLE: return "polystable";
        case Stability::UNSTABLE: return "unstable";
        case Stability::UNKNOWN: return "unknown";
    }
    throw std::logic_error("stability_word: bad value");
}

// Two tables: the six normal forms with d4 and stability, and the six flag
// patterns with the d4 of a generic instance.  The exact byte layout is the
// golden acceptance artifact.
inline std::string render_tables() {
    std::ostringstream out;
    out << "type, d4, stability\n";
    for (auto lab : all_p4_labels()) {
        auto m = normal_form(lab);
        out << label_name(lab) << ", " << d4(m) << ", "
            << stability_word(type_stability(lab).level) << "\n";
    }
    out << "\nformat, d4\n";
    for (const char* name : {"NS1", "NS2", "NS3", "NSS1", "NSS2", "NSS3"})
        out << name << ", " << d4(generic_form_matrix(pattern(name))) << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Human-readable rendering
// ---------------------------------------------------------------------------

inline std::string human_report(const ClassificationReport& rep) {
    std::ostringstream out;
    out << "label:    " << rep.label << (rep.verified ? "  (verified)" : "  (NOT verified)")
        << "\n";
    if (rep.p4_type) out << "type:     " << label_name(*rep.p4_type) << "\n";
    if (rep.fp) out << "invariants: " << rep.fp->to_string() << "\n";
    out << "route:    ";
    for (std::size_t i = 0; i < rep.route.size(); ++i) out << (i ? " -> " : "") << rep.route[i];
    out << "\n";
    if (rep.witness) {
        out << "witness S (S M S^t has the form):\n";
        const QMatrix& s = rep.witness->matrix();
        for (std::size_t i = 0; i < s.rows(); ++i) {
            out << "  [";
            for (std::size_t j = 0; j < s.cols(); ++j)
                out << (j ? ", " : "") << rational_string(s(i, j));
            out << "]\n";
        }
    }
    for (const auto& c : rep.caveats) out << "note:     " << c << "\n";
    return out.str();
}

}  // namespace skewpf

#endif
