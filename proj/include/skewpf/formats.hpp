#ifndef SKEWPF_FORMATS_HPP
#define SKEWPF_FORMATS_HPP

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewpf/skew_matrix.hpp"

namespace skewpf {

enum class PatternKind { plain, skew, double_skew };

inline std::string kind_name(PatternKind k) {
    switch (k) {
        case PatternKind::plain: return "plain";
        case PatternKind::skew: return "skew";
        case PatternKind::double_skew: return "double-skew";
    }
    throw std::logic_error("bad kind");
}

inline PatternKind kind_from_name(const std::string& s) {
    if (s == "plain") return PatternKind::plain;
    if (s == "skew") return PatternKind::skew;
    if (s == "double-skew") return PatternKind::double_skew;
    throw std::invalid_argument("unknown pattern kind: " + s);
}

// A zero/star mask. Zero cells must be exactly zero in a matching matrix;
// star cells are unconstrained (zero is allowed there too).
class FormatPattern {
public:
    FormatPattern(std::string name, PatternKind kind, std::vector<std::string> mask_rows)
        : name_(std::move(name)), kind_(kind) {
        rows_ = mask_rows.size();
        cols_ = rows_ ? mask_rows[0].size() : 0;
        for (const auto& r : mask_rows) {
            if (r.size() != cols_) throw std::invalid_argument("ragged pattern mask");
            for (char c : r) {
                if (c != '0' && c != '*') throw std::invalid_argument("mask cells must be 0 or *");
                star_.push_back(c == '*');
            }
        }
        if (kind_ != PatternKind::plain) {
            if (rows_ != cols_) throw std::invalid_argument("skew pattern must be square");
            for (std::size_t i = 0; i < rows_; ++i) {
                if (star(i, i)) throw std::invalid_argument("skew pattern diagonal must be 0");
                for (std::size_t j = 0; j < cols_; ++j)
                    if (star(i, j) != star(j, i))
                        throw std::invalid_argument("skew pattern mask must be symmetric");
            }
        }
    }

    const std::string& name() const { return name_; }
    PatternKind kind() const { return kind_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool star(std::size_t i, std::size_t j) const { return star_.at(i * cols_ + j); }

    bool operator==(const FormatPattern& o) const {
        return name_ == o.name_ && kind_ == o.kind_ && rows_ == o.rows_ && cols_ == o.cols_ &&
               star_ == o.star_;
    }

    bool same_mask(const FormatPattern& o) const {
        return kind_ == o.kind_ && rows_ == o.rows_ && cols_ == o.cols_ && star_ == o.star_;
    }

    // Text form: "name kind" header line, then one 0/* row per line.
    std::string to_text() const {
        std::ostringstream os;
        os << name_ << " " << kind_name(kind_) << "\n";
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) os << (star(i, j) ? '*' : '0');
            os << "\n";
        }
        return os.str();
    }

    static FormatPattern from_text(const std::string& text) {
        std::istringstream is(text);
        std::string name, kind;
        if (!(is >> name >> kind)) throw std::invalid_argument("pattern header missing");
        std::vector<std::string> rows;
        std::string line;
        std::getline(is, line);  // rest of header line
        while (std::getline(is, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty()) continue;
            rows.push_back(line);
        }
        return FormatPattern(name, kind_from_name(kind), rows);
    }

private:
    std::string name_;
    PatternKind kind_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<bool> star_;
};

// Mask reversed in both indices; kind preserved.
inline FormatPattern reverse_pattern(const FormatPattern& f) {
    std::vector<std::string> rows(f.rows());
    for (std::size_t i = 0; i < f.rows(); ++i) {
        std::string r;
        for (std::size_t j = 0; j < f.cols(); ++j)
            r += f.star(f.rows() - 1 - i, f.cols() - 1 - j) ? '*' : '0';
        rows[i] = r;
    }
    return FormatPattern(f.name() + "-rev", f.kind(), std::move(rows));
}

// True iff every zero cell of the pattern is exactly zero in M (and M
// satisfies the structural requirement of the pattern's kind).
inline bool has_form(const PolyMatrix& m, const FormatPattern& f) {
    if (m.rows() != f.rows() || m.cols() != f.cols())
        throw std::invalid_argument("has_form: dimension mismatch");
    if (f.kind() != PatternKind::plain && !m.is_skew_symmetric()) return false;
    if (f.kind() == PatternKind::double_skew) {
        if (m.rows() != 6) throw std::invalid_argument("double-skew pattern needs 6x6");
        if (!m.submatrix({0, 1, 2}, {3, 4, 5}).is_skew_symmetric()) return false;
    }
    for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t j = 0; j < f.cols(); ++j)
            if (!f.star(i, j) && !m.at(i, j).is_zero()) return false;
    return true;
}

inline bool has_form(const SkewLinMatrix& m, const FormatPattern& f) {
    return has_form(m.grid(), f);
}

// Universal post-verification for skew/double-skew witnesses: does
// S M S^t have the pattern's form?
inline bool verify_format_witness(const SkewLinMatrix& m, const Congruence& s,
                                  const FormatPattern& f) {
    if (f.kind() == PatternKind::plain)
        throw std::invalid_argument("plain patterns need a two-sided witness");
    return has_form(apply_congruence(s, m), f);
}

// Two-sided witness check for plain patterns: does S M T have the form?
inline bool verify_format_witness(const PolyMatrix& m, const QMatrix& s, const QMatrix& t,
                                  const FormatPattern& f) {
    if (s.det() == 0 || t.det() == 0) return false;
    return has_form(m.left_mul(s).right_mul(t), f);
}

// The named patterns used throughout: the six vanishing-Pfaffian formats
// (a)-(f), the two rank-2-point formats, the single-corner format, the
// three not-stable and three unstable formats, and the small submaximal-
// rank formats.
class FormatCatalog {
public:
    static const FormatCatalog& instance() {
        static FormatCatalog c;
        return c;
    }

    const FormatPattern& get(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw std::invalid_argument("unknown pattern: " + name);
        return patterns_[it->second];
    }

    const std::vector<FormatPattern>& all() const { return patterns_; }

private:
    FormatCatalog() {
        auto add = [&](const std::string& name, PatternKind k, std::vector<std::string> rows) {
            index_[name] = patterns_.size();
            patterns_.emplace_back(name, k, std::move(rows));
        };
        using PK = PatternKind;
        add("a", PK::skew, {"0****0", "*0***0", "**0**0", "***0*0", "****00", "000000"});
        add("b", PK::skew, {"0*****", "*0****", "**0000", "**0000", "**0000", "**0000"});
        add("c", PK::skew, {"0*****", "*0**00", "**0*00", "***000", "*00000", "*00000"});
        add("d", PK::double_skew,
            {"0**000", "*0*000", "**0000", "0000**", "000*0*", "000**0"});
        add("e", PK::double_skew,
            {"0**0**", "*0**0*", "**0**0", "0**000", "*0*000", "**0000"});
        add("f", PK::double_skew,
            {"0*00**", "*00*0*", "000**0", "0**0*0", "*0**00", "**0000"});
        add("hammer", PK::skew, {"0*****", "*0****", "**0***", "***000", "***000", "***000"});
        add("arrow", PK::skew, {"0*****", "*0****", "**0**0", "***0*0", "****00", "**0000"});
        add("corner", PK::skew, {"0*****", "*0***0", "**0**0", "***0*0", "****00", "*00000"});
        add("NS1", PK::skew, {"00000*", "00****", "0*0***", "0**0**", "0***0*", "*****0"});
        add("NS2", PK::skew, {"0000**", "0000**", "000***", "00*0**", "****0*", "*****0"});
        add("NS3", PK::skew, {"000***", "000***", "000***", "***0**", "****0*", "*****0"});
        add("NSS1", PK::skew, {"000000", "00****", "0*0***", "0**0**", "0***0*", "0****0"});
        add("NSS2", PK::skew, {"00000*", "00000*", "000***", "00*0**", "00**0*", "*****0"});
        add("NSS3", PK::skew, {"0000**", "0000**", "0000**", "0000**", "****0*", "*****0"});
        // submaximal-rank formats for small matrices
        add("sym2-corner", PK::plain, {"*0", "00"});
        add("p2-zerocol", PK::plain, {"*0", "*0"});
        add("p2-zerorow", PK::plain, {"**", "00"});
        add("p3-zerocol", PK::plain, {"**0", "**0", "**0"});
        add("p3-zerorow", PK::plain, {"***", "***", "000"});
        add("p3-block", PK::plain, {"***", "*00", "*00"});
        add("p3-skew", PK::skew, {"0**", "*0*", "**0"});
        add("s4-row0", PK::skew, {"0***", "*000", "*000", "*000"});
        add("s4-corner", PK::skew, {"0**0", "*0*0", "**00", "0000"});
    }

    std::vector<FormatPattern> patterns_;
    std::map<std::string, std::size_t> index_;
};

inline const FormatPattern& pattern(const std::string& name) {
    return FormatCatalog::instance().get(name);
}

// The free entry slots of a skew or double-skew pattern: filling each
// with an arbitrary linear form (and propagating by skewness / the
// double-skew block structure) yields exactly the matrices of that form.
struct FreeSlot {
    std::size_t i, j;  // representative position
};

inline std::vector<FreeSlot> free_slots(const FormatPattern& f) {
    std::vector<FreeSlot> slots;
    if (f.kind() == PatternKind::plain) {
        for (std::size_t i = 0; i < f.rows(); ++i)
            for (std::size_t j = 0; j < f.cols(); ++j)
                if (f.star(i, j)) slots.push_back({i, j});
        return slots;
    }
    if (f.kind() == PatternKind::skew) {
        for (std::size_t i = 0; i < f.rows(); ++i)
            for (std::size_t j = i + 1; j < f.cols(); ++j)
                if (f.star(i, j)) slots.push_back({i, j});
        return slots;
    }
    // double skew: N0 (i<j), N1 (i<j, lives at (i,j+3)), N2 (i<j, at (i+3,j+3))
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            if (f.star(i, j)) slots.push_back({i, j});
            if (f.star(i, j + 3)) slots.push_back({i, j + 3});
            if (f.star(i + 3, j + 3)) slots.push_back({i + 3, j + 3});
        }
    return slots;
}

// Builds the grid of the given form whose free slots hold the supplied
// linear forms (one per slot, in free_slots order).
inline PolyMatrix form_grid(const FormatPattern& f, const VarSetPtr& vars,
                            const std::vector<Polynomial>& entries) {
    auto slots = free_slots(f);
    if (entries.size() != slots.size()) throw std::invalid_argument("form_grid entry count");
    PolyMatrix g(vars, f.rows(), f.cols());
    for (std::size_t k = 0; k < slots.size(); ++k) {
        auto [i, j] = slots[k];
        const Polynomial& v = entries[k];
        if (f.kind() == PatternKind::plain) {
            g.at(i, j) = v;
        } else if (f.kind() == PatternKind::skew || (i < 3 && j < 3) || (i >= 3 && j >= 3)) {
            g.at(i, j) = v;
            g.at(j, i) = -v;
        } else {  // N1 slot at (i, j) with i<3<=j; N1 itself skew
            std::size_t jl = j - 3;
            g.at(i, j) = v;        // upper-right (i, jl)
            g.at(i + 3, jl) = v;   // lower-left  (i, jl)
            g.at(jl, i + 3) = -v;  // upper-right (jl, i)
            g.at(j, i) = -v;       // lower-left  (jl, i)
        }
    }
    return g;
}

inline SkewLinMatrix form_matrix(const FormatPattern& f, const VarSetPtr& vars,
                                 const std::vector<Polynomial>& entries) {
    if (f.kind() == PatternKind::plain)
        throw std::invalid_argument("form_matrix: skew kinds only");
    return SkewLinMatrix(form_grid(f, vars, entries));
}

// Fully generic matrix of the given form: one fresh variable per free slot.
inline SkewLinMatrix generic_form_matrix(const FormatPattern& f, const std::string& prefix = "t") {
    auto slots = free_slots(f);
    VarSetPtr vars = VariableSet::prefixed(prefix, slots.size());
    std::vector<Polynomial> entries;
    for (std::size_t k = 0; k < slots.size(); ++k)
        entries.push_back(Polynomial::variable(vars, k));
    return form_matrix(f, vars, entries);
}

// Grid/matrix of the given form with random small-integer linear forms
// over the supplied variables.
inline std::vector<Polynomial> random_slot_entries(const FormatPattern& f, const VarSetPtr& vars,
                                                   SmallIntStream& rng) {
    auto slots = free_slots(f);
    std::vector<Polynomial> entries;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        std::vector<Rat> c;
        for (std::size_t v = 0; v < vars->size(); ++v) c.push_back(rng.next_rat());
        entries.push_back(linear_form(vars, c));
    }
    return entries;
}

inline PolyMatrix random_form_grid(const FormatPattern& f, const VarSetPtr& vars,
                                   SmallIntStream& rng) {
    return form_grid(f, vars, random_slot_entries(f, vars, rng));
}

inline SkewLinMatrix random_form_matrix(const FormatPattern& f, const VarSetPtr& vars,
                                        SmallIntStream& rng) {
    return form_matrix(f, vars, random_slot_entries(f, vars, rng));
}

}  // namespace skewpf

#endif
