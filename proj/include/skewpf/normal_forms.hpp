#ifndef SKEWPF_NORMAL_FORMS_HPP
#define SKEWPF_NORMAL_FORMS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "skewpf/skew_matrix.hpp"

// The six normal forms of semistable 6x6 skew matrices with vanishing
// Pfaffian whose entries span five independent linear forms, labelled (a)-(f).

namespace skewpf {

enum class P4Label { a, b, c, d, e, f, none };

inline std::string label_name(P4Label l) {
    switch (l) {
        case P4Label::a: return "a";
        case P4Label::b: return "b";
        case P4Label::c: return "c";
        case P4Label::d: return "d";
        case P4Label::e: return "e";
        case P4Label::f: return "f";
        case P4Label::none: return "none";
    }
    throw std::logic_error("label_name: bad label");
}

inline P4Label label_from_name(const std::string& s) {
    if (s == "a") return P4Label::a;
    if (s == "b") return P4Label::b;
    if (s == "c") return P4Label::c;
    if (s == "d") return P4Label::d;
    if (s == "e") return P4Label::e;
    if (s == "f") return P4Label::f;
    if (s == "none") return P4Label::none;
    throw std::invalid_argument("label_from_name: unknown label " + s);
}

inline const std::vector<P4Label>& all_p4_labels() {
    static const std::vector<P4Label> labels = {P4Label::a, P4Label::b, P4Label::c,
                                                P4Label::d, P4Label::e, P4Label::f};
    return labels;
}

// Builds the normal form for `label` from five linear forms l[0..4] (over a
// common variable set).  With independent forms this realizes the canonical
// representative; degenerate choices give degenerations in its orbit closure.
inline SkewLinMatrix normal_form(P4Label label, const VarSetPtr& vars,
                                 const std::vector<Polynomial>& l) {
    if (label == P4Label::none) throw std::invalid_argument("normal_form: no matrix for 'none'");
    if (l.size() != 5) throw std::invalid_argument("normal_form: need exactly 5 linear forms");
    for (const auto& p : l) {
        require_same_varset(vars, p.vars());
        if (!p.is_zero() && !p.is_linear_form())
            throw std::invalid_argument("normal_form: inputs must be linear forms");
    }
    const Polynomial z = Polynomial::zero(vars);
    // upper triangle in the order (01)(02)(03)(04)(05)(12)(13)(14)(15)(23)(24)(25)(34)(35)(45)
    std::vector<Polynomial> up;
    switch (label) {
        case P4Label::a:
            up = {l[3], z, z, l[0], l[1], z, -l[0], z, l[2], -l[1], -l[2], z, l[4], z, z};
            break;
        case P4Label::b:
            up = {l[0], l[1], z, z, z, l[2], z, z, z, z, z, z, l[2], l[3], l[4]};
            break;
        case P4Label::c:
            up = {l[0], l[1], z, z, z, l[2], z, z, z, z, z, z, l[1], l[2], l[3]};
            break;
        case P4Label::d:
            up = {z, z, z, l[0], l[1], z, -l[0], z, l[2], -l[1], -l[2], z, l[3], l[4], z};
            break;
        case P4Label::e:
            up = {z, z, z, l[0], l[1], z, -l[0], z, l[2], -l[1], -l[2], z, l[3], z, z};
            break;
        case P4Label::f:
            up = {z, z, z, l[0], l[1], z, -l[0], z, l[2], -l[1], -l[2], z, z, z, z};
            break;
        case P4Label::none:
            break;
    }
    return SkewLinMatrix::from_upper_triangle(vars, 6, up);
}

// Canonical representative over a fresh five-variable ring l0..l4.
inline SkewLinMatrix normal_form(P4Label label) {
    auto vars = VariableSet::prefixed("l", 5);
    std::vector<Polynomial> l;
    for (std::size_t i = 0; i < 5; ++i) l.push_back(Polynomial::variable(vars, i));
    return normal_form(label, vars, l);
}

}  // namespace skewpf

#endif
