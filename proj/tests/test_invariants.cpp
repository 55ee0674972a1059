#include <catch2/catch_amalgamated.hpp>

#include "skewpf/invariants.hpp"
#include "skewpf/normal_forms.hpp"

using namespace skewpf;

namespace {

Congruence random_congruence(SmallIntStream& rng, std::size_t n) {
    for (;;) {
        QMatrix s(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s(i, j) = rng.next();
        if (s.det() != 0) return Congruence(s);
    }
}

SkewLinMatrix scrambled_generic(const std::string& pat, SmallIntStream& rng) {
    auto base = generic_form_matrix(pattern(pat));
    return apply_congruence(random_congruence(rng, 6), base);
}

// Product of a few elementary shears: invertible but sparse, so symbolic
// computations on the translate stay cheap.
Congruence random_shear(SmallIntStream& rng, std::size_t n, int ops = 4) {
    QMatrix u = QMatrix::identity(n);
    for (int k = 0; k < ops; ++k) {
        std::size_t i = rng.next_u64() % n, j = rng.next_u64() % n;
        if (i == j) continue;
        QMatrix e = QMatrix::identity(n);
        e(i, j) = rng.next();
        u = u * e;
    }
    return Congruence(u);
}

}  // namespace

TEST_CASE("the six normal forms have vanishing Pfaffian and the expected d4") {
    const std::vector<int> expected = {10, 9, 8, 9, 8, 6};
    for (std::size_t i = 0; i < 6; ++i) {
        auto m = normal_form(all_p4_labels()[i]);
        INFO("type " << label_name(all_p4_labels()[i]));
        CHECK(pfaffian(m).is_zero());
        CHECK(d4(m) == expected[i]);
    }
    auto vars = VariableSet::prefixed("l", 5);
    CHECK(d4(SkewLinMatrix::zero(vars, 6)) == 0);
}

TEST_CASE("generic flag-pattern instances attain the expected d4") {
    const std::vector<std::pair<std::string, int>> expected = {
        {"NS1", 11}, {"NS2", 10}, {"NS3", 12}, {"NSS1", 5}, {"NSS2", 7}, {"NSS3", 6}};
    for (const auto& [name, value] : expected) {
        INFO(name);
        CHECK(d4(generic_form_matrix(pattern(name))) == value);
    }
}

TEST_CASE("specialization can only lower d4") {
    SmallIntStream rng(401);
    auto vars = VariableSet::prefixed("x", 3);
    for (const std::string name : {"NS1", "NS2", "NS3", "NSS1", "NSS2", "NSS3"}) {
        int generic = d4(generic_form_matrix(pattern(name)));
        for (int rep = 0; rep < 20; ++rep) {
            auto m = random_form_matrix(pattern(name), vars, rng);
            INFO(name << " rep " << rep);
            CHECK(d4(m) <= generic);
        }
    }
}

TEST_CASE("d4 and z-locus dimensions are congruence invariants") {
    SmallIntStream rng(409);
    std::vector<SkewLinMatrix> cases = {normal_form(P4Label::b), normal_form(P4Label::f)};
    for (const auto& m : cases) {
        int d = d4(m);
        std::vector<int> zdims;
        for (int s = 0; s <= 3; ++s)
            zdims.push_back(projective_dimension(z_locus(m, s)));
        // dense congruences for the cheap invariant, sparse shears for the
        // Groebner-heavy z-locus dimensions
        for (int rep = 0; rep < 3; ++rep)
            CHECK(d4(apply_congruence(random_congruence(rng, 6), m)) == d);
        for (int rep = 0; rep < 3; ++rep) {
            auto t = apply_congruence(random_shear(rng, 6), m);
            for (int s = 0; s <= 3; ++s) {
                INFO("s=" << s);
                CHECK(projective_dimension(z_locus(t, s)) == zdims[s]);
            }
        }
    }
}

TEST_CASE("rank2 singular dimension is a congruence invariant") {
    SmallIntStream rng(419);
    for (auto lab : {P4Label::b, P4Label::d}) {
        auto m = normal_form(lab);
        int sd = rank2_singular_dim(m);
        for (int rep = 0; rep < 3; ++rep)
            CHECK(rank2_singular_dim(apply_congruence(random_congruence(rng, 6), m)) == sd);
    }
}

TEST_CASE("entry span dimension") {
    auto vars = VariableSet::prefixed("l", 5);
    CHECK(entry_span_dim(SkewLinMatrix::zero(vars, 6)) == -1);
    CHECK(entry_span_dim(normal_form(P4Label::f)) == 2);
    CHECK(entry_span_dim(normal_form(P4Label::e)) == 3);
    CHECK(entry_span_dim(normal_form(P4Label::d)) == 4);
}

TEST_CASE("fingerprints of the normal forms match the frozen table and are distinct") {
    std::vector<Fingerprint> fps;
    for (const auto& [label, row] : p4_fingerprint_table()) {
        auto fp = fingerprint(normal_form(label));
        INFO("type " << label_name(label) << ": " << fp.to_string());
        CHECK(fp == row);
        fps.push_back(fp);
    }
    for (std::size_t i = 0; i < fps.size(); ++i)
        for (std::size_t j = i + 1; j < fps.size(); ++j) {
            INFO(fps[i].to_string() << " vs " << fps[j].to_string());
            CHECK(!(fps[i] == fps[j]));
        }
}

TEST_CASE("p4_fingerprint labels normal forms and their translates") {
    SmallIntStream rng(421);
    for (auto lab : all_p4_labels()) {
        auto m = normal_form(lab);
        CHECK(p4_fingerprint(m) == lab);
        for (int rep = 0; rep < 3; ++rep) {
            auto t = apply_congruence(random_congruence(rng, 6), m);
            INFO("type " << label_name(lab) << " rep " << rep);
            CHECK(p4_fingerprint(t) == lab);
        }
    }
    // nonvanishing Pfaffian is rejected
    auto vars = VariableSet::prefixed("l", 5);
    std::vector<Polynomial> up;
    for (int k = 0; k < 15; ++k) up.push_back(Polynomial::variable(vars, k % 5));
    auto generic = SkewLinMatrix::from_upper_triangle(vars, 6, up);
    if (!pfaffian(generic).is_zero()) CHECK_THROWS(p4_fingerprint(generic));
}

TEST_CASE("z-locus generators of the next rank bound vanish on the previous locus") {
    for (auto lab : {P4Label::a, P4Label::f}) {
        auto f = flipped(normal_form(lab));
        for (int s = 0; s <= 2; ++s) {
            Ideal smaller(f.vars(), f.minors(s + 1));
            for (const auto& g : f.minors(s + 2)) {
                if (g.is_zero()) continue;
                CHECK(radical_member(g, smaller));
            }
        }
    }
}

TEST_CASE("rank2 ideal vanishes exactly at points of rank <= 2") {
    SmallIntStream rng(431);
    auto m = normal_form(P4Label::b);
    auto gens = rank2_ideal(m).generators();
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<Rat> pt;
        for (int k = 0; k < 5; ++k) pt.push_back(rng.next_rat());
        bool all_vanish = true;
        for (const auto& g : gens)
            if (g.evaluate(pt) != 0) all_vanish = false;
        CHECK(all_vanish == (rank_at_point(m, pt) <= 2));
    }
}

TEST_CASE("flag pattern witnesses are found on scrambled generic instances") {
    SmallIntStream rng(433);
    for (const std::string name : {"NSS1", "NSS2", "NSS3", "NS1", "NS2", "NS3"}) {
        for (int rep = 0; rep < 5; ++rep) {
            auto m = scrambled_generic(name, rng);
            auto g = flag_pattern_witness(m, name, rng.next_u64());
            INFO(name << " rep " << rep);
            REQUIRE(g.has_value());
            CHECK(verify_format_witness(m, *g, pattern(name)));
        }
    }
}

TEST_CASE("a matrix already in form gets the identity witness") {
    auto m = generic_form_matrix(pattern("NSS3"));
    auto g = flag_pattern_witness(m, "NSS3");
    REQUIRE(g.has_value());
    CHECK(g->matrix() == QMatrix::identity(6));
}

TEST_CASE("stability screen: unstable and strictly semistable certificates") {
    SmallIntStream rng(439);
    for (const std::string name : {"NSS1", "NSS2", "NSS3"}) {
        auto v = stability_screen(scrambled_generic(name, rng), 7);
        INFO(name);
        CHECK(v.level == Stability::UNSTABLE);
        CHECK(!v.evidence.empty());
        CHECK(v.witness_pattern.has_value());
    }
    for (const std::string name : {"NS1", "NS2", "NS3"}) {
        auto v = stability_screen(scrambled_generic(name, rng), 7);
        INFO(name);  // generic NS instances have d4 >= 8, hence semistable
        CHECK(v.level == Stability::STRICTLY_SEMISTABLE);
        CHECK(v.witness_pattern.has_value());
    }
}

TEST_CASE("stability screen: d4 bounds") {
    // a generic skew matrix over 5 variables has d4 >= 13
    SmallIntStream rng(443);
    auto vars = VariableSet::prefixed("l", 5);
    for (;;) {
        std::vector<Polynomial> up;
        for (int k = 0; k < 15; ++k) {
            std::vector<Rat> c;
            for (int j = 0; j < 5; ++j) c.push_back(rng.next_rat());
            up.push_back(linear_form(vars, c));
        }
        auto m = SkewLinMatrix::from_upper_triangle(vars, 6, up);
        if (d4(m) < 13) continue;
        auto v = stability_screen(m);
        CHECK(v.level == Stability::STABLE);
        REQUIRE(!v.evidence.empty());
        break;
    }
    // the stable normal forms are semistable by the d4 >= 8 rule but get no
    // stability certificate from the screen alone
    auto v = stability_screen(normal_form(P4Label::a));
    CHECK(v.level == Stability::UNKNOWN);
    REQUIRE(!v.evidence.empty());
    CHECK(v.evidence.front().first.find(">= 8") != std::string::npos);
}

TEST_CASE("type stability table") {
    CHECK(type_stability(P4Label::a).level == Stability::STABLE);
    CHECK(type_stability(P4Label::b).level == Stability::STABLE);
    CHECK(type_stability(P4Label::c).level == Stability::STABLE);
    CHECK(type_stability(P4Label::d).level == Stability::STRICTLY_SEMISTABLE);
    CHECK(type_stability(P4Label::e).level == Stability::STRICTLY_SEMISTABLE);
    CHECK(type_stability(P4Label::f).level == Stability::POLYSTABLE);
    for (auto lab : all_p4_labels()) CHECK(!type_stability(lab).evidence.empty());
}
