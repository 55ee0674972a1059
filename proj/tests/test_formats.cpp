#include <catch2/catch_amalgamated.hpp>

#include "skewpf/formats.hpp"

using namespace skewpf;

TEST_CASE("catalog patterns serialize and round-trip") {
    for (const auto& p : FormatCatalog::instance().all()) {
        auto back = FormatPattern::from_text(p.to_text());
        CHECK(back == p);
    }
}

TEST_CASE("pattern validation") {
    CHECK_THROWS(FormatPattern("bad", PatternKind::skew, {"**", "**"}));       // diag star
    CHECK_THROWS(FormatPattern("bad", PatternKind::skew, {"0*", "00"}));       // asymmetric
    CHECK_THROWS(FormatPattern("bad", PatternKind::skew, {"0*0", "*00"}));     // not square
    CHECK_THROWS(FormatPattern("bad", PatternKind::plain, {"0x", "00"}));      // bad char
    CHECK_NOTHROW(FormatPattern("ok", PatternKind::plain, {"*0", "*0"}));
}

TEST_CASE("reverse_pattern is an involution and maps unstable masks to (a),(b),(c)") {
    for (const auto& p : FormatCatalog::instance().all())
        CHECK(reverse_pattern(reverse_pattern(p)).same_mask(p));
    CHECK(reverse_pattern(pattern("NSS1")).same_mask(pattern("a")));
    CHECK(reverse_pattern(pattern("NSS3")).same_mask(pattern("b")));
    CHECK(reverse_pattern(pattern("NSS2")).same_mask(pattern("c")));
}

TEST_CASE("has_form on 2x2 examples") {
    auto vars = VariableSet::make({"x", "y"});
    auto x = Polynomial::variable(vars, 0);
    auto y = Polynomial::variable(vars, 1);
    PolyMatrix m(vars, 2, 2);
    m.at(0, 0) = x;
    m.at(1, 0) = y;
    CHECK(has_form(m, pattern("p2-zerocol")));
    CHECK(!has_form(m, pattern("p2-zerorow")));
    PolyMatrix m2(vars, 2, 2);
    m2.at(0, 0) = x;
    m2.at(0, 1) = x;
    m2.at(1, 0) = y;
    m2.at(1, 1) = y;
    CHECK(!has_form(m2, pattern("p2-zerocol")));
    CHECK(has_form(PolyMatrix(vars, 2, 2), pattern("p2-zerocol")));  // zero matrix
    CHECK_THROWS(has_form(m, pattern("a")));                         // dimension mismatch
}

TEST_CASE("skew-kind has_form requires skewness, double-skew requires the block structure") {
    auto vars = VariableSet::prefixed("x", 5);
    SmallIntStream rng(3);
    auto md = random_form_matrix(pattern("d"), vars, rng);
    CHECK(has_form(md, pattern("d")));
    CHECK(!has_form(md, pattern("e")));  // N2 is generically nonzero
    auto blocks = double_skew_decompose(md);
    REQUIRE(blocks.has_value());
    CHECK(blocks->n1.grid().is_zero());
    // a skew matrix that is not double skew fails double-skew has_form
    auto x0 = Polynomial::variable(vars, 0);
    auto z = Polynomial::zero(vars);
    std::vector<Polynomial> upper(15, z);
    upper[2] = x0;  // m03 = x0 only; N1 not skew
    auto m = SkewLinMatrix::from_upper_triangle(vars, 6, upper);
    CHECK(!has_form(m, pattern("d")));
}

TEST_CASE("witness verification") {
    auto vars = VariableSet::prefixed("x", 5);
    SmallIntStream rng(5);
    auto m = random_form_matrix(pattern("a"), vars, rng);
    CHECK(verify_format_witness(m, Congruence::identity(6), pattern("a")));
    // scramble with a random congruence; its inverse is a valid witness
    QMatrix s(6, 6);
    do {
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) s(i, j) = rng.next_rat();
    } while (s.det() == 0);
    Congruence cs(s);
    auto scrambled = apply_congruence(cs, m);
    CHECK(verify_format_witness(scrambled, cs.inverse(), pattern("a")));
    CHECK(!verify_format_witness(scrambled, Congruence::identity(6), pattern("a")));
}

TEST_CASE("generic matrices of the six 6x6 vanishing-Pfaffian forms have zero Pfaffian") {
    for (std::string name : {"a", "b", "c", "d", "e", "f"}) {
        auto m = generic_form_matrix(pattern(name));
        INFO("format " << name);
        CHECK(pfaffian(m).is_zero());
        CHECK(has_form(m, pattern(name)));
    }
}

TEST_CASE("generic first-rank-2-format Pfaffian is +/- det of the off-block") {
    auto m = generic_form_matrix(pattern("hammer"));
    auto n = m.grid().submatrix({0, 1, 2}, {3, 4, 5});
    auto pf = pfaffian(m);
    CHECK((pf == n.determinant() || pf == -n.determinant()));
}

TEST_CASE("free slot counts match the masks") {
    CHECK(free_slots(pattern("a")).size() == 10);
    CHECK(free_slots(pattern("d")).size() == 6);
    CHECK(free_slots(pattern("e")).size() == 6);
    CHECK(free_slots(pattern("f")).size() == 5);
    CHECK(free_slots(pattern("NSS3")).size() == 9);
}

TEST_CASE("form_matrix respects double-skew entry ties") {
    auto vars = VariableSet::prefixed("x", 5);
    SmallIntStream rng(7);
    auto m = random_form_matrix(pattern("e"), vars, rng);
    auto blocks = double_skew_decompose(m);
    REQUIRE(blocks.has_value());
    CHECK(blocks->n2.grid().is_zero());
    // lower-left block equals the upper-right block
    CHECK(m.grid().submatrix({3, 4, 5}, {0, 1, 2}) == m.grid().submatrix({0, 1, 2}, {3, 4, 5}));
    CHECK(pfaffian(m).is_zero());
}
