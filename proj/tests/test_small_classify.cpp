#include <catch2/catch_amalgamated.hpp>

#include "skewpf/small_classify.hpp"

using namespace skewpf;

namespace {

VarSetPtr xvars() { return VariableSet::prefixed("x", 3); }

QMatrix random_invertible(SmallIntStream& rng, std::size_t n) {
    for (;;) {
        QMatrix s(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s(i, j) = rng.next_rat();
        if (s.det() != 0) return s;
    }
}

}  // namespace

TEST_CASE("2x2 fixed examples") {
    auto vars = VariableSet::make({"x", "y"});
    auto x = Polynomial::variable(vars, 0);
    auto y = Polynomial::variable(vars, 1);

    PolyMatrix sym(vars, 2, 2);
    sym.at(0, 0) = x;
    auto r = classify_2x2(sym, true);
    REQUIRE(r.has_value());
    CHECK(r->pattern == "sym2-corner");
    CHECK(r->s == QMatrix::identity(2));

    PolyMatrix m(vars, 2, 2);
    m.at(0, 0) = x;
    m.at(0, 1) = x;
    m.at(1, 0) = y;
    m.at(1, 1) = y;
    auto rc = classify_2x2(m, false);
    REQUIRE(rc.has_value());
    CHECK(rc->pattern == "p2-zerocol");

    auto rr = classify_2x2(m.transpose(), false);
    REQUIRE(rr.has_value());
    CHECK(rr->pattern == "p2-zerorow");

    PolyMatrix bad(vars, 2, 2);
    bad.at(0, 0) = x;
    bad.at(1, 1) = y;
    CHECK_THROWS(classify_2x2(bad, false));  // det != 0
}

TEST_CASE("2x2 orbit round-trips") {
    auto vars = xvars();
    SmallIntStream rng(211);
    for (int rep = 0; rep < 50; ++rep) {
        // symmetric: scrambled [[l,0],[0,0]]
        std::vector<Rat> c = {rng.next_rat(), rng.next_rat(), rng.next_rat()};
        PolyMatrix base(vars, 2, 2);
        base.at(0, 0) = linear_form(vars, c);
        auto g = random_invertible(rng, 2);
        auto scr = base.left_mul(g).right_mul(g.transpose());
        auto r = classify_2x2(scr, true);
        REQUIRE(r.has_value());
    }
    for (std::string pat : {"p2-zerocol", "p2-zerorow"}) {
        for (int rep = 0; rep < 50; ++rep) {
            auto base = random_form_grid(pattern(pat), vars, rng);
            auto scr = base.left_mul(random_invertible(rng, 2))
                           .right_mul(random_invertible(rng, 2));
            auto r = classify_2x2(scr, false);
            REQUIRE(r.has_value());
        }
    }
}

TEST_CASE("3x3 fixed examples") {
    auto vars = xvars();
    auto x0 = Polynomial::variable(vars, 0);
    auto x1 = Polynomial::variable(vars, 1);
    auto x2 = Polynomial::variable(vars, 2);

    // constant right kernel
    PolyMatrix m(vars, 3, 3);
    m.at(0, 0) = x0;
    m.at(1, 0) = x1;
    m.at(2, 0) = x2;
    m.at(0, 1) = x1;
    m.at(1, 1) = x2;
    m.at(2, 1) = x0;
    // column 2 = column 0 + column 1
    for (std::size_t i = 0; i < 3; ++i) m.at(i, 2) = m.at(i, 0) + m.at(i, 1);
    auto r = classify_3x3_detzero(m);
    REQUIRE(r.has_value());
    CHECK(r->pattern == "p3-zerocol");

    // a generic skew matrix is already in skew form
    auto sk = SkewLinMatrix::from_upper_triangle(vars, 3, {x0, x1, x2});
    auto rs = classify_3x3_detzero(sk.grid());
    REQUIRE(rs.has_value());
    CHECK(rs->pattern == "p3-skew");

    CHECK_THROWS(classify_3x3_detzero(PolyMatrix(vars, 2, 2)));
    PolyMatrix nz(vars, 3, 3);
    nz.at(0, 0) = x0;
    nz.at(1, 1) = x1;
    nz.at(2, 2) = x2;
    CHECK_THROWS(classify_3x3_detzero(nz));  // det != 0
}

TEST_CASE("3x3 orbit round-trips for all four patterns") {
    auto vars = xvars();
    SmallIntStream rng(223);
    for (std::string pat : {"p3-zerocol", "p3-zerorow", "p3-block", "p3-skew"}) {
        for (int rep = 0; rep < 50; ++rep) {
            auto base = random_form_grid(pattern(pat), vars, rng);
            auto scr = base.left_mul(random_invertible(rng, 3))
                           .right_mul(random_invertible(rng, 3));
            REQUIRE(scr.determinant().is_zero());
            auto r = classify_3x3_detzero(scr, rng.next_u64());
            INFO("pattern " << pat << " rep " << rep);
            REQUIRE(r.has_value());
        }
    }
}

TEST_CASE("4x4 fixed examples") {
    auto vars = xvars();
    auto x0 = Polynomial::variable(vars, 0);
    auto x1 = Polynomial::variable(vars, 1);
    auto x2 = Polynomial::variable(vars, 2);
    auto z = Polynomial::zero(vars);

    // zero last row/column: skew 3x3 block extended by zeros
    auto corner = SkewLinMatrix::from_upper_triangle(vars, 4, {x0, x1, z, x2, z, z});
    auto r = classify_4x4_skew_pfzero(corner);
    REQUIRE(r.has_value());
    CHECK(r->pattern == "s4-corner");

    // all stars in row/column 0
    auto row0 = SkewLinMatrix::from_upper_triangle(vars, 4, {x0, x1, x2, z, z, z});
    auto r2 = classify_4x4_skew_pfzero(row0);
    REQUIRE(r2.has_value());
    CHECK(r2->pattern == "s4-row0");

    auto zero = SkewLinMatrix::zero(vars, 4);
    auto rz = classify_4x4_skew_pfzero(zero);
    REQUIRE(rz.has_value());
    CHECK(rz->pattern == "s4-row0");
    CHECK(rz->s == QMatrix::identity(4));

    // Pf != 0 rejected
    auto generic = SkewLinMatrix::from_upper_triangle(vars, 4, {x0, x1, x2, x2, x1, x0});
    if (!pfaffian(generic).is_zero()) CHECK_THROWS(classify_4x4_skew_pfzero(generic));
}

TEST_CASE("4x4 orbit round-trips for both patterns") {
    auto vars = xvars();
    SmallIntStream rng(227);
    for (std::string pat : {"s4-row0", "s4-corner"}) {
        for (int rep = 0; rep < 50; ++rep) {
            auto base = random_form_matrix(pattern(pat), vars, rng);
            REQUIRE(pfaffian(base).is_zero());
            Congruence g(random_invertible(rng, 4));
            auto scr = apply_congruence(g, base);
            auto r = classify_4x4_skew_pfzero(scr, rng.next_u64());
            INFO("pattern " << pat << " rep " << rep);
            REQUIRE(r.has_value());
        }
    }
}
