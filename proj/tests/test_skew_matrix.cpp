#include <catch2/catch_amalgamated.hpp>

#include "skewpf/skew_matrix.hpp"

using namespace skewpf;

namespace {

VarSetPtr xvars() { return VariableSet::prefixed("x", 5); }

SkewLinMatrix random_skew(SmallIntStream& rng, const VarSetPtr& vars, std::size_t n) {
    std::vector<Polynomial> upper;
    for (std::size_t k = 0; k < n * (n - 1) / 2; ++k) {
        std::vector<Rat> c;
        for (std::size_t i = 0; i < vars->size(); ++i) c.push_back(rng.next_rat());
        upper.push_back(linear_form(vars, c));
    }
    return SkewLinMatrix::from_upper_triangle(vars, n, upper);
}

QMatrix random_invertible(SmallIntStream& rng, std::size_t n) {
    for (;;) {
        QMatrix s(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s(i, j) = rng.next_rat();
        if (s.det() != 0) return s;
    }
}

}  // namespace

TEST_CASE("pfaffian sign convention and base cases") {
    auto vars = VariableSet::prefixed("a", 1);
    auto a = Polynomial::variable(vars, 0);
    auto m2 = SkewLinMatrix::from_upper_triangle(vars, 2, {a});
    CHECK(pfaffian(m2) == a);
    CHECK(pfaffian(SkewLinMatrix::zero(vars, 4)).is_zero());
    auto odd = SkewLinMatrix::zero(vars, 3);
    CHECK_THROWS(pfaffian(odd));
}

TEST_CASE("pfaffian of three 2x2 blocks is the product of the entries") {
    auto vars = VariableSet::prefixed("l", 3);
    auto l0 = Polynomial::variable(vars, 0);
    auto l1 = Polynomial::variable(vars, 1);
    auto l2 = Polynomial::variable(vars, 2);
    auto z = Polynomial::zero(vars);
    // blocks on (0,1), (2,3), (4,5)
    auto m = SkewLinMatrix::from_upper_triangle(
        vars, 6, {l0, z, z, z, z, z, z, z, z, l1, z, z, z, z, l2});
    CHECK(pfaffian(m) == l0 * l1 * l2);
    CHECK(pfaffian_laplace(m, 0) == l0 * l1 * l2);
}

TEST_CASE("matching sum agrees with Laplace expansion along every row") {
    auto vars = xvars();
    SmallIntStream rng(20260826);
    for (int rep = 0; rep < 100; ++rep) {
        auto m = random_skew(rng, vars, 6);
        auto pf = pfaffian(m);
        for (std::size_t i = 0; i < 6; ++i) CHECK(pfaffian_laplace(m, i) == pf);
    }
}

TEST_CASE("pfaffian squared equals the determinant") {
    auto vars = xvars();
    SmallIntStream rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        auto m = random_skew(rng, vars, 4);
        auto pf = pfaffian(m);
        CHECK(pf * pf == m.grid().determinant());
    }
    for (int rep = 0; rep < 3; ++rep) {
        auto m = random_skew(rng, vars, 6);
        auto pf = pfaffian(m);
        CHECK(pf * pf == m.grid().determinant());
    }
}

TEST_CASE("congruence scales the pfaffian by det(S)") {
    auto vars = xvars();
    SmallIntStream rng(37);
    for (int rep = 0; rep < 15; ++rep) {
        auto m = random_skew(rng, vars, 6);
        Congruence s(random_invertible(rng, 6));
        auto sm = apply_congruence(s, m);
        CHECK(pfaffian(sm) == pfaffian(m) * s.det());
    }
    CHECK_THROWS(Congruence(QMatrix(6, 6)));
}

TEST_CASE("congruence is a group action") {
    auto vars = xvars();
    SmallIntStream rng(41);
    auto m = random_skew(rng, vars, 6);
    CHECK(apply_congruence(Congruence::identity(6), m) == m);
    Congruence s1(random_invertible(rng, 6));
    Congruence s2(random_invertible(rng, 6));
    CHECK(apply_congruence(s2, apply_congruence(s1, m)) ==
          apply_congruence(s2.compose(s1), m));
    CHECK(apply_congruence(s1.inverse(), apply_congruence(s1, m)) == m);
}

TEST_CASE("delete_rows_cols basics") {
    auto vars = xvars();
    SmallIntStream rng(43);
    auto m = random_skew(rng, vars, 6);
    auto d = delete_rows_cols(m, 0, 1);
    REQUIRE(d.size() == 4);
    CHECK(d.at(0, 1) == m.at(2, 3));
    CHECK(d.at(2, 3) == m.at(4, 5));
    // order of the pair does not matter
    CHECK(delete_rows_cols(m, 1, 0) == d);
    CHECK_THROWS(delete_rows_cols(m, 2, 2));
}

TEST_CASE("pfaffians4 ordering and zero case") {
    auto vars = xvars();
    auto z = pfaffians4(SkewLinMatrix::zero(vars, 6));
    REQUIRE(z.size() == 15);
    for (const auto& p : z) CHECK(p.is_zero());
    SmallIntStream rng(47);
    auto m = random_skew(rng, vars, 6);
    auto pf4 = pfaffians4(m);
    CHECK(pf4[0] == pfaffian(delete_rows_cols(m, 0, 1)));
    CHECK(pf4[14] == pfaffian(delete_rows_cols(m, 4, 5)));
}

TEST_CASE("rank at a point drops to <=2 exactly where all sub-pfaffians vanish") {
    auto vars = xvars();
    SmallIntStream rng(53);
    for (int rep = 0; rep < 20; ++rep) {
        auto m = random_skew(rng, vars, 6);
        auto pf4 = pfaffians4(m);
        std::vector<Rat> pt;
        for (std::size_t i = 0; i < 5; ++i) pt.push_back(rng.next_rat());
        bool all_vanish = true;
        for (const auto& p : pf4)
            if (p.evaluate(pt) != 0) all_vanish = false;
        CHECK((rank_at_point(m, pt) <= 2) == all_vanish);
    }
    // a structured rank-2 example: single 2x2 block
    auto l0 = Polynomial::variable(vars, 0);
    auto z = Polynomial::zero(vars);
    std::vector<Polynomial> upper(15, z);
    upper[0] = l0;
    auto m = SkewLinMatrix::from_upper_triangle(vars, 6, upper);
    CHECK(rank_at_point(m, {Rat(1), Rat(0), Rat(0), Rat(0), Rat(0)}) == 2);
    for (const auto& p : pfaffians4(m))
        CHECK(p.evaluate({Rat(1), Rat(0), Rat(0), Rat(0), Rat(0)}) == 0);
}

TEST_CASE("reverse is an involution and a congruence") {
    auto vars = xvars();
    SmallIntStream rng(59);
    auto m = random_skew(rng, vars, 6);
    CHECK(reverse(reverse(m)) == m);
    QMatrix j(6, 6);
    for (std::size_t i = 0; i < 6; ++i) j(i, 5 - i) = 1;
    CHECK(reverse(m) == apply_congruence(Congruence(j), m));
    CHECK(reverse(m).at(0, 1) == m.at(5, 4));
}

TEST_CASE("flipped matrix of a single entry pair") {
    auto vars = VariableSet::prefixed("x", 1);
    auto x = Polynomial::variable(vars, 0);
    std::vector<Polynomial> upper(15, Polynomial::zero(vars));
    upper[0] = x;  // m01 = x
    auto m = SkewLinMatrix::from_upper_triangle(vars, 6, upper);
    auto f = flipped(m);
    REQUIRE(f.rows() == 1);
    REQUIRE(f.cols() == 6);
    auto y = f.vars();
    CHECK(f.at(0, 0) == -Polynomial::variable(y, 1));
    CHECK(f.at(0, 1) == Polynomial::variable(y, 0));
    for (std::size_t j = 2; j < 6; ++j) CHECK(f.at(0, j).is_zero());
}

TEST_CASE("flipped matrix of the paired-skew-block matrix over three variables") {
    auto vars = VariableSet::prefixed("l", 3);
    auto l0 = Polynomial::variable(vars, 0);
    auto l1 = Polynomial::variable(vars, 1);
    auto l2 = Polynomial::variable(vars, 2);
    auto z = Polynomial::zero(vars);
    // upper triangle rows: (0,*): 0,0,0,l0,l1 ; (1,*): 0,-l0,0,l2 ; (2,*): -l1,-l2,0 ; rest 0
    auto m = SkewLinMatrix::from_upper_triangle(
        vars, 6, {z, z, z, l0, l1, z, -l0, z, l2, -l1, -l2, z, z, z, z});
    auto f = flipped(m);
    REQUIRE(f.rows() == 3);
    auto y = f.vars();
    auto yv = [&](std::size_t i) { return Polynomial::variable(y, i); };
    std::vector<std::vector<Polynomial>> want = {
        {-yv(4), yv(3), Polynomial::zero(y), -yv(1), yv(0), Polynomial::zero(y)},
        {-yv(5), Polynomial::zero(y), yv(3), -yv(2), Polynomial::zero(y), yv(0)},
        {Polynomial::zero(y), -yv(5), yv(4), Polynomial::zero(y), -yv(2), yv(1)}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(f.at(i, j) == want[i][j]);
}

TEST_CASE("flipped round-trips through unflip") {
    auto vars = xvars();
    SmallIntStream rng(61);
    for (int rep = 0; rep < 10; ++rep) {
        auto m = random_skew(rng, vars, 6);
        CHECK(unflip(flipped(m), vars) == m);
    }
}

TEST_CASE("double skew decomposition") {
    auto vars = VariableSet::prefixed("l", 3);
    auto l0 = Polynomial::variable(vars, 0);
    auto l1 = Polynomial::variable(vars, 1);
    auto l2 = Polynomial::variable(vars, 2);
    auto z = Polynomial::zero(vars);
    auto m = SkewLinMatrix::from_upper_triangle(
        vars, 6, {z, z, z, l0, l1, z, -l0, z, l2, -l1, -l2, z, z, z, z});
    auto blocks = double_skew_decompose(m);
    REQUIRE(blocks.has_value());
    CHECK(blocks->n0.grid().is_zero());
    CHECK(blocks->n2.grid().is_zero());
    CHECK(blocks->n1.at(0, 1) == l0);
    CHECK(blocks->n1.at(1, 2) == l2);

    SmallIntStream rng(67);
    auto generic = random_skew(rng, xvars(), 6);
    CHECK(!double_skew_decompose(generic).has_value());

    // stable under block-diagonal congruence with equal 3x3 blocks
    QMatrix g2 = QMatrix::identity(6);
    g2(0, 1) = 2;
    g2(3, 4) = 2;
    g2(1, 2) = -1;
    g2(4, 5) = -1;
    CHECK(double_skew_decompose(apply_congruence(Congruence(g2), m)).has_value());
}

TEST_CASE("construction validates skewness and linearity") {
    auto vars = xvars();
    auto x0 = Polynomial::variable(vars, 0);
    PolyMatrix bad(vars, 2, 2);
    bad.at(0, 1) = x0;
    bad.at(1, 0) = x0;  // not skew
    CHECK_THROWS(SkewLinMatrix(bad));
    PolyMatrix quad(vars, 2, 2);
    quad.at(0, 1) = x0 * x0;
    quad.at(1, 0) = -(x0 * x0);
    CHECK_THROWS(SkewLinMatrix(quad));
    // zero entries are fine
    CHECK_NOTHROW(SkewLinMatrix::zero(vars, 6));
}
