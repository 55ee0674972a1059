#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "skewpf/groebner.hpp"
#include "skewpf/skew_matrix.hpp"

using namespace skewpf;

namespace {

Polynomial random_monomial(SmallIntStream& rng, const VarSetPtr& vars, int maxdeg) {
    Monomial m(vars->size(), 0);
    int d = 1 + static_cast<int>(rng.next_u64() % maxdeg);
    for (int k = 0; k < d; ++k) m[rng.next_u64() % vars->size()] += 1;
    return Polynomial::term(vars, m, Rat(1));
}

// number of degree-d monomials outside the monomial ideal
long standard_monomial_count(const std::vector<Polynomial>& gens, const VarSetPtr& vars, int d) {
    std::vector<Monomial> ms;
    std::vector<int> cur(vars->size(), 0);
    // enumerate all exponent vectors of total degree d
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rest) {
        if (i + 1 == cur.size()) {
            cur[i] = rest;
            ms.push_back(cur);
            return;
        }
        for (int e = 0; e <= rest; ++e) {
            cur[i] = e;
            rec(i + 1, rest - e);
        }
    };
    rec(0, d);
    long count = 0;
    for (const auto& m : ms) {
        bool in_ideal = false;
        for (const auto& g : gens)
            if (monomial_divides(g.leading_term().first, m)) {
                in_ideal = true;
                break;
            }
        if (!in_ideal) ++count;
    }
    return count;
}

// The 6x6 matrix of paired skew 3x3 blocks over l0,l1,l2 (the semistable
// polystable normal form); its flipped matrix drives several checks.
SkewLinMatrix paired_block_matrix() {
    auto vars = VariableSet::prefixed("l", 3);
    auto l0 = Polynomial::variable(vars, 0);
    auto l1 = Polynomial::variable(vars, 1);
    auto l2 = Polynomial::variable(vars, 2);
    auto z = Polynomial::zero(vars);
    return SkewLinMatrix::from_upper_triangle(
        vars, 6, {z, z, z, l0, l1, z, -l0, z, l2, -l1, -l2, z, z, z, z});
}

}  // namespace

TEST_CASE("buchberger base cases") {
    auto vars = VariableSet::prefixed("x", 3);
    auto x0 = Polynomial::variable(vars, 0);
    auto x1 = Polynomial::variable(vars, 1);
    auto x2 = Polynomial::variable(vars, 2);

    auto gb = buchberger(Ideal(vars, {x0}));
    REQUIRE(gb.elements().size() == 1);
    CHECK(gb.elements()[0] == x0);

    auto gb2 = buchberger(Ideal(vars, {x0 * x1, x0 * x2, x1 * x2}));
    CHECK(gb2.elements().size() == 3);

    auto gbz = buchberger(Ideal(vars, {Polynomial::zero(vars)}));
    CHECK(projective_dimension(gbz) == 2);
}

TEST_CASE("every S-polynomial of the returned basis reduces to zero") {
    auto vars = VariableSet::prefixed("x", 4);
    SmallIntStream rng(301);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<Polynomial> gens;
        for (int g = 0; g < 3; ++g) {
            Polynomial p(vars);
            for (int t = 0; t < 3; ++t)
                p += random_monomial(rng, vars, 3) * rng.next_rat();
            if (!p.is_zero()) gens.push_back(p);
        }
        if (gens.empty()) continue;
        auto gb = buchberger(Ideal(vars, gens));
        if (gb.contains_one()) continue;
        const auto& e = gb.elements();
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j)
                CHECK(normal_form(detail::s_polynomial(e[i], e[j]), e).is_zero());
        // normal_form is idempotent and generators are members
        for (const auto& g : gens) CHECK(normal_form(g, e).is_zero());
    }
}

TEST_CASE("ideal and radical membership") {
    auto vars = VariableSet::prefixed("x", 3);
    auto x0 = Polynomial::variable(vars, 0);
    auto x1 = Polynomial::variable(vars, 1);

    Ideal i1(vars, {x0 * x1});
    CHECK(ideal_member(Polynomial::zero(vars), i1));
    CHECK(!ideal_member(x0, i1));
    CHECK(ideal_member(x0 * x1 * x1, i1));

    Ideal i2(vars, {x0 * x0});
    CHECK(!ideal_member(x0, i2));
    CHECK(radical_member(x0, i2));
    CHECK(!radical_member(x1, i2));
    CHECK(radical_member(x0 * x0, i2));

    // membership implies radical membership on random products
    Ideal i3(vars, {x0 * x1, x1 * x1});
    CHECK(radical_member(x1 * (x0 + x1), i3));
}

TEST_CASE("projective dimension and degree basics") {
    auto y = VariableSet::prefixed("y", 6);
    std::vector<Polynomial> allvars;
    for (std::size_t i = 0; i < 6; ++i) allvars.push_back(Polynomial::variable(y, i));
    CHECK(projective_dimension(Ideal(y, allvars)) == PROJ_EMPTY);

    Ideal hyperplane(y, {Polynomial::variable(y, 0)});
    CHECK(projective_dimension(hyperplane) == 4);
    CHECK(projective_degree(hyperplane) == 1);

    Ideal quadric(y, {Polynomial::variable(y, 0) * Polynomial::variable(y, 1)});
    CHECK(projective_dimension(quadric) == 4);
    CHECK(projective_degree(quadric) == 2);

    CHECK_THROWS(projective_degree(Ideal(y, allvars)));

    auto x = VariableSet::prefixed("x", 2);
    auto nonhom = Polynomial::variable(x, 0) + Polynomial::constant(x, 1);
    CHECK_THROWS(projective_dimension(Ideal(x, {nonhom})));
}

TEST_CASE("Segre: 2x2 minors of a generic 2x3 layout have dimension 3 and degree 3") {
    auto y = VariableSet::prefixed("y", 6);
    PolyMatrix m(y, 2, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) m.at(i, j) = Polynomial::variable(y, 3 * i + j);
    Ideal segre(y, m.minors(2));
    auto gb = buchberger(segre);
    CHECK(projective_dimension(gb) == 3);
    CHECK(projective_degree(gb) == 3);
}

TEST_CASE("dimension/degree agree with Hilbert-function finite differences on monomial ideals") {
    auto vars = VariableSet::prefixed("x", 4);
    SmallIntStream rng(307);
    for (int rep = 0; rep < 12; ++rep) {
        std::vector<Polynomial> gens;
        int k = 1 + static_cast<int>(rng.next_u64() % 3);
        for (int g = 0; g < k; ++g) gens.push_back(random_monomial(rng, vars, 3));
        Ideal ideal(vars, gens);
        auto gb = buchberger(ideal);
        int pdim = projective_dimension(gb);
        // Hilbert function h(d) for large d is a polynomial of degree pdim
        // with leading coefficient degree/pdim!.
        std::vector<long> h;
        for (int d = 8; d <= 13; ++d) h.push_back(standard_monomial_count(gens, vars, d));
        if (pdim == PROJ_EMPTY) {
            CHECK(h.back() == 0);
            continue;
        }
        std::vector<long> diff = h;
        for (int step = 0; step < pdim; ++step)
            for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
        diff.resize(h.size() - pdim);
        long fact = 1;
        for (int f = 2; f <= pdim; ++f) fact *= f;
        INFO("rep " << rep);
        for (std::size_t i = 0; i + 1 < diff.size(); ++i) CHECK(diff[i] == diff[i + 1]);
        CHECK(diff[0] * fact == static_cast<long>(projective_degree(gb)) * fact);
        CHECK(diff[0] == projective_degree(gb));
    }
}

TEST_CASE("dimension is monotone under ideal inclusion") {
    auto vars = VariableSet::prefixed("x", 4);
    SmallIntStream rng(311);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<Polynomial> gens = {random_monomial(rng, vars, 3)};
        int prev = projective_dimension(Ideal(vars, gens));
        for (int extra = 0; extra < 3; ++extra) {
            gens.push_back(random_monomial(rng, vars, 3));
            int cur = projective_dimension(Ideal(vars, gens));
            int prev_cmp = (prev == PROJ_EMPTY) ? -1000 : prev;
            int cur_cmp = (cur == PROJ_EMPTY) ? -1000 : cur;
            CHECK(cur_cmp <= prev_cmp);
            prev = cur;
        }
    }
}

TEST_CASE("rank loci of the paired-block matrix: rank-1 empty, rank-2 is the Segre") {
    auto m = paired_block_matrix();
    auto f = flipped(m);
    auto y = f.vars();

    Ideal z1(y, f.minors(2));
    CHECK(projective_dimension(z1) == PROJ_EMPTY);

    Ideal z2(y, f.minors(3));
    auto gb = buchberger(z2);
    CHECK(projective_dimension(gb) == 3);
    CHECK(projective_degree(gb) == 3);

    // the reduced locus is cut out by the 2x2 minors of [[y0,y1,y2],[y3,y4,y5]]
    PolyMatrix seg(y, 2, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) seg.at(i, j) = Polynomial::variable(y, 3 * i + j);
    for (const auto& minor : seg.minors(2)) CHECK(radical_member(minor, z2));
}

TEST_CASE("resource budgets raise explicit errors") {
    auto vars = VariableSet::prefixed("x", 3);
    auto x0 = Polynomial::variable(vars, 0);
    auto x1 = Polynomial::variable(vars, 1);
    auto x2 = Polynomial::variable(vars, 2);
    GroebnerBudget tiny;
    tiny.max_pairs = 1;
    CHECK_THROWS_AS(
        buchberger(Ideal(vars, {x0 * x0 - x1 * x2, x1 * x1 - x0 * x2, x2 * x2 - x0 * x1}), tiny),
        ResourceError);
}

TEST_CASE("linear subspace search") {
    auto y = VariableSet::prefixed("y", 6);
    PolyMatrix seg(y, 2, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) seg.at(i, j) = Polynomial::variable(y, 3 * i + j);
    Ideal segre(y, seg.minors(2));
    // the Segre contains planes (fibers) but no P^3
    CHECK(contains_linear_subspace(segre, 2) == SubspaceSearch::FOUND);
    CHECK(contains_linear_subspace(segre, 3) == SubspaceSearch::NOT_FOUND);
    // dimension bound: k above the dimension is certified absent
    CHECK(contains_linear_subspace(segre, 4) == SubspaceSearch::NOT_FOUND);

    // a union of coordinate hyperplanes contains coordinate subspaces
    Ideal quadric(y, {Polynomial::variable(y, 0) * Polynomial::variable(y, 1)});
    CHECK(contains_linear_subspace(quadric, 4) == SubspaceSearch::FOUND);
}

TEST_CASE("rank-2 locus of the paired-block matrix contains no linear 3-space") {
    auto m = paired_block_matrix();
    auto f = flipped(m);
    auto y = f.vars();
    Ideal z2(y, f.minors(3));
    CHECK(contains_linear_subspace(z2, 3) == SubspaceSearch::NOT_FOUND);
}
