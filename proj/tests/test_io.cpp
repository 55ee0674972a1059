#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "skewpf/io.hpp"

using namespace skewpf;

TEST_CASE("rational strings parse exactly and reject inexact forms") {
    CHECK(parse_rational("3") == Rat(3));
    CHECK(parse_rational("-2/7") == Rat(-2, 7));
    CHECK(parse_rational("+4/6") == Rat(2, 3));
    CHECK(parse_rational("0") == Rat(0));
    for (const char* bad : {"1.5", "1e3", "3/", "/7", "", "a", "1/2/3", "3/0", "--2", "2.0/3"})
        CHECK_THROWS_AS(parse_rational(bad), ParseError);
    CHECK(rational_string(Rat(-2, 7)) == "-2/7");
    CHECK(rational_string(Rat(5)) == "5");
}

TEST_CASE("matrix documents round-trip bit-exactly") {
    SmallIntStream rng(811, -9, 9);
    for (auto lab : all_p4_labels()) {
        auto m = normal_form(lab);
        Json doc = matrix_to_json(m);
        auto back = matrix_from_json(doc);
        CHECK(back == m);
        CHECK(matrix_to_json(back) == doc);  // serialize . parse . serialize
    }
    // random entries with denominators
    auto vars = VariableSet::make({"u", "v", "w"});
    std::vector<Polynomial> up;
    for (int k = 0; k < 15; ++k) {
        std::vector<Rat> c;
        for (int j = 0; j < 3; ++j) {
            Rat r(rng.next(), 1 + (k % 5));
            r.canonicalize();
            c.push_back(r);
        }
        up.push_back(linear_form(vars, c));
    }
    auto m = SkewLinMatrix::from_upper_triangle(vars, 6, up);
    Json doc = matrix_to_json(m);
    CHECK(matrix_from_json(doc) == m);
    CHECK(matrix_to_json(matrix_from_json(doc)) == doc);
}

TEST_CASE("matrix document validation") {
    Json doc;
    doc["variables"] = {"x", "y"};
    doc["entries"] = Json::array();
    for (int k = 0; k < 15; ++k) doc["entries"].push_back(Json::object());
    CHECK_NOTHROW(matrix_from_json(doc));  // zero 6x6

    SECTION("bad entry count") {
        doc["entries"].push_back(Json::object());
        CHECK_THROWS_AS(matrix_from_json(doc), ParseError);
    }
    SECTION("unknown variable") {
        doc["entries"][3]["z"] = "1";
        CHECK_THROWS_AS(matrix_from_json(doc), ParseError);
    }
    SECTION("JSON numbers are rejected as coefficients") {
        doc["entries"][3]["x"] = 1;
        CHECK_THROWS_AS(matrix_from_json(doc), ParseError);
    }
    SECTION("missing fields") {
        CHECK_THROWS_AS(matrix_from_json(Json::object()), ParseError);
        CHECK_THROWS_AS(matrix_from_json(Json::array()), ParseError);
    }
}

TEST_CASE("congruence witnesses round-trip") {
    SmallIntStream rng(821, -4, 4);
    QMatrix s(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) { Rat r(rng.next(), 3); r.canonicalize(); s(i, j) = r; }
    if (s.det() == 0) s(0, 0) += 1;
    Congruence g(s);
    CHECK(congruence_from_json(congruence_to_json(g)).matrix() == g.matrix());
    CHECK_THROWS_AS(congruence_from_json(Json::array()), ParseError);
}

TEST_CASE("classification reports serialize with their witness") {
    auto m = p4_orbit_sample(P4Label::c, 17);
    auto rep = classify_full(m, 3);
    REQUIRE(rep.verified);
    Json j = report_to_json(rep);
    CHECK(j["label"].get<std::string>() == rep.label);
    CHECK(j["verified"].get<bool>());
    auto g = congruence_from_json(j["witness"]);
    CHECK(verify_format_witness(m, g, pattern(rep.label)));
    CHECK(!human_report(rep).empty());
}

TEST_CASE("the regenerated tables match the golden file byte for byte") {
    std::ifstream in(std::string(SKEWPF_GOLDEN_DIR) + "/tables.txt", std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(render_tables() == buf.str());
}

TEST_CASE("fingerprint JSON encodes empty loci as -1 with a flag") {
    auto fp = fingerprint(normal_form(P4Label::a));
    Json j = fingerprint_to_json(fp);
    CHECK(j["rank2_sing_dim"].get<int>() == -1);
    bool saw_empty = false;
    for (const auto& e : j["z_profile"])
        if (e["empty"].get<bool>()) {
            CHECK(e["dim"].get<int>() == -1);
            saw_empty = true;
        }
    CHECK(saw_empty);
}
