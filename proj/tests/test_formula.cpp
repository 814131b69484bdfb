#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "certlogic/errors.hpp"
#include "certlogic/formula.hpp"
#include "testutil.hpp"

using namespace certlogic;

TEST_CASE("rational parsing") {
    CHECK(parse_rational("1/2") == make_rational(1, 2));
    CHECK(parse_rational("-3") == Rational(-3));
    CHECK(parse_rational("2/4") == make_rational(1, 2));
    CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
    CHECK_THROWS_AS(parse_rational("x"), ValidationError);
    CHECK(rational_to_string(make_rational(2, 4)) == "1/2");
}

TEST_CASE("weight atom parsing") {
    FormulaPtr f = parse("2w(p) >= 1");
    REQUIRE(f->kind == Kind::Weight);
    CHECK(f->terms.size() == 1);
    CHECK(f->terms[0].coeff == 2);
    CHECK(f->terms[0].agent == 1);
    CHECK(f->terms[0].arg->kind == Kind::Prop);
    CHECK(f->rel == WRel::Ge);
    CHECK(f->bound == 1);
    CHECK(render(f) == "2w(p) >= 1");
}

TEST_CASE("cert pair recognition") {
    FormulaPtr f = parse("~q & Cert(~Cert(p) & Cert(q))");
    REQUIRE(f->kind == Kind::And);
    auto outer = as_cert(f->rhs);
    REQUIRE(outer.has_value());
    CHECK(outer->first == 1);
    REQUIRE(outer->second->kind == Kind::And);
    CHECK(as_cert(outer->second->lhs->lhs).has_value());
    CHECK(as_cert(outer->second->rhs).has_value());
    CHECK(render(f) == "~q & Cert(~Cert(p) & Cert(q))");
}

TEST_CASE("K parsing and agent indices") {
    FormulaPtr f = parse("K(p)");
    REQUIRE(f->kind == Kind::Know);
    CHECK(f->agent == 1);
    FormulaPtr g = parse("K_2(p) & Cert_3(q)");
    CHECK(g->lhs->agent == 2);
    CHECK(as_cert(g->rhs)->first == 3);
    CHECK(render(g) == "K_2(p) & Cert_3(q)");
}

TEST_CASE("parse errors carry position") {
    CHECK_THROWS_AS(parse("p &"), ParseError);
    CHECK_THROWS_AS(parse("w(p) >= 1/0"), ParseError);
    CHECK_THROWS_AS(parse("K p"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("desugar clears rational bounds") {
    FormulaPtr f = desugar(parse("w(p) >= 1/2"));
    REQUIRE(f->kind == Kind::Weight);
    CHECK(f->terms[0].coeff == 2);
    CHECK(f->bound == 1);
    CHECK(render(f) == "2w(p) >= 1");
}

TEST_CASE("desugar of strict and interval relations") {
    FormulaPtr lt = desugar(parse("w(p) - 2w(q) < 0"));
    CHECK(lt->kind == Kind::Not);
    CHECK(lt->lhs->kind == Kind::Weight);
    FormulaPtr in = desugar(parse("w(p) in [1/3, 1/2]"));
    REQUIRE(in->kind == Kind::And);
    CHECK(in->lhs->kind == Kind::Weight);
    CHECK(in->rhs->kind == Kind::Weight);
    FormulaPtr le = desugar(parse("w(p) <= 1/2"));
    REQUIRE(le->kind == Kind::Weight);
    CHECK(le->terms[0].coeff == -2);
    CHECK(le->bound == -1);
}

TEST_CASE("desugar is idempotent and canonical") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        FormulaPtr f = testutil::random_modal_formula(rng, 6, 2, {"p", "q"}, i % 2 == 0);
        FormulaPtr d = desugar(f);
        CHECK(is_canonical(d));
        CHECK(equal(d, desugar(d)));
    }
}

TEST_CASE("render round-trips") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        FormulaPtr f = testutil::random_modal_formula(rng, 7, 2, {"p", "q", "r"}, i % 2 == 0);
        CHECK(equal(parse(render(f)), f));
        std::string s = render(f);
        CHECK(render(parse(s)) == s);
    }
}

TEST_CASE("classify") {
    CHECK(classify(desugar(parse("Cert(~Cert(p))"))) == Language::LC);
    CHECK(classify(desugar(parse("w(w(p) >= 1/2) < 1/3"))) == Language::LP);
    CHECK(classify(desugar(parse("K(p) & Cert(q)"))) == Language::Mixed);
    CHECK(classify(desugar(parse("K(K(p)) -> K(p)"))) == Language::LK);
    CHECK(classify(desugar(parse("p & ~q"))) == Language::Propositional);
}

TEST_CASE("modal depth") {
    CHECK(modal_depth(desugar(parse("p & ~q"))) == 0);
    CHECK(modal_depth(desugar(parse("Cert(Cert(p))"))) == 2);
    CHECK(modal_depth(desugar(parse("w(w(p) >= 1/2) < 1/3"))) == 2);
    CHECK(modal_depth(desugar(parse("K(p) & K(K(q))"))) == 2);
}

TEST_CASE("subformulas") {
    auto subs = subformulas(desugar(parse("K(p & q)")));
    REQUIRE(subs.size() == 4);
    CHECK(render(subs[0]) == "K(p & q)");
    CHECK(render(subs[1]) == "p & q");
    CHECK(render(subs[2]) == "p");
    CHECK(render(subs[3]) == "q");
    auto single = subformulas(desugar(parse("p")));
    CHECK(single.size() == 1);
}

TEST_CASE("implication precedence and associativity") {
    CHECK(equal(parse("p -> q -> r"),
                make_implies(make_prop("p"), make_implies(make_prop("q"), make_prop("r")))));
    CHECK(render(parse("p | q & r")) == "p | q & r");
    CHECK(equal(parse("p | q & r"), make_or(make_prop("p"), make_and(make_prop("q"), make_prop("r")))));
    CHECK(render(parse("(p | q) & r")) == "(p | q) & r");
}
