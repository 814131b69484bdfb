#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "certlogic/decision.hpp"
#include "certlogic/errors.hpp"
#include "certlogic/semantics.hpp"
#include "testutil.hpp"

using namespace certlogic;

TEST_CASE("system names") {
    CHECK(SystemId::from_name("KT45").name() == "S5");
    CHECK(SystemId::from_name("KD").name() == "D");
    CHECK(SystemId::from_name("S4") == SystemId::from_name("KT4"));
    CHECK_THROWS_AS(SystemId::from_name("S6"), ValidationError);
    FrameProperties p = SystemId::from_name("KD45").frame_constraints();
    CHECK(p.serial);
    CHECK(p.transitive);
    CHECK(p.euclidean);
    CHECK(!p.reflexive);
}

TEST_CASE("characteristic axioms per system") {
    auto valid = [](const char* f, const char* sys) {
        return decide(parse(f), SystemId::from_name(sys)).valid;
    };
    CHECK(valid("K(p) -> p", "S5"));
    CHECK(valid("K(p) -> p", "T"));
    CHECK(!valid("K(p) -> p", "KD45"));
    CHECK(valid("~K(false)", "KD45"));
    CHECK(valid("~K(false)", "D"));
    CHECK(!valid("~K(false)", "K4"));
    CHECK(valid("K(p) -> K(K(p))", "K4"));
    CHECK(!valid("K(p) -> K(K(p))", "T"));
    CHECK(valid("~K(p) -> K(~K(p))", "K45"));
    CHECK(!valid("~K(p) -> K(~K(p))", "S4"));
    CHECK(valid("K(p -> q) -> (K(p) -> K(q))", "K"));
    CHECK(valid("K(~K(p)) -> ~K(p)", "KD45"));
    CHECK(valid("p -> K(~K(~p))", "S5"));
    CHECK(!valid("p -> K(~K(~p))", "KD45"));
}

TEST_CASE("countermodels verify and respect frame constraints") {
    std::mt19937_64 rng(101);
    for (const char* sys_name : {"K", "T", "D", "K4", "S4", "K45", "KD45", "S5"}) {
        SystemId sys = SystemId::from_name(sys_name);
        for (int i = 0; i < 60; ++i) {
            FormulaPtr f = testutil::random_modal_formula(rng, 6, 2, {"p", "q"}, false);
            DecisionResult r = decide(f, sys);
            if (!r.valid) {
                REQUIRE(r.countermodel.has_value());
                for (const Relation& rel : r.countermodel->K)
                    CHECK(frame_properties(rel, r.countermodel->n_states())
                              .satisfies(sys.frame_constraints()));
                CHECK(!eval(*r.countermodel, *r.counterstate, f));
            }
        }
    }
}

TEST_CASE("decide agrees with the enumeration oracle") {
    std::mt19937_64 rng(202);
    for (const char* sys_name : {"K", "T", "S4", "KD45", "S5"}) {
        SystemId sys = SystemId::from_name(sys_name);
        for (int i = 0; i < 40; ++i) {
            FormulaPtr f = testutil::random_modal_formula(rng, 5, 2, {"p", "q"}, false);
            bool got = decide(f, sys).valid;
            if (got) CHECK(testutil::oracle_valid(f, sys, 3, {"p", "q"}));
        }
    }
}

TEST_CASE("multi agent in the non euclidean family") {
    CHECK(decide(parse("K_1(K_2(p)) -> K_1(K_2(p))"), SystemId::from_name("S4")).valid);
    CHECK(!decide(parse("K_1(p) -> K_2(p)"), SystemId::from_name("T")).valid);
    CHECK_THROWS_AS(decide(parse("K_2(p) -> K_2(p)"), SystemId::from_name("S5")),
                    LanguageError);
}

TEST_CASE("non formula languages rejected") {
    CHECK_THROWS_AS(decide(parse("w(p) >= 1/2"), SystemId::from_name("S5")), LanguageError);
    CHECK_THROWS_AS(decide_certainty(parse("K(p)"), CertaintyClass::N0), LanguageError);
}

TEST_CASE("node budget is enforced") {
    FormulaPtr f = parse(
        "K(p) & K(q) & K(r) & ~K(p & q & r) & (K(p | q) | K(q | r)) & (K(p | r) | K(r | q))");
    CHECK_THROWS_AS(decide(f, SystemId::from_name("S4"), {3}), ResourceLimitError);
}

TEST_CASE("certainty classes") {
    auto r0 = decide_certainty(parse("Cert(p) -> Cert(Cert(p))"), CertaintyClass::N0);
    CHECK(r0.valid);
    auto r1 = decide_certainty(parse("Cert(p) -> p"), CertaintyClass::N1);
    CHECK(r1.valid);
    auto r2 = decide_certainty(parse("Cert(p) -> p"), CertaintyClass::N0);
    CHECK(!r2.valid);
    REQUIRE(r2.countermodel.has_value());
    CHECK(r2.countermodel->kind == StructureKind::Simple);
    bool has_zero = false;
    for (const Rational& q : r2.countermodel->pr[0]) has_zero |= q == 0;
    CHECK(has_zero);
    CHECK(!eval(*r2.countermodel, *r2.counterstate, parse("Cert(p) -> p")));
    auto r3 = decide_certainty(parse("Cert(p) -> p"), CertaintyClass::NUnif);
    CHECK(!r3.valid);
    CHECK(is_uniform(*r3.countermodel, 1));
    auto r4 = decide_certainty(parse("Cert(p) -> p"), CertaintyClass::NA,
                               SystemId::from_name("T"));
    CHECK(r4.valid);
    CHECK_THROWS_AS(decide_certainty(parse("Cert(p)"), CertaintyClass::NA,
                                     SystemId::from_name("K4")),
                    ValidationError);
}

TEST_CASE("N0 and Nunif agree") {
    std::mt19937_64 rng(303);
    for (int i = 0; i < 60; ++i) {
        FormulaPtr f = testutil::random_modal_formula(rng, 5, 2, {"p", "q"}, true);
        CHECK(decide_certainty(f, CertaintyClass::N0).valid ==
              decide_certainty(f, CertaintyClass::NUnif).valid);
    }
}

TEST_CASE("bridge") {
    CHECK(check_s5_kd45_bridge(parse("K(p) -> p")).agree);
    BridgeResult contingent = check_s5_kd45_bridge(parse("p"));
    CHECK(contingent.agree);
    CHECK(!contingent.s5_valid);
    BridgeResult taut = check_s5_kd45_bridge(parse("~(p & ~p)"));
    CHECK(taut.agree);
    CHECK(taut.s5_valid);
}

TEST_CASE("cert translation equivalence") {
    for (const char* text : {"K(p) -> p", "p", "K(p) -> K(K(p))", "K(p & q) -> K(p)"}) {
        CertTranslationResult r = cert_of_translation(parse(text));
        CHECK(r.agree);
    }
    CHECK(cert_of_translation(parse("K(p) -> p")).s5_provable);
    CHECK(!cert_of_translation(parse("p")).n0_certain);
}

TEST_CASE("translations") {
    CHECK(render(translate_K_to_C(parse("K(p)"))) == "Cert(p)");
    CHECK(render(translate_C_to_K(parse("~q & Cert(~Cert(p) & Cert(q))"))) ==
          "~q & K(~K(p) & K(q))");
    FormulaPtr f = parse("K_2(p & ~K_2(q))");
    CHECK(equal(translate_C_to_K(translate_K_to_C(f)), f));
    CHECK_THROWS_AS(translate_K_to_C(parse("w(p) >= 1/2")), LanguageError);
    CHECK_THROWS_AS(translate_C_to_K(parse("K(p)")), LanguageError);
}
