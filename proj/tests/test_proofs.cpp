#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "certlogic/decision.hpp"
#include "certlogic/errors.hpp"
#include "certlogic/proofs.hpp"

using namespace certlogic;

#ifndef DATA_DIR
#define DATA_DIR "data"
#endif

TEST_CASE("axiom matching") {
    auto m = match_axiom(parse("~K(q) -> K(~K(q))"), AxiomSchema::Five);
    REQUIRE(m.has_value());
    CHECK(render(m->at("phi")) == "q");
    CHECK(!match_axiom(parse("K(q) -> K(K(q))"), AxiomSchema::T).has_value());
    CHECK(match_axiom(parse("K(q) -> K(K(q))"), AxiomSchema::Four).has_value());
    auto d = match_axiom(parse("~K(false)"), AxiomSchema::D);
    REQUIRE(d.has_value());
    CHECK(d->empty());
    auto k = match_axiom(parse("K(p) & K(p -> p) -> K(p)"), AxiomSchema::K);
    REQUIRE(k.has_value());
    CHECK(render(k->at("phi")) == "p");
    CHECK(render(k->at("psi")) == "p");
    // Agent consistency: mixed agents are not an instance.
    CHECK(!match_axiom(parse("K_1(p) -> K_2(K_1(p))"), AxiomSchema::Four).has_value());
    CHECK(match_axiom(parse("K_2(p) -> K_2(K_2(p))"), AxiomSchema::Four).has_value());
}

TEST_CASE("propositional tautology check") {
    CHECK(is_prop_tautology(parse("K(p) | ~K(p)")));
    CHECK(!is_prop_tautology(parse("K(p) -> p")));
    CHECK(is_prop_tautology(parse("(p -> q) -> (~q -> ~p)")));
    CHECK(is_prop_tautology(parse("w(p) >= 1/2 | ~(w(p) >= 1/2)")));
    CHECK(!is_prop_tautology(parse("w(p) >= 1/2 | ~(2w(p) >= 2)")));
}

TEST_CASE("basic proofs check") {
    Proof p;
    p.system = SystemId::from_name("K");
    p.lines.push_back({parse("p -> (p | q)"), PropTaut{}});
    p.lines.push_back({parse("K(p -> (p | q))"), Necessitation{1}});
    CHECK(check_proof(p).ok);

    Proof ax;
    ax.system = SystemId::from_name("K");
    ax.lines.push_back({parse("K(p) & K(p -> p) -> K(p)"),
                        AxiomInstance{AxiomSchema::K, {{"phi", parse("p")}, {"psi", parse("p")}}}});
    CHECK(check_proof(ax).ok);
}

TEST_CASE("schema gate") {
    Proof p;
    p.system = SystemId::from_name("KD45");
    p.lines.push_back({parse("K(p) -> p"), AxiomInstance{AxiomSchema::T, {}}});
    ProofCheckResult r = check_proof(p);
    CHECK(!r.ok);
    CHECK(*r.line == 1);
    CHECK(r.reason->find("not in system") != std::string::npos);
}

TEST_CASE("modus ponens errors") {
    Proof p;
    p.system = SystemId::from_name("T");
    p.lines.push_back({parse("K(p) -> p"), AxiomInstance{AxiomSchema::T, {}}});
    p.lines.push_back({parse("p"), ModusPonens{1, 1}});
    ProofCheckResult r = check_proof(p);
    CHECK(!r.ok);
    CHECK(*r.line == 2);

    Proof fwd;
    fwd.system = SystemId::from_name("K");
    fwd.lines.push_back({parse("p"), ModusPonens{1, 2}});
    CHECK(!check_proof(fwd).ok);
}

TEST_CASE("bad substitution is rejected") {
    Proof p;
    p.system = SystemId::from_name("T");
    p.lines.push_back({parse("K(p) -> p"), AxiomInstance{AxiomSchema::T, {{"phi", parse("q")}}}});
    ProofCheckResult r = check_proof(p);
    CHECK(!r.ok);
    CHECK(r.reason->find("substitution") != std::string::npos);
}

TEST_CASE("LC proofs are checked through the Cert translation") {
    Proof p;
    p.system = SystemId::from_name("KD45");
    p.language = Language::LC;
    p.lines.push_back({parse("Cert(p) -> Cert(Cert(p))"), AxiomInstance{AxiomSchema::Four, {}}});
    p.lines.push_back({parse("~Cert(false)"), AxiomInstance{AxiomSchema::D, {}}});
    CHECK(check_proof(p).ok);
    Proof bad = p;
    bad.lines.push_back({parse("K(p) -> p"), AxiomInstance{AxiomSchema::T, {}}});
    CHECK(!check_proof(bad).ok);
}

TEST_CASE("LK proof remains valid after translation to LC and back") {
    Proof p;
    p.system = SystemId::from_name("K");
    p.lines.push_back({parse("p -> (p | q)"), PropTaut{}});
    p.lines.push_back({parse("K(p -> (p | q))"), Necessitation{1}});
    Proof c = p;
    c.language = Language::LC;
    for (ProofLine& line : c.lines) line.formula = translate_K_to_C(line.formula);
    CHECK(check_proof(c).ok);
}

TEST_CASE("bundled corpus checks and conclusions are valid") {
    namespace fs = std::filesystem;
    int count = 0;
    for (const auto& entry : fs::directory_iterator(fs::path(DATA_DIR) / "proofs")) {
        if (entry.path().extension() != ".json") continue;
        INFO(entry.path().string());
        Proof p = load_proof(entry.path().string());
        ProofCheckResult r = check_proof(p);
        if (!r.ok) { MESSAGE(*r.line, ": ", *r.reason); }
        CHECK(r.ok);
        REQUIRE(!p.lines.empty());
        FormulaPtr conclusion = p.lines.back().formula;
        if (p.language == Language::LC) conclusion = translate_C_to_K(conclusion);
        CHECK(decide(conclusion, p.system).valid);
        ++count;
    }
    CHECK(count >= 10);
}

TEST_CASE("proof json round trip") {
    Proof p;
    p.system = SystemId::from_name("S5");
    p.lines.push_back({parse("K(p) -> p"), AxiomInstance{AxiomSchema::T, {{"phi", parse("p")}}}});
    p.lines.push_back({parse("K(K(p) -> p)"), Necessitation{1}});
    Proof back = proof_from_json(proof_to_json(p));
    CHECK(back.system == p.system);
    CHECK(back.lines.size() == 2);
    CHECK(check_proof(back).ok);
}
