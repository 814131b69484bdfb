#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "certlogic/certainty.hpp"
#include "certlogic/decision.hpp"
#include "certlogic/errors.hpp"
#include "certlogic/miller.hpp"
#include "certlogic/proofs.hpp"
#include "certlogic/rewrite.hpp"
#include "certlogic/semantics.hpp"

using namespace certlogic;
using nlohmann::json;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

void print_structure(const Structure& m, bool as_json) {
    if (as_json) {
        std::cout << structure_to_json(m).dump(2) << "\n";
        return;
    }
    std::cout << "states:\n";
    for (int s = 0; s < m.n_states(); ++s) {
        std::cout << "  " << m.states[s] << ":";
        for (size_t p = 0; p < m.props.size(); ++p)
            std::cout << " " << (m.assign[s][p] ? "" : "~") << m.props[p];
        std::cout << "\n";
    }
    if (m.kind == StructureKind::Knowledge) {
        for (int a = 1; a <= m.n_agents(); ++a) {
            std::cout << "K_" << a << ":";
            for (auto [s, t] : m.K[a - 1])
                std::cout << " (" << m.states[s] << "," << m.states[t] << ")";
            std::cout << "\n";
        }
    } else if (m.kind == StructureKind::Simple) {
        for (int a = 1; a <= m.n_agents(); ++a) {
            std::cout << "pr_" << a << ":";
            for (int s = 0; s < m.n_states(); ++s)
                std::cout << " " << m.states[s] << "=" << rational_to_string(m.pr[a - 1][s]);
            std::cout << "\n";
        }
    } else {
        for (int a = 1; a <= m.n_agents(); ++a)
            for (int s = 0; s < m.n_states(); ++s) {
                std::cout << "PR_" << a << "(" << m.states[s] << "):";
                for (int t = 0; t < m.n_states(); ++t)
                    std::cout << " " << m.states[t] << "="
                              << rational_to_string(m.PR[a - 1][s][t]);
                std::cout << "\n";
            }
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Epistemic / probabilistic-certainty logic toolkit"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "JSON output");

    std::string formula_text, model_path, state_id, sys_name = "S5", class_name = "N0";
    std::string frame_path, battery_path, proof_path, rule_name, position, to_lang;
    std::vector<std::string> props;
    int agent = 1, expert = 1, n_states = 2, max_den = 2;
    long long budget = 1'000'000, limit = 1'000'000;
    std::vector<std::string> interval{"0", "1"};
    std::vector<int> inst_agents{1, 1};
    std::string enum_kind = "knowledge";
    bool show_trace = false;

    auto* cparse = app.add_subcommand("parse", "Parse a formula and report its language");
    cparse->add_option("-f,--formula", formula_text)->required();

    auto* ceval = app.add_subcommand("eval", "Evaluate a formula at a state");
    ceval->add_option("-m,--model", model_path)->required();
    ceval->add_option("-s,--state", state_id)->required();
    ceval->add_option("-f,--formula", formula_text)->required();

    auto* cext = app.add_subcommand("extension", "States satisfying a formula");
    cext->add_option("-m,--model", model_path)->required();
    cext->add_option("-f,--formula", formula_text)->required();

    auto* cvalid = app.add_subcommand("valid", "Validity in one structure");
    cvalid->add_option("-m,--model", model_path)->required();
    cvalid->add_option("-f,--formula", formula_text)->required();

    auto* cdecide = app.add_subcommand("decide", "Validity over a system's structure class");
    cdecide->add_option("-f,--formula", formula_text)->required();
    cdecide->add_option("--sys", sys_name);
    cdecide->add_option("--budget", budget);

    auto* ccert = app.add_subcommand("decide-cert", "Validity over a certainty class");
    ccert->add_option("-f,--formula", formula_text)->required();
    ccert->add_option("--class", class_name);
    ccert->add_option("--sys", sys_name)->description("system for class NA");
    ccert->add_option("--budget", budget);

    auto* cbridge = app.add_subcommand("bridge", "S5 validity of phi vs KD45 validity of K(phi)");
    cbridge->add_option("-f,--formula", formula_text)->required();

    auto* ctrans = app.add_subcommand("translate", "Swap K and Cert");
    ctrans->add_option("-f,--formula", formula_text)->required();
    ctrans->add_option("--to", to_lang)->required()->check(CLI::IsMember({"C", "K"}));

    auto* cnorm = app.add_subcommand("normalize", "Depth-one KD45 normal form");
    cnorm->add_option("-f,--formula", formula_text)->required();
    cnorm->add_flag("--trace", show_trace);
    cnorm->add_option("--rule", rule_name)->description("apply one named rule instead");
    cnorm->add_option("--at", position)->description("position for --rule");

    auto* cframe = app.add_subcommand("frame-props", "Relation properties of a knowledge structure");
    cframe->add_option("-m,--model", model_path)->required();
    cframe->add_option("--agent", agent);

    auto* csupp = app.add_subcommand("support", "Support relation of a probability structure");
    csupp->add_option("-m,--model", model_path)->required();
    csupp->add_option("--agent", agent);

    auto* cfb = app.add_subcommand("fb", "False-belief states of a simple structure");
    cfb->add_option("-m,--model", model_path)->required();
    cfb->add_option("--agent", agent);

    auto* cmiller = app.add_subcommand("miller", "Miller's-principle tools");
    cmiller->require_subcommand(1);
    auto* minst = cmiller->add_subcommand("instance", "Denominator-cleared instance");
    minst->add_option("-f,--formula", formula_text)->required();
    minst->add_option("--interval", interval)->expected(2);
    minst->add_option("--agents", inst_agents)->expected(2);
    auto* mcheck = cmiller->add_subcommand("check-frame", "Uniformity vs battery validity");
    mcheck->add_option("-F,--frame", frame_path)->required();
    mcheck->add_option("--props", props)->required();
    mcheck->add_option("--battery", battery_path)->required();
    auto* msgood = cmiller->add_subcommand("sgood", "Expert's self-certain states");
    msgood->add_option("-m,--model", model_path)->required();
    msgood->add_option("--expert", expert);
    auto* mecc = cmiller->add_subcommand("ecc", "Equivalence class constraint");
    mecc->add_option("-m,--model", model_path)->required();
    mecc->add_option("--expert", expert);
    mecc->add_option("--agent", agent);

    auto* cprove = app.add_subcommand("prove-check", "Check a Hilbert-style proof file");
    cprove->add_option("-p,--proof", proof_path)->required();

    auto* cenum = app.add_subcommand("enumerate", "Enumerate bounded structures");
    cenum->add_option("--kind", enum_kind)
        ->check(CLI::IsMember({"knowledge", "simple", "generalized", "frames"}));
    cenum->add_option("-n,--states", n_states);
    cenum->add_option("--props", props);
    cenum->add_option("--max-den", max_den);
    cenum->add_option("--sys", sys_name);
    cenum->add_option("--limit", limit);

    // Let trailing global flags (e.g. --json after the verb) reach the app.
    auto enable_fallthrough = [](CLI::App* a, auto&& self) -> void {
        a->fallthrough();
        for (CLI::App* sc : a->get_subcommands([](const CLI::App*) { return true; }))
            self(sc, self);
    };
    enable_fallthrough(&app, enable_fallthrough);

    CLI11_PARSE(app, argc, argv);

    if (cparse->parsed()) {
        FormulaPtr f = parse(formula_text);
        Language lang = classify(desugar(f));
        if (as_json)
            std::cout << json{{"formula", render(f)},
                              {"canonical", render(desugar(f))},
                              {"language", language_name(lang)},
                              {"depth", modal_depth(desugar(f))}}
                             .dump(2)
                      << "\n";
        else
            std::cout << render(f) << "\n"
                      << "language: " << language_name(lang) << ", depth "
                      << modal_depth(desugar(f)) << "\n";
        return kExitTrue;
    }
    if (ceval->parsed()) {
        Structure m = load_structure(model_path);
        bool v = eval(m, state_id, parse(formula_text));
        std::cout << (v ? "true" : "false") << "\n";
        return v ? kExitTrue : kExitFalse;
    }
    if (cext->parsed()) {
        Structure m = load_structure(model_path);
        Extension e = extension(m, parse(formula_text));
        if (as_json)
            std::cout << json(e.member_ids(m)).dump() << "\n";
        else
            for (const std::string& s : e.member_ids(m)) std::cout << s << "\n";
        return kExitTrue;
    }
    if (cvalid->parsed()) {
        Structure m = load_structure(model_path);
        Validity v = valid_in_structure(m, parse(formula_text));
        if (v.valid)
            std::cout << "valid\n";
        else
            std::cout << "invalid at " << *v.witness << "\n";
        return v.valid ? kExitTrue : kExitFalse;
    }
    if (cdecide->parsed()) {
        DecisionResult r =
            decide(parse(formula_text), SystemId::from_name(sys_name), {budget});
        if (r.valid) {
            std::cout << "valid\n";
            return kExitTrue;
        }
        std::cout << "invalid at " << *r.counterstate << "\n";
        print_structure(*r.countermodel, as_json);
        return kExitFalse;
    }
    if (ccert->parsed()) {
        CertaintyDecisionResult r =
            decide_certainty(parse(formula_text), certainty_class_from_name(class_name),
                             SystemId::from_name(sys_name), {budget});
        if (r.valid) {
            std::cout << "valid\n";
            return kExitTrue;
        }
        std::cout << "invalid at " << *r.counterstate << "\n";
        print_structure(*r.countermodel, as_json);
        return kExitFalse;
    }
    if (cbridge->parsed()) {
        BridgeResult r = check_s5_kd45_bridge(parse(formula_text));
        std::cout << "S5 |- phi: " << (r.s5_valid ? "yes" : "no")
                  << ", KD45 |- K(phi): " << (r.kd45_k_valid ? "yes" : "no")
                  << ", agree: " << (r.agree ? "yes" : "no") << "\n";
        return r.agree ? kExitTrue : kExitFalse;
    }
    if (ctrans->parsed()) {
        FormulaPtr f = parse(formula_text);
        std::cout << render(to_lang == "C" ? translate_K_to_C(f) : translate_C_to_K(f)) << "\n";
        return kExitTrue;
    }
    if (cnorm->parsed()) {
        FormulaPtr f = parse(formula_text);
        if (!rule_name.empty()) {
            TraceEntry t;
            FormulaPtr out = apply_rule(f, rule_name, position, &t);
            std::cout << render(out) << "\n";
            return kExitTrue;
        }
        NormalizeResult r = normalize_depth_one(f);
        std::cout << render(r.formula) << "\n";
        if (show_trace)
            for (const TraceEntry& t : r.trace)
                std::cout << "  [" << t.rule << "] " << t.before << "  =>  " << t.after << "\n";
        return kExitTrue;
    }
    if (cframe->parsed()) {
        Structure m = load_structure(model_path);
        if (m.kind != StructureKind::Knowledge)
            throw ValidationError("frame-props requires a knowledge structure");
        m.check_agent(agent);
        FrameProperties p = frame_properties(m.K[agent - 1], m.n_states());
        if (as_json)
            std::cout << json{{"reflexive", p.reflexive}, {"transitive", p.transitive},
                              {"symmetric", p.symmetric}, {"euclidean", p.euclidean},
                              {"serial", p.serial}}
                             .dump()
                      << "\n";
        else
            std::cout << "reflexive: " << p.reflexive << "\ntransitive: " << p.transitive
                      << "\nsymmetric: " << p.symmetric << "\neuclidean: " << p.euclidean
                      << "\nserial: " << p.serial << "\n";
        return kExitTrue;
    }
    if (csupp->parsed()) {
        Structure m = load_structure(model_path);
        Relation rel = support_relation(m, agent);
        for (auto [s, t] : rel)
            std::cout << m.states[s] << " -> " << m.states[t] << "\n";
        return kExitTrue;
    }
    if (cfb->parsed()) {
        Structure m = load_structure(model_path);
        FalseBeliefReport r = false_belief_states(m, agent);
        if (as_json) {
            std::cout << fb_report_to_json(r).dump(2) << "\n";
        } else {
            std::cout << "FB = {";
            for (size_t i = 0; i < r.fb.size(); ++i) std::cout << (i ? ", " : "") << r.fb[i];
            std::cout << "}, measure " << rational_to_string(r.measure) << "\n";
            for (const auto& [s, w] : r.witnesses)
                std::cout << "  " << s << ": ~(" << render(w) << ") & Cert(...)\n";
        }
        return kExitTrue;
    }
    if (minst->parsed()) {
        Interval iv{parse_rational(interval[0]), parse_rational(interval[1])};
        MillerInstance mi =
            miller_instance(parse(formula_text), iv, inst_agents[0], inst_agents[1]);
        std::cout << render(mi.rendered) << "\n";
        return kExitTrue;
    }
    if (mcheck->parsed()) {
        Frame f = load_frame(frame_path);
        std::vector<MillerInstance> battery = load_battery(battery_path);
        MillerFrameReport r = check_miller_theorem(f, battery, props);
        std::cout << "uniform: " << (r.uniform ? "yes" : "no")
                  << ", battery valid: " << (r.all_valid ? "yes" : "no") << "\n";
        if (r.counterexample) {
            std::cout << "counterexample at " << r.counterexample->state << ": "
                      << render(r.counterexample->instance.rendered) << "\n";
            print_structure(r.counterexample->structure, as_json);
        }
        return r.all_valid ? kExitTrue : kExitFalse;
    }
    if (msgood->parsed()) {
        Structure m = load_structure(model_path);
        for (const std::string& s : s_good(m, expert)) std::cout << s << "\n";
        return kExitTrue;
    }
    if (mecc->parsed()) {
        Structure m = load_structure(model_path);
        bool ok = equivalence_class_constraint(m, expert, agent);
        std::cout << (ok ? "true" : "false") << "\n";
        return ok ? kExitTrue : kExitFalse;
    }
    if (cprove->parsed()) {
        Proof p = load_proof(proof_path);
        ProofCheckResult r = check_proof(p);
        if (r.ok) {
            std::cout << "ok (" << p.lines.size() << " lines, system " << p.system.name()
                      << ")\n";
            return kExitTrue;
        }
        std::cout << "error at line " << *r.line << ": " << *r.reason << "\n";
        return kExitFalse;
    }
    if (cenum->parsed()) {
        long long count = 0;
        auto emit = [&](const Structure& m) {
            ++count;
            if (as_json) std::cout << structure_to_json(m).dump() << "\n";
            return true;
        };
        if (enum_kind == "knowledge") {
            FrameProperties req = SystemId::from_name(sys_name).frame_constraints();
            enumerate_knowledge_structures(n_states, props, req, limit, emit);
        } else if (enum_kind == "simple") {
            enumerate_simple_structures(n_states, props, max_den, false, emit);
        } else if (enum_kind == "generalized") {
            enumerate_generalized_structures(n_states, props, max_den, emit);
        } else {
            enumerate_frames(n_states, max_den, [&](const Frame& f) {
                ++count;
                if (as_json) std::cout << frame_to_json(f).dump() << "\n";
                return true;
            });
        }
        std::cout << count << "\n";
        return kExitTrue;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
