#pragma once

#include <optional>
#include <string>

#include "certlogic/formula.hpp"
#include "certlogic/semantics.hpp"
#include "certlogic/structures.hpp"

namespace certlogic {

// A normal modal system: P, K, R1, R2 plus a subset of {T, 4, 5, D}.
struct SystemId {
    bool t = false;
    bool four = false;
    bool five = false;
    bool d = false;

    bool operator==(const SystemId&) const = default;

    // Accepts K, T/KT, D/KD, K4, S4/KT4, K45, KD45, S5/KT45.
    static SystemId from_name(const std::string& name);
    std::string name() const;

    // T -> reflexive, 4 -> transitive, 5 -> euclidean, D -> serial.
    FrameProperties frame_constraints() const;
};

struct DecisionOptions {
    long long node_budget = 1'000'000;
};

struct DecisionResult {
    bool valid = false;
    // Knowledge-structure countermodel, frame-checked and re-validated with
    // the model checker before being returned.
    std::optional<Structure> countermodel;
    std::optional<std::string> counterstate;
    long long nodes = 0;
};

// Validity of an L^K (or propositional) formula over the class of knowledge
// structures corresponding to `sys`, by labeled tableau. Throws
// ResourceLimitError when the node budget is exhausted (never a wrong
// verdict), and LanguageError on non-L^K input. Systems containing axiom 5
// support single-agent formulas only.
DecisionResult decide(const FormulaPtr& phi, const SystemId& sys, const DecisionOptions& opts = {});

enum class CertaintyClass { N0, N1, NUnif, NA };

CertaintyClass certainty_class_from_name(const std::string& name);
std::string certainty_class_name(CertaintyClass cls);

struct CertaintyDecisionResult {
    bool valid = false;
    // Probability-structure countermodel realizing the knowledge
    // countermodel (uniform distribution over each successor set).
    std::optional<Structure> countermodel;
    std::optional<std::string> counterstate;
    long long nodes = 0;
};

// Validity of an L^C formula over a class of probability structures, by the
// support-relation reduction: N0 and NUnif decide via KD45, N1 via S5, NA
// via the given system (which must contain T or D).
CertaintyDecisionResult decide_certainty(const FormulaPtr& phi, CertaintyClass cls,
                                         const SystemId& sys_for_na = {},
                                         const DecisionOptions& opts = {});

struct BridgeResult {
    bool s5_valid = false;
    bool kd45_k_valid = false;
    bool agree = false;
};

// phi is S5-valid iff K(phi) is KD45-valid; computes both sides.
BridgeResult check_s5_kd45_bridge(const FormulaPtr& phi, const DecisionOptions& opts = {});

struct CertTranslationResult {
    bool s5_provable = false;
    bool n0_certain = false;
    bool agree = false;
};

// phi is S5-valid iff Cert(phi^C) is N0-valid; computes both sides.
CertTranslationResult cert_of_translation(const FormulaPtr& phi, const DecisionOptions& opts = {});

// Occurrence-wise replacement of K by Cert and back; mutually inverse.
FormulaPtr translate_K_to_C(const FormulaPtr& phi);
FormulaPtr translate_C_to_K(const FormulaPtr& phi);

}  // namespace certlogic
