#include "certlogic/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "certlogic/errors.hpp"

namespace certlogic {

// ---------------------------------------------------------------------------
// Constructors

FormulaPtr make_prop(std::string name) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Prop;
    f->prop = std::move(name);
    return f;
}

FormulaPtr make_true() {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::True;
    return f;
}

FormulaPtr make_false() {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::False;
    return f;
}

static FormulaPtr unary(Kind k, FormulaPtr child) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->lhs = std::move(child);
    return f;
}

static FormulaPtr binary(Kind k, FormulaPtr a, FormulaPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}

FormulaPtr make_not(FormulaPtr f) { return unary(Kind::Not, std::move(f)); }
FormulaPtr make_and(FormulaPtr a, FormulaPtr b) { return binary(Kind::And, std::move(a), std::move(b)); }
FormulaPtr make_or(FormulaPtr a, FormulaPtr b) { return binary(Kind::Or, std::move(a), std::move(b)); }
FormulaPtr make_implies(FormulaPtr a, FormulaPtr b) { return binary(Kind::Implies, std::move(a), std::move(b)); }

FormulaPtr make_know(AgentId agent, FormulaPtr f) {
    auto g = std::make_shared<Formula>();
    g->kind = Kind::Know;
    g->agent = agent;
    g->lhs = std::move(f);
    return g;
}

FormulaPtr make_weight(std::vector<WeightTerm> terms, WRel rel, Rational bound, Rational bound_hi) {
    if (terms.empty()) throw Error("weight atom requires at least one term");
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Weight;
    f->terms = std::move(terms);
    f->rel = rel;
    f->bound = std::move(bound);
    f->bound_hi = std::move(bound_hi);
    return f;
}

FormulaPtr make_cert(AgentId agent, FormulaPtr f) {
    std::vector<WeightTerm> pos{{make_rational(1), agent, f}};
    std::vector<WeightTerm> neg{{make_rational(-1), agent, f}};
    return make_and(make_weight(std::move(pos), WRel::Ge, make_rational(1)),
                    make_weight(std::move(neg), WRel::Ge, make_rational(-1)));
}

std::optional<std::pair<AgentId, FormulaPtr>> as_cert(const FormulaPtr& f) {
    if (!f || f->kind != Kind::And) return std::nullopt;
    const FormulaPtr& a = f->lhs;
    const FormulaPtr& b = f->rhs;
    if (a->kind != Kind::Weight || b->kind != Kind::Weight) return std::nullopt;
    if (a->rel != WRel::Ge || b->rel != WRel::Ge) return std::nullopt;
    if (a->terms.size() != 1 || b->terms.size() != 1) return std::nullopt;
    if (a->terms[0].coeff != 1 || a->bound != 1) return std::nullopt;
    if (b->terms[0].coeff != -1 || b->bound != -1) return std::nullopt;
    if (a->terms[0].agent != b->terms[0].agent) return std::nullopt;
    if (!equal(a->terms[0].arg, b->terms[0].arg)) return std::nullopt;
    return std::make_pair(a->terms[0].agent, a->terms[0].arg);
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::Prop: return a->prop == b->prop;
        case Kind::True:
        case Kind::False: return true;
        case Kind::Not: return equal(a->lhs, b->lhs);
        case Kind::And:
        case Kind::Or:
        case Kind::Implies: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
        case Kind::Know: return a->agent == b->agent && equal(a->lhs, b->lhs);
        case Kind::Weight: {
            if (a->rel != b->rel || a->bound != b->bound) return false;
            if (a->rel == WRel::In && a->bound_hi != b->bound_hi) return false;
            if (a->terms.size() != b->terms.size()) return false;
            for (size_t i = 0; i < a->terms.size(); ++i) {
                if (a->terms[i].coeff != b->terms[i].coeff) return false;
                if (a->terms[i].agent != b->terms[i].agent) return false;
                if (!equal(a->terms[i].arg, b->terms[i].arg)) return false;
            }
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Tokenizer

namespace {

enum class Tok {
    Ident, Int,
    Tilde, Amp, Bar, LParen, RParen, Arrow,
    Ge, Le, Eq, Lt, Gt,
    Plus, Minus, Star, Slash,
    LBracket, RBracket, Comma,
    End,
};

struct Token {
    Tok type;
    std::string text;
    int line;
    int col;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Tok t, std::string s) { out.push_back({t, std::move(s), line, col}); };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') { ++i; ++line; col = 1; continue; }
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; ++col; continue; }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            push(Tok::Ident, text.substr(i, j - i));
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            push(Tok::Int, text.substr(i, j - i));
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        auto two = text.substr(i, 2);
        if (two == "->") { push(Tok::Arrow, two); i += 2; col += 2; continue; }
        if (two == ">=") { push(Tok::Ge, two); i += 2; col += 2; continue; }
        if (two == "<=") { push(Tok::Le, two); i += 2; col += 2; continue; }
        switch (c) {
            case '~': push(Tok::Tilde, "~"); break;
            case '&': push(Tok::Amp, "&"); break;
            case '|': push(Tok::Bar, "|"); break;
            case '(': push(Tok::LParen, "("); break;
            case ')': push(Tok::RParen, ")"); break;
            case '=': push(Tok::Eq, "="); break;
            case '<': push(Tok::Lt, "<"); break;
            case '>': push(Tok::Gt, ">"); break;
            case '+': push(Tok::Plus, "+"); break;
            case '-': push(Tok::Minus, "-"); break;
            case '*': push(Tok::Star, "*"); break;
            case '/': push(Tok::Slash, "/"); break;
            case '[': push(Tok::LBracket, "["); break;
            case ']': push(Tok::RBracket, "]"); break;
            case ',': push(Tok::Comma, ","); break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        ++i;
        ++col;
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

// Splits an operator identifier like "K", "Cert_2" or "w_3" into (head, agent).
bool split_op(const std::string& ident, const std::string& head, AgentId& agent) {
    if (ident == head) { agent = 1; return true; }
    if (ident.size() > head.size() + 1 && ident.compare(0, head.size(), head) == 0 &&
        ident[head.size()] == '_') {
        const std::string idx = ident.substr(head.size() + 1);
        if (!idx.empty() && std::all_of(idx.begin(), idx.end(), [](char c) {
                return std::isdigit(static_cast<unsigned char>(c));
            })) {
            agent = std::stoi(idx);
            if (agent < 1) return false;
            return true;
        }
    }
    return false;
}

class Parser {
  public:
    explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

    FormulaPtr parse_all() {
        FormulaPtr f = formula();
        expect(Tok::End, "end of input");
        return f;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(size_t k = 1) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Token take() { return toks_[pos_++]; }
    bool at(Tok t) const { return cur().type == t; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " (got '" + (cur().type == Tok::End ? "<end>" : cur().text) + "')",
                         cur().line, cur().col);
    }
    void expect(Tok t, const std::string& what) {
        if (!at(t)) fail("expected " + what);
        ++pos_;
    }

    FormulaPtr formula() { return implies(); }

    FormulaPtr implies() {
        FormulaPtr a = disj();
        if (at(Tok::Arrow)) {
            take();
            return make_implies(a, implies());
        }
        return a;
    }

    FormulaPtr disj() {
        FormulaPtr a = conj();
        while (at(Tok::Bar)) {
            take();
            a = make_or(a, conj());
        }
        return a;
    }

    FormulaPtr conj() {
        FormulaPtr a = unary_f();
        while (at(Tok::Amp)) {
            take();
            a = make_and(a, unary_f());
        }
        return a;
    }

    FormulaPtr unary_f() {
        if (at(Tok::Tilde)) {
            take();
            return make_not(unary_f());
        }
        return primary();
    }

    bool weight_ahead() const {
        if (at(Tok::Int) || at(Tok::Minus)) return true;
        if (at(Tok::Ident)) {
            AgentId a;
            return split_op(cur().text, "w", a) && peek().type == Tok::LParen;
        }
        return false;
    }

    FormulaPtr primary() {
        if (at(Tok::LParen)) {
            take();
            FormulaPtr f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (weight_ahead()) return weight();
        if (at(Tok::Ident)) {
            const std::string& id = cur().text;
            AgentId agent;
            if (split_op(id, "K", agent) && peek().type == Tok::LParen) {
                take();
                take();  // '('
                FormulaPtr body = formula();
                expect(Tok::RParen, "')'");
                return make_know(agent, body);
            }
            if (split_op(id, "Cert", agent) && peek().type == Tok::LParen) {
                take();
                take();  // '('
                FormulaPtr body = formula();
                expect(Tok::RParen, "')'");
                return make_cert(agent, body);
            }
            if (id == "true") { take(); return make_true(); }
            if (id == "false") { take(); return make_false(); }
            return make_prop(take().text);
        }
        fail("expected formula");
    }

    // rat := '-'? int ('/' posint)?
    Rational rat() {
        bool neg = false;
        if (at(Tok::Minus)) { take(); neg = true; }
        if (!at(Tok::Int)) fail("expected number");
        Integer num(take().text);
        Integer den(1);
        if (at(Tok::Slash)) {
            take();
            if (!at(Tok::Int)) fail("expected denominator");
            den = Integer(take().text);
            if (den == 0) fail("zero denominator");
        }
        Rational q(neg ? Integer(-num) : num, den);
        q.canonicalize();
        return q;
    }

    // wterm := rat? '*'? 'w' idx? '(' formula ')'
    WeightTerm wterm(bool negate) {
        Rational coeff = make_rational(1);
        if (at(Tok::Int)) {
            Integer num(take().text);
            Integer den(1);
            if (at(Tok::Slash)) {
                take();
                if (!at(Tok::Int)) fail("expected denominator");
                den = Integer(take().text);
                if (den == 0) fail("zero denominator");
            }
            coeff = Rational(num, den);
            coeff.canonicalize();
            if (at(Tok::Star)) take();
        }
        if (negate) coeff = -coeff;
        AgentId agent;
        if (!at(Tok::Ident) || !split_op(cur().text, "w", agent)) fail("expected weight term 'w(...)'");
        take();
        expect(Tok::LParen, "'('");
        FormulaPtr arg = formula();
        expect(Tok::RParen, "')'");
        return {coeff, agent, arg};
    }

    FormulaPtr weight() {
        std::vector<WeightTerm> terms;
        bool neg = false;
        if (at(Tok::Minus)) { take(); neg = true; }
        terms.push_back(wterm(neg));
        // 'w(phi) in [a, b]'
        if (at(Tok::Ident) && cur().text == "in") {
            if (terms.size() != 1 || terms[0].coeff != 1)
                fail("'in' interval form requires a single unweighted term");
            take();
            expect(Tok::LBracket, "'['");
            Rational lo = rat();
            expect(Tok::Comma, "','");
            Rational hi = rat();
            expect(Tok::RBracket, "']'");
            return make_weight(std::move(terms), WRel::In, lo, hi);
        }
        while (at(Tok::Plus) || at(Tok::Minus)) {
            bool minus = take().type == Tok::Minus;
            terms.push_back(wterm(minus));
        }
        WRel rel;
        switch (cur().type) {
            case Tok::Ge: rel = WRel::Ge; break;
            case Tok::Le: rel = WRel::Le; break;
            case Tok::Eq: rel = WRel::Eq; break;
            case Tok::Lt: rel = WRel::Lt; break;
            case Tok::Gt: rel = WRel::Gt; break;
            default: fail("expected relation (>=, <=, =, <, >)");
        }
        take();
        Rational b = rat();
        return make_weight(std::move(terms), rel, b);
    }
};

}  // namespace

FormulaPtr parse(const std::string& text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

// Precedence levels: Implies 1 < Or 2 < And 3 < unary/atoms 4.
void render_rec(const FormulaPtr& f, int min_prec, std::ostringstream& out);

std::string idx_suffix(AgentId agent) {
    return agent == 1 ? std::string() : "_" + std::to_string(agent);
}

void render_weight(const FormulaPtr& f, std::ostringstream& out) {
    if (f->rel == WRel::In) {
        const WeightTerm& t = f->terms[0];
        out << "w" << idx_suffix(t.agent) << "(";
        render_rec(t.arg, 1, out);
        out << ") in [" << rational_to_string(f->bound) << ", "
            << rational_to_string(f->bound_hi) << "]";
        return;
    }
    for (size_t i = 0; i < f->terms.size(); ++i) {
        const WeightTerm& t = f->terms[i];
        Rational c = t.coeff;
        if (i == 0) {
            if (c < 0) { out << "-"; c = -c; }
        } else {
            out << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        if (c != 1) out << rational_to_string(c);
        out << "w" << idx_suffix(t.agent) << "(";
        render_rec(t.arg, 1, out);
        out << ")";
    }
    switch (f->rel) {
        case WRel::Ge: out << " >= "; break;
        case WRel::Le: out << " <= "; break;
        case WRel::Eq: out << " = "; break;
        case WRel::Lt: out << " < "; break;
        case WRel::Gt: out << " > "; break;
        case WRel::In: break;
    }
    out << rational_to_string(f->bound);
}

void render_rec(const FormulaPtr& f, int min_prec, std::ostringstream& out) {
    auto wrap = [&](int prec, auto body) {
        if (prec < min_prec) {
            out << "(";
            body();
            out << ")";
        } else {
            body();
        }
    };
    if (auto cert = as_cert(f)) {
        out << "Cert" << idx_suffix(cert->first) << "(";
        render_rec(cert->second, 1, out);
        out << ")";
        return;
    }
    switch (f->kind) {
        case Kind::Prop: out << f->prop; break;
        case Kind::True: out << "true"; break;
        case Kind::False: out << "false"; break;
        case Kind::Not:
            out << "~";
            render_rec(f->lhs, 4, out);
            break;
        case Kind::And:
            wrap(3, [&] {
                render_rec(f->lhs, 3, out);
                out << " & ";
                render_rec(f->rhs, 4, out);
            });
            break;
        case Kind::Or:
            wrap(2, [&] {
                render_rec(f->lhs, 2, out);
                out << " | ";
                render_rec(f->rhs, 3, out);
            });
            break;
        case Kind::Implies:
            wrap(1, [&] {
                render_rec(f->lhs, 2, out);
                out << " -> ";
                render_rec(f->rhs, 1, out);
            });
            break;
        case Kind::Know:
            out << "K" << idx_suffix(f->agent) << "(";
            render_rec(f->lhs, 1, out);
            out << ")";
            break;
        case Kind::Weight:
            wrap(4, [&] { render_weight(f, out); });
            break;
    }
}

}  // namespace

std::string render(const FormulaPtr& f) {
    std::ostringstream out;
    render_rec(f, 1, out);
    return out.str();
}

// ---------------------------------------------------------------------------
// Desugaring

namespace {

// Multiplies coefficients and bound by the LCM of their denominators,
// producing a canonical integer Ge atom.
FormulaPtr clear_ge(std::vector<WeightTerm> terms, Rational bound) {
    Integer lcm = bound.get_den();
    for (const WeightTerm& t : terms) {
        Integer den = t.coeff.get_den();
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    }
    Rational factor(lcm, 1);
    for (WeightTerm& t : terms) t.coeff *= factor;
    bound *= factor;
    return make_weight(std::move(terms), WRel::Ge, bound);
}

std::vector<WeightTerm> negate_terms(const std::vector<WeightTerm>& terms) {
    std::vector<WeightTerm> out = terms;
    for (WeightTerm& t : out) t.coeff = -t.coeff;
    return out;
}

}  // namespace

FormulaPtr desugar(const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::Prop:
        case Kind::True:
        case Kind::False: return f;
        case Kind::Not: return make_not(desugar(f->lhs));
        case Kind::And: return make_and(desugar(f->lhs), desugar(f->rhs));
        case Kind::Or:
            return make_not(make_and(make_not(desugar(f->lhs)), make_not(desugar(f->rhs))));
        case Kind::Implies:
            return make_not(make_and(desugar(f->lhs), make_not(desugar(f->rhs))));
        case Kind::Know: return make_know(f->agent, desugar(f->lhs));
        case Kind::Weight: {
            std::vector<WeightTerm> terms = f->terms;
            for (WeightTerm& t : terms) t.arg = desugar(t.arg);
            switch (f->rel) {
                case WRel::Ge: return clear_ge(std::move(terms), f->bound);
                case WRel::Le: return clear_ge(negate_terms(terms), -f->bound);
                case WRel::Eq:
                    return make_and(clear_ge(terms, f->bound),
                                    clear_ge(negate_terms(terms), -f->bound));
                case WRel::Lt: return make_not(clear_ge(std::move(terms), f->bound));
                case WRel::Gt: return make_not(clear_ge(negate_terms(terms), -f->bound));
                case WRel::In:
                    return make_and(clear_ge(terms, f->bound),
                                    clear_ge(negate_terms(terms), -f->bound_hi));
            }
        }
    }
    throw Error("unreachable formula kind");
}

bool is_canonical(const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::Prop:
        case Kind::True:
        case Kind::False: return true;
        case Kind::Not: return is_canonical(f->lhs);
        case Kind::And: return is_canonical(f->lhs) && is_canonical(f->rhs);
        case Kind::Or:
        case Kind::Implies: return false;
        case Kind::Know: return is_canonical(f->lhs);
        case Kind::Weight:
            if (f->rel != WRel::Ge || !is_integer(f->bound)) return false;
            for (const WeightTerm& t : f->terms)
                if (!is_integer(t.coeff) || !is_canonical(t.arg)) return false;
            return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Analysis

namespace {

struct ScanFlags {
    bool has_know = false;
    bool has_weight = false;
    bool has_bare_weight = false;  // weight atom outside a recognized Cert pair
};

void scan(const FormulaPtr& f, ScanFlags& flags) {
    if (auto cert = as_cert(f)) {
        flags.has_weight = true;
        scan(cert->second, flags);
        return;
    }
    switch (f->kind) {
        case Kind::Prop:
        case Kind::True:
        case Kind::False: return;
        case Kind::Not: scan(f->lhs, flags); return;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
            scan(f->lhs, flags);
            scan(f->rhs, flags);
            return;
        case Kind::Know:
            flags.has_know = true;
            scan(f->lhs, flags);
            return;
        case Kind::Weight:
            flags.has_weight = true;
            flags.has_bare_weight = true;
            for (const WeightTerm& t : f->terms) scan(t.arg, flags);
            return;
    }
}

}  // namespace

Language classify(const FormulaPtr& f) {
    ScanFlags flags;
    scan(f, flags);
    if (!flags.has_know && !flags.has_weight) return Language::Propositional;
    if (!flags.has_know && !flags.has_bare_weight) return Language::LC;
    if (!flags.has_weight) return Language::LK;
    if (!flags.has_know) return Language::LP;
    return Language::Mixed;
}

std::string language_name(Language lang) {
    switch (lang) {
        case Language::Propositional: return "propositional";
        case Language::LP: return "LP";
        case Language::LK: return "LK";
        case Language::LC: return "LC";
        case Language::Mixed: return "mixed";
    }
    return "?";
}

int modal_depth(const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::Prop:
        case Kind::True:
        case Kind::False: return 0;
        case Kind::Not: return modal_depth(f->lhs);
        case Kind::And:
        case Kind::Or:
        case Kind::Implies: return std::max(modal_depth(f->lhs), modal_depth(f->rhs));
        case Kind::Know: return 1 + modal_depth(f->lhs);
        case Kind::Weight: {
            int d = 0;
            for (const WeightTerm& t : f->terms) d = std::max(d, modal_depth(t.arg));
            return 1 + d;
        }
    }
    return 0;
}

namespace {

void collect(const FormulaPtr& f, std::vector<FormulaPtr>& out, std::set<std::string>& seen) {
    if (!seen.insert(render(f)).second) return;
    out.push_back(f);
    switch (f->kind) {
        case Kind::Prop:
        case Kind::True:
        case Kind::False: return;
        case Kind::Not:
        case Kind::Know: collect(f->lhs, out, seen); return;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
            collect(f->lhs, out, seen);
            collect(f->rhs, out, seen);
            return;
        case Kind::Weight:
            for (const WeightTerm& t : f->terms) collect(t.arg, out, seen);
            return;
    }
}

}  // namespace

std::vector<FormulaPtr> subformulas(const FormulaPtr& f) {
    std::vector<FormulaPtr> out;
    std::set<std::string> seen;
    collect(f, out, seen);
    return out;
}

}  // namespace certlogic
