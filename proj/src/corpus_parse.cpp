// Recursive-descent parser and printer for the corpus formula and proof syntax.

#include <cctype>
#include <charconv>
#include <unordered_map>

#include "pm/corpus.hpp"
#include "pm/error.hpp"

namespace pm {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)); }

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    bool eof() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (eof()) return;
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    bool accept(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) != tok) return false;
        for (std::size_t i = 0; i < tok.size(); ++i) advance();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) {
            if (eof()) fail("expected '" + std::string(tok) + "' but reached end of input");
            fail("expected '" + std::string(tok) + "' but found '" + std::string(1, peek()) + "'");
        }
    }

    std::string identifier() {
        skip_ws();
        if (!is_ident_start(peek())) {
            if (eof()) fail("expected identifier but reached end of input");
            fail("expected identifier but found '" + std::string(1, peek()) + "'");
        }
        std::size_t start = pos_;
        while (!eof() && is_ident_char(peek())) advance();
        return std::string(text_.substr(start, pos_ - start));
    }

    std::uint64_t number() {
        skip_ws();
        std::size_t start = pos_;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
        if (start == pos_) fail("expected number");
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc()) fail("number out of range");
        return value;
    }

    // Maximal run of non-space characters excluding `]`.
    std::string word() {
        std::size_t start = pos_;
        while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ']') advance();
        return std::string(text_.substr(start, pos_ - start));
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return col_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class FormulaParser {
public:
    explicit FormulaParser(Cursor& cur) : cur_(cur) {}

    Formula formula() {
        cur_.skip_ws();
        if (cur_.accept("~")) return Formula::negation(formula());
        if (cur_.accept("(")) {
            Formula lhs = formula();
            Connective c = connective();
            Formula rhs = formula();
            cur_.expect(")");
            return Formula::binary(c, std::move(lhs), std::move(rhs));
        }
        if (cur_.peek() == '!' || cur_.peek() == '?') {
            Quantifier q = cur_.peek() == '!' ? Quantifier::Forall : Quantifier::Exists;
            cur_.advance();
            cur_.expect("[");
            std::vector<std::string> vars;
            do {
                vars.push_back(variable());
            } while (cur_.accept(","));
            cur_.expect("]");
            cur_.expect(":");
            Formula body = formula();
            for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::quant(q, *it, std::move(body));
            return body;
        }
        std::size_t line = cur_.line(), col = cur_.column();
        std::string name = cur_.identifier();
        if (is_upper(name[0])) throw ParseError("expected predicate, found variable '" + name + "'", line, col);
        std::vector<Term> args = arguments();
        note_arity(name, args.size(), line, col);
        return Formula::pred(std::move(name), std::move(args));
    }

    Term term() {
        cur_.skip_ws();
        std::size_t line = cur_.line(), col = cur_.column();
        std::string name = cur_.identifier();
        if (is_upper(name[0])) return Term::var(std::move(name));
        std::vector<Term> args = arguments();
        note_arity(name, args.size(), line, col);
        return Term::app(std::move(name), std::move(args));
    }

private:
    std::vector<Term> arguments() {
        std::vector<Term> args;
        if (cur_.peek() != '(') return args;
        cur_.advance();
        do {
            args.push_back(term());
        } while (cur_.accept(","));
        cur_.expect(")");
        return args;
    }

    std::string variable() {
        std::size_t line = cur_.line(), col = cur_.column();
        std::string v = cur_.identifier();
        if (!is_upper(v[0])) throw ParseError("quantified variable must be capitalized: '" + v + "'", line, col);
        return v;
    }

    Connective connective() {
        if (cur_.accept("&")) return Connective::And;
        if (cur_.accept("|")) return Connective::Or;
        if (cur_.accept("=>")) return Connective::Implies;
        if (cur_.accept("<=>")) return Connective::Iff;
        cur_.skip_ws();
        if (cur_.eof()) cur_.fail("expected connective but reached end of input");
        cur_.fail("expected connective");
    }

    void note_arity(const std::string& name, std::size_t arity, std::size_t line, std::size_t col) {
        auto [it, inserted] = arity_.emplace(name, arity);
        if (!inserted && it->second != arity) {
            throw Error(ErrorKind::Arity, std::to_string(line) + ":" + std::to_string(col) + ": '" + name +
                                              "' used with arity " + std::to_string(arity) +
                                              " and " + std::to_string(it->second));
        }
    }

    Cursor& cur_;
    std::unordered_map<std::string, std::size_t> arity_;
};

std::string lemma_name(Cursor& cur) {
    cur.skip_ws();
    std::size_t line = cur.line(), col = cur.column();
    std::string name = cur.identifier();
    if (is_upper(name[0])) throw ParseError("lemma names must not be capitalized: '" + name + "'", line, col);
    return name;
}

// After the `lemma` keyword.
Statement statement_body(Cursor& cur) {
    Statement s;
    s.name = lemma_name(cur);
    cur.expect(":");
    FormulaParser fp(cur);
    s.formula = fp.formula();
    cur.expect(".");
    return s;
}

ProofStep step_after_tactic(Cursor& cur, std::string tactic) {
    ProofStep step;
    step.tactic = std::move(tactic);
    FormulaParser fp(cur);
    for (;;) {
        cur.skip_ws();
        char c = cur.peek();
        if (c == '[') break;
        if (cur.eof()) cur.fail("expected '[goal:SYM subgoals:N]' but reached end of input");
        if (std::isdigit(static_cast<unsigned char>(c))) {
            step.args.emplace_back(NumArg{cur.number()});
        } else if (c == '(') {
            cur.advance();
            step.args.emplace_back(fp.term());
            cur.expect(")");
        } else if (is_ident_start(c)) {
            if (is_upper(c)) {
                step.args.emplace_back(fp.term());
            } else {
                // Peek past the identifier: `name(` is a term, a bare name is a lemma reference.
                Cursor probe = cur;
                probe.identifier();
                if (probe.peek() == '(') {
                    step.args.emplace_back(fp.term());
                } else {
                    step.args.emplace_back(LemmaRef{cur.identifier()});
                }
            }
        } else {
            cur.fail(std::string("unexpected character '") + c + "' in step arguments");
        }
    }
    cur.expect("[");
    cur.expect("goal:");
    step.goal_top_symbol = cur.word();
    if (step.goal_top_symbol.empty()) cur.fail("empty goal symbol");
    cur.expect("subgoals:");
    cur.skip_ws();
    if (cur.peek() == '-') {
        std::size_t line = cur.line(), col = cur.column();
        cur.advance();
        std::uint64_t n = cur.number();
        throw Error(ErrorKind::NegativeSubgoals, std::to_string(line) + ":" + std::to_string(col) +
                                                    ": subgoal count -" + std::to_string(n));
    }
    std::uint64_t n = cur.number();
    if (n > UINT32_MAX) cur.fail("subgoal count out of range");
    step.n_subgoals_after = static_cast<std::uint32_t>(n);
    cur.expect("]");
    cur.expect(".");
    return step;
}

std::string tactic_name(Cursor& cur) {
    cur.skip_ws();
    std::size_t line = cur.line(), col = cur.column();
    std::string t = cur.identifier();
    if (is_upper(t[0])) throw ParseError("tactic names must not be capitalized: '" + t + "'", line, col);
    return t;
}

}  // namespace

//------------------------------------------------------------------------------------------------

Formula parse_formula(std::string_view text) {
    Cursor cur(text);
    FormulaParser fp(cur);
    Formula f = fp.formula();
    cur.skip_ws();
    if (!cur.eof()) cur.fail("trailing input after formula");
    return f;
}

Statement parse_statement(std::string_view text) {
    Cursor cur(text);
    cur.skip_ws();
    std::string kw = cur.identifier();
    if (kw != "lemma") cur.fail("expected 'lemma'");
    Statement s = statement_body(cur);
    cur.skip_ws();
    if (!cur.eof()) cur.fail("trailing input after statement");
    return s;
}

ProofScript parse_proof(std::string_view text) {
    Cursor cur(text);
    ProofScript script;
    for (;;) {
        cur.skip_ws();
        if (cur.eof()) break;
        script.steps.push_back(step_after_tactic(cur, tactic_name(cur)));
    }
    return script;
}

std::vector<SourceItem> parse_source(std::string_view text) {
    Cursor cur(text);
    std::vector<SourceItem> items;
    for (;;) {
        cur.skip_ws();
        if (cur.eof()) break;
        std::string kw = cur.identifier();
        if (kw == "lemma") {
            Statement s = statement_body(cur);
            items.push_back({SourceItem::Kind::Statement, std::move(s.name), std::move(s.formula), std::nullopt});
        } else if (kw == "proof") {
            std::string name = lemma_name(cur);
            ProofScript script;
            for (;;) {
                cur.skip_ws();
                if (cur.eof()) cur.fail("proof of '" + name + "' not terminated by 'qed.'");
                std::string tactic = tactic_name(cur);
                if (tactic == "qed") {
                    cur.expect(".");
                    break;
                }
                script.steps.push_back(step_after_tactic(cur, std::move(tactic)));
            }
            items.push_back({SourceItem::Kind::Proof, std::move(name), std::nullopt, std::move(script)});
        } else {
            cur.fail("expected 'lemma' or 'proof', found '" + kw + "'");
        }
    }
    return items;
}

//------------------------------------------------------------------------------------------------
// Printing

namespace {

void print_term(std::string& out, const Term& t) {
    out += t.name;
    if (t.args.empty()) return;
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ',';
        print_term(out, t.args[i]);
    }
    out += ')';
}

std::string_view connective_token(Connective c) {
    switch (c) {
        case Connective::And: return "&";
        case Connective::Or: return "|";
        case Connective::Implies: return "=>";
        case Connective::Iff: return "<=>";
    }
    return "?";
}

void print_formula(std::string& out, const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Pred:
            out += f.name;
            if (!f.args.empty()) {
                out += '(';
                for (std::size_t i = 0; i < f.args.size(); ++i) {
                    if (i) out += ',';
                    print_term(out, f.args[i]);
                }
                out += ')';
            }
            break;
        case Formula::Kind::Not:
            out += '~';
            print_formula(out, f.children[0]);
            break;
        case Formula::Kind::Binary:
            out += '(';
            print_formula(out, f.children[0]);
            out += ' ';
            out += connective_token(f.connective);
            out += ' ';
            print_formula(out, f.children[1]);
            out += ')';
            break;
        case Formula::Kind::Quant:
            out += f.quantifier == Quantifier::Forall ? "![" : "?[";
            out += f.name;
            out += "]: ";
            print_formula(out, f.children[0]);
            break;
    }
}

}  // namespace

std::string to_string(const Term& t) {
    std::string out;
    print_term(out, t);
    return out;
}

std::string to_string(const Formula& f) {
    std::string out;
    print_formula(out, f);
    return out;
}

std::string to_string(const ProofStep& s) {
    std::string out = s.tactic;
    for (const Arg& a : s.args) {
        out += ' ';
        if (auto* ref = std::get_if<LemmaRef>(&a)) {
            out += ref->name;
        } else if (auto* num = std::get_if<NumArg>(&a)) {
            out += std::to_string(num->value);
        } else {
            const Term& t = std::get<Term>(a);
            // Constants are parenthesized so they do not read back as lemma references.
            bool bare_constant = !t.is_var() && t.args.empty();
            if (bare_constant) out += '(';
            print_term(out, t);
            if (bare_constant) out += ')';
        }
    }
    out += " [goal:" + s.goal_top_symbol + " subgoals:" + std::to_string(s.n_subgoals_after) + "].";
    return out;
}

std::string format_statement(const Statement& s) { return "lemma " + s.name + " : " + to_string(s.formula) + "."; }

std::string format_proof(std::string_view name, const ProofScript& p) {
    std::string out = "proof " + std::string(name) + "\n";
    for (const ProofStep& s : p.steps) out += "  " + to_string(s) + "\n";
    out += "qed.\n";
    return out;
}

}  // namespace pm
