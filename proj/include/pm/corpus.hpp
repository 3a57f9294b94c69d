#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace pm {

//------------------------------------------------------------------------------------------------
// Terms and formulas

struct Term {
    enum class Kind { Var, App };

    Kind kind = Kind::App;
    std::string name;
    std::vector<Term> args;  // empty for variables and constants

    static Term var(std::string name) { return Term{Kind::Var, std::move(name), {}}; }
    static Term app(std::string functor, std::vector<Term> args = {}) {
        return Term{Kind::App, std::move(functor), std::move(args)};
    }

    bool is_var() const { return kind == Kind::Var; }
    bool is_ground() const;
    // Constants have depth 1, variables depth 0.
    std::size_t depth() const;

    bool operator==(const Term&) const = default;
};

enum class Connective { And, Or, Implies, Iff };
enum class Quantifier { Forall, Exists };

struct Formula {
    enum class Kind { Pred, Not, Binary, Quant };

    Kind kind = Kind::Pred;
    Connective connective = Connective::And;    // Binary only
    Quantifier quantifier = Quantifier::Forall;  // Quant only
    std::string name;                            // predicate name, or the bound variable
    std::vector<Term> args;                      // Pred only
    std::vector<Formula> children;               // Not: 1, Binary: 2, Quant: 1

    static Formula pred(std::string name, std::vector<Term> args = {});
    static Formula negation(Formula body);
    static Formula binary(Connective c, Formula lhs, Formula rhs);
    static Formula quant(Quantifier q, std::string var, Formula body);

    bool operator==(const Formula&) const = default;
};

struct Statement {
    std::string name;
    Formula formula;
};

//------------------------------------------------------------------------------------------------
// Proof scripts

struct LemmaRef {
    std::string name;
    bool operator==(const LemmaRef&) const = default;
};

struct NumArg {
    std::uint64_t value = 0;
    bool operator==(const NumArg&) const = default;
};

using Arg = std::variant<LemmaRef, Term, NumArg>;

// Names used for the argument-type dictionary.
std::string_view arg_type_name(const Arg& arg);

struct ProofStep {
    std::string tactic;
    std::vector<Arg> args;
    std::uint32_t n_subgoals_after = 0;
    std::string goal_top_symbol;

    bool operator==(const ProofStep&) const = default;
};

struct ProofScript {
    std::vector<ProofStep> steps;
    bool operator==(const ProofScript&) const = default;
};

struct Lemma {
    std::string name;
    Formula statement;
    std::optional<ProofScript> proof;  // absent for goals

    bool is_proved() const { return proof.has_value(); }
};

//------------------------------------------------------------------------------------------------
// Parsing and printing

Formula parse_formula(std::string_view text);
// `lemma NAME : FORMULA.`
Statement parse_statement(std::string_view text);
// Whitespace-separated steps, each terminated by `.`.
ProofScript parse_proof(std::string_view text);

// One top-level item of a corpus file.
struct SourceItem {
    enum class Kind { Statement, Proof };
    Kind kind;
    std::string name;
    std::optional<Formula> formula;
    std::optional<ProofScript> proof;
};

// Parses a whole corpus file: any mix of `lemma` lines and `proof NAME ... qed.` blocks.
std::vector<SourceItem> parse_source(std::string_view text);

std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string to_string(const ProofStep& s);
std::string format_statement(const Statement& s);
std::string format_proof(std::string_view name, const ProofScript& p);

//------------------------------------------------------------------------------------------------
// Corpus

// Injective name -> code map. Codes start at 1; 0 is reserved for "absent".
class SymbolTable {
public:
    std::uint32_t intern(std::string_view name);
    std::optional<std::uint32_t> code(std::string_view name) const;
    const std::string& name(std::uint32_t code) const;
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const SymbolTable& o) const { return names_ == o.names_; }

private:
    std::unordered_map<std::string, std::uint32_t> codes_;
    std::vector<std::string> names_;
};

using DependencyMap = std::map<std::string, std::set<std::string>>;

// Immutable once built; share by const reference.
class Corpus {
public:
    Corpus() = default;

    // Validates names, arities and dependency invariants.
    static Corpus assemble(std::vector<Lemma> lemmas, SymbolTable symbols, SymbolTable tactics,
                           SymbolTable argtypes, DependencyMap deps);

    const std::vector<Lemma>& lemmas() const { return lemmas_; }
    const SymbolTable& symbols() const { return symbols_; }
    const SymbolTable& tactics() const { return tactics_; }
    const SymbolTable& argtypes() const { return argtypes_; }
    const DependencyMap& deps() const { return deps_; }

    const Lemma* find(std::string_view name) const;
    const std::set<std::string>& deps_of(std::string_view name) const;
    std::size_t proved_count() const;
    std::size_t size() const { return lemmas_.size(); }

    // Same corpus with one lemma removed, including every reference to it in deps.
    // Dictionaries are kept as they are.
    Corpus without(std::string_view name) const;

private:
    std::vector<Lemma> lemmas_;
    std::unordered_map<std::string, std::size_t> by_name_;
    SymbolTable symbols_;
    SymbolTable tactics_;
    SymbolTable argtypes_;
    DependencyMap deps_;
};

struct SourceFile {
    std::string name;
    std::string text;
};

Corpus ingest(const std::vector<std::filesystem::path>& paths);
Corpus ingest_sources(const std::vector<SourceFile>& files);

// LemmaRef arguments of all steps that name a known lemma other than `proving`. Unknown
// references are logged and, when `unresolved` is given, reported through it.
std::set<std::string> extract_dependencies(const ProofScript& proof,
                                           const std::set<std::string>& known_lemmas,
                                           std::string_view proving = {},
                                           std::vector<std::string>* unresolved = nullptr);

// Stable 64-bit FNV-1a digest of the canonical corpus text.
std::uint64_t content_hash(const Corpus& corpus);

}  // namespace pm
