#include "pm/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pm/error.hpp"
#include "pm/hash.hpp"
#include "pm/log.hpp"

namespace pm {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::Arity: return "ArityError";
        case ErrorKind::DuplicateLemma: return "DuplicateLemma";
        case ErrorKind::NegativeSubgoals: return "NegativeSubgoals";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::EmptyTrainingSet: return "EmptyTrainingSet";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::EmptyModel: return "EmptyModel";
        case ErrorKind::UnknownSymbol: return "UnknownSymbol";
        case ErrorKind::EmptyDataset: return "EmptyDataset";
        case ErrorKind::BadGranularity: return "BadGranularity";
        case ErrorKind::BadK: return "BadK";
        case ErrorKind::DegenerateData: return "DegenerateData";
        case ErrorKind::BadModel: return "BadModel";
        case ErrorKind::Io: return "IoError";
        case ErrorKind::Version: return "VersionError";
        case ErrorKind::CorruptModel: return "CorruptModel";
        case ErrorKind::Invariant: return "InvariantViolation";
        case ErrorKind::BadArgument: return "BadArgument";
    }
    return "Error";
}

bool Term::is_ground() const {
    if (is_var()) return false;
    return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
}

std::size_t Term::depth() const {
    if (is_var()) return 0;
    std::size_t d = 0;
    for (const Term& a : args) d = std::max(d, a.depth());
    return d + 1;
}

Formula Formula::pred(std::string name, std::vector<Term> args) {
    Formula f;
    f.kind = Kind::Pred;
    f.name = std::move(name);
    f.args = std::move(args);
    return f;
}

Formula Formula::negation(Formula body) {
    Formula f;
    f.kind = Kind::Not;
    f.children.push_back(std::move(body));
    return f;
}

Formula Formula::binary(Connective c, Formula lhs, Formula rhs) {
    Formula f;
    f.kind = Kind::Binary;
    f.connective = c;
    f.children.push_back(std::move(lhs));
    f.children.push_back(std::move(rhs));
    return f;
}

Formula Formula::quant(Quantifier q, std::string var, Formula body) {
    Formula f;
    f.kind = Kind::Quant;
    f.quantifier = q;
    f.name = std::move(var);
    f.children.push_back(std::move(body));
    return f;
}

std::string_view arg_type_name(const Arg& arg) {
    switch (arg.index()) {
        case 0: return "LemmaRef";
        case 1: return "TermArg";
        default: return "NumArg";
    }
}

//------------------------------------------------------------------------------------------------

std::uint32_t SymbolTable::intern(std::string_view name) {
    std::string key(name);
    auto it = codes_.find(key);
    if (it != codes_.end()) return it->second;
    auto code = static_cast<std::uint32_t>(names_.size() + 1);
    codes_.emplace(key, code);
    names_.push_back(std::move(key));
    return code;
}

std::optional<std::uint32_t> SymbolTable::code(std::string_view name) const {
    auto it = codes_.find(std::string(name));
    if (it == codes_.end()) return std::nullopt;
    return it->second;
}

const std::string& SymbolTable::name(std::uint32_t code) const {
    if (code == 0 || code > names_.size()) throw Error(ErrorKind::UnknownSymbol, "code " + std::to_string(code));
    return names_[code - 1];
}

//------------------------------------------------------------------------------------------------

namespace {

using ArityMap = std::unordered_map<std::string, std::size_t>;

void check_arity(ArityMap& arity, const std::string& name, std::size_t n, std::string_view where) {
    auto [it, inserted] = arity.emplace(name, n);
    if (!inserted && it->second != n) {
        throw Error(ErrorKind::Arity, std::string(where) + ": '" + name + "' used with arity " + std::to_string(n) +
                                          " and " + std::to_string(it->second));
    }
}

void term_arities(ArityMap& arity, const Term& t, std::string_view where) {
    if (t.is_var()) return;
    check_arity(arity, t.name, t.args.size(), where);
    for (const Term& a : t.args) term_arities(arity, a, where);
}

void formula_arities(ArityMap& arity, const Formula& f, std::string_view where) {
    if (f.kind == Formula::Kind::Pred) {
        check_arity(arity, f.name, f.args.size(), where);
        for (const Term& a : f.args) term_arities(arity, a, where);
    }
    for (const Formula& c : f.children) formula_arities(arity, c, where);
}

void intern_term(SymbolTable& table, const Term& t) {
    if (t.is_var()) return;
    table.intern(t.name);
    for (const Term& a : t.args) intern_term(table, a);
}

void intern_formula(SymbolTable& table, const Formula& f) {
    if (f.kind == Formula::Kind::Pred) {
        table.intern(f.name);
        for (const Term& a : f.args) intern_term(table, a);
    }
    for (const Formula& c : f.children) intern_formula(table, c);
}

}  // namespace

Corpus Corpus::assemble(std::vector<Lemma> lemmas, SymbolTable symbols, SymbolTable tactics, SymbolTable argtypes,
                        DependencyMap deps) {
    Corpus c;
    c.lemmas_ = std::move(lemmas);
    c.symbols_ = std::move(symbols);
    c.tactics_ = std::move(tactics);
    c.argtypes_ = std::move(argtypes);
    c.deps_ = std::move(deps);

    ArityMap arity;
    for (std::size_t i = 0; i < c.lemmas_.size(); ++i) {
        const Lemma& l = c.lemmas_[i];
        if (!c.by_name_.emplace(l.name, i).second) throw Error(ErrorKind::DuplicateLemma, l.name);
        formula_arities(arity, l.statement, l.name);
        if (!l.proof) continue;
        for (const ProofStep& s : l.proof->steps) {
            for (const Arg& a : s.args)
                if (auto* t = std::get_if<Term>(&a)) term_arities(arity, *t, l.name);
        }
    }
    for (const Lemma& l : c.lemmas_) c.deps_[l.name];  // every lemma has an entry
    for (const auto& [name, ds] : c.deps_) {
        if (!c.by_name_.count(name)) throw Error(ErrorKind::Invariant, "dependency entry for unknown lemma " + name);
        for (const std::string& d : ds) {
            if (d == name) throw Error(ErrorKind::Invariant, "lemma " + name + " depends on itself");
            if (!c.by_name_.count(d)) throw Error(ErrorKind::Invariant, name + " depends on unknown lemma " + d);
        }
    }
    return c;
}

const Lemma* Corpus::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &lemmas_[it->second];
}

const std::set<std::string>& Corpus::deps_of(std::string_view name) const {
    static const std::set<std::string> none;
    auto it = deps_.find(std::string(name));
    return it == deps_.end() ? none : it->second;
}

std::size_t Corpus::proved_count() const {
    return static_cast<std::size_t>(
        std::count_if(lemmas_.begin(), lemmas_.end(), [](const Lemma& l) { return l.is_proved(); }));
}

Corpus Corpus::without(std::string_view name) const {
    std::vector<Lemma> kept;
    kept.reserve(lemmas_.size());
    for (const Lemma& l : lemmas_)
        if (l.name != name) kept.push_back(l);
    DependencyMap deps;
    for (const auto& [n, ds] : deps_) {
        if (n == name) continue;
        auto& out = deps[n];
        for (const std::string& d : ds)
            if (d != name) out.insert(d);
    }
    return assemble(std::move(kept), symbols_, tactics_, argtypes_, std::move(deps));
}

//------------------------------------------------------------------------------------------------

std::set<std::string> extract_dependencies(const ProofScript& proof, const std::set<std::string>& known_lemmas,
                                           std::string_view proving, std::vector<std::string>* unresolved) {
    std::set<std::string> out;
    for (const ProofStep& s : proof.steps) {
        for (const Arg& a : s.args) {
            auto* ref = std::get_if<LemmaRef>(&a);
            if (ref == nullptr || ref->name == proving) continue;
            if (known_lemmas.count(ref->name)) {
                out.insert(ref->name);
            } else {
                log().warn("unknown lemma '{}' referenced{}{}; dropped", ref->name,
                           proving.empty() ? "" : " in proof of ", proving);
                if (unresolved) unresolved->push_back(ref->name);
            }
        }
    }
    return out;
}

Corpus ingest_sources(const std::vector<SourceFile>& files) {
    std::vector<Lemma> lemmas;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::pair<std::string, std::string>> proof_order;  // (lemma, file)
    std::unordered_map<std::string, ProofScript> proofs;

    for (const SourceFile& file : files) {
        std::vector<SourceItem> items;
        try {
            items = parse_source(file.text);
        } catch (const ParseError& e) {
            throw FileParseError(file.name, e);
        } catch (const Error& e) {
            throw Error(e.kind(), file.name + ": " + e.detail());
        }
        for (SourceItem& item : items) {
            if (item.kind == SourceItem::Kind::Statement) {
                if (index.count(item.name))
                    throw Error(ErrorKind::DuplicateLemma, file.name + ": lemma '" + item.name + "' defined twice");
                index.emplace(item.name, lemmas.size());
                lemmas.push_back(Lemma{item.name, std::move(*item.formula), std::nullopt});
            } else {
                if (proofs.count(item.name))
                    throw Error(ErrorKind::DuplicateLemma, file.name + ": second proof of '" + item.name + "'");
                proof_order.emplace_back(item.name, file.name);
                proofs.emplace(item.name, std::move(*item.proof));
            }
        }
    }

    for (const auto& [name, file] : proof_order) {
        auto it = index.find(name);
        if (it == index.end()) throw Error(ErrorKind::Parse, file + ": proof of undeclared lemma '" + name + "'");
        lemmas[it->second].proof = std::move(proofs.at(name));
    }

    // Statement symbols first, in file order; then everything proofs mention, in proof order.
    SymbolTable symbols, tactics, argtypes;
    for (const Lemma& l : lemmas) intern_formula(symbols, l.statement);
    for (const auto& [name, file] : proof_order) {
        for (const ProofStep& s : lemmas[index.at(name)].proof->steps) {
            tactics.intern(s.tactic);
            symbols.intern(s.goal_top_symbol);
            for (const Arg& a : s.args) {
                argtypes.intern(arg_type_name(a));
                if (auto* ref = std::get_if<LemmaRef>(&a)) symbols.intern(ref->name);
                if (auto* t = std::get_if<Term>(&a)) intern_term(symbols, *t);
            }
        }
    }

    std::set<std::string> known;
    for (const Lemma& l : lemmas) known.insert(l.name);
    DependencyMap deps;
    for (const Lemma& l : lemmas) {
        deps[l.name] = l.proof ? extract_dependencies(*l.proof, known, l.name) : std::set<std::string>{};
    }
    return Corpus::assemble(std::move(lemmas), std::move(symbols), std::move(tactics), std::move(argtypes),
                            std::move(deps));
}

Corpus ingest(const std::vector<std::filesystem::path>& paths) {
    std::vector<SourceFile> files;
    files.reserve(paths.size());
    for (const auto& p : paths) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw Error(ErrorKind::Io, "cannot read " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        files.push_back({p.string(), ss.str()});
    }
    return ingest_sources(files);
}

std::uint64_t content_hash(const Corpus& corpus) {
    Fnv1a h;
    for (const Lemma& l : corpus.lemmas()) {
        h.update(format_statement({l.name, l.statement}));
        h.update("\n");
        if (l.proof) h.update(format_proof(l.name, *l.proof));
    }
    return h.digest();
}

}  // namespace pm
