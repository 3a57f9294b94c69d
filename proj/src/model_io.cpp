#include "pm/model_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pm/error.hpp"
#include "pm/hash.hpp"
#include "pm/log.hpp"

namespace pm {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

std::uint64_t parse_hex64(const std::string& s) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &used, 16);
    } catch (const std::exception&) {
        throw Error(ErrorKind::CorruptModel, "bad hex digest '" + s + "'");
    }
    if (used != s.size()) throw Error(ErrorKind::CorruptModel, "bad hex digest '" + s + "'");
    return v;
}

json provenance_json(const Provenance& p) {
    return json{{"corpus_hash", hex64(p.corpus_hash)}, {"params", p.params}, {"seed", p.seed}};
}

Provenance provenance_from(const json& j) {
    Provenance p;
    p.corpus_hash = parse_hex64(j.at("corpus_hash").get<std::string>());
    p.params = j.at("params");
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

std::uint64_t checksum_of(const json& provenance, const json& payload) {
    return fnv1a(json{{"payload", payload}, {"provenance", provenance}}.dump());
}

std::string make_document(std::string_view kind, const Provenance& provenance, const json& payload) {
    json prov = provenance_json(provenance);
    json doc{{"format_version", kFormatVersion},
             {"kind", kind},
             {"provenance", prov},
             {"payload", payload},
             {"checksum", hex64(checksum_of(prov, payload))}};
    return doc.dump(1) + "\n";
}

struct Document {
    Provenance provenance;
    json payload;
};

Document open_document(const std::string& text, std::string_view kind) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::CorruptModel, std::string("unreadable document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("format_version"))
        throw Error(ErrorKind::CorruptModel, "missing format_version");
    if (!doc["format_version"].is_number_integer() || doc["format_version"].get<int>() != kFormatVersion)
        throw Error(ErrorKind::Version, "unsupported format_version " + doc["format_version"].dump() +
                                            " (expected " + std::to_string(kFormatVersion) + ")");
    try {
        if (doc.at("kind").get<std::string>() != kind)
            throw Error(ErrorKind::CorruptModel,
                        "expected a " + std::string(kind) + " document, found " + doc["kind"].get<std::string>());
        const json& prov = doc.at("provenance");
        const json& payload = doc.at("payload");
        if (parse_hex64(doc.at("checksum").get<std::string>()) != checksum_of(prov, payload))
            throw Error(ErrorKind::CorruptModel, "checksum mismatch");
        return {provenance_from(prov), payload};
    } catch (const json::exception& e) {
        throw Error(ErrorKind::CorruptModel, std::string("malformed document: ") + e.what());
    }
}

// Converts json access errors in payload decoding into CorruptModel.
template <typename Fn>
auto decode(Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::CorruptModel, std::string("malformed payload: ") + e.what());
    } catch (const ParseError& e) {
        throw Error(ErrorKind::CorruptModel, std::string("unparsable stored text: ") + e.what());
    }
}

json table_json(const SymbolTable& t) { return t.names(); }

SymbolTable table_from(const json& j) {
    SymbolTable t;
    for (const auto& name : j) {
        std::size_t before = t.size();
        t.intern(name.get<std::string>());
        if (t.size() == before) throw Error(ErrorKind::CorruptModel, "duplicate dictionary entry");
    }
    return t;
}

}  // namespace

bool check_corpus_hash(const Provenance& provenance, const Corpus& corpus) {
    const std::uint64_t actual = content_hash(corpus);
    if (actual == provenance.corpus_hash) return true;
    log().warn("model was built from corpus {} but this corpus hashes to {}", hex64(provenance.corpus_hash),
               hex64(actual));
    return false;
}

//------------------------------------------------------------------------------------------------
// Corpus

std::string serialize_corpus(const Corpus& corpus) {
    json lemmas = json::array();
    for (const Lemma& l : corpus.lemmas()) {
        json entry{{"name", l.name}, {"statement", to_string(l.statement)}, {"proof", nullptr}};
        if (l.proof) {
            json steps = json::array();
            for (const ProofStep& s : l.proof->steps) steps.push_back(to_string(s));
            entry["proof"] = steps;
        }
        lemmas.push_back(entry);
    }
    json deps = json::object();
    for (const auto& [name, ds] : corpus.deps()) deps[name] = ds;
    json payload{{"lemmas", lemmas},
                 {"symbols", table_json(corpus.symbols())},
                 {"tactics", table_json(corpus.tactics())},
                 {"argtypes", table_json(corpus.argtypes())},
                 {"deps", deps}};
    Provenance p;
    p.corpus_hash = content_hash(corpus);
    return make_document("corpus", p, payload);
}

Corpus deserialize_corpus(const std::string& text) {
    Document doc = open_document(text, "corpus");
    Corpus corpus = decode([&] {
        const json& pl = doc.payload;
        std::vector<Lemma> lemmas;
        for (const json& e : pl.at("lemmas")) {
            Lemma l;
            l.name = e.at("name").get<std::string>();
            l.statement = parse_formula(e.at("statement").get<std::string>());
            if (!e.at("proof").is_null()) {
                ProofScript script;
                for (const json& s : e.at("proof")) {
                    ProofScript one = parse_proof(s.get<std::string>());
                    if (one.steps.size() != 1) throw Error(ErrorKind::CorruptModel, "stored step is not one step");
                    script.steps.push_back(std::move(one.steps.front()));
                }
                l.proof = std::move(script);
            }
            lemmas.push_back(std::move(l));
        }
        DependencyMap deps;
        for (const auto& [name, ds] : pl.at("deps").items()) deps[name] = ds.get<std::set<std::string>>();
        try {
            return Corpus::assemble(std::move(lemmas), table_from(pl.at("symbols")), table_from(pl.at("tactics")),
                                    table_from(pl.at("argtypes")), std::move(deps));
        } catch (const Error& e) {
            throw Error(ErrorKind::CorruptModel, e.what());
        }
    });
    if (content_hash(corpus) != doc.provenance.corpus_hash)
        throw Error(ErrorKind::CorruptModel, "stored corpus does not match its content hash");
    return corpus;
}

//------------------------------------------------------------------------------------------------
// Premise models

namespace {

json params_json(const LearnParams& p) {
    return json{{"alpha", p.alpha},
                {"promotion", p.promotion},
                {"demotion", p.demotion},
                {"threshold", p.threshold ? json(*p.threshold) : json(nullptr)},
                {"epochs", p.epochs},
                {"neg_cap", p.neg_cap ? json(*p.neg_cap) : json(nullptr)},
                {"seed", p.seed}};
}

LearnParams params_from(const json& j) {
    LearnParams p;
    p.alpha = j.at("alpha").get<double>();
    p.promotion = j.at("promotion").get<double>();
    p.demotion = j.at("demotion").get<double>();
    if (!j.at("threshold").is_null()) p.threshold = j.at("threshold").get<double>();
    p.epochs = j.at("epochs").get<int>();
    if (!j.at("neg_cap").is_null()) p.neg_cap = j.at("neg_cap").get<std::size_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

json space_json(const FeatureSpace& space) {
    json entries = json::array();
    for (const Feature& f : space.entries())
        entries.push_back(json::array({f.kind == Feature::Kind::Symbol ? "s" : "t", f.text}));
    return json{{"max_term_depth", space.max_term_depth()}, {"entries", entries}};
}

FeatureSpace space_from(const json& j) {
    std::vector<Feature> entries;
    for (const json& e : j.at("entries")) {
        const std::string kind = e.at(0).get<std::string>();
        if (kind != "s" && kind != "t") throw Error(ErrorKind::CorruptModel, "unknown feature kind " + kind);
        entries.push_back({kind == "s" ? Feature::Kind::Symbol : Feature::Kind::GroundTerm, e.at(1).get<std::string>()});
    }
    return FeatureSpace::from_entries(std::move(entries), j.at("max_term_depth").get<std::size_t>());
}

template <typename Map>
json pairs_json(const Map& m) {
    json out = json::array();
    for (const auto& [k, v] : m) out.push_back(json::array({k, v}));
    return out;
}

template <typename Map>
Map pairs_from(const json& j) {
    Map m;
    for (const json& e : j) {
        auto [it, inserted] = m.emplace(e.at(0).get<typename Map::key_type>(), e.at(1).get<typename Map::mapped_type>());
        if (!inserted) throw Error(ErrorKind::CorruptModel, "duplicate position in classifier");
    }
    return m;
}

}  // namespace

std::string serialize_premise_model(const PremiseModel& model, const Provenance& provenance) {
    json classifiers = json::array();
    for (const auto& [name, clf] : model.classifiers) {
        json c{{"lemma", name}};
        if (auto* nb = std::get_if<NaiveBayesClassifier>(&clf)) {
            c["alpha"] = nb->alpha();
            c["n_pos"] = nb->n_pos();
            c["n_neg"] = nb->n_neg();
            c["pos_counts"] = pairs_json(nb->pos_counts());
            c["neg_counts"] = pairs_json(nb->neg_counts());
        } else {
            const auto& w = std::get<WinnowClassifier>(clf);
            c["promotion"] = w.params().promotion;
            c["demotion"] = w.params().demotion;
            c["threshold"] = w.params().threshold;
            c["epochs"] = w.params().epochs;
            c["weights"] = pairs_json(w.weights());
        }
        classifiers.push_back(c);
    }
    json payload{{"algo", to_string(model.algo)},
                 {"params", params_json(model.params)},
                 {"space", space_json(model.space)},
                 {"classifiers", classifiers},
                 {"skipped", model.skipped}};
    return make_document("premise_model", provenance, payload);
}

LoadedPremiseModel deserialize_premise_model(const std::string& text) {
    Document doc = open_document(text, "premise_model");
    return decode([&] {
        const json& pl = doc.payload;
        PremiseModel m;
        m.algo = parse_learn_algo(pl.at("algo").get<std::string>());
        m.params = params_from(pl.at("params"));
        m.space = space_from(pl.at("space"));
        const std::size_t dims = m.space.dims();
        for (const json& c : pl.at("classifiers")) {
            std::string name = c.at("lemma").get<std::string>();
            Classifier clf;
            if (m.algo == LearnAlgo::NaiveBayes) {
                clf = NaiveBayesClassifier::from_counts(
                    dims, c.at("alpha").get<double>(), c.at("n_pos").get<std::uint32_t>(),
                    c.at("n_neg").get<std::uint32_t>(), pairs_from<NaiveBayesClassifier::Counts>(c.at("pos_counts")),
                    pairs_from<NaiveBayesClassifier::Counts>(c.at("neg_counts")));
            } else {
                WinnowParams wp{c.at("promotion").get<double>(), c.at("demotion").get<double>(),
                                c.at("threshold").get<double>(), c.at("epochs").get<int>()};
                clf = WinnowClassifier::from_weights(dims, wp, pairs_from<WinnowClassifier::Weights>(c.at("weights")));
            }
            if (!m.classifiers.emplace(std::move(name), std::move(clf)).second)
                throw Error(ErrorKind::CorruptModel, "duplicate classifier");
        }
        m.skipped = pl.at("skipped").get<std::vector<std::string>>();
        return LoadedPremiseModel{std::move(m), doc.provenance};
    });
}

//------------------------------------------------------------------------------------------------
// Cluster files

std::string serialize_cluster_file(const ClusterFile& file, const Provenance& provenance) {
    const ClusterModel& m = file.model;
    json points = json::array();
    for (std::size_t i = 0; i < file.data.size(); ++i) {
        auto p = file.data.point(i);
        points.push_back(json{{"lemma", file.data.label(i).lemma},
                              {"patch", file.data.label(i).patch_index},
                              {"coords", std::vector<double>(p.begin(), p.end())}});
    }
    json components = json::array();
    for (const GaussianComponent& g : m.components)
        components.push_back(json{{"mean", g.mean}, {"variance", g.variance}, {"weight", g.weight}});
    json families = json::array();
    for (const ProofFamily& f : file.families)
        families.push_back(json{{"members", f.members}, {"proximity", f.proximity}, {"cluster", f.cluster}});
    json payload{{"algo", to_string(m.algo)},
                 {"k", m.k},
                 {"dim", m.dim},
                 {"seed", m.seed},
                 {"assignment", m.assignment},
                 {"centers", m.centers},
                 {"components", components},
                 {"loglik_trace", m.loglik_trace},
                 {"cost_trace", m.cost_trace},
                 {"points", points},
                 {"proximity_threshold", file.proximity_threshold},
                 {"families", families}};
    return make_document("cluster_model", provenance, payload);
}

LoadedClusterFile deserialize_cluster_file(const std::string& text) {
    Document doc = open_document(text, "cluster_model");
    return decode([&] {
        const json& pl = doc.payload;
        ClusterFile f;
        ClusterModel& m = f.model;
        m.algo = parse_cluster_algo(pl.at("algo").get<std::string>());
        m.k = pl.at("k").get<std::size_t>();
        m.dim = pl.at("dim").get<std::size_t>();
        m.seed = pl.at("seed").get<std::uint64_t>();
        m.assignment = pl.at("assignment").get<std::vector<int>>();
        m.centers = pl.at("centers").get<std::vector<std::vector<double>>>();
        for (const json& g : pl.at("components"))
            m.components.push_back({g.at("mean").get<std::vector<double>>(), g.at("variance").get<std::vector<double>>(),
                                    g.at("weight").get<double>()});
        m.loglik_trace = pl.at("loglik_trace").get<std::vector<double>>();
        m.cost_trace = pl.at("cost_trace").get<std::vector<double>>();
        f.data = Dataset(m.dim);
        for (const json& p : pl.at("points"))
            f.data.add({p.at("lemma").get<std::string>(), p.at("patch").get<std::size_t>()},
                       p.at("coords").get<std::vector<double>>());
        f.proximity_threshold = pl.at("proximity_threshold").get<double>();
        for (const json& fam : pl.at("families"))
            f.families.push_back({fam.at("members").get<std::vector<std::string>>(), fam.at("proximity").get<double>(),
                                  fam.at("cluster").get<std::size_t>()});
        if (m.assignment.size() != f.data.size())
            throw Error(ErrorKind::CorruptModel, "assignment does not match stored points");
        for (int a : m.assignment)
            if (a < 0 || static_cast<std::size_t>(a) >= m.k) throw Error(ErrorKind::CorruptModel, "bad cluster id");
        return LoadedClusterFile{std::move(f), doc.provenance};
    });
}

//------------------------------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << contents;
    if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

void save_model(const PremiseModel& model, const Provenance& provenance, const std::filesystem::path& path) {
    write_file(path, serialize_premise_model(model, provenance));
}

LoadedPremiseModel load_model(const std::filesystem::path& path) {
    return deserialize_premise_model(read_file(path));
}

}  // namespace pm
