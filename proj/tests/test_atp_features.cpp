#include <random>

#include "doctest.h"
#include "pm/atp_features.hpp"
#include "support.hpp"

using namespace pm;
using pm::test::error_kind;

namespace {

Corpus pq_corpus() { return ingest_sources({{"pq.fof", "lemma l1 : p(a).\nlemma l2 : q(f(a)).\n"}}); }

std::vector<std::string> texts(const FeatureSpace& s) {
    std::vector<std::string> out;
    for (const Feature& f : s.entries()) out.push_back((f.kind == Feature::Kind::Symbol ? "Sym " : "Term ") + f.text);
    return out;
}

Corpus three_proved(const std::string& prf) {
    return ingest_sources({{"t.fof", "lemma l1 : p(a).\nlemma l2 : q(b).\nlemma l3 : r(c).\nlemma g : s(a).\n"},
                           {"t.prf", prf}});
}

}  // namespace

TEST_CASE("feature space: symbols then ground terms in first-occurrence order") {
    FeatureSpace s = FeatureSpace::build(pq_corpus(), 2);
    CHECK(texts(s) == std::vector<std::string>{"Sym p", "Sym a", "Sym q", "Sym f", "Term a", "Term f(a)"});
    CHECK(s.dims() == 6);
    for (std::uint32_t i = 0; i < s.dims(); ++i) CHECK(s.position(s.entries()[i]) == i);
}

TEST_CASE("feature space: empty corpus") {
    FeatureSpace s = FeatureSpace::build(Corpus{}, 2);
    CHECK(s.dims() == 0);
}

TEST_CASE("feature space: depth 0 keeps symbols only") {
    FeatureSpace s = FeatureSpace::build(pq_corpus(), 0);
    CHECK(texts(s) == std::vector<std::string>{"Sym p", "Sym a", "Sym q", "Sym f"});
}

TEST_CASE("feature space: depth bound and variables") {
    Corpus c = ingest_sources({{"d.fof", "lemma l : p(g(f(a)), h(X, b)).\n"}});
    FeatureSpace s1 = FeatureSpace::build(c, 1);
    FeatureSpace s3 = FeatureSpace::build(c, 3);
    CHECK(!s1.position(Feature::ground_term("f(a)")));
    CHECK(s1.position(Feature::ground_term("a")));
    CHECK(s3.position(Feature::ground_term("g(f(a))")));
    CHECK(!s3.position(Feature::ground_term("h(X,b)")));
    CHECK(s3.position(Feature::ground_term("b")));
}

TEST_CASE("feature space: from_entries rejects duplicates") {
    CHECK(error_kind([] {
              FeatureSpace::from_entries({Feature::symbol("p"), Feature::symbol("p")}, 2);
          }) == ErrorKind::CorruptModel);
    // The same text may appear once as a symbol and once as a term.
    CHECK(FeatureSpace::from_entries({Feature::symbol("a"), Feature::ground_term("a")}, 2).dims() == 2);
}

TEST_CASE("featurize: presence of symbols and ground terms") {
    FeatureSpace s = FeatureSpace::build(pq_corpus(), 2);
    CHECK(featurize(parse_formula("p(a)"), s).active == std::vector<std::uint32_t>{0, 1, 4});
    CHECK(featurize(parse_formula("q(f(a))"), s).active == std::vector<std::uint32_t>{1, 2, 3, 4, 5});
    SparseVector none = featurize(parse_formula("r(b, g(c))"), s);
    CHECK(none.active.empty());
    CHECK(none.dims == 6);
}

TEST_CASE("SparseVector::from_positions") {
    SparseVector v = SparseVector::from_positions(10, {7, 2, 7, 0});
    CHECK(v.active == std::vector<std::uint32_t>{0, 2, 7});
    CHECK(v.contains(2));
    CHECK(!v.contains(3));
    CHECK(error_kind([] { SparseVector::from_positions(3, {3}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("featurize is monotone in subformulas") {
    Corpus c = ingest_sources({{"m.fof", "lemma a1 : ![X]: (p(f(X), a) => ~q(g(b), c)).\n"
                                         "lemma a2 : (r(h(a,b)) | p(f(c), c)).\n"}});
    FeatureSpace s = FeatureSpace::build(c, 2);
    auto check_sub = [&](const Formula& t, auto& self) -> void {
        SparseVector vt = featurize(t, s);
        for (const Formula& child : t.children) {
            SparseVector vs = featurize(child, s);
            CHECK(std::includes(vt.active.begin(), vt.active.end(), vs.active.begin(), vs.active.end()));
            self(child, self);
        }
    };
    for (const Lemma& l : c.lemmas()) check_sub(l.statement, check_sub);
}

TEST_CASE("featurize is deterministic") {
    Corpus c = pq_corpus();
    CHECK(FeatureSpace::build(c, 2) == FeatureSpace::build(c, 2));
    FeatureSpace s = FeatureSpace::build(c, 2);
    CHECK(featurize(c.lemmas()[1].statement, s) == featurize(c.lemmas()[1].statement, s));
}

TEST_CASE("training sets: toy dependency graph") {
    Corpus c = three_proved("proof l1\n t [goal:p subgoals:0].\nqed.\n"
                            "proof l2\n t l1 [goal:q subgoals:0].\nqed.\n"
                            "proof l3\n t l1 [goal:r subgoals:0].\nqed.\n");
    auto sets = build_training_sets(c, FeatureSpace::build(c, 2));
    REQUIRE(sets.size() == 3);
    auto names = [](const std::vector<Example>& ex) {
        std::vector<std::string> out;
        for (const auto& e : ex) out.push_back(e.lemma);
        return out;
    };
    CHECK(sets[0].target == "l1");
    CHECK(names(sets[0].positives) == std::vector<std::string>{"l2", "l3"});
    CHECK(sets[0].negatives.empty());
    CHECK(sets[1].target == "l2");
    CHECK(sets[1].positives.empty());
    CHECK(names(sets[1].negatives) == std::vector<std::string>{"l1", "l3"});
    // The unproved goal g contributes nothing.
    for (const auto& ts : sets) {
        for (const auto& e : ts.positives) CHECK(e.lemma != "g");
        for (const auto& e : ts.negatives) CHECK(e.lemma != "g");
    }
}

TEST_CASE("training sets: fewer than two proved lemmas") {
    Corpus c = three_proved("proof l1\n t [goal:p subgoals:0].\nqed.\n");
    CHECK(error_kind([&] { build_training_sets(c, FeatureSpace::build(c, 2)); }) == ErrorKind::InsufficientData);
}

TEST_CASE("training sets: size, disjointness and target exclusion on random corpora") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 40; ++round) {
        const std::size_t n = 2 + rng() % 10;
        std::string fof, prf;
        for (std::size_t i = 0; i < n; ++i) {
            fof += "lemma l" + std::to_string(i) + " : p" + std::to_string(rng() % 4) + "(c" + std::to_string(rng() % 5) + ").\n";
            if (rng() % 4 == 0 && i > 1) continue;  // some goals stay unproved
            prf += "proof l" + std::to_string(i) + "\n";
            for (std::size_t j = 0; j < i; ++j)
                if (rng() % 3 == 0) prf += " use l" + std::to_string(j) + " [goal:p0 subgoals:0].\n";
            prf += "qed.\n";
        }
        Corpus c = ingest_sources({{"r.fof", fof}, {"r.prf", prf}});
        if (c.proved_count() < 2) continue;
        auto sets = build_training_sets(c, FeatureSpace::build(c, 2));
        CHECK(sets.size() == c.proved_count());
        for (const auto& ts : sets) {
            CHECK(ts.size() == c.proved_count() - 1);
            std::set<std::string> pos, neg;
            for (const auto& e : ts.positives) pos.insert(e.lemma);
            for (const auto& e : ts.negatives) neg.insert(e.lemma);
            for (const auto& p : pos) CHECK(neg.count(p) == 0);
            CHECK(pos.count(ts.target) == 0);
            CHECK(neg.count(ts.target) == 0);
            for (const auto& p : pos) CHECK(c.deps_of(p).count(ts.target) == 1);
        }
    }
}

TEST_CASE("training sets: negative cap is deterministic and keeps corpus order") {
    std::string fof, prf;
    for (int i = 0; i < 12; ++i) {
        fof += "lemma l" + std::to_string(i) + " : p(c" + std::to_string(i) + ").\n";
        prf += "proof l" + std::to_string(i) + "\nqed.\n";
    }
    Corpus c = ingest_sources({{"n.fof", fof}, {"n.prf", prf}});
    FeatureSpace s = FeatureSpace::build(c, 2);
    auto a = build_training_sets(c, s, {4, 9});
    auto b = build_training_sets(c, s, {4, 9});
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].negatives.size() == 4);
        for (std::size_t j = 0; j < 4; ++j) CHECK(a[i].negatives[j].lemma == b[i].negatives[j].lemma);
        for (std::size_t j = 1; j < 4; ++j) {
            auto idx = [](const std::string& n) { return std::stoi(n.substr(1)); };
            CHECK(idx(a[i].negatives[j - 1].lemma) < idx(a[i].negatives[j].lemma));
        }
    }
}
