#include "pm/synth.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <fmt/format.h>

#include "pm/error.hpp"
#include "pm/model_io.hpp"

namespace pm {

namespace {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    bool coin(std::size_t one_in) { return below(one_in) == 0; }

private:
    std::mt19937_64 rng_;
};

struct Pool {
    std::size_t f;
    std::string p() const { return fmt::format("p{}", f); }
    std::string q() const { return fmt::format("q{}", f); }
    std::string r() const { return fmt::format("r{}", f); }
    std::string g() const { return fmt::format("g{}", f); }
    std::string h() const { return fmt::format("h{}", f); }
    std::string a() const { return fmt::format("a{}", f); }
    std::string b() const { return fmt::format("b{}", f); }
};

std::string leaf(const Pool& s, Gen& gen) {
    switch (gen.below(4)) {
        case 0: return s.a();
        case 1: return s.b();
        default: return "X";
    }
}

std::string term(const Pool& s, Gen& gen) {
    switch (gen.below(4)) {
        case 0: return fmt::format("{}({})", s.g(), leaf(s, gen));
        case 1: return fmt::format("{}({},{})", s.h(), leaf(s, gen), leaf(s, gen));
        default: return leaf(s, gen);
    }
}

std::string atom(const Pool& s, Gen& gen) {
    if (gen.coin(8)) return fmt::format("eq({},{})", term(s, gen), gen.coin(2) ? "zero" : term(s, gen));
    switch (gen.below(3)) {
        case 0: return fmt::format("{}({})", s.p(), term(s, gen));
        case 1: return fmt::format("{}({},{})", s.q(), term(s, gen), term(s, gen));
        default: return fmt::format("{}({})", s.r(), term(s, gen));
    }
}

struct IdiomStep {
    std::string tactic;
    std::uint32_t subgoals;
    bool with_args;
};

}  // namespace

std::string synthetic_lemma_name(std::size_t family, std::size_t index) {
    return fmt::format("f{}_l{}", family, index);
}

std::vector<SourceFile> gen_synthetic_corpus(std::size_t n_families, std::size_t per_family, std::uint64_t seed) {
    if (n_families < 1) throw Error(ErrorKind::BadArgument, "need at least one family");
    if (per_family < 2) throw Error(ErrorKind::BadArgument, "need at least two lemmas per family");
    Gen gen(seed);
    std::string fof;
    std::string prf;

    for (std::size_t f = 0; f < n_families; ++f) {
        const Pool pool{f};
        const std::vector<std::string> tactics = {fmt::format("unfold{}", f), fmt::format("rewrite{}", f),
                                                  fmt::format("close{}", f)};
        std::vector<IdiomStep> idiom;
        for (std::size_t s = 0; s < 5; ++s)
            idiom.push_back({tactics[gen.below(3)], static_cast<std::uint32_t>(gen.below(3)), !gen.coin(3)});
        idiom.front().with_args = true;

        // Dependencies: lemma 0 always, plus a random subset of the other foundational lemmas
        // before j. Foundational lemmas are then topped up to two dependents where possible.
        const std::size_t foundational = (per_family + 1) / 2;
        std::vector<std::set<std::size_t>> deps(per_family);
        for (std::size_t j = 1; j < per_family; ++j) {
            deps[j].insert(0);
            for (std::size_t i = 1; i < std::min(j, foundational); ++i)
                if (gen.coin(2)) deps[j].insert(i);
        }
        for (std::size_t i = 1; i < foundational; ++i) {
            std::vector<std::size_t> later;
            std::size_t users = 0;
            for (std::size_t j = i + 1; j < per_family; ++j) {
                if (deps[j].count(i)) ++users;
                else later.push_back(j);
            }
            while (users < 2 && !later.empty()) {
                std::size_t pick = gen.below(later.size());
                deps[later[pick]].insert(i);
                later.erase(later.begin() + static_cast<std::ptrdiff_t>(pick));
                ++users;
            }
        }

        const std::vector<std::string> goals = {pool.p(), pool.q(), pool.r()};
        for (std::size_t j = 0; j < per_family; ++j) {
            const std::string name = synthetic_lemma_name(f, j);
            const char* conn = gen.coin(3) ? "&" : "=>";
            fof += fmt::format("lemma {} : ![X]: ({} {} {}).\n", name, atom(pool, gen), conn, atom(pool, gen));

            std::vector<std::size_t> used(deps[j].begin(), deps[j].end());
            std::size_t next_dep = 0;
            prf += fmt::format("proof {}\n", name);
            for (int rep = 0; rep < 2; ++rep) {
                for (const IdiomStep& st : idiom) {
                    std::string args;
                    if (st.with_args) {
                        std::string second;
                        if (used.empty()) {
                            second = std::to_string(gen.below(4));
                        } else {
                            second = synthetic_lemma_name(f, used[next_dep % used.size()]);
                            ++next_dep;
                        }
                        args = fmt::format(" {}({}) {}", pool.g(), pool.a(), second);
                    }
                    prf += fmt::format("  {}{} [goal:{} subgoals:{}].\n", st.tactic, args, goals[gen.below(3)],
                                       st.subgoals);
                }
            }
            // Any dependency the idiom did not cite yet is closed off explicitly.
            while (next_dep < used.size()) {
                prf += fmt::format("  {} {}({}) {} [goal:{} subgoals:0].\n", idiom.back().tactic, pool.g(), pool.a(),
                                   synthetic_lemma_name(f, used[next_dep]), goals[0]);
                ++next_dep;
            }
            prf += "qed.\n\n";
        }
        fof += "\n";
    }
    return {{"library.fof", fof}, {"library.prf", prf}};
}

std::vector<std::filesystem::path> write_sources(const std::vector<SourceFile>& files,
                                                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> out;
    for (const SourceFile& f : files) {
        out.push_back(dir / f.name);
        write_file(out.back(), f.text);
    }
    return out;
}

}  // namespace pm
