#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "pm/corpus.hpp"
#include "pm/error.hpp"

namespace pm::test {

// Kind of the pm::Error thrown by fn, or nullopt if it returns normally.
inline std::optional<ErrorKind> error_kind(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("pm-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// The three-lemma library used in the encoding examples: lem3 is proved from lem1 and lem2.
inline Corpus toy_corpus() {
    return ingest_sources({{"toy.fof", "lemma lem1 : p(a).\nlemma lem2 : q(a).\nlemma lem3 : (p(a) => q(a)).\n"},
                           {"toy.prf",
                            "proof lem3\n"
                            "  apply lem1 [goal:= subgoals:1].\n"
                            "  intro [goal:imp subgoals:1].\n"
                            "  apply lem2 [goal:= subgoals:1].\n"
                            "qed.\n"}});
}

}  // namespace pm::test
