#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Seeded cross-oracle suites. Every instance is a self-contained JSON object
// so that failures can be replayed without the generator.
namespace wb::fuzz {

const std::vector<std::string>& suites();

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Instance `index` of a suite under `seed`; deterministic.
std::string generate(const std::string& suite, std::uint64_t seed, int index);
Outcome check(const std::string& suite, const std::string& instance_json);

// Report: {"suite","seed","n","passed","failed","ok","failures":[{"suite","index","detail","instance"}]}.
std::string run(const std::string& suite, int n, std::uint64_t seed, bool* ok);

// Accepts a run report or a single {"suite","instance"} object; ok when every
// recorded instance now passes.
std::string replay(const std::string& json_text, bool* ok);

}  // namespace wb::fuzz
