#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "critmult/problem_io.hpp"

namespace critmult {

// Problem files compiled into the library from the corpus directory, sorted by file name.
struct CorpusFile {
  std::string file;
  std::string text;
};
const std::vector<CorpusFile>& builtin_corpus_files();
std::vector<ProblemFile> builtin_corpus();
// Frozen verdicts: {problem: {point: facts}}.
nlohmann::json builtin_goldens();

// Facts for every point of every corpus problem, in the golden layout.
nlohmann::json corpus_facts(const std::vector<ProblemFile>& corpus);

// One line per mismatch; empty when the two agree.
std::vector<std::string> golden_diff(const nlohmann::json& expected, const nlohmann::json& actual);

}  // namespace critmult
