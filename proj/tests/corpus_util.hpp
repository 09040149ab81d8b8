#pragma once

#include <stdexcept>
#include <string>

#include "critmult/corpus.hpp"

namespace testutil {

inline const critmult::ProblemFile& corpus_problem(const std::string& name) {
  static const auto corpus = critmult::builtin_corpus();
  for (const auto& p : corpus)
    if (p.name == name) return p;
  throw std::runtime_error("no corpus problem " + name);
}

}  // namespace testutil
