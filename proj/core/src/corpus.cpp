#include "critmult/corpus.hpp"

#include <algorithm>
#include <utility>

#include "critmult/report.hpp"

namespace critmult {

namespace detail {
const std::vector<std::pair<std::string, std::string>>& corpus_data();
}

namespace {
constexpr const char* kGoldenFile = "goldens.json";
}

const std::vector<CorpusFile>& builtin_corpus_files() {
  static const std::vector<CorpusFile> files = [] {
    std::vector<CorpusFile> out;
    for (const auto& [name, text] : detail::corpus_data())
      if (name != kGoldenFile) out.push_back({name, text});
    std::sort(out.begin(), out.end(), [](const CorpusFile& a, const CorpusFile& b) { return a.file < b.file; });
    return out;
  }();
  return files;
}

std::vector<ProblemFile> builtin_corpus() {
  std::vector<ProblemFile> out;
  for (const auto& f : builtin_corpus_files()) out.push_back(parse_problem_text(f.text));
  return out;
}

nlohmann::json builtin_goldens() {
  for (const auto& [name, text] : detail::corpus_data())
    if (name == kGoldenFile) return nlohmann::json::parse(text);
  return nlohmann::json::object();
}

nlohmann::json corpus_facts(const std::vector<ProblemFile>& corpus) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& p : corpus) {
    nlohmann::json pts = nlohmann::json::object();
    for (const auto& pt : p.points) pts[pt.name] = point_facts(analyze_point(p, pt));
    out[p.name] = pts;
  }
  return out;
}

std::vector<std::string> golden_diff(const nlohmann::json& expected, const nlohmann::json& actual) {
  std::vector<std::string> lines;
  const nlohmann::json patch = nlohmann::json::diff(expected, actual);
  for (const auto& op : patch) {
    std::string line = op["op"].get<std::string>() + " " + op["path"].get<std::string>();
    const auto ptr = nlohmann::json::json_pointer(op["path"].get<std::string>());
    if (expected.contains(ptr)) line += "  expected " + expected.at(ptr).dump();
    if (actual.contains(ptr)) line += "  actual " + actual.at(ptr).dump();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace critmult
