#pragma once

// Recounts corpus statistics straight off the raw transcript files with the
// DOM parser of the vendored JSON library, sharing no code with the library
// parser, tokenizer or stats module. Oracle for the stats contract.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace talkprofiler::test {

struct NaiveStats {
  std::uint64_t speakers = 0;
  std::uint64_t word_tokens = 0;
  std::uint64_t turns = 0;
  std::uint64_t distinct_types = 0;
  double avg_turn_length = 0.0;
  double ttr = 0.0;
};

// scheme: "gender" (categories "female"/"male") or "age" ("old"/"young").
// The documented format is case-insensitive; surfaces are lowercased before
// counting, as in any conforming reader.
inline std::map<std::string, NaiveStats> naive_stats(
    const std::filesystem::path& dir, const std::string& scheme) {
  const auto lower = [](std::string s) {
    for (char& c : s) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return s;
  };

  std::map<std::string, std::string> category_of_speaker;
  {
    std::ifstream manifest(dir / "speakers.json");
    const auto doc = nlohmann::json::parse(manifest);
    for (const auto& entry : doc) {
      std::string category;
      if (scheme == "gender") {
        if (entry.contains("gender") && entry["gender"].is_string()) {
          const std::string g = entry["gender"].get<std::string>();
          if (g == "F") category = "female";
          if (g == "M") category = "male";
        }
      } else {
        if (entry.contains("age") && entry["age"].is_number()) {
          const int age = entry["age"].get<int>();
          if (age >= 70) category = "old";
          if (age <= 18) category = "young";
        }
      }
      if (!category.empty()) {
        category_of_speaker[entry["id"].get<std::string>()] = category;
      }
    }
  }

  std::map<std::string, NaiveStats> result;
  std::map<std::string, std::set<std::string>> types;
  for (const auto& [id, category] : category_of_speaker) {
    result[category].speakers += 1;
  }

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json" &&
        entry.path().filename() != "speakers.json") {
      files.push_back(entry.path());
    }
  }

  for (const auto& file : files) {
    std::ifstream in(file);
    const auto doc = nlohmann::json::parse(in);
    for (const auto& turn : doc["turns"]) {
      const auto it =
          category_of_speaker.find(turn["speaker"].get<std::string>());
      if (it == category_of_speaker.end()) continue;
      NaiveStats& stats = result[it->second];
      stats.turns += 1;
      for (const auto& event : turn["events"]) {
        const std::string tag = event["t"].get<std::string>();
        if (tag == "w" || tag == "p") {
          stats.word_tokens += 1;
          types[it->second].insert(lower(event["v"].get<std::string>()));
        }
      }
    }
  }

  for (auto& [category, stats] : result) {
    stats.distinct_types = types[category].size();
    if (stats.turns > 0) {
      stats.avg_turn_length = static_cast<double>(stats.word_tokens) /
                              static_cast<double>(stats.turns);
    }
    if (stats.word_tokens > 0) {
      stats.ttr = static_cast<double>(stats.distinct_types) /
                  static_cast<double>(stats.word_tokens);
    }
  }
  return result;
}

}  // namespace talkprofiler::test
