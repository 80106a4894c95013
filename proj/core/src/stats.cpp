#include "talkprofiler/stats.hpp"

#include <unordered_map>
#include <unordered_set>

#include "talkprofiler/csv.hpp"
#include "talkprofiler/errors.hpp"
#include "talkprofiler/tokenizer.hpp"

namespace talkprofiler {

std::vector<CategoryStatistics> compute_stats(const Corpus& corpus,
                                              Scheme scheme) {
  const auto categories = scheme_categories(scheme);
  std::array<CategoryStatistics, 2> rows;
  std::array<std::unordered_set<std::string, TransparentStringHash,
                                std::equal_to<>>,
             2>
      types;
  rows[0].category = categories[0];
  rows[1].category = categories[1];

  std::unordered_map<std::string_view, std::size_t> side_of;
  for (const auto& [id, speaker] : corpus.speakers) {
    if (const auto category = category_of(speaker, scheme)) {
      const std::size_t side = *category == categories[1] ? 1 : 0;
      ++rows[side].speakers;
      side_of.emplace(id, side);
    }
  }
  for (std::size_t side = 0; side < 2; ++side) {
    if (rows[side].speakers == 0) {
      raise(ErrorKind::EmptyCategory,
            "no speakers in category " +
                std::string(to_string(categories[side])));
    }
  }

  for (const Conversation& conversation : corpus.conversations) {
    for (const Turn& turn : conversation.turns) {
      const auto it = side_of.find(turn.speaker_id);
      if (it == side_of.end()) continue;
      CategoryStatistics& row = rows[it->second];
      ++row.turns;
      for (const Event& event : turn.events) {
        if (event.kind == EventKind::Word ||
            event.kind == EventKind::Particle) {
          ++row.word_tokens;
          types[it->second].emplace(event.surface);
        }
      }
    }
  }

  for (std::size_t side = 0; side < 2; ++side) {
    CategoryStatistics& row = rows[side];
    row.distinct_types = types[side].size();
    row.avg_turn_length =
        row.turns == 0 ? 0.0
                       : static_cast<double>(row.word_tokens) /
                             static_cast<double>(row.turns);
    row.ttr = row.word_tokens == 0
                  ? 0.0
                  : static_cast<double>(row.distinct_types) /
                        static_cast<double>(row.word_tokens);
  }
  return {rows[0], rows[1]};
}

std::string stats_csv(std::span<const CategoryStatistics> rows) {
  std::string out = "category,speakers,word_tokens,turns,avg_turn_length,ttr\n";
  for (const CategoryStatistics& row : rows) {
    out.append(to_string(row.category));
    out.push_back(',');
    out.append(std::to_string(row.speakers));
    out.push_back(',');
    out.append(std::to_string(row.word_tokens));
    out.push_back(',');
    out.append(std::to_string(row.turns));
    out.push_back(',');
    out.append(format_double(row.avg_turn_length));
    out.push_back(',');
    out.append(format_double(row.ttr));
    out.push_back('\n');
  }
  return out;
}

}  // namespace talkprofiler
