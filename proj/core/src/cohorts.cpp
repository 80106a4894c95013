#include "talkprofiler/cohorts.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "talkprofiler/errors.hpp"
#include "talkprofiler/rng.hpp"

namespace talkprofiler {
namespace {

struct Group {
  CategoryLabel category;
  std::vector<std::size_t> units;  // indices into the input vector
};

// Groups in first-appearance order; one group per speaker when grouping,
// one per unit otherwise.
std::vector<Group> make_groups(const std::vector<Unit>& units,
                               bool group_by_speaker) {
  std::vector<Group> groups;
  std::unordered_map<std::string_view, std::size_t> by_key;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!group_by_speaker) {
      groups.push_back({units[i].category, {i}});
      continue;
    }
    const std::string_view key = units[i].speaker_id;
    const auto [it, inserted] = by_key.emplace(key, groups.size());
    if (inserted) {
      groups.push_back({units[i].category, {i}});
    } else {
      groups[it->second].units.push_back(i);
    }
  }
  return groups;
}

// Category values present, in enum order, with the group indices of each.
std::vector<std::pair<CategoryLabel, std::vector<std::size_t>>>
groups_by_category(const std::vector<Group>& groups) {
  std::vector<std::pair<CategoryLabel, std::vector<std::size_t>>> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const CategoryLabel category = groups[g].category;
    auto it = std::find_if(out.begin(), out.end(), [category](const auto& e) {
      return e.first == category;
    });
    if (it == out.end()) {
      out.push_back({category, {g}});
    } else {
      it->second.push_back(g);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return static_cast<int>(a.first) < static_cast<int>(b.first);
  });
  return out;
}

}  // namespace

std::vector<Unit> make_units(const Corpus& corpus, Scheme scheme,
                             UnitKind kind) {
  std::unordered_map<std::string_view, CategoryLabel> categories;
  for (const auto& [id, speaker] : corpus.speakers) {
    if (const auto category = category_of(speaker, scheme)) {
      categories.emplace(id, *category);
    }
  }

  std::vector<Unit> units;
  if (kind == UnitKind::Turn) {
    for (const Conversation& conversation : corpus.conversations) {
      for (const Turn& turn : conversation.turns) {
        const auto it = categories.find(turn.speaker_id);
        if (it == categories.end()) continue;
        Unit unit;
        unit.kind = UnitKind::Turn;
        unit.id = turn.speaker_id + "#" + conversation.id + "#" +
                  std::to_string(turn.index);
        unit.speaker_id = turn.speaker_id;
        unit.category = it->second;
        unit.turns = {&turn};
        units.push_back(std::move(unit));
      }
    }
    return units;
  }

  // Speaker units: turns gathered in conversation order, speakers emitted in
  // id order. Speakers without any turn produce no unit.
  std::map<std::string, std::vector<const Turn*>> turns_of;
  for (const Conversation& conversation : corpus.conversations) {
    for (const Turn& turn : conversation.turns) {
      if (categories.find(turn.speaker_id) != categories.end()) {
        turns_of[turn.speaker_id].push_back(&turn);
      }
    }
  }
  for (auto& [id, turns] : turns_of) {
    Unit unit;
    unit.kind = UnitKind::Speaker;
    unit.id = id;
    unit.speaker_id = id;
    unit.category = categories.find(id)->second;
    unit.turns = std::move(turns);
    units.push_back(std::move(unit));
  }
  return units;
}

std::uint64_t unit_word_tokens(const Unit& unit) {
  std::uint64_t n = 0;
  for (const Turn* turn : unit.turns) n += word_count(*turn);
  return n;
}

std::vector<Unit> filter_min_talk(std::vector<Unit> units,
                                  std::uint64_t min_tokens) {
  std::erase_if(units, [min_tokens](const Unit& unit) {
    return unit_word_tokens(unit) < min_tokens;
  });
  return units;
}

std::vector<Unit> drop_empty_turn_units(std::vector<Unit> units) {
  std::erase_if(units, [](const Unit& unit) {
    return unit.kind == UnitKind::Turn && unit_word_tokens(unit) == 0;
  });
  return units;
}

std::vector<Unit> balance(std::vector<Unit> units, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, 2> sides;
  std::array<CategoryLabel, 2> labels{};
  std::size_t n_categories = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const CategoryLabel category = units[i].category;
    std::size_t side = n_categories;
    for (std::size_t s = 0; s < n_categories; ++s) {
      if (labels[s] == category) side = s;
    }
    if (side == n_categories) {
      if (n_categories == 2) {
        raise(ErrorKind::InvalidSpec, "more than two categories in units");
      }
      labels[n_categories++] = category;
    }
    sides[side].push_back(i);
  }
  if (n_categories < 2 || sides[0].empty() || sides[1].empty()) {
    raise(ErrorKind::EmptyCategory, "balance needs units of both categories");
  }
  if (sides[0].size() == sides[1].size()) return units;

  const std::size_t majority = sides[0].size() > sides[1].size() ? 0 : 1;
  const std::size_t target = sides[1 - majority].size();
  SplitMix64 rng(derive_seed(seed, "balance"));
  seeded_shuffle(sides[majority], rng);
  std::vector<bool> keep(units.size(), true);
  for (std::size_t i = target; i < sides[majority].size(); ++i) {
    keep[sides[majority][i]] = false;
  }
  std::vector<Unit> out;
  out.reserve(2 * target);
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (keep[i]) out.push_back(std::move(units[i]));
  }
  return out;
}

Split holdout_split(const std::vector<Unit>& units, double test_fraction,
                    std::uint64_t seed, bool group_by_speaker) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
    raise(ErrorKind::InvalidSpec, "test_fraction must be in (0, 1)");
  }
  const std::vector<Group> groups = make_groups(units, group_by_speaker);
  const auto categories = groups_by_category(groups);
  if (categories.size() < 2) {
    raise(ErrorKind::TooFewUnits, "holdout needs units of both categories");
  }

  Split split;
  split.seed = seed;
  std::vector<bool> in_test(groups.size(), false);
  for (const auto& [category, group_indices] : categories) {
    std::vector<std::size_t> order = group_indices;
    SplitMix64 rng(derive_seed(
        seed, "holdout:" + std::string(to_string(category))));
    seeded_shuffle(order, rng);
    const std::size_t n = order.size();
    // Half-up rounding of the category's share.
    const auto n_test = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * test_fraction + 0.5));
    if (n_test == 0 || n_test >= n) {
      raise(ErrorKind::TooFewUnits,
            "category " + std::string(to_string(category)) +
                " cannot fill both sides");
    }
    for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& side = in_test[g] ? split.test : split.train;
    side.insert(side.end(), groups[g].units.begin(), groups[g].units.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<std::vector<std::size_t>> kfold(const std::vector<Unit>& units,
                                            std::size_t k, std::uint64_t seed,
                                            bool group_by_speaker) {
  if (k < 2) raise(ErrorKind::TooFewUnits, "k must be at least 2");
  const std::vector<Group> groups = make_groups(units, group_by_speaker);
  if (groups.size() < k) {
    raise(ErrorKind::TooFewUnits, "fewer groups than folds");
  }
  const auto categories = groups_by_category(groups);

  std::vector<std::vector<std::size_t>> folds(k);
  // The fold pointer continues across categories, so fold sizes stay within
  // one of each other globally as well as per category.
  std::size_t pointer = 0;
  for (const auto& [category, group_indices] : categories) {
    std::vector<std::size_t> order = group_indices;
    SplitMix64 rng(
        derive_seed(seed, "kfold:" + std::string(to_string(category))));
    seeded_shuffle(order, rng);
    for (const std::size_t g : order) {
      auto& fold = folds[pointer % k];
      fold.insert(fold.end(), groups[g].units.begin(), groups[g].units.end());
      ++pointer;
    }
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

}  // namespace talkprofiler
