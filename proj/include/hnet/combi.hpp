#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "hnet/error.hpp"
#include "hnet/ingest.hpp"

namespace hnet {

struct CombiConfig {
  std::size_t k_max = 1;
  std::size_t y_min = 10;
  std::size_t max_candidates = 1'000'000;
};

struct CombiStats {
  std::size_t candidates = 0;  // after subset pruning
  std::size_t exclusive = 0;   // AND identically false
  std::size_t below_support = 0;
  std::size_t emitted = 0;
};

/// Appends order-2..k_max AND-combinations of the base columns.
///
/// Enumeration is level-wise (Apriori): a k-set is a candidate only if all of
/// its (k-1)-subsets survived, which is sound because support can only shrink
/// under AND. Members must come from pairwise distinct features. Sets whose
/// AND is empty are skipped as mutually exclusive, sets below y_min are
/// dropped. Output order is the input columns followed by each level in
/// lexicographic order of member indices.
inline OneHotMatrix expand_combinations(const OneHotMatrix& m, const CombiConfig& config, CombiStats* stats = nullptr) {
  if (config.k_max < 1) throw Error(ErrorCode::InvalidConfig, "k_max must be at least 1");
  if (m.columns.empty()) throw Error(ErrorCode::NoUsableColumns, "cannot combine an empty matrix");

  CombiStats local;
  OneHotMatrix out = m;
  const auto& base = m.columns;
  for (const auto& col : base) {
    if (col.order() != 1) throw Error(ErrorCode::InvalidConfig, "combination input must hold order-1 columns only");
  }

  using Members = std::vector<std::size_t>;
  // Survivors of the previous level: member indices + position in `out`.
  std::vector<std::pair<Members, std::size_t>> level;
  for (std::size_t i = 0; i < base.size(); ++i) level.push_back({{i}, i});

  for (std::size_t k = 2; k <= config.k_max && level.size() >= 2; ++k) {
    std::set<Members> survived;
    for (const auto& [members, _] : level) survived.insert(members);

    std::vector<std::pair<Members, std::size_t>> next;
    for (std::size_t a = 0; a < level.size(); ++a) {
      const Members& left = level[a].first;
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        const Members& right = level[b].first;
        // Join on a shared (k-2)-prefix; level is sorted, so the first mismatch ends the run.
        if (!std::equal(left.begin(), left.end() - 1, right.begin())) break;
        const std::size_t tail = right.back();
        bool distinct = true;
        for (std::size_t idx : left) {
          if (base[idx].parent_features.front() == base[tail].parent_features.front()) {
            distinct = false;
            break;
          }
        }
        if (!distinct) continue;

        Members cand = left;
        cand.push_back(tail);
        bool pruned = false;
        for (std::size_t drop = 0; drop + 2 < cand.size() && !pruned; ++drop) {
          Members sub;
          for (std::size_t j = 0; j < cand.size(); ++j) {
            if (j != drop) sub.push_back(cand[j]);
          }
          if (!survived.contains(sub)) pruned = true;
        }
        if (pruned) continue;

        if (++local.candidates > config.max_candidates) {
          throw Error(ErrorCode::CombinatorialBudgetExceeded,
                      "more than " + std::to_string(config.max_candidates) + " combination candidates at order " +
                          std::to_string(k));
        }

        const CategoryColumn& prefix = out.columns[level[a].second];
        const CategoryColumn& extra = base[tail];
        BitVector bits = prefix.bits & extra.bits;
        if (bits.none()) {
          ++local.exclusive;
          continue;
        }
        const std::size_t positives = bits.count();
        if (positives < config.y_min) {
          ++local.below_support;
          continue;
        }
        CategoryColumn cc;
        cc.parent_features = prefix.parent_features;
        cc.parent_features.push_back(extra.parent_features.front());
        cc.labels = prefix.labels;
        cc.labels.push_back(extra.labels.front());
        cc.bits = std::move(bits);
        cc.observed = prefix.observed & extra.observed;
        cc.positives = positives;
        out.columns.push_back(std::move(cc));
        next.push_back({std::move(cand), out.columns.size() - 1});
        ++local.emitted;
      }
    }
    level = std::move(next);
  }

  if (stats) *stats = local;
  return out;
}

}  // namespace hnet
