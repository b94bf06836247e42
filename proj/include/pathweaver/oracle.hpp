// Copyright 2026 The Pathweaver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force pathway enumeration. Deliberately shares no code with the rule
// engine: validity is checked directly on the set of selected items so the
// two can be compared against each other.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "pathweaver/error.hpp"
#include "pathweaver/model.hpp"

namespace pathweaver {

inline constexpr std::size_t kMaxEnumeratedOptions = 24;

/// A complete pathway: the selected items, sorted by id.
struct Pathway {
  std::vector<ItemId> selected;

  friend bool operator==(const Pathway&, const Pathway&) = default;
  friend auto operator<=>(const Pathway&, const Pathway&) = default;
};

struct Enumeration {
  std::vector<Pathway> pathways;  // the `limit` lexicographically smallest
  bool truncated = false;
  std::uint64_t total = 0;  // number of valid pathways overall
};

/// True iff the item set `selected` (indexed like Model::items()) is a valid
/// complete pathway.
inline bool is_valid_pathway(const Model& model, const std::vector<char>& selected) {
  const auto& items = model.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& item = items[i];
    const bool in = selected[i] != 0;
    const std::size_t parent = model.parent_index(i);
    if (in && parent != Model::npos && !selected[parent]) return false;
    if (!is_field(item.kind)) continue;
    if (item.common && !in) return false;
    if (!in) continue;
    std::uint32_t counted = 0;
    bool any = false;
    for (std::size_t c : model.child_indices(i)) {
      if (!selected[c]) {
        if (items[c].common) return false;
        continue;
      }
      any = true;
      if (!items[c].common) ++counted;
    }
    if (!any) return false;
    if (item.cardinality && (counted < item.cardinality->min || counted > item.cardinality->max)) {
      return false;
    }
  }
  for (const Constraint& c : model.constraints()) {
    std::size_t s = model.index_of(c.source), t = model.index_of(c.target);
    if (s == Model::npos || t == Model::npos) continue;
    if (!selected[s]) continue;
    const bool excl = c.kind == ConstraintKind::ExcOptOpt || c.kind == ConstraintKind::ExcOptField ||
                      c.kind == ConstraintKind::ExcFieldField;
    if (excl == (selected[t] != 0)) return false;
  }
  return true;
}

namespace detail {

inline void check_enumerable(const Model& model) {
  std::size_t options = 0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (model.parent_index(i) != Model::npos) ++options;
  }
  if (options > kMaxEnumeratedOptions) {
    throw Error(ErrorCode::ModelTooLarge,
                "model has " + std::to_string(options) + " options; enumeration is capped at " +
                    std::to_string(kMaxEnumeratedOptions));
  }
}

// Calls `visit` with the selection vector of every valid pathway. Options
// are enumerated as bit subsets; a top-level field is selected iff it is
// common or one of its options is. Stops early when `visit` returns false.
inline void for_each_pathway(const Model& model, const std::function<bool(const std::vector<char>&)>& visit) {
  check_enumerable(model);
  if (!validate_model(model).empty()) {
    throw Error(ErrorCode::InvalidModel, "cannot enumerate pathways of a model with defects");
  }
  std::vector<std::size_t> options, roots;
  for (std::size_t i = 0; i < model.size(); ++i) {
    (model.parent_index(i) != Model::npos ? options : roots).push_back(i);
  }
  std::vector<char> selected(model.size(), 0);
  const std::uint64_t subsets = std::uint64_t{1} << options.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    for (std::size_t b = 0; b < options.size(); ++b) selected[options[b]] = (mask >> b) & 1;
    for (std::size_t r : roots) {
      bool on = model.item(r).common;
      for (std::size_t c : model.child_indices(r)) on = on || selected[c];
      selected[r] = on;
    }
    if (is_valid_pathway(model, selected) && !visit(selected)) return;
  }
}

inline Pathway to_pathway(const Model& model, const std::vector<char>& selected) {
  Pathway p;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (selected[i]) p.selected.push_back(model.item(i).id);
  }
  std::sort(p.selected.begin(), p.selected.end());
  return p;
}

}  // namespace detail

/// All valid pathways, sorted lexicographically; at most `limit` are
/// returned and `truncated` is set when more exist.
inline Enumeration enumerate_pathways(const Model& model, std::size_t limit) {
  if (limit == 0) throw Error(ErrorCode::InvalidSelection, "limit must be positive");
  Enumeration out;
  std::priority_queue<Pathway> smallest;  // max-heap of the best `limit`
  detail::for_each_pathway(model, [&](const std::vector<char>& sel) {
    ++out.total;
    Pathway p = detail::to_pathway(model, sel);
    if (smallest.size() < limit) {
      smallest.push(std::move(p));
    } else if (p < smallest.top()) {
      smallest.pop();
      smallest.push(std::move(p));
    }
    return true;
  });
  out.pathways.reserve(smallest.size());
  while (!smallest.empty()) {
    out.pathways.push_back(smallest.top());
    smallest.pop();
  }
  std::reverse(out.pathways.begin(), out.pathways.end());
  out.truncated = out.total > out.pathways.size();
  return out;
}

struct DeadItems {
  std::vector<ItemId> items;  // sorted by id
  bool void_model = false;
};

/// Items that appear in no valid pathway. For a void model every item is
/// dead and `void_model` is set.
inline DeadItems find_dead_items(const Model& model) {
  std::vector<std::uint64_t> seen(model.size(), 0);
  std::uint64_t total = 0;
  detail::for_each_pathway(model, [&](const std::vector<char>& sel) {
    ++total;
    for (std::size_t i = 0; i < sel.size(); ++i) seen[i] += sel[i] ? 1 : 0;
    return true;
  });
  DeadItems out;
  out.void_model = total == 0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (seen[i] == 0) out.items.push_back(model.item(i).id);
  }
  std::sort(out.items.begin(), out.items.end());
  return out;
}

inline bool is_void(const Model& model) {
  bool found = false;
  detail::for_each_pathway(model, [&](const std::vector<char>&) {
    found = true;
    return false;
  });
  return !found;
}

}  // namespace pathweaver
