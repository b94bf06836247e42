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

// Variability model of a study area: fields, options, cardinalities,
// commonality and the six require/exclude dependency constraints.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pathweaver/error.hpp"

namespace pathweaver {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

/// Identifier of an item. Whitespace is trimmed and internal runs collapse to
/// a single space; comparison is exact after that (case-sensitive).
class ItemId {
 public:
  ItemId() = default;

  explicit ItemId(std::string_view raw) : name_(normalize(raw)) {
    if (name_.empty()) {
      throw Error(ErrorCode::InvalidId, "item id is empty after normalization");
    }
  }

  static std::string normalize(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
      if (is_space(c)) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
    return out;
  }

  const std::string& str() const noexcept { return name_; }
  bool empty() const noexcept { return name_.empty(); }

  friend auto operator<=>(const ItemId&, const ItemId&) = default;
  friend bool operator==(const ItemId&, const ItemId&) = default;

 private:
  std::string name_;
};

enum class ItemKind : std::uint8_t { Field, Option, FieldAndOption };

constexpr bool is_field(ItemKind k) {
  return k == ItemKind::Field || k == ItemKind::FieldAndOption;
}
constexpr bool is_option(ItemKind k) {
  return k == ItemKind::Option || k == ItemKind::FieldAndOption;
}

inline std::string_view to_string(ItemKind k) {
  switch (k) {
    case ItemKind::Field: return "field";
    case ItemKind::Option: return "option";
    case ItemKind::FieldAndOption: return "field_and_option";
  }
  return "?";
}

/// Bounds on the number of selected non-common options of a field.
struct Cardinality {
  std::uint32_t min = 1;
  std::uint32_t max = 1;

  friend bool operator==(const Cardinality&, const Cardinality&) = default;
  friend auto operator<=>(const Cardinality&, const Cardinality&) = default;
};

struct Item {
  ItemId id;
  ItemKind kind = ItemKind::Field;
  bool common = false;
  std::optional<ItemId> parent;            // present iff kind includes Option
  std::optional<Cardinality> cardinality;  // present iff kind includes Field

  friend bool operator==(const Item&, const Item&) = default;
};

enum class ConstraintKind : std::uint8_t {
  ReqOptOpt,
  ExcOptOpt,
  ReqOptField,
  ExcOptField,
  ReqFieldField,
  ExcFieldField,
};

inline constexpr ConstraintKind kAllConstraintKinds[] = {
    ConstraintKind::ReqOptOpt,     ConstraintKind::ExcOptOpt,
    ConstraintKind::ReqOptField,   ConstraintKind::ExcOptField,
    ConstraintKind::ReqFieldField, ConstraintKind::ExcFieldField,
};

/// Lower-layer predicate name of a constraint kind.
inline std::string_view predicate_name(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::ReqOptOpt: return "requires_option_option";
    case ConstraintKind::ExcOptOpt: return "excludes_option_option";
    case ConstraintKind::ReqOptField: return "requires_option_field";
    case ConstraintKind::ExcOptField: return "excludes_option_field";
    case ConstraintKind::ReqFieldField: return "requires_field_field";
    case ConstraintKind::ExcFieldField: return "excludes_field_field";
  }
  return "?";
}

constexpr bool is_exclusion(ConstraintKind k) {
  return k == ConstraintKind::ExcOptOpt || k == ConstraintKind::ExcOptField ||
         k == ConstraintKind::ExcFieldField;
}

constexpr bool source_is_field(ConstraintKind k) {
  return k == ConstraintKind::ReqFieldField || k == ConstraintKind::ExcFieldField;
}
constexpr bool target_is_field(ConstraintKind k) {
  return k != ConstraintKind::ReqOptOpt && k != ConstraintKind::ExcOptOpt;
}

struct Constraint {
  ConstraintKind kind = ConstraintKind::ReqOptOpt;
  ItemId source;
  ItemId target;

  friend bool operator==(const Constraint&, const Constraint&) = default;
  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

}  // namespace pathweaver

template <>
struct std::hash<pathweaver::ItemId> {
  std::size_t operator()(const pathweaver::ItemId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

namespace pathweaver {

/// Immutable variability model. Construction accepts arbitrary item lists
/// (duplicates, dangling references) so that validate_model can report them;
/// the resolved index uses the first occurrence of each id and skips
/// references that do not resolve.
class Model {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Model() = default;

  Model(std::optional<ItemId> study_area, std::vector<Item> items,
        std::vector<Constraint> constraints)
      : study_area_(std::move(study_area)),
        items_(std::move(items)),
        constraints_(std::move(constraints)) {
    index_.reserve(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
      index_.try_emplace(items_[i].id, i);
    }
    parent_.assign(items_.size(), npos);
    children_.resize(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (index_.at(items_[i].id) != i || !items_[i].parent) continue;
      auto it = index_.find(*items_[i].parent);
      if (it == index_.end()) continue;
      parent_[i] = it->second;
      children_[it->second].push_back(i);
    }
  }

  const std::optional<ItemId>& study_area() const noexcept { return study_area_; }
  const std::vector<Item>& items() const noexcept { return items_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  std::size_t size() const noexcept { return items_.size(); }

  const Item& item(std::size_t index) const { return items_.at(index); }

  std::size_t index_of(const ItemId& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? npos : it->second;
  }

  const Item* find(const ItemId& id) const {
    std::size_t i = index_of(id);
    return i == npos ? nullptr : &items_[i];
  }

  /// Resolved parent index, or npos.
  std::size_t parent_index(std::size_t index) const { return parent_.at(index); }

  /// Resolved children in declaration order.
  const std::vector<std::size_t>& child_indices(std::size_t index) const {
    return children_.at(index);
  }

  /// Structural equality, insensitive to item and constraint order.
  friend bool operator==(const Model& a, const Model& b) {
    if (a.study_area_ != b.study_area_) return false;
    if (a.items_.size() != b.items_.size()) return false;
    auto sorted_items = [](const std::vector<Item>& v) {
      std::vector<const Item*> out;
      for (const auto& it : v) out.push_back(&it);
      std::sort(out.begin(), out.end(),
                [](const Item* x, const Item* y) { return x->id < y->id; });
      return out;
    };
    auto ia = sorted_items(a.items_);
    auto ib = sorted_items(b.items_);
    for (std::size_t i = 0; i < ia.size(); ++i) {
      if (!(*ia[i] == *ib[i])) return false;
    }
    auto sorted_constraints = [](std::vector<Constraint> v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      return v;
    };
    return sorted_constraints(a.constraints_) == sorted_constraints(b.constraints_);
  }

 private:
  std::optional<ItemId> study_area_;
  std::vector<Item> items_;
  std::vector<Constraint> constraints_;
  std::unordered_map<ItemId, std::size_t> index_;
  std::vector<std::size_t> parent_;
  std::vector<std::vector<std::size_t>> children_;
};

// Defect codes, in reporting order. The last two are produced only while
// assembling a model from facts.
enum class DefectCode : std::uint8_t {
  DuplicateId,
  UnknownItem,
  NotAField,
  NotAnOption,
  DuplicateParent,
  ParentCycle,
  CardinalityInverted,
  MaxExceedsOptions,
  SelfConstraint,
  KindMismatch,
  MissingRoot,
  ConflictingFact,
};

inline std::string_view to_string(DefectCode code) {
  switch (code) {
    case DefectCode::DuplicateId: return "DuplicateId";
    case DefectCode::UnknownItem: return "UnknownItem";
    case DefectCode::NotAField: return "NotAField";
    case DefectCode::NotAnOption: return "NotAnOption";
    case DefectCode::DuplicateParent: return "DuplicateParent";
    case DefectCode::ParentCycle: return "ParentCycle";
    case DefectCode::CardinalityInverted: return "CardinalityInverted";
    case DefectCode::MaxExceedsOptions: return "MaxExceedsOptions";
    case DefectCode::SelfConstraint: return "SelfConstraint";
    case DefectCode::KindMismatch: return "KindMismatch";
    case DefectCode::MissingRoot: return "MissingRoot";
    case DefectCode::ConflictingFact: return "ConflictingFact";
  }
  return "?";
}

struct ModelDefect {
  DefectCode code;
  std::vector<ItemId> ids;
  std::string message;

  friend bool operator==(const ModelDefect&, const ModelDefect&) = default;
  friend auto operator<=>(const ModelDefect& a, const ModelDefect& b) {
    return std::tie(a.code, a.ids, a.message) <=> std::tie(b.code, b.ids, b.message);
  }
};

inline void sort_defects(std::vector<ModelDefect>& defects) {
  std::sort(defects.begin(), defects.end());
  defects.erase(std::unique(defects.begin(), defects.end()), defects.end());
}

/// Number of non-common options declared under the item at `index`.
inline std::size_t non_common_child_count(const Model& model, std::size_t index) {
  std::size_t n = 0;
  for (std::size_t c : model.child_indices(index)) {
    if (!model.item(c).common) ++n;
  }
  return n;
}

/// Checks every Model and Item invariant. Returns defects sorted by code then
/// id; an empty result means the model is well formed.
inline std::vector<ModelDefect> validate_model(const Model& model) {
  std::vector<ModelDefect> out;
  auto add = [&out](DefectCode code, std::vector<ItemId> ids, std::string msg) {
    out.push_back({code, std::move(ids), std::move(msg)});
  };

  const auto& items = model.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& item = items[i];
    const std::string& name = item.id.str();
    if (model.index_of(item.id) != i) {
      add(DefectCode::DuplicateId, {item.id}, "item '" + name + "' is declared more than once");
      continue;
    }

    if (item.parent) {
      const Item* parent = model.find(*item.parent);
      if (!parent) {
        add(DefectCode::UnknownItem, {item.id, *item.parent},
            "parent '" + item.parent->str() + "' of '" + name + "' does not exist");
      } else if (!is_field(parent->kind)) {
        add(DefectCode::NotAField, {item.id, *item.parent},
            "parent '" + item.parent->str() + "' of '" + name + "' is not a field");
      }
      if (!is_option(item.kind)) {
        add(DefectCode::NotAnOption, {item.id},
            "'" + name + "' has a parent field but is not an option");
      }
    } else if (is_option(item.kind)) {
      add(DefectCode::UnknownItem, {item.id},
          "option '" + name + "' does not belong to any field");
    }

    if (is_field(item.kind)) {
      if (!item.cardinality) {
        add(DefectCode::KindMismatch, {item.id}, "field '" + name + "' has no cardinality");
      } else {
        const Cardinality& card = *item.cardinality;
        if (card.min > card.max) {
          add(DefectCode::CardinalityInverted, {item.id},
              "field '" + name + "' has min " + std::to_string(card.min) +
                  " greater than max " + std::to_string(card.max));
        }
        std::size_t available = non_common_child_count(model, i);
        if (card.max > available) {
          add(DefectCode::MaxExceedsOptions, {item.id},
              "field '" + name + "' allows " + std::to_string(card.max) +
                  " selections but has " + std::to_string(available) +
                  " non-common options");
        }
      }
    } else if (item.cardinality) {
      add(DefectCode::NotAField, {item.id},
          "'" + name + "' carries a cardinality but is not a field");
    }
  }

  // Parent cycles: walk up from every item; a walk longer than the item count
  // or revisiting the start means the start sits on a cycle.
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (model.index_of(items[i].id) != i) continue;
    std::size_t cur = model.parent_index(i);
    std::size_t steps = 0;
    while (cur != Model::npos && cur != i && steps <= items.size()) {
      cur = model.parent_index(cur);
      ++steps;
    }
    if (cur == i) {
      add(DefectCode::ParentCycle, {items[i].id},
          "'" + items[i].id.str() + "' is its own ancestor");
    }
  }

  for (const Constraint& c : model.constraints()) {
    const std::string pred(predicate_name(c.kind));
    if (c.source == c.target) {
      add(DefectCode::SelfConstraint, {c.source},
          pred + " relates '" + c.source.str() + "' to itself");
      continue;
    }
    const Item* src = model.find(c.source);
    const Item* dst = model.find(c.target);
    for (const auto& [end, ptr] : {std::pair{&c.source, src}, std::pair{&c.target, dst}}) {
      if (!ptr) {
        add(DefectCode::UnknownItem, {*end},
            pred + " refers to unknown item '" + end->str() + "'");
      }
    }
    if (!src || !dst) continue;
    bool src_ok = source_is_field(c.kind) ? is_field(src->kind) : is_option(src->kind);
    bool dst_ok = target_is_field(c.kind) ? is_field(dst->kind) : is_option(dst->kind);
    if (!src_ok || !dst_ok) {
      add(DefectCode::KindMismatch, {c.source, c.target},
          pred + "('" + c.source.str() + "', '" + c.target.str() +
              "') has endpoints of the wrong kind");
    }
  }

  sort_defects(out);
  return out;
}

/// Options of `field` in declaration order.
inline std::vector<ItemId> children_of(const Model& model, const ItemId& field) {
  std::size_t index = model.index_of(field);
  if (index == Model::npos) {
    throw Error(ErrorCode::UnknownItem, "unknown item '" + field.str() + "'");
  }
  if (!is_field(model.item(index).kind)) {
    throw Error(ErrorCode::NotAField, "'" + field.str() + "' is not a field");
  }
  std::vector<ItemId> out;
  for (std::size_t c : model.child_indices(index)) out.push_back(model.item(c).id);
  return out;
}

}  // namespace pathweaver
