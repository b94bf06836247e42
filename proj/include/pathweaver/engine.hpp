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

// Selection rules over a Model.
//
// Propagation is forward chaining over decision literals (item selected /
// item not selected). Every rule has only literals in its premise, so the
// set of derived literals is the least fixpoint and does not depend on the
// order in which rules fire. An item that ends up with both literals is a
// conflict; its recorded decision is whichever literal came first, and both
// derivations are kept for explanation.
//
// Rules that propagate:
//   R1-R6  require / exclude constraints; every exclusion also fires from
//          its target side (selecting either end rules out the other)
//   R7     a selected option selects its field
//   R8     a selected field whose other options are all excluded selects the
//          last remaining one (unit case of "some option is selected")
//   R9     an excluded field excludes its options
//   R10    a selected field selects its common options
//   R11    a common field is selected
//   R12    once max(f) non-common options of f are selected, every other
//          non-common option of f is excluded
// R13 (the lower bound) and the general case of R8 are only checked when a
// selection is validated as complete. The lower bound reads as
// count >= min; the published inequality would forbid reaching min at all.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "pathweaver/error.hpp"
#include "pathweaver/model.hpp"

namespace pathweaver {

enum class Decision : std::uint8_t { Undecided, Selected, NotSelected };

inline std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Undecided: return "undecided";
    case Decision::Selected: return "selected";
    case Decision::NotSelected: return "notselected";
  }
  return "?";
}

constexpr Decision opposite(Decision d) {
  return d == Decision::Selected ? Decision::NotSelected : Decision::Selected;
}

// Init and UserChoice mark seeded decisions; Incomplete only tags the
// completeness finding of validate_complete.
enum class Rule : std::uint8_t {
  Init,
  UserChoice,
  R1,
  R2,
  R3,
  R4,
  R5,
  R6,
  R7,
  R8,
  R9,
  R10,
  R11,
  R12,
  R13,
  Incomplete,
};

inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::Init: return "init";
    case Rule::UserChoice: return "user";
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    case Rule::R4: return "R4";
    case Rule::R5: return "R5";
    case Rule::R6: return "R6";
    case Rule::R7: return "R7";
    case Rule::R8: return "R8";
    case Rule::R9: return "R9";
    case Rule::R10: return "R10";
    case Rule::R11: return "R11";
    case Rule::R12: return "R12";
    case Rule::R13: return "R13";
    case Rule::Incomplete: return "incomplete";
  }
  return "?";
}

constexpr Rule rule_for(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::ReqOptOpt: return Rule::R1;
    case ConstraintKind::ExcOptOpt: return Rule::R2;
    case ConstraintKind::ReqOptField: return Rule::R3;
    case ConstraintKind::ExcOptField: return Rule::R4;
    case ConstraintKind::ReqFieldField: return Rule::R5;
    case ConstraintKind::ExcFieldField: return Rule::R6;
  }
  return Rule::Init;
}

struct Derivation {
  Rule rule = Rule::Init;
  ItemId item;
  Decision state = Decision::Undecided;
  std::vector<ItemId> premises;

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

/// An item for which both decisions were derived. `standing` produced the
/// recorded decision; `opposing` is the first derivation of the other one.
struct Conflict {
  ItemId item;
  Derivation standing;
  Derivation opposing;
};

namespace detail {
class Fixpoint;
}

/// Three-valued assignment over a model's items, indexed like Model::items().
class SelectionState {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  SelectionState() = default;
  explicit SelectionState(std::size_t n)
      : decisions_(n, Decision::Undecided), reasons_(n, npos) {}

  std::size_t size() const noexcept { return decisions_.size(); }
  Decision at(std::size_t index) const { return decisions_.at(index); }
  const std::vector<Decision>& decisions() const noexcept { return decisions_; }

  /// Derivation that produced the current decision of `index`, if any.
  const Derivation* reason(std::size_t index) const {
    std::size_t r = reasons_.at(index);
    return r == npos ? nullptr : &trace_[r];
  }

  const std::vector<Derivation>& trace() const noexcept { return trace_; }
  const std::vector<Conflict>& conflicts() const noexcept { return conflicts_; }
  bool consistent() const noexcept { return conflicts_.empty(); }

  /// Takes `decisions` as given (no propagation), each recorded as an Init
  /// derivation.
  static SelectionState from_assignment(const Model& model, std::vector<Decision> decisions) {
    if (decisions.size() != model.size()) {
      throw Error(ErrorCode::InvalidSelection, "selection state does not match the model");
    }
    SelectionState st(model.size());
    st.decisions_ = std::move(decisions);
    for (std::size_t i = 0; i < st.decisions_.size(); ++i) {
      if (st.decisions_[i] == Decision::Undecided) continue;
      st.reasons_[i] = st.trace_.size();
      st.trace_.push_back({Rule::Init, model.item(i).id, st.decisions_[i], {}});
    }
    return st;
  }

  std::size_t decided_count() const {
    return static_cast<std::size_t>(std::count_if(decisions_.begin(), decisions_.end(),
                                                  [](Decision d) { return d != Decision::Undecided; }));
  }

 private:
  friend class detail::Fixpoint;

  std::vector<Decision> decisions_;
  std::vector<std::size_t> reasons_;
  std::vector<Derivation> trace_;
  std::vector<Conflict> conflicts_;
};

inline Decision state_of(const Model& model, const SelectionState& state, const ItemId& id) {
  std::size_t i = model.index_of(id);
  if (i == Model::npos) throw Error(ErrorCode::UnknownItem, "unknown item '" + id.str() + "'");
  return state.at(i);
}

struct PropagateOptions {
  // When set, pending rule applications are drawn in a random order seeded
  // by this value instead of by (rule, item id). Only the trace order and
  // which side of a conflict is recorded first may change.
  std::optional<std::uint64_t> shuffle_seed;
};

namespace detail {

struct Edge {
  ConstraintKind kind;
  std::size_t other;
};

class Fixpoint {
 public:
  Fixpoint(const Model& model, SelectionState state, const PropagateOptions& options)
      : model_(model), st_(std::move(state)) {
    const std::size_t n = model_.size();
    if (st_.size() != n) {
      throw Error(ErrorCode::InvalidSelection, "selection state does not match the model");
    }
    if (options.shuffle_seed) rng_.emplace(*options.shuffle_seed);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return model_.item(a).id < model_.item(b).id;
    });
    rank_.resize(n);
    for (std::size_t r = 0; r < n; ++r) rank_[order[r]] = r;

    outgoing_.resize(n);
    incoming_.resize(n);
    for (const Constraint& c : model_.constraints()) {
      std::size_t s = model_.index_of(c.source), t = model_.index_of(c.target);
      if (s == Model::npos || t == Model::npos) continue;
      outgoing_[s].push_back({c.kind, t});
      incoming_[t].push_back({c.kind, s});
    }

    pos_.assign(n, 0);
    neg_.assign(n, 0);
    pos_reason_.assign(n, SelectionState::npos);
    neg_reason_.assign(n, SelectionState::npos);
    for (std::size_t i = 0; i < n; ++i) {
      if (st_.decisions_[i] == Decision::Selected) {
        pos_[i] = 1;
        pos_reason_[i] = st_.reasons_[i];
      } else if (st_.decisions_[i] == Decision::NotSelected) {
        neg_[i] = 1;
        neg_reason_[i] = st_.reasons_[i];
      }
    }
  }

  /// Adds a decision with no premises (a user choice or an assumption).
  void seed(std::size_t item, Decision value, Rule rule) {
    apply({rule, item, value, {}});
  }

  SelectionState run() {
    for (std::size_t i = 0; i < model_.size(); ++i) {
      if (pos_[i]) emit(i, Decision::Selected);
      if (neg_[i]) emit(i, Decision::NotSelected);
      const Item& it = model_.item(i);
      if (is_field(it.kind)) {
        if (it.common) push({Rule::R11, i, Decision::Selected, {}});
        emit_r12(i);
      }
    }
    while (!pending_empty()) apply(pop());

    st_.conflicts_.clear();
    std::vector<std::size_t> clashing;
    for (std::size_t i = 0; i < model_.size(); ++i) {
      if (pos_[i] && neg_[i]) clashing.push_back(i);
    }
    std::sort(clashing.begin(), clashing.end(),
              [&](std::size_t a, std::size_t b) { return rank_[a] < rank_[b]; });
    for (std::size_t i : clashing) {
      std::size_t standing = st_.reasons_[i];
      std::size_t opposing =
          st_.decisions_[i] == Decision::Selected ? neg_reason_[i] : pos_reason_[i];
      st_.conflicts_.push_back({model_.item(i).id, derivation_at(standing), derivation_at(opposing)});
    }
    return std::move(st_);
  }

 private:
  struct Candidate {
    Rule rule;
    std::size_t target;
    Decision value;
    std::vector<std::size_t> premises;
  };

  struct Later {
    const std::vector<std::size_t>* rank;
    auto key(const Candidate& c) const {
      std::vector<std::size_t> prem;
      prem.reserve(c.premises.size());
      for (std::size_t p : c.premises) prem.push_back((*rank)[p]);
      return std::make_tuple(c.rule, (*rank)[c.target], c.value, prem);
    }
    bool operator()(const Candidate& a, const Candidate& b) const { return key(a) > key(b); }
  };

  Derivation derivation_at(std::size_t index) const {
    if (index == SelectionState::npos) return {};
    return st_.trace_[index];
  }

  bool pending_empty() const { return rng_ ? shuffled_.empty() : heap_.empty(); }

  void push(Candidate c) {
    std::vector<char>& have = c.value == Decision::Selected ? pos_ : neg_;
    if (have[c.target]) return;
    if (rng_) {
      shuffled_.push_back(std::move(c));
    } else {
      heap_.push(std::move(c));
    }
  }

  Candidate pop() {
    if (rng_) {
      std::uniform_int_distribution<std::size_t> pick(0, shuffled_.size() - 1);
      std::size_t k = pick(*rng_);
      std::swap(shuffled_[k], shuffled_.back());
      Candidate c = std::move(shuffled_.back());
      shuffled_.pop_back();
      return c;
    }
    Candidate c = heap_.top();
    heap_.pop();
    return c;
  }

  void apply(const Candidate& c) {
    const bool positive = c.value == Decision::Selected;
    std::vector<char>& have = positive ? pos_ : neg_;
    if (have[c.target]) return;

    Derivation d{c.rule, model_.item(c.target).id, c.value, {}};
    d.premises.reserve(c.premises.size());
    for (std::size_t p : c.premises) d.premises.push_back(model_.item(p).id);
    st_.trace_.push_back(std::move(d));
    const std::size_t at = st_.trace_.size() - 1;

    have[c.target] = 1;
    (positive ? pos_reason_ : neg_reason_)[c.target] = at;
    if (st_.decisions_[c.target] == Decision::Undecided) {
      st_.decisions_[c.target] = c.value;
      st_.reasons_[c.target] = at;
    }
    emit(c.target, c.value);
  }

  void emit(std::size_t i, Decision value) {
    const Item& it = model_.item(i);
    const std::size_t parent = model_.parent_index(i);
    if (value == Decision::Selected) {
      for (const Edge& e : outgoing_[i]) {
        Decision to = is_exclusion(e.kind) ? Decision::NotSelected : Decision::Selected;
        push({rule_for(e.kind), e.other, to, {i}});
      }
      for (const Edge& e : incoming_[i]) {
        if (is_exclusion(e.kind)) push({rule_for(e.kind), e.other, Decision::NotSelected, {i}});
      }
      if (parent != Model::npos) {
        push({Rule::R7, parent, Decision::Selected, {i}});
        if (!it.common) emit_r12(parent);
      }
      if (is_field(it.kind)) {
        for (std::size_t c : model_.child_indices(i)) {
          if (model_.item(c).common) push({Rule::R10, c, Decision::Selected, {i}});
        }
        emit_r8(i);
      }
    } else {
      if (is_field(it.kind)) {
        for (std::size_t c : model_.child_indices(i)) push({Rule::R9, c, Decision::NotSelected, {i}});
      }
      if (parent != Model::npos && pos_[parent]) emit_r8(parent);
    }
  }

  // Selected field: when every option but one is excluded, the remaining one
  // is selected. With every option excluded, each one is derived selected
  // from the others, which surfaces as a conflict.
  void emit_r8(std::size_t field) {
    const auto& children = model_.child_indices(field);
    if (children.empty()) return;
    std::size_t excluded = 0;
    for (std::size_t c : children) excluded += neg_[c] ? 1 : 0;
    if (excluded + 1 < children.size()) return;
    for (std::size_t c : children) {
      if (excluded != children.size() && neg_[c]) continue;
      std::vector<std::size_t> premises{field};
      for (std::size_t o : children) {
        if (o != c) premises.push_back(o);
      }
      push({Rule::R8, c, Decision::Selected, std::move(premises)});
    }
  }

  // An option is excluded once max(f) of its non-common siblings are selected.
  void emit_r12(std::size_t field) {
    const Item& f = model_.item(field);
    if (!f.cardinality) return;
    const std::size_t cap = f.cardinality->max;
    std::vector<std::size_t> selected;
    for (std::size_t c : model_.child_indices(field)) {
      if (!model_.item(c).common && pos_[c]) selected.push_back(c);
    }
    if (selected.size() < cap) return;
    for (std::size_t c : model_.child_indices(field)) {
      if (model_.item(c).common || neg_[c]) continue;
      std::vector<std::size_t> premises;
      for (std::size_t s : selected) {
        if (s != c && premises.size() < cap) premises.push_back(s);
      }
      if (premises.size() < cap) continue;
      push({Rule::R12, c, Decision::NotSelected, std::move(premises)});
    }
  }

  const Model& model_;
  SelectionState st_;
  std::vector<std::size_t> rank_;
  std::vector<std::vector<Edge>> outgoing_, incoming_;
  std::vector<char> pos_, neg_;
  std::vector<std::size_t> pos_reason_, neg_reason_;
  std::optional<std::mt19937_64> rng_;
  std::vector<Candidate> shuffled_;
  std::priority_queue<Candidate, std::vector<Candidate>, Later> heap_{Later{&rank_}};
};

inline std::size_t require_item(const Model& model, const ItemId& id) {
  std::size_t i = model.index_of(id);
  if (i == Model::npos) throw Error(ErrorCode::UnknownItem, "unknown item '" + id.str() + "'");
  return i;
}

inline void require_consistent(const SelectionState& state) {
  if (!state.consistent()) {
    throw Error(ErrorCode::PendingConflict, "selection state carries an unresolved conflict");
  }
}

}  // namespace detail

/// Least fixpoint of the propagation rules over `state`. Conflicts are
/// reported in the returned state, never thrown.
inline SelectionState propagate(const Model& model, const SelectionState& state,
                                const PropagateOptions& options = {}) {
  detail::require_consistent(state);
  return detail::Fixpoint(model, state, options).run();
}

/// Every item undecided, then propagated: common fields are selected (R11)
/// and everything they force follows.
inline SelectionState initial_state(const Model& model, const PropagateOptions& options = {}) {
  if (auto defects = validate_model(model); !defects.empty()) {
    throw Error(ErrorCode::InvalidModel,
                "model has " + std::to_string(defects.size()) + " defect(s): " + defects.front().message);
  }
  return detail::Fixpoint(model, SelectionState(model.size()), options).run();
}

/// Adds each (item, decision) as a premise-free derivation tagged `rule`, then
/// propagates. An assumption opposite to a decided item is a conflict.
inline SelectionState assume(const Model& model, const SelectionState& state,
                             const std::vector<std::pair<ItemId, Decision>>& assumptions,
                             Rule rule = Rule::Init, const PropagateOptions& options = {}) {
  detail::require_consistent(state);
  detail::Fixpoint fp(model, state, options);
  for (const auto& [id, value] : assumptions) {
    std::size_t i = detail::require_item(model, id);
    if (value == Decision::Undecided) continue;
    fp.seed(i, value, rule);
  }
  return fp.run();
}

/// Derivations leading to `target` (inclusive), in trace order. Each
/// premise is resolved to its latest derivation made before the one that
/// used it.
inline std::vector<Derivation> explain(const SelectionState& state, const Derivation& target) {
  const auto& trace = state.trace();
  std::size_t at = trace.size();
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace[k] == target) {
      at = k;
      break;
    }
  }
  if (at == trace.size()) return {target};
  std::vector<char> keep(trace.size(), 0);
  std::vector<std::size_t> stack{at};
  while (!stack.empty()) {
    std::size_t k = stack.back();
    stack.pop_back();
    if (keep[k]) continue;
    keep[k] = 1;
    for (const ItemId& p : trace[k].premises) {
      for (std::size_t j = k; j-- > 0;) {
        if (trace[j].item == p) {
          stack.push_back(j);
          break;
        }
      }
    }
  }
  std::vector<Derivation> out;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (keep[k]) out.push_back(trace[k]);
  }
  return out;
}

struct FieldCount {
  ItemId field;
  std::size_t n = 0;  // selected non-common options
};

inline std::size_t selected_non_common(const Model& model, const SelectionState& state,
                                       std::size_t field) {
  std::size_t n = 0;
  for (std::size_t c : model.child_indices(field)) {
    if (!model.item(c).common && state.at(c) == Decision::Selected) ++n;
  }
  return n;
}

inline FieldCount field_count(const Model& model, const SelectionState& state, const ItemId& field) {
  std::size_t i = detail::require_item(model, field);
  if (!is_field(model.item(i).kind)) {
    throw Error(ErrorCode::NotAField, "'" + field.str() + "' is not a field");
  }
  return {field, selected_non_common(model, state, i)};
}

namespace detail {

inline bool at_capacity(const Model& model, const SelectionState& state, std::size_t option) {
  const Item& it = model.item(option);
  std::size_t parent = model.parent_index(option);
  if (it.common || parent == Model::npos) return false;
  const auto& card = model.item(parent).cardinality;
  return card && selected_non_common(model, state, parent) >= card->max;
}

}  // namespace detail

/// Selects an undecided item on the user's behalf and propagates. The input
/// state is left untouched; a conflict is reported in the returned state.
inline SelectionState choose(const Model& model, const SelectionState& state, const ItemId& item) {
  std::size_t i = detail::require_item(model, item);
  detail::require_consistent(state);
  if (state.at(i) != Decision::Selected && detail::at_capacity(model, state, i)) {
    throw Error(ErrorCode::BlockedByMax,
                "'" + item.str() + "' cannot be selected: its field already has the maximum number of options");
  }
  if (state.at(i) != Decision::Undecided) {
    throw Error(ErrorCode::AlreadyDecided,
                "'" + item.str() + "' is already " + std::string(to_string(state.at(i))));
  }
  detail::Fixpoint fp(model, state, {});
  fp.seed(i, Decision::Selected, Rule::UserChoice);
  return fp.run();
}

/// Excludes an undecided item from the pathway and propagates.
inline SelectionState exclude(const Model& model, const SelectionState& state, const ItemId& item) {
  std::size_t i = detail::require_item(model, item);
  detail::require_consistent(state);
  if (model.item(i).common) {
    throw Error(ErrorCode::ExcludesCommon,
                "'" + item.str() + "' is common and must be part of every pathway");
  }
  if (state.at(i) != Decision::Undecided) {
    throw Error(ErrorCode::AlreadyDecided,
                "'" + item.str() + "' is already " + std::string(to_string(state.at(i))));
  }
  detail::Fixpoint fp(model, state, {});
  fp.seed(i, Decision::NotSelected, Rule::UserChoice);
  return fp.run();
}

enum class BlockReason : std::uint8_t { None, MaxReached, ParentNotSelected };

inline std::string_view to_string(BlockReason r) {
  switch (r) {
    case BlockReason::None: return "none";
    case BlockReason::MaxReached: return "max-reached";
    case BlockReason::ParentNotSelected: return "parent-notselected";
  }
  return "?";
}

struct Choice {
  ItemId item;
  bool selectable = true;
  BlockReason reason = BlockReason::None;

  friend bool operator==(const Choice&, const Choice&) = default;
};

/// Undecided items, each Selectable or Blocked, sorted by id. Options that
/// were excluded only because their field reached its maximum are listed as
/// Blocked(max-reached) too, so a caller can show them as disabled.
inline std::vector<Choice> available_choices(const Model& model, const SelectionState& state) {
  std::vector<Choice> out;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Decision d = state.at(i);
    const std::size_t parent = model.parent_index(i);
    if (d == Decision::Undecided) {
      if (detail::at_capacity(model, state, i)) {
        out.push_back({model.item(i).id, false, BlockReason::MaxReached});
      } else if (parent != Model::npos && state.at(parent) == Decision::NotSelected) {
        out.push_back({model.item(i).id, false, BlockReason::ParentNotSelected});
      } else {
        out.push_back({model.item(i).id, true, BlockReason::None});
      }
    } else if (d == Decision::NotSelected) {
      const Derivation* why = state.reason(i);
      if (why && why->rule == Rule::R12) out.push_back({model.item(i).id, false, BlockReason::MaxReached});
    }
  }
  std::sort(out.begin(), out.end(), [](const Choice& a, const Choice& b) { return a.item < b.item; });
  return out;
}

struct Violation {
  Rule rule;
  std::vector<ItemId> items;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::vector<Conflict> conflicts;
};

/// Checks a selection as a finished pathway: no conflicts, every rule holds,
/// field bounds min <= n <= max for selected fields, nothing undecided.
inline ValidationReport validate_complete(const Model& model, const SelectionState& state) {
  if (state.size() != model.size()) {
    throw Error(ErrorCode::InvalidSelection, "selection state does not match the model");
  }
  ValidationReport report;
  auto& out = report.violations;
  auto name = [&](std::size_t i) { return "'" + model.item(i).id.str() + "'"; };
  auto id = [&](std::size_t i) { return model.item(i).id; };
  auto dec = [&](std::size_t i) { return state.at(i); };

  std::vector<Constraint> constraints = model.constraints();
  std::sort(constraints.begin(), constraints.end());
  constraints.erase(std::unique(constraints.begin(), constraints.end()), constraints.end());
  for (const Constraint& c : constraints) {
    std::size_t s = model.index_of(c.source), t = model.index_of(c.target);
    if (s == Model::npos || t == Model::npos) continue;
    const Rule rule = rule_for(c.kind);
    if (is_exclusion(c.kind)) {
      if (dec(s) == Decision::Selected && dec(t) == Decision::Selected) {
        out.push_back({rule, {id(s), id(t)}, name(s) + " excludes " + name(t) + " but both are selected"});
      }
    } else if (dec(s) == Decision::Selected && dec(t) != Decision::Selected) {
      out.push_back({rule, {id(s), id(t)}, name(s) + " requires " + name(t) + ", which is not selected"});
    }
  }

  std::vector<ItemId> undecided;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Item& it = model.item(i);
    if (dec(i) == Decision::Undecided) undecided.push_back(it.id);

    const std::size_t p = model.parent_index(i);
    if (p != Model::npos) {
      if (dec(i) == Decision::Selected && dec(p) != Decision::Selected) {
        out.push_back({Rule::R7, {id(i), id(p)}, name(i) + " is selected but its field " + name(p) + " is not"});
      }
      if (dec(p) == Decision::NotSelected && dec(i) != Decision::NotSelected) {
        out.push_back({Rule::R9, {id(p), id(i)}, "field " + name(p) + " is excluded but its option " + name(i) + " is not"});
      }
    }

    if (!is_field(it.kind)) continue;
    const std::size_t n = selected_non_common(model, state, i);
    const Cardinality card = it.cardinality.value_or(Cardinality{});
    if (it.common && dec(i) != Decision::Selected) {
      out.push_back({Rule::R11, {id(i)}, "common field " + name(i) + " is not selected"});
    }
    if (n > card.max) {
      out.push_back({Rule::R12, {id(i)},
                     "field " + name(i) + " has " + std::to_string(n) + " options selected, above its max of " +
                         std::to_string(card.max)});
    }
    if (dec(i) != Decision::Selected) continue;
    bool any = false;
    for (std::size_t c : model.child_indices(i)) {
      if (dec(c) == Decision::Selected) any = true;
      if (model.item(c).common && dec(c) != Decision::Selected) {
        out.push_back({Rule::R10, {id(i), id(c)},
                       "common option " + name(c) + " of selected field " + name(i) + " is not selected"});
      }
    }
    if (!any) out.push_back({Rule::R8, {id(i)}, "field " + name(i) + " is selected but none of its options is"});
    if (n < card.min) {
      out.push_back({Rule::R13, {id(i)},
                     "field " + name(i) + " has " + std::to_string(n) + " options selected, below its min of " +
                         std::to_string(card.min)});
    }
  }
  if (!undecided.empty()) {
    std::sort(undecided.begin(), undecided.end());
    out.push_back({Rule::Incomplete, undecided, std::to_string(undecided.size()) + " item(s) are still undecided"});
  }

  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.rule, a.items) < std::tie(b.rule, b.items);
  });
  report.conflicts = state.conflicts();
  report.ok = report.violations.empty() && report.conflicts.empty();
  return report;
}

/// State with exactly `selected` Selected and every other item NotSelected,
/// recorded as Init decisions without propagation.
inline SelectionState complete_state(const Model& model, const std::vector<ItemId>& selected) {
  std::vector<Decision> decisions(model.size(), Decision::NotSelected);
  for (const auto& id : selected) decisions[detail::require_item(model, id)] = Decision::Selected;
  return SelectionState::from_assignment(model, std::move(decisions));
}

}  // namespace pathweaver
