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

// JSON views shared by the CLI and the HTTP service. States are
// "selected" / "notselected" / "undecided"; rules are "R1".."R13", "user",
// "init" (and "incomplete" for the completeness finding).

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pathweaver/engine.hpp"
#include "pathweaver/facts.hpp"
#include "pathweaver/model.hpp"
#include "pathweaver/oracle.hpp"

namespace pathweaver::wire {

using nlohmann::json;

inline json ids(const std::vector<ItemId>& v) {
  json out = json::array();
  for (const auto& id : v) out.push_back(id.str());
  return out;
}

inline json to_json(const ModelDefect& d) {
  return {{"code", to_string(d.code)}, {"items", ids(d.ids)}, {"message", d.message}};
}

inline json to_json(const ParseError& e) {
  return {{"code", to_string(e.code)}, {"line", e.line}, {"column", e.column}, {"message", e.message}};
}

inline json to_json(const Derivation& d) {
  return {{"item", d.item.str()},
          {"state", to_string(d.state)},
          {"rule", to_string(d.rule)},
          {"premises", ids(d.premises)}};
}

inline json to_json(const std::vector<Derivation>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back(to_json(d));
  return out;
}

/// A conflict with both derivations and the chains that led to each.
inline json to_json(const SelectionState& state, const Conflict& c) {
  return {{"item", c.item.str()},
          {"derivations", json::array({to_json(c.standing), to_json(c.opposing)})},
          {"chains", json::array({to_json(explain(state, c.standing)), to_json(explain(state, c.opposing))})}};
}

inline json conflicts_json(const SelectionState& state, const std::vector<Conflict>& conflicts) {
  json out = json::array();
  for (const auto& c : conflicts) out.push_back(to_json(state, c));
  return out;
}

inline json to_json(const SelectionState& state, const ValidationReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"rule", to_string(v.rule)}, {"items", ids(v.items)}, {"message", v.message}});
  }
  return {{"ok", r.ok}, {"violations", violations}, {"conflicts", conflicts_json(state, r.conflicts)}};
}

inline json to_json(const Pathway& p) { return ids(p.selected); }

/// Per-item view of a state, keyed by item id.
inline json state_items(const Model& model, const SelectionState& state) {
  std::vector<Choice> choices = available_choices(model, state);
  json out = json::object();
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Item& it = model.item(i);
    json node;
    node["kind"] = to_string(it.kind);
    node["common"] = it.common;
    node["parent"] = it.parent ? json(it.parent->str()) : json(nullptr);
    json children = json::array();
    for (std::size_t c : model.child_indices(i)) children.push_back(model.item(c).id.str());
    node["children"] = children;
    node["state"] = to_string(state.at(i));
    if (const Derivation* why = state.reason(i)) {
      node["rule"] = to_string(why->rule);
      node["premises"] = ids(why->premises);
    } else {
      node["rule"] = nullptr;
      node["premises"] = json::array();
    }
    node["selectable"] = false;
    node["blocked"] = nullptr;
    for (const Choice& ch : choices) {
      if (ch.item != it.id) continue;
      node["selectable"] = ch.selectable;
      if (!ch.selectable) node["blocked"] = to_string(ch.reason);
    }
    if (it.cardinality) {
      node["cardinality"] = {{"min", it.cardinality->min},
                             {"max", it.cardinality->max},
                             {"selected", selected_non_common(model, state, i)}};
    }
    out[it.id.str()] = std::move(node);
  }
  return out;
}

/// Items whose decision is new in `after`, in the order they were derived.
inline json delta(const Model& model, const SelectionState& before, const SelectionState& after) {
  json out = json::array();
  std::vector<std::pair<std::size_t, std::size_t>> changed;  // (trace index, item)
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (before.at(i) == after.at(i)) continue;
    const Derivation* why = after.reason(i);
    std::size_t at = why ? static_cast<std::size_t>(why - after.trace().data()) : after.trace().size();
    changed.emplace_back(at, i);
  }
  std::sort(changed.begin(), changed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return model.item(a.second).id < model.item(b.second).id;
  });
  for (const auto& [at, i] : changed) {
    const Derivation* why = after.reason(i);
    out.push_back({{"item", model.item(i).id.str()},
                   {"state", to_string(after.at(i))},
                   {"rule", why ? json(to_string(why->rule)) : json(nullptr)},
                   {"premises", why ? ids(why->premises) : json::array()}});
  }
  return out;
}

}  // namespace pathweaver::wire
