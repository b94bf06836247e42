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

// Batch commands behind the `pathweaver` executable. Each writes JSON to
// `out`, diagnostics to `err`, and returns the process exit code:
// 0 success, 1 semantic failure, 2 usage or I/O error.

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pathweaver/engine.hpp"
#include "pathweaver/error.hpp"
#include "pathweaver/facts.hpp"
#include "pathweaver/model.hpp"
#include "pathweaver/oracle.hpp"
#include "pathweaver/wire.hpp"

namespace pathweaver::commands {

using nlohmann::json;

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;

namespace detail {

// Carries an exit code up to the command entry point.
struct Abort {
  int code;
};

inline void report(std::ostream& err, std::string_view code, const std::string& message) {
  err << "error[" << code << "]: " << message << '\n';
}

[[noreturn]] inline void fail(std::ostream& err, int exit_code, std::string_view code, const std::string& message) {
  report(err, code, message);
  throw Abort{exit_code};
}

inline std::string read_file(const std::filesystem::path& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(err, kUsage, "IoError", "cannot read " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

// Loads a model that must be free of parse errors and defects.
inline Model load_clean_model(const std::filesystem::path& path, std::ostream& err) {
  LoadedModel loaded = load_model_text(read_file(path, err));
  if (!loaded.parse_errors.empty()) {
    const ParseError& e = loaded.parse_errors.front();
    fail(err, kFailed, to_string(e.code),
         path.string() + ":" + std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + e.message);
  }
  if (!loaded.defects.empty()) {
    fail(err, kFailed, "InvalidModel",
         path.string() + " has " + std::to_string(loaded.defects.size()) + " defect(s); run `pathweaver check`");
  }
  return std::move(loaded.model);
}

inline std::optional<Decision> decision_named(const std::string& s) {
  if (s == "selected") return Decision::Selected;
  if (s == "notselected") return Decision::NotSelected;
  if (s == "undecided") return Decision::Undecided;
  return std::nullopt;
}

// Selection as (item, decision) pairs, from JSON or from select/notselect facts.
inline std::vector<std::pair<ItemId, Decision>> load_selection(const Model& model,
                                                               const std::filesystem::path& path,
                                                               bool facts, std::ostream& err) {
  const std::string text = read_file(path, err);
  std::vector<std::pair<ItemId, Decision>> out;
  auto add = [&](const std::string& raw, Decision d) {
    ItemId id;
    try {
      id = ItemId(raw);
    } catch (const Error& e) {
      fail(err, kUsage, "InvalidSelection", e.what());
    }
    if (model.index_of(id) == Model::npos) fail(err, kUsage, "UnknownItem", "unknown item '" + id.str() + "'");
    out.emplace_back(std::move(id), d);
  };

  if (facts) {
    ParseResult parsed = parse_facts(text, ParseMode::WithSelections);
    if (!parsed.errors.empty()) {
      const ParseError& e = parsed.errors.front();
      fail(err, kUsage, to_string(e.code),
           path.string() + ":" + std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + e.message);
    }
    for (const Fact& f : parsed.facts) {
      if (f.predicate == "select") {
        add(f.atom(0), Decision::Selected);
      } else if (f.predicate == "notselect") {
        add(f.atom(0), Decision::NotSelected);
      } else {
        fail(err, kUsage, "InvalidSelection",
             path.string() + ":" + std::to_string(f.line) + ": only select/notselect facts are allowed");
      }
    }
  } else {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
      fail(err, kUsage, "InvalidSelection", path.string() + ": expected a JSON list of {\"item\", \"state\"}");
    }
    for (const json& entry : doc) {
      if (!entry.is_object() || !entry.contains("item") || !entry["item"].is_string() ||
          !entry.contains("state") || !entry["state"].is_string()) {
        fail(err, kUsage, "InvalidSelection", path.string() + ": every entry needs string \"item\" and \"state\"");
      }
      auto d = decision_named(entry["state"].get<std::string>());
      if (!d) fail(err, kUsage, "InvalidSelection", "unknown state '" + entry["state"].get<std::string>() + "'");
      add(entry["item"].get<std::string>(), *d);
    }
  }

  std::map<ItemId, Decision> seen;
  for (const auto& [id, d] : out) {
    auto [it, fresh] = seen.emplace(id, d);
    if (!fresh && it->second != d) {
      fail(err, kUsage, "InvalidSelection", "item '" + id.str() + "' is given two different states");
    }
  }
  return out;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Abort& a) {
    return a.code;
  } catch (const Error& e) {
    report(err, to_string(e.code()), e.what());
    return kFailed;
  }
}

}  // namespace detail

/// `check <file>`: parse errors and model defects.
inline int check(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    LoadedModel loaded = load_model_text(detail::read_file(path, err));
    json defects = json::array(), errors = json::array();
    for (const auto& d : loaded.defects) defects.push_back(wire::to_json(d));
    for (const auto& e : loaded.parse_errors) errors.push_back(wire::to_json(e));
    const std::size_t count = loaded.defects.size() + loaded.parse_errors.size();
    out << json{{"count", count}, {"defects", defects}, {"errors", errors}}.dump(2) << '\n';
    err << count << " defects\n";
    return count == 0 ? kOk : kFailed;
  });
}

/// `validate <model> <selection>`: the selection is taken as-is, without
/// propagation, and checked for completeness and validity.
inline int validate(const std::filesystem::path& model_path, const std::filesystem::path& selection_path,
                    bool facts, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    Model model = detail::load_clean_model(model_path, err);
    auto selection = detail::load_selection(model, selection_path, facts, err);
    std::vector<Decision> decisions(model.size(), Decision::Undecided);
    for (const auto& [id, d] : selection) decisions[model.index_of(id)] = d;
    SelectionState state = SelectionState::from_assignment(model, std::move(decisions));
    ValidationReport report = validate_complete(model, state);
    out << wire::to_json(state, report).dump(2) << '\n';
    err << report.violations.size() << " violations\n";
    return report.ok ? kOk : kFailed;
  });
}

/// `propagate <model> <selection>`: the fixpoint reached from the initial
/// state plus the selection.
inline int propagate(const std::filesystem::path& model_path, const std::filesystem::path& selection_path,
                     bool facts, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    Model model = detail::load_clean_model(model_path, err);
    auto selection = detail::load_selection(model, selection_path, facts, err);
    SelectionState state = assume(model, initial_state(model), selection);
    json body{{"items", wire::state_items(model, state)},
              {"conflicts", wire::conflicts_json(state, state.conflicts())},
              {"trace", wire::to_json(state.trace())}};
    out << body.dump(2) << '\n';
    if (!state.consistent()) {
      err << state.conflicts().size() << " conflicts\n";
      return kFailed;
    }
    return kOk;
  });
}

struct EnumerateOptions {
  std::size_t limit = std::numeric_limits<std::size_t>::max();
  bool dead = false;
  bool void_check = false;
};

/// `enumerate <model>`: one pathway per line (JSON array of item ids),
/// then a summary line.
inline int enumerate(const std::filesystem::path& model_path, const EnumerateOptions& opts, std::ostream& out,
                     std::ostream& err) {
  return detail::guarded(err, [&] {
    if (opts.limit == 0) detail::fail(err, kUsage, "InvalidSelection", "--limit must be positive");
    Model model = detail::load_clean_model(model_path, err);
    Enumeration e = enumerate_pathways(model, opts.limit);
    for (const Pathway& p : e.pathways) out << wire::to_json(p).dump() << '\n';
    json summary{{"total", e.total}, {"shown", e.pathways.size()}, {"truncated", e.truncated}};
    if (opts.dead) summary["dead"] = wire::ids(find_dead_items(model).items);
    if (opts.void_check) summary["void"] = e.total == 0;
    out << summary.dump() << '\n';
    err << e.total << " pathways\n";
    return opts.void_check && e.total == 0 ? kFailed : kOk;
  });
}

}  // namespace pathweaver::commands
