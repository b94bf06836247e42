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

// Session-based pathway configuration API, independent of the transport.
//
//   GET  /api/v1/models
//   POST /api/v1/sessions                    {"model": name}
//   GET  /api/v1/sessions/{id}
//   POST /api/v1/sessions/{id}/select        {"item": id}
//   POST /api/v1/sessions/{id}/exclude       {"item": id}
//   POST /api/v1/sessions/{id}/undo
//   POST /api/v1/sessions/{id}/complete
//
// A session's state is always a propagation fixpoint: an action that would
// produce a conflict is refused with 409 and nothing changes.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pathweaver/engine.hpp"
#include "pathweaver/facts.hpp"
#include "pathweaver/model.hpp"
#include "pathweaver/wire.hpp"

namespace pathweaver::service {

using nlohmann::json;

struct Response {
  int status = 200;
  json body;
};

/// Named, defect-free models. Immutable once the service starts.
class Catalog {
 public:
  void add(std::string name, Model model) { models_.insert_or_assign(std::move(name), std::move(model)); }

  const Model* find(const std::string& name) const {
    auto it = models_.find(name);
    return it == models_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, Model>& models() const noexcept { return models_; }

  /// Loads every `*.lpm` file in `dir`, named by file stem. Files with parse
  /// errors or defects are skipped with a note on `log`.
  static Catalog load_directory(const std::filesystem::path& dir, std::ostream& log) {
    Catalog catalog;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".lpm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      std::ifstream in(path, std::ios::binary);
      std::stringstream text;
      text << in.rdbuf();
      auto loaded = load_model_text(text.str());
      if (!loaded.ok()) {
        log << "skipping " << path.filename().string() << ": " << loaded.parse_errors.size()
            << " parse error(s), " << loaded.defects.size() << " defect(s)\n";
        continue;
      }
      catalog.add(path.stem().string(), std::move(loaded.model));
    }
    return catalog;
  }

 private:
  std::map<std::string, Model> models_;
};

struct Options {
  // Fixed timestamp for every clock reading; also makes session ids
  // reproducible. Intended for tests and recorded-session replay.
  std::optional<std::string> fixed_clock;
  // Append-only JSON-lines log of actions, replayed at startup.
  std::optional<std::filesystem::path> snapshot;
};

inline std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Service {
 public:
  Service(Catalog catalog, Options options) : catalog_(std::move(catalog)), options_(std::move(options)) {
    if (options_.fixed_clock) {
      std::uint64_t h = 1469598103934665603ull;  // FNV-1a
      for (unsigned char c : *options_.fixed_clock) h = (h ^ c) * 1099511628211ull;
      rng_.seed(h);
    } else {
      std::random_device rd;
      rng_.seed((std::uint64_t{rd()} << 32) ^ rd());
    }
    if (options_.snapshot) replay_snapshot(*options_.snapshot);
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const Catalog& catalog() const noexcept { return catalog_; }

  /// Routes one request. `target` is the path without query string.
  Response handle(std::string_view method, std::string_view target, std::string_view body) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start < target.size()) {
      std::size_t slash = target.find('/', start);
      if (slash == std::string_view::npos) slash = target.size();
      if (slash > start) parts.push_back(target.substr(start, slash - start));
      start = slash + 1;
    }
    if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1") return error(404, "NotFound", "no such endpoint");

    if (parts.size() == 3 && parts[2] == "models") {
      if (method != "GET") return error(405, "MethodNotAllowed", "use GET");
      return list_models();
    }
    if (parts[2] != "sessions") return error(404, "NotFound", "no such endpoint");

    if (parts.size() == 3) {
      if (method != "POST") return error(405, "MethodNotAllowed", "use POST");
      auto parsed = parse_body(body);
      if (!parsed || !parsed->contains("model") || !(*parsed)["model"].is_string()) {
        return error(400, "BadRequest", "body must be a JSON object with a string \"model\"");
      }
      return create_session((*parsed)["model"].get<std::string>());
    }
    const std::string id(parts[3]);
    if (parts.size() == 4) {
      if (method != "GET") return error(405, "MethodNotAllowed", "use GET");
      return get_state(id);
    }
    if (parts.size() != 5) return error(404, "NotFound", "no such endpoint");
    if (method != "POST") return error(405, "MethodNotAllowed", "use POST");
    const std::string_view verb = parts[4];
    if (verb == "undo") return undo(id);
    if (verb == "complete") return complete(id);
    if (verb == "select" || verb == "exclude") {
      auto parsed = parse_body(body);
      if (!parsed || !parsed->contains("item") || !(*parsed)["item"].is_string()) {
        return error(400, "BadRequest", "body must be a JSON object with a string \"item\"");
      }
      const std::string item = (*parsed)["item"].get<std::string>();
      return verb == "select" ? select_item(id, item) : exclude_item(id, item);
    }
    return error(404, "NotFound", "no such endpoint");
  }

  Response list_models() const {
    json models = json::array();
    for (const auto& [name, model] : catalog_.models()) {
      std::size_t fields = 0, options = 0;
      for (const auto& it : model.items()) {
        fields += is_field(it.kind) ? 1 : 0;
        options += is_option(it.kind) ? 1 : 0;
      }
      models.push_back({{"name", name},
                        {"study_area", model.study_area() ? json(model.study_area()->str()) : json(nullptr)},
                        {"items", model.size()},
                        {"fields", fields},
                        {"options", options}});
    }
    return {200, {{"models", models}}};
  }

  Response create_session(const std::string& model_name) {
    const Model* model = catalog_.find(model_name);
    if (!model) return error(404, "UnknownModel", "no model named '" + model_name + "'");
    SelectionState start = initial_state(*model);
    if (!start.consistent()) {
      Response r = error(409, "Conflict", "model '" + model_name + "' has no valid pathway: its fixed items conflict");
      r.body["conflicts"] = wire::conflicts_json(start, start.conflicts());
      return r;
    }
    auto session = std::make_unique<Session>();
    session->model_name = model_name;
    session->model = model;
    session->state = std::move(start);
    session->created_at = session->updated_at = now();
    {
      std::unique_lock lock(sessions_mu_);
      do {
        session->id = new_id();
      } while (sessions_.count(session->id));
      record({{"op", "create"}, {"session", session->id}, {"model", model_name}, {"at", session->created_at}});
      Response r{201, summary(*session)};
      sessions_.emplace(session->id, std::move(session));
      return r;
    }
  }

  Response get_state(const std::string& id) {
    return with_session(id, [&](Session& s) { return Response{200, view(s)}; });
  }

  Response select_item(const std::string& id, const std::string& item) {
    return act(id, ActionKind::Select, item);
  }

  Response exclude_item(const std::string& id, const std::string& item) {
    return act(id, ActionKind::Exclude, item);
  }

  Response undo(const std::string& id) {
    return with_session(id, [&](Session& s) {
      if (s.history.empty()) return error(422, "NothingToUndo", "the session has no action to undo");
      std::vector<Action> rest(s.history.begin(), s.history.end() - 1);
      SelectionState replayed = replay(*s.model, rest);
      json body{{"session", s.id},
                {"action", "undo"},
                {"undone", action_json(s.history.back())},
                {"delta", wire::delta(*s.model, s.state, replayed)}};
      s.state = std::move(replayed);
      s.history = std::move(rest);
      s.updated_at = now();
      body["updated_at"] = s.updated_at;
      body["undecided"] = s.state.size() - s.state.decided_count();
      record({{"op", "undo"}, {"session", s.id}, {"at", s.updated_at}});
      return Response{200, body};
    });
  }

  Response complete(const std::string& id) {
    return with_session(id, [&](Session& s) {
      json body = wire::to_json(s.state, validate_complete(*s.model, s.state));
      body["session"] = s.id;
      return Response{200, body};
    });
  }

 private:
  enum class ActionKind { Select, Exclude };

  struct Action {
    ActionKind kind;
    ItemId item;
  };

  struct Session {
    std::string id;
    std::string model_name;
    const Model* model = nullptr;
    SelectionState state;
    std::vector<Action> history;
    std::string created_at, updated_at;
    std::mutex mu;
  };

  static json action_json(const Action& a) {
    return {{"action", a.kind == ActionKind::Select ? "select" : "exclude"}, {"item", a.item.str()}};
  }

  static Response error(int status, std::string_view code, const std::string& message) {
    return {status, {{"error", code}, {"message", message}}};
  }

  static std::optional<json> parse_body(std::string_view body) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
    return parsed;
  }

  static int status_for(ErrorCode code) {
    switch (code) {
      case ErrorCode::UnknownItem:
      case ErrorCode::InvalidId:
      case ErrorCode::AlreadyDecided:
      case ErrorCode::BlockedByMax:
      case ErrorCode::ExcludesCommon:
        return 422;
      case ErrorCode::PendingConflict:
        return 409;
      default:
        return 500;
    }
  }

  static SelectionState apply(const Model& model, const SelectionState& state, const Action& a) {
    return a.kind == ActionKind::Select ? choose(model, state, a.item) : exclude(model, state, a.item);
  }

  static SelectionState replay(const Model& model, const std::vector<Action>& actions) {
    SelectionState st = initial_state(model);
    for (const Action& a : actions) st = apply(model, st, a);
    return st;
  }

  std::string now() const { return options_.fixed_clock ? *options_.fixed_clock : utc_now(); }

  std::string new_id() {
    static constexpr std::string_view alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
    std::lock_guard lock(rng_mu_);
    std::string id;
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    for (int i = 0; i < 22; ++i) id.push_back(alphabet[pick(rng_)]);
    return id;
  }

  json summary(const Session& s) const {
    return {{"id", s.id},
            {"model", s.model_name},
            {"study_area", s.model->study_area() ? json(s.model->study_area()->str()) : json(nullptr)},
            {"created_at", s.created_at},
            {"updated_at", s.updated_at},
            {"actions", s.history.size()}};
  }

  json view(const Session& s) const {
    json body = summary(s);
    body["items"] = wire::state_items(*s.model, s.state);
    json history = json::array();
    for (const auto& a : s.history) history.push_back(action_json(a));
    body["history"] = history;
    body["undecided"] = s.state.size() - s.state.decided_count();
    return body;
  }

  template <typename Fn>
  Response with_session(const std::string& id, Fn&& fn) {
    Session* session = nullptr;
    {
      std::shared_lock lock(sessions_mu_);
      auto it = sessions_.find(id);
      if (it == sessions_.end()) return error(404, "UnknownSession", "no session '" + id + "'");
      session = it->second.get();
    }
    std::lock_guard lock(session->mu);
    return fn(*session);
  }

  Response act(const std::string& id, ActionKind kind, const std::string& raw_item) {
    return with_session(id, [&](Session& s) -> Response {
      Action action{kind, {}};
      SelectionState next;
      try {
        action.item = ItemId(raw_item);
        next = apply(*s.model, s.state, action);
      } catch (const Error& e) {
        std::string_view code = e.code() == ErrorCode::InvalidId ? "UnknownItem" : to_string(e.code());
        return error(status_for(e.code()), code, e.what());
      }
      if (!next.consistent()) {
        Response r = error(409, "Conflict",
                           std::string(kind == ActionKind::Select ? "selecting" : "excluding") + " '" +
                               action.item.str() + "' contradicts the current selection");
        r.body["action"] = action_json(action);
        r.body["conflicts"] = wire::conflicts_json(next, next.conflicts());
        return r;
      }
      json body{{"session", s.id}, {"action", action_json(action)["action"]}, {"item", action.item.str()}};
      body["delta"] = wire::delta(*s.model, s.state, next);
      s.state = std::move(next);
      s.history.push_back(action);
      s.updated_at = now();
      body["updated_at"] = s.updated_at;
      body["undecided"] = s.state.size() - s.state.decided_count();
      record({{"op", kind == ActionKind::Select ? "select" : "exclude"},
              {"session", s.id},
              {"item", action.item.str()},
              {"at", s.updated_at}});
      return Response{200, body};
    });
  }

  void record(const json& line) {
    if (!options_.snapshot || replaying_) return;
    std::lock_guard lock(snapshot_mu_);
    std::ofstream out(*options_.snapshot, std::ios::app | std::ios::binary);
    out << line.dump() << '\n';
  }

  // Rebuilds sessions from a snapshot log. Lines that no longer apply (for
  // instance after a model changed) are skipped.
  void replay_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return;
    replaying_ = true;
    std::string line;
    while (std::getline(in, line)) {
      json entry = json::parse(line, nullptr, false);
      if (entry.is_discarded() || !entry.is_object()) continue;
      const std::string op = entry.value("op", "");
      const std::string id = entry.value("session", "");
      const std::string at = entry.value("at", "");
      if (op == "create") {
        const Model* model = catalog_.find(entry.value("model", ""));
        if (!model || id.empty() || sessions_.count(id)) continue;
        auto s = std::make_unique<Session>();
        s->id = id;
        s->model_name = entry.value("model", "");
        s->model = model;
        s->state = initial_state(*model);
        if (!s->state.consistent()) continue;
        s->created_at = s->updated_at = at;
        sessions_.emplace(id, std::move(s));
        continue;
      }
      auto it = sessions_.find(id);
      if (it == sessions_.end()) continue;
      Session& s = *it->second;
      try {
        if (op == "undo") {
          if (s.history.empty()) continue;
          s.history.pop_back();
          s.state = replay(*s.model, s.history);
        } else if (op == "select" || op == "exclude") {
          Action a{op == "select" ? ActionKind::Select : ActionKind::Exclude, ItemId(entry.value("item", ""))};
          SelectionState next = apply(*s.model, s.state, a);
          if (!next.consistent()) continue;
          s.state = std::move(next);
          s.history.push_back(a);
        } else {
          continue;
        }
        s.updated_at = at;
      } catch (const Error&) {
        continue;
      }
    }
    replaying_ = false;
  }

  Catalog catalog_;
  Options options_;
  std::shared_mutex sessions_mu_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
  std::mutex snapshot_mu_;
  bool replaying_ = false;
};

}  // namespace pathweaver::service
