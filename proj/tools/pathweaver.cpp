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

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pathweaver/commands.hpp"
#include "pathweaver/http.hpp"
#include "pathweaver/service.hpp"

namespace pw = pathweaver;

namespace {

int serve(const std::string& models, const std::string& host, int port, const std::string& static_dir,
          const std::string& snapshot) {
  const std::filesystem::path dir = pw::http::models_directory(models);
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    std::cerr << "error[IoError]: model directory " << dir << " does not exist\n";
    return pw::commands::kUsage;
  }
  pw::service::Options options;
  options.fixed_clock = pw::http::test_clock();
  if (!snapshot.empty()) options.snapshot = snapshot;
  pw::service::Service svc(pw::service::Catalog::load_directory(dir, std::cerr), options);
  std::cerr << svc.catalog().models().size() << " models loaded from " << dir.string() << '\n';

  httplib::Server server;
  std::optional<std::filesystem::path> mount;
  if (!static_dir.empty()) mount = static_dir;
  pw::http::bind(server, svc, mount);
  std::cerr << "listening on http://" << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "error[IoError]: cannot listen on " << host << ':' << port << '\n';
    return pw::commands::kUsage;
  }
  return pw::commands::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathweaver: rule-based configuration of learning pathways"};
  app.require_subcommand(1);

  std::string model, selection;
  bool facts = false;

  auto* check = app.add_subcommand("check", "Parse a model and report defects");
  check->add_option("model", model, "Model file (.lpm)")->required();

  auto* validate = app.add_subcommand("validate", "Validate a complete selection");
  validate->add_option("model", model, "Model file (.lpm)")->required();
  validate->add_option("selection", selection, "Selection (JSON list of {item, state})")->required();
  validate->add_flag("--facts", facts, "Read the selection as select/notselect facts");

  auto* propagate = app.add_subcommand("propagate", "Print the propagated state of a selection");
  propagate->add_option("model", model, "Model file (.lpm)")->required();
  propagate->add_option("selection", selection, "Selection (JSON list of {item, state})")->required();
  propagate->add_flag("--facts", facts, "Read the selection as select/notselect facts");

  pw::commands::EnumerateOptions enum_opts;
  auto* enumerate = app.add_subcommand("enumerate", "List valid pathways");
  enumerate->add_option("model", model, "Model file (.lpm)")->required();
  enumerate->add_option("--limit", enum_opts.limit, "Print at most N pathways")->check(CLI::PositiveNumber);
  enumerate->add_flag("--dead", enum_opts.dead, "Also report items in no pathway");
  enumerate->add_flag("--void", enum_opts.void_check, "Exit 1 when the model has no pathway");

  std::string models_dir = "models", host = "127.0.0.1", static_dir, snapshot;
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--models", models_dir, "Directory of .lpm models (PATHWEAVER_MODELS overrides)");
  serve_cmd->add_option("--host", host, "Address to bind");
  serve_cmd->add_option("--port", port, "Port to listen on")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--static", static_dir, "Directory served under /");
  serve_cmd->add_option("--snapshot", snapshot, "JSON-lines action log, replayed at startup");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pw::commands::kUsage;
  }

  if (*check) return pw::commands::check(model, std::cout, std::cerr);
  if (*validate) return pw::commands::validate(model, selection, facts, std::cout, std::cerr);
  if (*propagate) return pw::commands::propagate(model, selection, facts, std::cout, std::cerr);
  if (*enumerate) return pw::commands::enumerate(model, enum_opts, std::cout, std::cerr);
  return serve(models_dir, host, port, static_dir, snapshot);
}
