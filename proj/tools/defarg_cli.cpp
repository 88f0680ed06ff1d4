/*
Copyright 2026 The defarg Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"

#include "defarg/hierarchy.hpp"
#include "defarg/preference.hpp"
#include "defarg/service.hpp"
#include "defarg/theory_format.hpp"
#include "defarg/transcript.hpp"

namespace {

using namespace defarg;

struct PreferenceOptions {
  std::string variant = "subset";
  std::vector<std::string> priority;
  bool radical = false;

  PreferenceConfig config() const {
    PreferenceConfig c;
    c.variant = variant_from_string(variant);
    c.priority = priority;
    c.placement = radical ? ExceptionPlacement::radical : ExceptionPlacement::above_successors;
    return c;
  }
};

void add_preference_options(CLI::App* cmd, PreferenceOptions& opts) {
  cmd->add_option("--variant", opts.variant, "subset, cardinality, priority or lexicographic-specificity");
  cmd->add_option("--priority", opts.priority, "default ids, most important first")->delimiter(',');
  cmd->add_flag("--radical", opts.radical, "place every exceptional packet above all normal ones");
}

int run_check(const std::string& path, bool strict) {
  const DefaultTheory theory = load_theory(path);
  bool ok = true;
  const auto report = check_consistency_conditions(theory);
  for (const auto& v : report.violations) {
    std::cout << "violation " << v.condition << ": " << v.message << '\n';
    ok = false;
  }
  for (const auto& rule : theory.defaults()) {
    const auto gate = check_size_gate(rule, theory, theory.policy());
    std::cout << "size " << rule.id << ": " << (gate.passed ? "ok" : strict ? "fail" : "warn");
    for (const auto& f : gate.failures) std::cout << "; " << f;
    std::cout << '\n';
    if (strict) ok = ok && gate.passed;
  }
  if (report.ok()) {
    for (const auto& point : attachment_points(theory)) {
      const auto v = valid_defaults(theory, point.carrier);
      std::cout << "valid at " << to_string(point.scope) << ":";
      for (const auto& id : v.valid) std::cout << ' ' << id;
      std::cout << '\n';
    }
  }
  std::cout << (ok ? "ok" : "failed") << '\n';
  return ok ? 0 : 1;
}

int run_hierarchy(const std::string& path, bool dot, bool packets, bool elements, const PreferenceOptions& opts) {
  const DefaultTheory theory = load_theory(path);
  if (!packets && !elements) {
    const AttachmentFamily family = attachment_family(theory);
    const auto cells = membership_cells(family);
    const auto order = cell_order(cells);
    std::cout << (dot ? export_dot(cells, order, family) : cell_table(cells, family));
    return 0;
  }
  const PreferentialModel model = build_preferential_model(theory, opts.config());
  if (dot) {
    const auto order = cell_order(model.cells);
    std::cout << export_dot(model.cells, order, model.family);
  }
  std::cout << dump_order(model, elements);
  return 0;
}

std::vector<Formula> parse_all(const DefaultTheory& theory, const std::vector<std::string>& texts) {
  std::vector<Formula> out;
  for (const auto& t : texts) out.push_back(theory.parse(t));
  return out;
}

int run_query(const std::string& kind, const std::string& path, const std::vector<std::string>& args,
              const PreferenceOptions& opts) {
  const DefaultTheory theory = load_theory(path);
  const PreferentialModel model = build_preferential_model(theory, opts.config());
  if (kind == "minimal") {
    if (args.size() != 1) throw CLI::ValidationError("minimal takes one formula");
    const ModelSet m = minimal_models(theory.parse(args[0]), model);
    std::cout << to_string(m) << '\n';
    return 0;
  }
  if (kind == "holds") {
    if (args.size() != 2) throw CLI::ValidationError("holds takes a premise and a conclusion");
    const auto v = default_holds(theory.parse(args[0]), theory.parse(args[1]), model);
    std::cout << (v.holds ? "holds" : "does not hold") << ' ' << to_string(v.minimal) << '\n';
    return v.holds ? 0 : 1;
  }
  if (kind == "classify") {
    if (args.empty()) throw CLI::ValidationError("classify takes at least one fact");
    const auto facts = parse_all(theory, args);
    const auto c = classify_individual(model, facts);
    for (const auto& p : c.placements) std::cout << packet_name(p, model.cells) << '\n';
    std::cout << "models " << to_string(c.models) << '\n';
    std::cout << "literals";
    for (const auto& l : c.literals) std::cout << ' ' << l;
    std::cout << '\n';
    return 0;
  }
  throw CLI::ValidationError("query kind must be minimal, holds or classify");
}

int run_replay(const std::string& path) {
  const SessionState state = read_transcript_file(path);
  std::cout << "moves " << state.moves.size() << '\n';
  std::cout << "phase " << to_string(state.phase) << '\n';
  if (state.verdict) std::cout << "verdict " << to_string(state.verdict->outcome) << '\n';
  std::cout << to_text(state.report);
  return 0;
}

int run_serve(const std::string& host, int port) {
  SessionService service;
  httplib::Server server;
  install_routes(server, service);
  std::cerr << "listening on " << host << ':' << port << std::endl;
  return server.listen(host, port) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Default reasoning over preferential models, with an arbiter for argumentation sessions"};
  app.require_subcommand(1);

  std::string file;
  auto* check = app.add_subcommand("check", "check the consistency conditions and size gates of a theory file");
  check->add_option("theory", file, "theory file")->required();
  bool strict = false;
  check->add_flag("--strict", strict, "fail on size gate violations");

  bool dot = false, packets = false, elements = false;
  PreferenceOptions hier_opts;
  auto* hier = app.add_subcommand("hierarchy", "print the cells of a theory and their order");
  hier->add_option("theory", file, "theory file")->required();
  hier->add_flag("--dot", dot, "Graphviz output");
  hier->add_flag("--packets", packets, "print the packet order");
  hier->add_flag("--elements", elements, "print the element order");
  add_preference_options(hier, hier_opts);

  std::string kind;
  std::vector<std::string> query_args;
  PreferenceOptions query_opts;
  auto* query = app.add_subcommand("query", "minimal models, default consequence or classification");
  query->add_option("kind", kind, "minimal, holds or classify")->required();
  query->add_option("theory", file, "theory file")->required();
  query->add_option("formulas", query_args, "formulas");
  add_preference_options(query, query_opts);

  app.add_subcommand("session", "serve the session protocol as JSON lines on stdin/stdout");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "serve the session protocol over HTTP");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port");

  auto* replay = app.add_subcommand("replay", "replay and verify a session transcript");
  replay->add_option("transcript", file, "transcript file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;  // --help is not an error
  }

  try {
    if (check->parsed()) return run_check(file, strict);
    if (hier->parsed()) return run_hierarchy(file, dot, packets, elements, hier_opts);
    if (query->parsed()) return run_query(kind, file, query_args, query_opts);
    if (serve->parsed()) return run_serve(host, port);
    if (replay->parsed()) return run_replay(file);
    SessionService service;
    service.run_stdio(std::cin, std::cout);
    return 0;
  } catch (const CLI::Error& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
