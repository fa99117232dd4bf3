// Copyright 2026 The pqdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

// Command-line driver: check, run, and box programs.
//
// Exit codes: 0 on success, 1 on language errors (syntax, typing,
// evaluation), 2 on environment errors (usage, missing files).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "pqdyn/circuit.hpp"
#include "pqdyn/eval.hpp"
#include "pqdyn/parser.hpp"
#include "pqdyn/prelude.hpp"
#include "pqdyn/typecheck.hpp"

namespace {

using namespace pqdyn;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Env base_env() {
  std::optional<std::string> override_path;
  if (const char* p = std::getenv("PQDYN_PRELUDE"); p && *p) {
    override_path = p;
  }
  return load_prelude(override_path);
}

// Parses and checks a file on top of the prelude. Per-declaration errors are
// reported on stderr; declarations that check are still usable, so a broken
// declaration does not block running an unrelated entry point.
int load_checked(const std::string& file, CheckedProgram& out) {
  std::optional<std::string> src = read_file(file);
  if (!src) {
    std::cerr << "pqdyn: cannot read '" << file << "'\n";
    return 2;
  }
  Env base;
  try {
    base = base_env();
  } catch (const Error& e) {
    // A prelude that cannot be loaded is a configuration problem, not a
    // problem with the program under check.
    std::cerr << e.render() << "\n";
    return 2;
  }
  Program prog = parse_program(*src, file);
  out = check_program(prog, base);
  for (const Error& e : out.errors) std::cerr << e.render() << "\n";
  return 0;
}

int cmd_check(const std::string& file) {
  CheckedProgram checked;
  if (int rc = load_checked(file, checked); rc != 0) return rc;
  for (const std::string& sig : checked.signatures) {
    std::cout << sig << "\n";
  }
  return checked.ok() ? 0 : 1;
}

int cmd_run(const std::string& file, const std::string& entry,
            const RunOptions& options) {
  CheckedProgram checked;
  if (int rc = load_checked(file, checked); rc != 0) return rc;
  RunReport report = run_main(checked.env, entry, options);
  std::cout << report.json() << "\n";
  return 0;
}

int cmd_box(const std::string& file, const std::string& name,
            const std::string& format) {
  CheckedProgram checked;
  if (int rc = load_checked(file, checked); rc != 0) return rc;
  Circuit c = box_declaration(checked.env, name);
  if (format == "text") {
    std::cout << export_circuit_text(c);
  } else {
    std::cout << export_circuit_json(c) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proto-Quipper interpreter with dynamic lifting"};
  app.require_subcommand(1);

  std::string file;
  std::string entry;
  std::string name;
  std::string mode = "dist";
  std::string format = "json";
  RunOptions options;

  CLI::App* check = app.add_subcommand("check", "Typecheck a program");
  check->add_option("file", file, "program file")->required();

  CLI::App* run = app.add_subcommand("run", "Evaluate an entry point");
  run->add_option("file", file, "program file")->required();
  run->add_option("--entry", entry, "entry declaration")->required();
  run->add_option("--mode", mode, "dist or sample")
      ->check(CLI::IsMember({"dist", "sample"}));
  run->add_option("--seed", options.seed, "sample-mode RNG seed");
  run->add_option("--shots", options.shots, "sample-mode shot count")
      ->check(CLI::PositiveNumber);
  run->add_option("--max-depth", options.limits.max_depth,
                  "recursive unfoldings per path")
      ->check(CLI::PositiveNumber);
  run->add_option("--mass-cutoff", options.limits.mass_cutoff,
                  "largest tolerated unexplored mass");
  run->add_option("--jobs", options.jobs, "sample-mode worker threads")
      ->check(CLI::PositiveNumber);

  CLI::App* box = app.add_subcommand("box", "Generate a declared circuit");
  box->add_option("file", file, "program file")->required();
  box->add_option("--name", name, "declaration to box")->required();
  box->add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  options.mode = mode == "sample" ? RunMode::Sample : RunMode::Dist;

  try {
    if (check->parsed()) return cmd_check(file);
    if (run->parsed()) return cmd_run(file, entry, options);
    return cmd_box(file, name, format);
  } catch (const Error& e) {
    std::cerr << e.render() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pqdyn: " << e.what() << "\n";
    return 1;
  }
}
