#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "h1spec/errors.hpp"
#include "h1spec/runner.hpp"

namespace {

int exit_code_for(const h1spec::Error& e) {
  if (e.kind() == h1spec::ErrorKind::Usage) return 1;
  return h1spec::is_validation_error(e.kind()) ? 2 : 3;
}

void emit_error_json(const std::string& kind, const std::string& message) {
  nlohmann::json j;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  std::cerr << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"h1spec: numerical spectral theory of half-line Schrodinger operators "
               "with locally H^-1 potentials"};
  app.set_version_flag("--version", h1spec::tool_version());
  app.require_subcommand(1);

  h1spec::RunOptions opt;
  const char* commands[] = {"transfer", "prufer",     "mfun",   "density",
                            "classify", "shortrange", "sparse", "check"};
  for (const char* name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    if (std::string(name) != "check")
      sub->add_option("--config", opt.config_path, "experiment config file")->required();
    else
      sub->add_option("--config", opt.config_path, "unused for check");
    sub->add_option("--workers", opt.workers, "worker count (default: H1SPEC_WORKERS or cores)");
    sub->add_option("--out", opt.out_dir, "output directory (default: .)");
    sub->callback([&opt, name]() { opt.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors => 1
  }

  try {
    return h1spec::run_command(opt);
  } catch (const h1spec::Error& e) {
    emit_error_json(h1spec::error_kind_name(e.kind()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    emit_error_json("Internal", e.what());
    return 3;
  }
}
