#pragma once

// Experiment orchestration for the CLI: config -> typed experiment ->
// deterministic parallel execution -> CSV rows in grid order plus a JSON
// run manifest next to each output file.

#include <functional>
#include <string>
#include <vector>

#include "h1spec/config.hpp"

namespace h1spec {

inline const char* tool_version() { return "h1spec 0.1.0"; }

struct RunOptions {
  std::string command;
  std::string config_path;
  int workers = 0;          // 0: H1SPEC_WORKERS env or hardware_concurrency
  std::string out_dir = ".";
};

// executes one command; returns the process exit code (0 ok). Output and
// error JSON go to the given streams.
int run_command(const RunOptions& opt);

// built-in invariant suite behind `h1spec check`; returns number of failures
int run_self_check();

// deterministic parallel map: f(i) for i in [0, n), results in input order
void parallel_for_ordered(int workers, int n, const std::function<void(int)>& f);

int default_workers();

}  // namespace h1spec
