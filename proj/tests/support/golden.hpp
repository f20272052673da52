#pragma once

// Golden-file runner for the CLI. Each line of cases.txt reads
//
//   name | exit code | arguments
//
// Arguments are split on spaces, double quotes group words, and @OUT@ expands
// to a per-case scratch directory. Commands run in-process with the
// repository root as working directory. Stdout must equal expected/NAME.out,
// stderr expected/NAME.err (empty when the file is absent), and files written
// under @OUT@ must equal expected/NAME/. Every case runs twice and both runs
// must agree byte for byte.

#include <filesystem>
#include <string>
#include <vector>

namespace golden {

struct Outcome {
  std::size_t cases = 0;
  std::vector<std::string> failures;
};

/// With `update` the expected files are rewritten from the first run.
Outcome run_suite(const std::filesystem::path& repo_root, const std::filesystem::path& scratch, bool update);

}  // namespace golden
