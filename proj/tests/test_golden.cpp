#include <filesystem>
#include <iostream>
#include <string>

#include "golden.hpp"

// Runs the golden CLI suite. Pass --update to rewrite the expected files.
int main(int argc, char** argv) {
  const bool update = argc > 1 && std::string(argv[1]) == "--update";
  const auto scratch = std::filesystem::temp_directory_path() / "modeldelta_golden";
  try {
    const auto outcome = golden::run_suite(MODELDELTA_SOURCE_DIR, scratch, update);
    for (const auto& f : outcome.failures) std::cerr << "FAIL " << f << "\n";
    std::cout << outcome.cases << " golden cases, " << outcome.failures.size() << " failures\n";
    std::filesystem::remove_all(scratch);
    return outcome.failures.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
