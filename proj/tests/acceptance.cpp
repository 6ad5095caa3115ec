// Acceptance suite: one line per criterion, exit status 0 only when all pass.
// Usage: acceptance [--only NAME] [--seed N] [--json PATH]

#include <cstdio>
#include <cstring>
#include <iostream>

#include "blaschke/verify.hpp"

int main(int argc, char** argv) {
  blaschke::VerifyConfig cfg;
  std::string json_path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (i + 1 >= argc) {
      std::cerr << "missing value for " << arg << "\n";
      return 2;
    }
    if (arg == "--only") cfg.only = argv[++i];
    else if (arg == "--seed") cfg.seed = std::stoull(argv[++i]);
    else if (arg == "--json") json_path = argv[++i];
    else {
      std::cerr << "unknown argument " << arg << "\n";
      return 2;
    }
  }
  try {
    const auto results = blaschke::verify_all(cfg, [](const blaschke::CriterionResult& r) {
      std::string upper = r.status;
      for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      std::cout << upper << "  " << r.criterion << "  " << r.measured.dump() << std::endl;
    });
    const auto report = blaschke::verify_report(cfg, results);
    if (!json_path.empty()) blaschke::write_file(json_path, report.dump(2) + "\n");
    return report["pass"].get<bool>() ? 0 : 1;
  } catch (const blaschke::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
