// Acceptance runner: one line per checked claim, exit 1 if any row fails.
//   spikelab_acceptance [criterion...] [--seed N] [--workers N]
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "spikelab/repro.hpp"

int main(int argc, char** argv) {
  spikelab::ReproOptions opts;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      opts.seed = std::stoull(argv[++i]);
    } else if (arg == "--workers" && i + 1 < argc) {
      opts.workers = std::stoul(argv[++i]);
    } else if (arg == "--samples" && i + 1 < argc) {
      opts.samples = std::stoul(argv[++i]);
    } else {
      ids.push_back(std::stoi(arg));
    }
  }
  if (ids.empty()) {
    for (int id = 1; id <= spikelab::kCriterionCount; ++id) {
      ids.push_back(id);
    }
  }
  bool ok = true;
  for (int id : ids) {
    for (const auto& row : spikelab::run_criterion(id, opts)) {
      std::cout << spikelab::format_row(row) << '\n';
      ok = ok && row.status != spikelab::RowStatus::fail;
    }
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
