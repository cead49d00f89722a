#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bvdiff {

// Batch experiment runner. Exit codes: 0 success, 2 when a search ends
// with a "nothing found" outcome, 1 for bad configuration or evaluation
// errors. Reports are written as deterministic JSON: identical seeds give
// byte-identical files.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace bvdiff
