#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nw::cli {

struct Outcome {
  int exit_code = 0;  // 0 success, 1 domain error, 2 usage error
  std::string out;    // report (JSON, CSV or text)
  std::string err;    // usage messages
};

/// Runs one subcommand; `args` excludes the program name. Reads
/// NW_DEFAULT_BITS from the environment when --bits is absent.
Outcome run(const std::vector<std::string>& args);

struct SelftestCheck {
  std::string name;
  std::size_t cases = 0, passed = 0;
};

/// Exact identity suite: Ramanujan system, theta log Delta = E2, the
/// cleared j identities, Leibniz for w, and the (12q)^k d^k/dq^k bridge.
std::vector<SelftestCheck> selftest(std::size_t N);

}  // namespace nw::cli
