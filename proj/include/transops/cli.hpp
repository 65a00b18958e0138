#pragma once

#include <string>

namespace transops {

/// Entry point of the batch harness; returns the process exit code
/// (0 = all checks passed, 1 = check failures, 2 = configuration error).
int run_cli(int argc, const char* const* argv);

/// Canonical form of a JSON config document (sorted keys, normalized
/// numbers); parse-serialize round trips are idempotent.
std::string canonical_config(const std::string& text);

} // namespace transops
