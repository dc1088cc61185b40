#pragma once

#include <iosfwd>

namespace dmapper {

// Entry point behind the `dmapper` binary, exposed so tests can drive the
// CLI in-process.  Returns the process exit code: 0 success, 1 operational
// or validation failure, 2 usage error.  Diagnostics go to `err`, results
// to `out`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dmapper
