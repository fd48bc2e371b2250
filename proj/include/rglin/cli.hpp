#pragma once

#include <iosfwd>

namespace rglin {

/// Entry point shared by the rglin binary and the in-process CLI tests.
/// Exit codes: 0 success / all checks hold, 1 violations found or replay
/// error, 2 schema error, 3 trace cap exceeded.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rglin
