#pragma once

#include <iosfwd>

namespace raloops {

// Entry point of the command-line tool, factored out for testing.  Verdict
// lines go to `out`; diagnostics and timings go to `err`.  Returns the
// process exit code: 0 pass, 1 property failure, 2 constraint violation,
// 3 parse error, 4 classification no-match sentinel.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace raloops
