#pragma once

#include <iosfwd>

namespace munu::cli {

// Parses argv and executes one subcommand. Exit codes: 0 all assertions
// passed, 1 an assertion failed, 2 usage error, 3 resource/accuracy error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace munu::cli
