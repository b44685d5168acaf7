#pragma once

#include <iosfwd>

namespace parifs::cli {

// Exit codes: 0 ok, 1 internal error, 2 input error, 3 verification failure, 4 precision undecidable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace parifs::cli
