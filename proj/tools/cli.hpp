#pragma once

#include <ostream>

namespace trimap::cli {

// Exit status: 0 success or help, 2 invalid input, 1 runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace trimap::cli
