#pragma once

#include <ostream>

namespace elemnorm::cli {

/// Exit codes: 0 success, 1 input error, 2 internal or tolerance failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace elemnorm::cli
