#pragma once

#include <iosfwd>
#include <string>

namespace interp_lab::cli {

/// Exit codes: 0 success, 1 failed verification or computation error,
/// 2 usage error or unreadable instance.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// %.17g with no locale dependence.
std::string format_double(double v);

}  // namespace interp_lab::cli
