#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace saddlegkb::cli {

// Exit codes: 0 success, 1 error (including usage errors), 2 the solver
// stopped at maxit without meeting the tolerance.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMaxit = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace saddlegkb::cli
