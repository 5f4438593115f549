#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddcorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitScenario = 2;

// Runs one `ddcorr` invocation. argv[0] is the program name.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ddcorr::cli
