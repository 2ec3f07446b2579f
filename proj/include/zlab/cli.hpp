#ifndef ZLAB_CLI_HPP
#define ZLAB_CLI_HPP

#include <iosfwd>

namespace zlab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the zlab tool. Human-readable lines go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zlab

#endif
