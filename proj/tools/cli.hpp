#pragma once

#include <iosfwd>

namespace egogaze::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitIo = 2;

/// Entry point of the `egogaze` tool. Machine-readable results go to `out`,
/// diagnostics and summaries to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace egogaze::cli
