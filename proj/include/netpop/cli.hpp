#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace netpop {

inline constexpr std::string_view kVersion = "0.1.0";

/// Entry point of the `netpop` tool. Returns 0 on success, 1 for invalid
/// input or configuration and 2 when a computation fails. Errors are written
/// to `err` as a single JSON line.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netpop
