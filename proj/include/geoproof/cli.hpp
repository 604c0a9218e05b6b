#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geoproof {

// Command-line entry point; `args` excludes the program name.
// Exit codes: 0 success, 1 domain error (or failed replay expectations),
// 2 usage or input error.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geoproof
