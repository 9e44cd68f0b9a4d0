#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dimlab::cli {

// Exit codes: 0 success, 1 verification or consistency failure, 2 usage or parameter error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dimlab::cli
