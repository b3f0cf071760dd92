#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vra {

// argv[0] is the program name. Exit codes: 0 success, 1 domain error
// (JSON error object on out), 2 usage error (message on err).
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace vra
