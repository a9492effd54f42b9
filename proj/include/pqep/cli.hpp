#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "pqep/error.hpp"

namespace pqep {

// Exit codes: 0 pass, 1 checks failed, 2 parse/request, 3 structure, 4 solver, 5 precondition.
int exit_code(ErrorCode code);

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pqep
