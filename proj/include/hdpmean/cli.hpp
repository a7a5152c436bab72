#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hdpmean {

std::string version_string();

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 infeasible/domain failure, 2 usage error. Errors are emitted as a JSON
/// object on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace hdpmean
