#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flc::cli {

/// Bad command line: unknown flag or subcommand, missing or conflicting options.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs one command. `args` excludes the program name. Data goes to `out`
/// (or the --out file), diagnostics to `err`. Returns 0 on success, 1 on a
/// computation error, 2 on a usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Which subcommand reaches a library operation, with a sample invocation.
struct OperationRoute {
    std::string_view operation;
    std::vector<std::string> example;
};

const std::vector<OperationRoute>& operation_routes();

}  // namespace flc::cli
