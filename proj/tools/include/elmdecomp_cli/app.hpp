#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace elm {
class Error;
}

namespace elm::cli {

/// Command-line entry point. Returns the process exit status: 0 on
/// success, 1 on a pipeline or validation failure (with a JSON error record
/// on `err`), 2 on usage errors including an empty config.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Machine-readable record of a library error.
nlohmann::json error_record(const Error& e);

}  // namespace elm::cli
