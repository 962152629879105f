#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tmem {

/// Entry point of the `tm` command. Returns the process exit status: 0 on
/// success, 1 on a runtime error, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tmem
