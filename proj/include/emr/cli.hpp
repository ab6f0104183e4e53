#pragma once

#include <ostream>

namespace emr {

// exit codes: 0 success, 1 I/O, schema or usage error, 2 inadmissible input
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace emr
