#pragma once

#include <iosfwd>

namespace ibm::cli {

/// Entry point of the `ibm` driver; returns the process exit code
/// (0 pass, 1 verdict failure, 2 configuration error, 3 numeric error).
int run(int argc, char** argv);

}  // namespace ibm::cli
