#include "ibm/version.hpp"

#ifndef IBM_CODE_VERSION
#define IBM_CODE_VERSION "unknown"
#endif

namespace ibm {

const char* code_version() { return IBM_CODE_VERSION; }

}  // namespace ibm
