#pragma once

namespace ibm {

/// Project version plus `git describe` at configure time; stamped into manifests.
const char* code_version();

}  // namespace ibm
