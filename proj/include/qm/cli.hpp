#pragma once

#include <iosfwd>

namespace qm::cli {

// Dispatches one command.  Exit status: 0 on success, 1 on a domain error
// (with a machine-readable error document on `err`), 2 on a usage error.
// Default truncation order is 50, overridable by QMODE_ORDER and by the
// --order flag (the flag wins).
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace qm::cli
