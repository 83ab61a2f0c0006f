#pragma once

#include <ostream>

namespace crl::cli {

/// Quick property checks over the built-in instances; one PASS/FAIL line each.
/// True iff every check passes.
bool run_selftest(std::ostream& out);

}  // namespace crl::cli
