#pragma once

#include <iosfwd>

namespace streamcra::cli {

/// Exit codes: 0 success, 1 validation or semantic failure, 2 I/O, parse or usage failure.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace streamcra::cli
