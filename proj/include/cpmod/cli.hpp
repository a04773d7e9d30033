// cli.hpp — Command dispatch for the cpmod tool.
//
// Kept in the library so the command surface can be driven directly from
// tests; tools/main.cpp is a thin wrapper. Reports go to `out` (JSON by
// default, text with --format text), diagnostics to `err`.
//
// Exit status: 0 = computed, positive verdict where one applies;
// 1 = computed, negative verdict; 2 = input or precondition error.

#pragma once

#include <iosfwd>

namespace cpmod {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cpmod
