#pragma once

namespace rsdlab {

// Exit codes: 0 claims verified, 1 claim violated or unverified, 2 input error.
int run_cli(int argc, char** argv);

} // namespace rsdlab
