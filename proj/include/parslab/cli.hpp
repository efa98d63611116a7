#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace parslab {

// The full command-line surface, callable in-process (the binary in
// tools/main.cpp is a thin wrapper). Returns the exit code:
//   0  success; a checked property holds or fails with evidence only
//   1  conclusive refutation, or a witness that does not replay
//   2  malformed rule file or lambda term (message carries line:column)
//   3  usage errors: unknown element, policy, property, or flag combination
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace parslab
