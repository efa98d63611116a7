#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "parslab/pars.hpp"

namespace parslab {

// A rule file names a system, optionally turns on a walk generator, and
// lists rules:
//
//   # fair coin
//   system coin ;
//   rule c -> 1/2 c, 1/2 true ;
//
//   system chain ;
//   generator walk ;            # or walk-stop
//
// Probabilities are exact ("1/2", "3/4", "1"); each right-hand side must sum
// to 1. '#' comments run to the end of the line.
struct LoadedSystem {
  std::string name;
  std::unique_ptr<TableSystem> system;
};

// Throws ParseError with 1-based line/column on malformed input.
LoadedSystem parse_rule_file(std::string_view text);

// Reads and parses; throws std::runtime_error when the file cannot be read.
LoadedSystem load_rule_file(const std::string& path);

// Canonical re-rendering: elements in intern order, right-hand sides in
// element order. Semantically equal to the input, not byte-identical.
std::string print_rule_file(const LoadedSystem& loaded);

}  // namespace parslab
