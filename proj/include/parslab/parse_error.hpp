#pragma once

#include <stdexcept>
#include <string>

namespace parslab {

// Raised by both surface parsers (rule files, lambda terms). Positions are
// 1-based; the CLI turns this into exit code 2.
struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int col)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

}  // namespace parslab
