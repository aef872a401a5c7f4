#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace galms {

// Filter blow-up: non-finite state, runaway norm, or a rotor collapsing to
// zero during adaptation. Carries the iteration at which it happened.
struct divergence_error : std::runtime_error {
  std::int64_t iteration;
  divergence_error(const std::string& what, std::int64_t iter)
      : std::runtime_error(what + " (iteration " + std::to_string(iter) + ")"), iteration(iter) {}
};

// Malformed input text (PLY, correspondence file). `line` is 1-based.
struct parse_error : std::runtime_error {
  std::size_t line;
  parse_error(const std::string& what, std::size_t line_no)
      : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

// Filesystem-level failure (open/write), with the offending path.
struct io_error : std::runtime_error {
  io_error(const std::string& what, const std::string& path)
      : std::runtime_error(what + ": " + path) {}
};

}  // namespace galms
