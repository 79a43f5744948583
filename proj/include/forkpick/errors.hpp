#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forkpick {

// Bad user input: unknown labels, mismatched leaf sets, inapplicable operations.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Newick / extended Newick syntax or structure error at a character offset.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : InputError(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// A self-check inside a constructive procedure failed. Never expected on valid input.
class ConstructionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace forkpick
