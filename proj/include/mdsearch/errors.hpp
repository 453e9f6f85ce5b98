#pragma once

#include <stdexcept>
#include <string>

namespace mdsearch {

// Bad input to an operation: dimension mismatch, out-of-range point, malformed shape.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called in a state that does not allow it (empty candidate set, unsolved table).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A strategy or adversary broke the query/reply protocol.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A search exceeded its configured state or cell cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Something that the game's structure rules out happened anyway.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mdsearch
