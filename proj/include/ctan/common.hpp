#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ctan {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape or dimension disagreement between operands.
struct DimensionError : Error {
  using Error::Error;
};

/// A caller violated an operation precondition.
struct ContractError : Error {
  using Error::Error;
};

/// Malformed input file; message carries the line number.
struct ParseError : Error {
  using Error::Error;
};

/// Numerical routine failed to converge or produced non-finite values.
struct NumericError : Error {
  using Error::Error;
};

/// Event stream time went backwards.
struct CausalityError : Error {
  using Error::Error;
};

}  // namespace ctan
