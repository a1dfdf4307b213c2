#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace iqa {

/// Violated precondition on an argument (shape mismatch, negative sigma, ...).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed encoded image. `offset()` is the byte position the decoder had
/// reached when it gave up.
class DecodeError : public std::runtime_error {
public:
  DecodeError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Non-finite or singular numerics (psnr gradient at identical inputs,
/// NaN gradients during optimization).
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Correlation statistics that are undefined for the given data.
class StatisticError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Missing tensor or shape mismatch in a weight bundle; the message names the
/// offending tensor.
class WeightError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace iqa
