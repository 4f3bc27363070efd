#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ni {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class InvalidDescriptor : public Error {
 public:
  using Error::Error;
};

class NotViable : public Error {
 public:
  using Error::Error;
};

class NotNontransitive : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class SpecialCaseViolation : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace ni
