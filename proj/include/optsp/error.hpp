#pragma once

#include <stdexcept>
#include <string>

namespace optsp {

enum class ErrorKind { Parse, Range, Precondition, Budget };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};

struct RangeError : Error {
  explicit RangeError(const std::string& what) : Error(ErrorKind::Range, what) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

struct BudgetError : Error {
  explicit BudgetError(const std::string& what) : Error(ErrorKind::Budget, what) {}
};

}  // namespace optsp
