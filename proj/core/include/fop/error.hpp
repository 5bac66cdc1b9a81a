#ifndef FOP_ERROR_HPP
#define FOP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fop {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ill-sorted application, atom, equality or substitution. `path` locates the
// offending subterm, outermost first, e.g. "and[1]/=/var".
class SortError : public Error {
 public:
  SortError(const std::string& what, std::string path)
      : Error(path.empty() ? what : what + " at " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A symbol violates the arity/sort rule of its signature section.
class SectionError : public Error {
 public:
  using Error::Error;
};

class MissingPrimedCopy : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public Error {
 public:
  enum class Kind {
    kModViolation,
    kInitShapeError,
    kTopoSymbolInInvariant,
    kFreeVariable,
    kUnknownClass,
    kOther,
  };
  ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class NonDeterministicTopology : public Error {
 public:
  NonDeterministicTopology(const std::string& what, int node, int size)
      : Error(what), node_(node), size_(size) {}
  int node() const { return node_; }
  int size() const { return size_; }

 private:
  int node_;
  int size_;
};

// Enumeration would exceed the configured cap.
class ExplosionGuard : public Error {
 public:
  using Error::Error;
};

class SolverNotFound : public Error {
 public:
  using Error::Error;
};

class SolverCrashed : public Error {
 public:
  using Error::Error;
};

class UnsupportedBackground : public Error {
 public:
  using Error::Error;
};

class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace fop

#endif  // FOP_ERROR_HPP
