#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mwarp {

/// Base class of every data-dependent failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A log map or parallel transport was requested across the cut locus.
class CutLocusError : public Error {
 public:
  explicit CutLocusError(const std::string& what,
                         std::optional<std::size_t> index = std::nullopt)
      : Error(index ? what + " (sample " + std::to_string(*index) + ")" : what),
        index_(index) {}

  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  std::optional<std::size_t> index_;
};

/// A tangent vector was used at a point other than its base.
class BaseMismatchError : public Error {
 public:
  using Error::Error;
};

/// Two TSRVFs built at different reference points were compared.
class MismatchedReferenceError : public Error {
 public:
  using Error::Error;
};

class DegenerateCurveError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class EmptyTrackError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mwarp
