#ifndef QAKD_ERRORS_HPP
#define QAKD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qakd {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller passed an argument outside the documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An internal precondition between two components was broken
/// (mismatched lengths, non-finite logits, out-of-range gathers).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Input data parsed but violates a schema or dataset invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON. `byte()` is the offset reported by the parser.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte) : Error(what), byte_(byte) {}
  std::size_t byte() const noexcept { return byte_; }

 private:
  std::size_t byte_;
};

/// Token sequences could not be aligned; carries both cursors at the failing group.
class AlignmentError : public Error {
 public:
  AlignmentError(const std::string& what, std::size_t student_pos, std::size_t teacher_pos)
      : Error(what), student_pos_(student_pos), teacher_pos_(teacher_pos) {}
  std::size_t student_position() const noexcept { return student_pos_; }
  std::size_t teacher_position() const noexcept { return teacher_pos_; }

 private:
  std::size_t student_pos_;
  std::size_t teacher_pos_;
};

/// File could not be opened, read, written or renamed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qakd

#endif  // QAKD_ERRORS_HPP
