#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sfcm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error { using Error::Error; };
class RoleError : public Error { using Error::Error; };
class FundClosedError : public Error { using Error::Error; };
class FundOpenError : public Error { using Error::Error; };
class CoverageError : public Error { using Error::Error; };
class InsufficientBalanceError : public Error { using Error::Error; };
class LinkError : public Error { using Error::Error; };
class MaturityError : public Error { using Error::Error; };
class SequenceError : public Error { using Error::Error; };
class DuplicateError : public Error { using Error::Error; };
class StateError : public Error { using Error::Error; };
class UnknownEntityError : public Error { using Error::Error; };
class InsufficientDataError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

enum class ConstraintId { C1 = 1, C2, C3, C4, C5, C6 };

std::string to_string(ConstraintId id);

/// Raised by an operation whose precondition is one of the knowledge-base
/// constraints.
class ConstraintError : public Error {
 public:
  ConstraintError(ConstraintId id, const std::string& what)
      : Error(to_string(id) + ": " + what), id_(id) {}
  ConstraintId constraint() const noexcept { return id_; }

 private:
  ConstraintId id_;
};

/// The event log does not reproduce: bad hash, unparseable line, or an event
/// that cannot be applied. `seq` is the first divergent sequence number.
class IntegrityError : public Error {
 public:
  IntegrityError(std::uint64_t seq, const std::string& what)
      : Error("seq " + std::to_string(seq) + ": " + what), seq_(seq) {}
  std::uint64_t seq() const noexcept { return seq_; }

 private:
  std::uint64_t seq_;
};

}  // namespace sfcm
