#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtori {

// Every failure raised by the library derives from Error, so callers that only
// care about "did it work" can catch a single type. The CLI maps the subclasses
// onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero quaternion") {}
};

class RealInput : public Error {
 public:
  RealInput() : Error("quaternion has no imaginary part") {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("syntax error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ExponentBaseUnsupported : public Error {
 public:
  ExponentBaseUnsupported() : Error("'^' is only defined with the constant e as base") {}
};

class InvalidBasis : public Error {
 public:
  using Error::Error;
};

class SingularBasis : public InvalidBasis {
 public:
  SingularBasis() : InvalidBasis("basis vectors are linearly dependent") {}
};

class NotPositiveDefinite : public InvalidBasis {
 public:
  NotPositiveDefinite() : InvalidBasis("Gram matrix is not positive definite") {}
};

class BoxTooLarge : public Error {
 public:
  BoxTooLarge(unsigned long long cells, unsigned long long cap)
      : Error("enumeration needs " + std::to_string(cells) + " cells, cap is " +
              std::to_string(cap)),
        cells_(cells),
        cap_(cap) {}
  unsigned long long cells() const noexcept { return cells_; }
  unsigned long long cap() const noexcept { return cap_; }

 private:
  unsigned long long cells_;
  unsigned long long cap_;
};

class NotUnimodular : public Error {
 public:
  NotUnimodular() : Error("integer matrix does not have determinant +1 or -1") {}
};

class RankDeficient : public Error {
 public:
  RankDeficient() : Error("integer rows are not linearly independent") {}
};

class NotReduced : public Error {
 public:
  NotReduced() : Error("basis is not reduced") {}
};

class InternalPostconditionFailure : public Error {
 public:
  using Error::Error;
};

class UnclassifiableGroup : public Error {
 public:
  using Error::Error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

}  // namespace qtori
