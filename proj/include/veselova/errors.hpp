#pragma once

#include <stdexcept>
#include <string>

namespace veselova {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidMassTensor : public Error {
 public:
  using Error::Error;
};

class RankError : public Error {
 public:
  using Error::Error;
};

// Raised when a numerical invariant leaves its guard band (orthogonality, energy).
class DriftError : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class ZeroMomentum : public Error {
 public:
  using Error::Error;
};

class OutsideSpace : public Error {
 public:
  using Error::Error;
};

class DegenerateBody : public Error {
 public:
  using Error::Error;
};

class DegenerateConfiguration : public Error {
 public:
  using Error::Error;
};

class OutsideImage : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace veselova
