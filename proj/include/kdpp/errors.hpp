#pragma once

#include <stdexcept>
#include <string>

namespace kdpp
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Argument hits a pole of Gamma or digamma.
class PoleError : public Error
{
  public:
    using Error::Error;
};

/// Argument outside the domain of a formula (e.g. non-admissible parameters).
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// Problem size exceeds a hard cap.
class SizeError : public Error
{
  public:
    using Error::Error;
};

class WindowMismatch : public Error
{
  public:
    using Error::Error;
};

class DuplicateSite : public Error
{
  public:
    using Error::Error;
};

class DimensionMismatch : public Error
{
  public:
    using Error::Error;
};

/// A numerical self-check (residual, reality of a result) failed.
class NumericalError : public Error
{
  public:
    using Error::Error;
};

class ZeroProbability : public Error
{
  public:
    using Error::Error;
};

class EmptyInput : public Error
{
  public:
    using Error::Error;
};

class SamePoint : public Error
{
  public:
    using Error::Error;
};

class NotReversible : public Error
{
  public:
    using Error::Error;
};

/// Rejection sampling exhausted its attempt budget.
class PatternTooRare : public Error
{
  public:
    using Error::Error;
};

}  // namespace kdpp
