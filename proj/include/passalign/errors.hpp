#pragma once

#include <stdexcept>
#include <string>

namespace passalign {

// Base class for all recoverable errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// S-plane cannot be constructed: |l_O| ~ 0 (centered full contact) or the
// lever is parallel to the surface normal. Callers that compute contact
// indicators map this to the beta = 0 case.
struct DegenerateSPlane : Error {
  using Error::Error;
};

struct ZeroForce : Error {
  using Error::Error;
};

// Driving force does not push toward the work surface.
struct WrongSide : Error {
  using Error::Error;
};

// Input outside the domain of a closed-form expression, e.g. 3 sin^2(beta)
// reaching the singularity at 1.
struct OutOfValidRange : Error {
  using Error::Error;
};

struct BadContactCount : Error {
  using Error::Error;
};

struct ZeroNormalForce : Error {
  using Error::Error;
};

struct ZeroInertia : Error {
  using Error::Error;
};

struct NonFiniteState : Error {
  using Error::Error;
};

struct EmptySeries : Error {
  using Error::Error;
};

struct ZeroReference : Error {
  using Error::Error;
};

struct TraceTooShort : Error {
  using Error::Error;
};

struct UnknownAxis : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace passalign
