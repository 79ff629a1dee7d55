//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>

namespace gmc {

// Base class for all typed errors raised by the library. Catching gmc::Error
// covers everything except std::bad_alloc and friends.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- parse / data errors ---
struct MalformedRecord : Error {
  using Error::Error;
};
struct UnsupportedAtomType : Error {
  using Error::Error;
};
struct DanglingBondIndex : Error {
  using Error::Error;
};
struct EmptyAfterCleaning : Error {
  using Error::Error;
};
struct MissingColumn : Error {
  using Error::Error;
};
struct LabelKindMismatch : Error {
  using Error::Error;
};
struct EmptyDataset : Error {
  using Error::Error;
};

// --- numerics ---
struct DimensionMismatch : Error {
  using Error::Error;
};
struct Diverged : Error {
  using Error::Error;
};
struct SingleClass : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct ZeroVariance : Error {
  using Error::Error;
};
struct TooFewSamples : Error {
  using Error::Error;
};

// --- persistence ---
struct CorruptCheckpoint : Error {
  using Error::Error;
};
struct CorruptCache : Error {
  using Error::Error;
};
struct VersionMismatch : Error {
  using Error::Error;
};
struct FingerprintMismatch : Error {
  using Error::Error;
};

// --- harness / config ---
struct FailedStudy : Error {
  using Error::Error;
};
struct EmptySpace : Error {
  using Error::Error;
};
struct UnknownSybylType : Error {
  using Error::Error;
};
struct UnknownKey : Error {
  using Error::Error;
};
struct TypeError : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};

}  // namespace gmc
