#pragma once

#include <stdexcept>
#include <string>

namespace lacsh {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- configuration / CLI ---
struct ConfigError : Error {
  using Error::Error;
};

// --- data pipeline ---
struct DataError : Error {
  using Error::Error;
};
struct MalformedRowError : DataError {
  using DataError::DataError;
};
struct DuplicateKeyError : DataError {
  using DataError::DataError;
};
struct UnknownColumnError : DataError {
  using DataError::DataError;
};
struct DomainError : DataError {
  using DataError::DataError;
};
struct AllMissingError : DataError {
  using DataError::DataError;
};
struct ZeroVarianceError : DataError {
  using DataError::DataError;
};
struct InvalidCoordinateError : DataError {
  using DataError::DataError;
};
struct DatasetInvariantError : DataError {
  using DataError::DataError;
};

// --- numerics / statistics ---
struct NumericError : Error {
  using Error::Error;
};
struct NotPositiveDefiniteError : NumericError {
  using NumericError::NumericError;
};
struct InvalidDfError : NumericError {
  using NumericError::NumericError;
};
struct InvalidParameterError : NumericError {
  using NumericError::NumericError;
};
struct NonpositiveVarianceError : NumericError {
  using NumericError::NumericError;
};
struct NonpositivePhiError : NumericError {
  using NumericError::NumericError;
};
struct LengthMismatchError : NumericError {
  using NumericError::NumericError;
};
struct ShapeMismatchError : NumericError {
  using NumericError::NumericError;
};
struct RankDeficientError : NumericError {
  using NumericError::NumericError;
};
struct SingleClassError : NumericError {
  using NumericError::NumericError;
};
struct DegenerateInputError : NumericError {
  using NumericError::NumericError;
};
struct IndexOutOfRangeError : NumericError {
  using NumericError::NumericError;
};
struct EmptyChainError : NumericError {
  using NumericError::NumericError;
};
struct EmptyGridError : NumericError {
  using NumericError::NumericError;
};

// --- sampler / validation ---
struct SamplerError : Error {
  using Error::Error;
};
struct FactorizationFailureError : SamplerError {
  using SamplerError::SamplerError;
};
struct RejectionStallError : SamplerError {
  using SamplerError::SamplerError;
};
struct CheckpointError : SamplerError {
  using SamplerError::SamplerError;
};
struct GridTooLargeError : Error {
  using Error::Error;
};

// --- analysis ---
struct MismatchError : Error {
  using Error::Error;
};

}  // namespace lacsh
