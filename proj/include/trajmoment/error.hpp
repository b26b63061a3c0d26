#pragma once

#include <stdexcept>
#include <string>

namespace trajmoment {

enum class ErrorCode {
  BadMagic,
  TruncatedFile,
  NonFiniteValue,
  DimensionMismatch,
  ValidationError,
  EmptyDataset,
  EmptyPredictions,
  NoMatches,
  DataFeatureMismatch,
  MissingActionFeatures,
  PercentageTooSmall,
  UnknownQid,
  BadConfig,
  IoError,
};

const char* error_code_name(ErrorCode code);

// All library errors carry a code so the CLI can map them to exit statuses:
// input/contract problems exit 2, everything else exits 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

  // True for errors caused by bad user input rather than internal failure.
  bool is_input_error() const {
    switch (code_) {
      case ErrorCode::BadMagic:
      case ErrorCode::TruncatedFile:
      case ErrorCode::NonFiniteValue:
      case ErrorCode::ValidationError:
      case ErrorCode::EmptyDataset:
      case ErrorCode::MissingActionFeatures:
      case ErrorCode::PercentageTooSmall:
      case ErrorCode::UnknownQid:
      case ErrorCode::BadConfig:
      case ErrorCode::IoError:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace trajmoment
