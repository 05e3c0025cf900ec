// Copyright 2026 The readlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace readlab {

// Every failure the toolkit can signal. The CLI maps these onto exit codes
// through exit_code_for().
enum class ErrorCode {
  // usage
  kUsage,
  kInvalidArgument,
  // input / schema
  kMissingFile,
  kIoError,
  kBadRow,
  kSchemaError,
  kVersionMismatch,
  kNonContiguousClasses,
  kMissingDocument,
  kProviderFailure,
  kUnknownDocId,
  kLabelOutOfRange,
  kLengthMismatch,
  kDimensionMismatch,
  // degenerate data
  kDegenerateProfile,
  kEmptyCorpus,
  kEmptyDocument,
  kEmptySentence,
  kEmptyInput,
  kConstantSeries,
  kEmptyMatrix,
  kDegenerateMarginals,
  kEmptyClass,
  kClassSmallerThanK,
  kSingleClass,
  // internal
  kInvalidProbability,
  kNonFiniteLoss,
  kInternal,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "Usage";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kBadRow: return "BadRow";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kNonContiguousClasses: return "NonContiguousClasses";
    case ErrorCode::kMissingDocument: return "MissingDocument";
    case ErrorCode::kProviderFailure: return "ProviderFailure";
    case ErrorCode::kUnknownDocId: return "UnknownDocId";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDegenerateProfile: return "DegenerateProfile";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kEmptySentence: return "EmptySentence";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kConstantSeries: return "ConstantSeries";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kDegenerateMarginals: return "DegenerateMarginals";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kClassSmallerThanK: return "ClassSmallerThanK";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kInvalidProbability: return "InvalidProbability";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

// Process exit codes: 0 success, 2 usage, 3 input/schema, 4 degenerate data,
// 5 internal.
inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
    case ErrorCode::kInvalidArgument:
      return 2;
    case ErrorCode::kMissingFile:
    case ErrorCode::kIoError:
    case ErrorCode::kBadRow:
    case ErrorCode::kSchemaError:
    case ErrorCode::kVersionMismatch:
    case ErrorCode::kNonContiguousClasses:
    case ErrorCode::kMissingDocument:
    case ErrorCode::kProviderFailure:
    case ErrorCode::kUnknownDocId:
    case ErrorCode::kLabelOutOfRange:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kDimensionMismatch:
      return 3;
    case ErrorCode::kDegenerateProfile:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kEmptyDocument:
    case ErrorCode::kEmptySentence:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kConstantSeries:
    case ErrorCode::kEmptyMatrix:
    case ErrorCode::kDegenerateMarginals:
    case ErrorCode::kEmptyClass:
    case ErrorCode::kClassSmallerThanK:
    case ErrorCode::kSingleClass:
      return 4;
    case ErrorCode::kInvalidProbability:
    case ErrorCode::kNonFiniteLoss:
    case ErrorCode::kInternal:
      return 5;
  }
  return 5;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace readlab
