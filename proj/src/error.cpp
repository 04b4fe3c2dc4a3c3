/*
 * Copyright 2026 The vtrust Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vtrust/error.hpp"

namespace vtrust {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UndefinedOperand: return "UndefinedOperand";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MissingDates: return "MissingDates";
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::EmptyHistory: return "EmptyHistory";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::NegativePrediction: return "NegativePrediction";
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::Unsimplifiable: return "Unsimplifiable";
    case ErrorCode::NotReadOnce: return "NotReadOnce";
    case ErrorCode::MissingOpinion: return "MissingOpinion";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Busy: return "Busy";
  }
  return "Unknown";
}

bool is_data_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::EmptyDataset:
    case ErrorCode::MissingDates:
    case ErrorCode::UnknownComponent:
    case ErrorCode::NegativePrediction:
    case ErrorCode::SchemaError:
    case ErrorCode::MissingOpinion:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

namespace {
std::string with_line(const std::string& message,
                      std::optional<std::size_t> line) {
  if (!line) return message;
  return "line " + std::to_string(*line) + ": " + message;
}
}  // namespace

ParseError::ParseError(const std::string& message,
                       std::optional<std::size_t> line)
    : Error(ErrorCode::ParseError, with_line(message, line)), line_(line) {}

}  // namespace vtrust
