// perceptloss/error.hpp

// Copyright 2026  Perceptloss Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace perceptloss {

enum class ErrorKind {
  // audio i/o
  FileNotFound,
  CorruptFile,
  UnsupportedEncoding,
  EmptyAudio,
  RateTooLow,
  // manifests / config
  MissingColumn,
  DuplicatePairId,
  EmptyManifest,
  ConfigInvalid,
  // dsp
  SignalTooShort,
  AllFramesSilent,
  BandAboveNyquist,
  SampleRateMismatch,
  // stoi
  DegenerateBand,
  LengthMismatch,
  // pitch
  NoVoicedFrames,
  ContourTooShort,
  DegenerateContour,
  // scorer
  BadChecksum,
  ShapeMismatch,
  UnsupportedVersion,
  // objective
  NonFiniteComponent,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::FileNotFound:        return "FileNotFound";
    case ErrorKind::CorruptFile:         return "CorruptFile";
    case ErrorKind::UnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorKind::EmptyAudio:          return "EmptyAudio";
    case ErrorKind::RateTooLow:          return "RateTooLow";
    case ErrorKind::MissingColumn:       return "MissingColumn";
    case ErrorKind::DuplicatePairId:     return "DuplicatePairId";
    case ErrorKind::EmptyManifest:       return "EmptyManifest";
    case ErrorKind::ConfigInvalid:       return "ConfigInvalid";
    case ErrorKind::SignalTooShort:      return "SignalTooShort";
    case ErrorKind::AllFramesSilent:     return "AllFramesSilent";
    case ErrorKind::BandAboveNyquist:    return "BandAboveNyquist";
    case ErrorKind::SampleRateMismatch:  return "SampleRateMismatch";
    case ErrorKind::DegenerateBand:      return "DegenerateBand";
    case ErrorKind::LengthMismatch:      return "LengthMismatch";
    case ErrorKind::NoVoicedFrames:      return "NoVoicedFrames";
    case ErrorKind::ContourTooShort:     return "ContourTooShort";
    case ErrorKind::DegenerateContour:   return "DegenerateContour";
    case ErrorKind::BadChecksum:         return "BadChecksum";
    case ErrorKind::ShapeMismatch:       return "ShapeMismatch";
    case ErrorKind::UnsupportedVersion:  return "UnsupportedVersion";
    case ErrorKind::NonFiniteComponent:  return "NonFiniteComponent";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable kind next to the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace perceptloss
