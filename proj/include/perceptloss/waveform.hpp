// perceptloss/waveform.hpp

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

#include <cmath>
#include <cstddef>
#include <vector>

#include "perceptloss/error.hpp"

namespace perceptloss {

/// Mono audio, samples nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = 0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

/// Every metric entry point calls this: nonempty, positive rate, finite samples.
inline void validate_waveform(const Waveform& w, const char* what) {
  if (w.sample_rate_hz <= 0)
    throw Error(ErrorKind::CorruptFile,
                std::string(what) + " has nonpositive sample rate");
  if (w.samples.empty())
    throw Error(ErrorKind::EmptyAudio, std::string(what) + " has no samples");
  for (double s : w.samples)
    if (!std::isfinite(s))
      throw Error(ErrorKind::CorruptFile,
                  std::string(what) + " contains non-finite samples");
}

}  // namespace perceptloss
