// perceptloss/perceptloss.hpp

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

#include "perceptloss/config.hpp"
#include "perceptloss/dsp.hpp"
#include "perceptloss/error.hpp"
#include "perceptloss/eval.hpp"
#include "perceptloss/manifest.hpp"
#include "perceptloss/mos.hpp"
#include "perceptloss/objective.hpp"
#include "perceptloss/pitch.hpp"
#include "perceptloss/resample.hpp"
#include "perceptloss/stoi.hpp"
#include "perceptloss/waveform.hpp"
#include "perceptloss/wav_io.hpp"
