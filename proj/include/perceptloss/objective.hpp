// perceptloss/objective.hpp

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

// Weighted composition of the generator and discriminator objectives.
// The adversarial, speaker, style and cycle terms are supplied by the
// caller; only the perceptual term originates in this library.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "perceptloss/error.hpp"

namespace perceptloss {

/// Which of the library's losses feeds the l_p slot of the objectives.
/// One loss per configuration.
enum class PerceptualKind { Stoi, Pmos, Pcc };

struct LambdaWeights {
  double spk = 0.1;
  double aspk = 0.5;
  double sty = 1.0;
  double cyc = 1.0;
  double stoi = 1.0;
  double mse = 0.1;
  double mos = 1.0;
  double p = 1.0;

  void validate() const {
    for (double v : {spk, aspk, sty, cyc, stoi, mse, mos, p})
      if (!(v >= 0.0) || !std::isfinite(v))
        throw Error(ErrorKind::ConfigInvalid, "lambda weights must be >= 0");
  }
};

struct GeneratorComponents {
  double l_adv = 0.0;
  double l_aspk = 0.0;
  double l_sty = 0.0;
  double l_cyc = 0.0;
  double l_p = 0.0;  // the configured perceptual loss
};

struct DiscriminatorComponents {
  double l_adv = 0.0;
  double l_spk = 0.0;
  double l_p = 0.0;
};

struct LossComponent {
  std::string name;
  double raw = 0.0;
  double weight = 0.0;
  double weighted = 0.0;
};

struct LossBreakdown {
  std::vector<LossComponent> components;
  double total = 0.0;

  /// Left-to-right re-summation of the weighted entries; bit-identical to
  /// total by construction.
  double recompute_total() const {
    double acc = 0.0;
    for (const LossComponent& c : components) acc += c.weighted;
    return acc;
  }
};

namespace detail {

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v))
    throw Error(ErrorKind::NonFiniteComponent, std::string(name) + " is not finite");
}

inline void push_term(LossBreakdown& b, const char* name, double raw, double weight) {
  LossComponent c{name, raw, weight, weight * raw};
  b.total += c.weighted;
  b.components.push_back(std::move(c));
}

}  // namespace detail

inline LossBreakdown generator_objective(const GeneratorComponents& c,
                                         const LambdaWeights& w) {
  detail::require_finite(c.l_adv, "l_adv");
  detail::require_finite(c.l_aspk, "l_aspk");
  detail::require_finite(c.l_sty, "l_sty");
  detail::require_finite(c.l_cyc, "l_cyc");
  detail::require_finite(c.l_p, "l_p");
  LossBreakdown b;
  detail::push_term(b, "adv", c.l_adv, 1.0);
  detail::push_term(b, "aspk", c.l_aspk, w.aspk);
  detail::push_term(b, "sty", c.l_sty, w.sty);
  detail::push_term(b, "cyc", c.l_cyc, w.cyc);
  detail::push_term(b, "perceptual", c.l_p, w.p);
  return b;
}

inline LossBreakdown discriminator_objective(const DiscriminatorComponents& c,
                                             const LambdaWeights& w) {
  detail::require_finite(c.l_adv, "l_adv");
  detail::require_finite(c.l_spk, "l_spk");
  detail::require_finite(c.l_p, "l_p");
  LossBreakdown b;
  detail::push_term(b, "adv", c.l_adv, -1.0);
  detail::push_term(b, "spk", c.l_spk, w.spk);
  detail::push_term(b, "perceptual", c.l_p, w.p);
  return b;
}

}  // namespace perceptloss
