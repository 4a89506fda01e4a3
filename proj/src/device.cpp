/*
 * Copyright 2026 The mmpu-sim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mmpu/device.hpp"

#include <cmath>
#include <random>

#include "mmpu/rng.hpp"

namespace mmpu {

DeviceParams sample_params(const DeviceParams& nominal,
                           const VariationSpec& variation, std::uint32_t row,
                           std::uint32_t col) {
  nominal.validate();
  if (!variation.ok()) throw Error("variation sigmas must be non-negative");
  if (variation.sigma_r == 0.0 && variation.sigma_v == 0.0) return nominal;

  auto gen = engine_for(variation.seed, row, col);
  std::normal_distribution<double> unit(0.0, 1.0);

  // Resistances get lognormal factors exp(N(0, sigma_r)): strictly positive,
  // with log-sigma standing in for relative sigma (equal to first order).
  // Thresholds get 1 + N(0, sigma_v) factors.
  for (int attempt = 0; attempt < 100; ++attempt) {
    DeviceParams out = nominal;
    out.r_on *= std::exp(variation.sigma_r * unit(gen));
    out.r_off *= std::exp(variation.sigma_r * unit(gen));
    out.v_set *= 1.0 + variation.sigma_v * unit(gen);
    out.v_reset *= 1.0 + variation.sigma_v * unit(gen);
    if (out.ok()) return out;
  }
  throw SampledParamsInvalid("cell (" + std::to_string(row) + "," +
                             std::to_string(col) +
                             "): 100 perturbation draws violated device invariants");
}

}  // namespace mmpu
