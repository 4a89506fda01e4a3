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

#pragma once

#include <cstdint>

#include "mmpu/errors.hpp"

namespace mmpu {

/// Bipolar binary memristor: two resistance levels plus the switching
/// thresholds between them. SET (v >= v_set, v_set > 0) takes the device
/// from R_OFF to R_ON; RESET (v <= v_reset, v_reset < 0) the other way.
struct DeviceParams {
  double r_on = 1.0e3;     // ohms, logical 1
  double r_off = 1.0e6;    // ohms, logical 0
  double v_set = 1.3;      // volts, > 0
  double v_reset = -0.3;   // volts, < 0

  bool ok() const {
    return r_on > 0.0 && r_off > r_on && v_set > 0.0 && v_reset < 0.0;
  }
  void validate() const {
    if (!ok()) throw Error("device parameters violate r_off > r_on > 0, v_set > 0, v_reset < 0");
  }
};

/// State of one cell in the binary model: resistance is always exactly
/// r_on or r_off of that cell's parameters. r_on <=> logical 1.
struct CellState {
  double resistance = 1.0e6;

  static CellState from_bit(bool bit, const DeviceParams& p) {
    return CellState{bit ? p.r_on : p.r_off};
  }
  // Geometric midpoint keeps the readout well-defined for per-cell
  // perturbed parameter pairs.
  bool logical(const DeviceParams& p) const {
    return resistance * resistance < p.r_on * p.r_off;
  }
};

/// Relative spread of per-cell parameter perturbation. sigma_r scales a
/// lognormal factor on both resistances, sigma_v a normal factor on both
/// thresholds. Zero sigma means exact nominal values.
struct VariationSpec {
  double sigma_r = 0.0;
  double sigma_v = 0.0;
  std::uint64_t seed = 0;

  bool ok() const { return sigma_r >= 0.0 && sigma_v >= 0.0; }
};

/// Result of one quasi-static voltage application.
struct StepResult {
  CellState state;
  bool switched = false;
};

/// Threshold switching rule. v_dev is the wordline-minus-bitline voltage
/// across the device. Total on valid inputs; idempotent once it reports
/// switched = false at a fixed v_dev.
inline StepResult step_state(CellState state, const DeviceParams& params,
                             double v_dev) {
  const bool one = state.logical(params);
  if (!one && v_dev >= params.v_set) {
    return {CellState{params.r_on}, true};
  }
  if (one && v_dev <= params.v_reset) {
    return {CellState{params.r_off}, true};
  }
  return {state, false};
}

/// Perturbed per-cell parameters, a pure function of (spec.seed, row, col).
/// Resamples up to 100 times when a draw violates the DeviceParams
/// invariants and throws SampledParamsInvalid after that.
DeviceParams sample_params(const DeviceParams& nominal,
                           const VariationSpec& variation, std::uint32_t row,
                           std::uint32_t col);

}  // namespace mmpu
