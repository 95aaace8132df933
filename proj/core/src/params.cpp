// Copyright 2026 The fluosq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fluosq/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fluosq {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

void check_rate(double value, const char* name, bool strictly_positive) {
  require(std::isfinite(value), std::string(name) + " must be finite");
  if (strictly_positive) {
    require(value > 0.0, std::string(name) + " must be > 0");
  } else {
    require(value >= 0.0, std::string(name) + " must be >= 0");
  }
}

}  // namespace

void FreeSpaceParams::validate() const {
  check_rate(gamma, "gamma", true);
  check_rate(gamma_d, "gamma_d", false);
  check_rate(p_x, "p_x", false);
  check_rate(rabi, "rabi", false);
  require(std::isfinite(delta_x), "delta_x must be finite");
}

void SystemParams::validate() const {
  check_rate(gamma, "gamma", true);
  check_rate(gamma_d, "gamma_d", false);
  check_rate(p_x, "p_x", false);
  check_rate(p_c, "p_c", false);
  check_rate(kappa, "kappa", true);
  check_rate(g, "g", true);
  check_rate(rabi, "rabi", false);
  require(std::isfinite(delta_x), "delta_x must be finite");
  require(std::isfinite(delta_c), "delta_c must be finite");
  // The bosonic mode has no stationary occupation at p_c >= kappa.
  require(p_c < kappa, "p_c must be < kappa (cavity pump saturation)");
}

}  // namespace fluosq
