// Copyright 2026 The xhbac Authors
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

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "xhbac/core/spectrum.hpp"

namespace xhbac::protocols {

/// Round-by-round record of the target system's populations. Round 0 is the
/// initial state.
class ProtocolTrace {
 public:
  struct Round {
    std::size_t index;
    PopulationVector populations;
    double ground;
  };

  ProtocolTrace(std::string label, CompositeSpec spec) : label_(std::move(label)), spec_(std::move(spec)) {}

  void push(PopulationVector populations) {
    const double ground = populations[0];
    rounds_.push_back({rounds_.size(), std::move(populations), ground});
  }

  const std::string& label() const { return label_; }
  const CompositeSpec& spec() const { return spec_; }
  const std::vector<Round>& rounds() const { return rounds_; }
  std::size_t size() const { return rounds_.size(); }
  const Round& operator[](std::size_t k) const { return rounds_.at(k); }

  std::vector<double> ground_populations() const {
    std::vector<double> out;
    out.reserve(rounds_.size());
    for (const auto& r : rounds_) out.push_back(r.ground);
    return out;
  }

 private:
  std::string label_;
  CompositeSpec spec_;
  std::vector<Round> rounds_;
};

}  // namespace xhbac::protocols
