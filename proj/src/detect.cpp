// Copyright 2026 The tetronsim Authors
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

#include "tetron/detect.hpp"

#include <algorithm>

namespace tetron {

DetectorSchedule::DetectorSchedule(const Circuit& c) {
  std::vector<int> order = c.slot_order();
  std::map<int, int> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  std::vector<Detector> dets = c.resolved_detectors();
  std::size_t nd = dets.size();
  bit.assign(nd, -1);
  expected.resize(nd);
  std::vector<int> first(nd), last(nd);
  std::map<int, std::vector<int>> starts, ends;
  for (std::size_t i = 0; i < nd; ++i) {
    expected[i] = dets[i].expected;
    if (dets[i].slots.empty()) throw std::invalid_argument("DetectorSchedule: empty detector");
    int lo = static_cast<int>(order.size()), hi = -1;
    for (int s : dets[i].slots) {
      lo = std::min(lo, rank.at(s));
      hi = std::max(hi, rank.at(s));
    }
    first[i] = lo;
    last[i] = hi;
    starts[lo].push_back(static_cast<int>(i));
    ends[hi].push_back(static_cast<int>(i));
  }
  std::uint64_t held = 0;
  int open = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    for (int d : starts[static_cast<int>(r)]) {
      if (held == ~std::uint64_t(0)) throw std::invalid_argument("DetectorSchedule: more than 64 open detectors");
      int b = __builtin_ctzll(~held);
      bit[d] = b;
      held |= std::uint64_t(1) << b;
      max_open = std::max(max_open, ++open);
    }
    for (int d : ends[static_cast<int>(r)]) {
      held &= ~(std::uint64_t(1) << bit[d]);
      --open;
    }
  }
  for (std::size_t i = 0; i < nd; ++i) {
    for (int s : dets[i].slots) {
      uses[s].push_back({static_cast<int>(i), rank.at(s) == first[i], rank.at(s) == last[i]});
    }
  }
}

}  // namespace tetron
