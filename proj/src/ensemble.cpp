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

#include "tetron/ensemble.hpp"

namespace tetron {

MeasurementSplit measurement_channels(const Operation& op, int width, const NoiseParams& noise) {
  if (auto* m = std::get_if<Meas1Op>(&op)) {
    MeasurementSplit local = meas1_split(m->basis, noise.p_a, noise.p1);
    std::vector<int> q = {m->qubit};
    return {local.pre.on(width, q), m->basis.embed(width, q.data()), noise.p_a, local.post.on(width, q)};
  }
  if (auto* m = std::get_if<Meas2Op>(&op)) {
    MeasurementSplit local = meas2_split(m->pair, noise.p_a, noise.p1, noise.p2, noise.theta);
    std::vector<int> q = {m->q0, m->q1};
    return {local.pre.on(width, q), m->pair.embed(width, q.data()), noise.p_a, local.post.on(width, q)};
  }
  throw std::invalid_argument("measurement_channels: not a measurement");
}

ChannelProgram idle_program(int qubit, int width, const NoiseParams& noise) {
  return idle_channel(noise.p1, noise.theta).on(width, {qubit});
}

ChannelProgram rotation_program(const RotateOp& op, int width) {
  return timed_coupling_rotation(op.axis, op.phi).on(width, {op.qubit});
}

}  // namespace tetron
