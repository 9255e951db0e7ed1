// Copyright 2026 The Cargoswarm Authors
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

#include <benchmark/benchmark.h>

#include <vector>

#include "cargoswarm/rfnet.hpp"

using namespace cargoswarm;

namespace {

void BM_EncodeTelemetry(benchmark::State& state) {
  const Message m = Message::telemetry(7, {1000, 250, 100, 9000});
  for (auto _ : state) benchmark::DoNotOptimize(encode(m));
}
BENCHMARK(BM_EncodeTelemetry);

void BM_DecodeTelemetry(benchmark::State& state) {
  const WireFrame f = encode(Message::telemetry(7, {1000, 250, 100, 9000}));
  for (auto _ : state) benchmark::DoNotOptimize(decode(f.bytes));
}
BENCHMARK(BM_DecodeTelemetry);

void BM_Crc(benchmark::State& state) {
  const std::vector<std::uint8_t> data(static_cast<std::size_t>(state.range(0)), 0xA5);
  for (auto _ : state) benchmark::DoNotOptimize(crc16_ccitt_false(data));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Crc)->Arg(8)->Arg(31);

void BM_MediumRoundTrip(benchmark::State& state) {
  Medium medium({0.1, 1, 3});
  const WireFrame f = encode(Message::ack(3));
  Tick t = 0;
  for (auto _ : state) {
    medium.send(Channel::of(3), f, t);
    benchmark::DoNotOptimize(medium.poll(Radio(Channel::of(3)), t));
    ++t;
  }
}
BENCHMARK(BM_MediumRoundTrip);

}  // namespace
