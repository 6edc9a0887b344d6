/*
   Copyright 2026 The kcm-expander Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "kcm/random_field.hpp"

#include <cmath>

namespace kcm {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

double RandomField::clock_gap(VertexId x, std::int64_t k) const {
    const double u = uniform(Stream::Clock, static_cast<std::uint32_t>(x), static_cast<std::uint64_t>(k));
    return -std::log1p(-u);
}

std::vector<ClockEvent> RandomField::poisson_clock(VertexId x, double horizon) const {
    std::vector<ClockEvent> events;
    if (!(horizon > 0)) return events;
    double t = 0;
    for (std::int64_t k = 0;; ++k) {
        t += clock_gap(x, k);
        if (t > horizon) break;
        events.push_back({t, ring_uniform(x, k)});
    }
    return events;
}

RandomField RandomField::derive(std::uint64_t index) const {
    const auto w = philox4x32_10(
        {static_cast<std::uint32_t>(Stream::Trial), static_cast<std::uint32_t>(index),
         static_cast<std::uint32_t>(index >> 32), 0},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    return RandomField((static_cast<std::uint64_t>(w[0]) << 32) | w[1]);
}

}  // namespace kcm
