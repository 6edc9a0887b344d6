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

#pragma once

#include "kcm/graph.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace kcm {

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Top 53 bits of (hi, lo) as a double in [0, 1).
inline double unit_from_words(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) | (lo >> 11);
    return static_cast<double>(bits) * 0x1.0p-53;
}

enum class Stream : std::uint32_t { Discrete = 1, Clock = 2, Ring = 3, Init = 4, Trial = 5, Aux = 6 };

enum class ProcessKind { BP, CP, NMVP };
enum class Mark : std::uint8_t { Update, Noise0, Noise1 };

/// BP/CP: noise iff u < eps. NMVP: Noise0 on [0, eps/2), Noise1 on [eps/2, eps).
inline Mark classify_point(double u, double eps, ProcessKind kind) {
    if (u >= eps) return Mark::Update;
    if (kind == ProcessKind::NMVP && u >= eps / 2) return Mark::Noise1;
    return Mark::Noise0;
}

struct ClockEvent {
    double time = 0;
    double u = 0;  ///< resampling uniform attached to this ring
};

/// Counter-based random field. Every value is a pure function of
/// (seed, stream, vertex, index); nothing is cached.
class RandomField {
public:
    explicit RandomField(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    double uniform(Stream stream, std::uint64_t a, std::uint64_t b) const {
        const auto w = philox4x32_10(
            {static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(a),
             static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        return unit_from_words(w[0], w[1]);
    }

    /// L_x(t), t >= 1.
    double uniform_at(VertexId x, std::int64_t t) const {
        return uniform(Stream::Discrete, static_cast<std::uint32_t>(x), static_cast<std::uint64_t>(t));
    }

    /// One uniform per vertex for drawing initial configurations.
    double init_uniform(VertexId x) const {
        return uniform(Stream::Init, static_cast<std::uint32_t>(x), 0);
    }

    /// k-th exponential gap of the clock at x (k >= 0).
    double clock_gap(VertexId x, std::int64_t k) const;
    /// Uniform attached to the k-th ring at x.
    double ring_uniform(VertexId x, std::int64_t k) const {
        return uniform(Stream::Ring, static_cast<std::uint32_t>(x), static_cast<std::uint64_t>(k));
    }

    /// Rings of the rate-1 Poisson clock at x within [0, horizon]. The list for
    /// a shorter horizon is a prefix of the list for a longer one.
    std::vector<ClockEvent> poisson_clock(VertexId x, double horizon) const;

    /// Independent field for trial `index`, derived from this field's seed.
    RandomField derive(std::uint64_t index) const;

private:
    std::uint64_t seed_;
};

}  // namespace kcm
