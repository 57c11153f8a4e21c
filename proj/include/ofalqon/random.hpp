// Copyright 2026 The ofalqon Authors
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

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace ofq {

/**
 * Seeded random stream. The engine is std::mt19937_64, whose output sequence
 * is fixed by the standard; uniform and normal variates are derived here
 * rather than through <random> distributions, whose algorithms are left to the
 * implementation. Results are therefore identical across toolchains.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal (Marsaglia polar method).
    double normal();

  private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-cell seed from (base seed, method id, instance id, depth).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base_seed,
                                        std::string_view method_id,
                                        std::uint64_t instance_id, int depth);

} // namespace ofq
