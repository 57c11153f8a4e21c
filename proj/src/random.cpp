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
#include "ofalqon/random.hpp"

#include <cmath>

namespace ofq {

double Rng::normal() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    return u * f;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view method_id,
                          std::uint64_t instance_id, int depth) {
    // FNV-1a over the method id, then chained SplitMix rounds.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : method_id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t s = mix64(base_seed);
    s = mix64(s ^ h);
    s = mix64(s ^ instance_id);
    s = mix64(s ^ static_cast<std::uint64_t>(depth));
    return s;
}

} // namespace ofq
