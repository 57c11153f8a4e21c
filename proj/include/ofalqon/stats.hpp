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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ofalqon/graph.hpp"
#include "ofalqon/statevector.hpp"

namespace ofq {

/// Total probability of the optimal bitstrings in a state.
[[nodiscard]] double success_probability(const Statevector &state,
                                         std::span<const Bitstring> optimal);
/// Fraction of sampled shots that landed on an optimal bitstring.
[[nodiscard]] double success_probability(const Histogram &counts,
                                         std::span<const Bitstring> optimal);

/// Outcome of one (method, instance, depth) cell.
struct RunRecord {
    std::string method_id;
    std::uint64_t instance_id = 0;
    int depth = 0;
    double p_success = 0.0;
    std::uint64_t n_evals = 0;
    double e1 = 0.0; ///< p_success / n_evals
    double e2 = 0.0; ///< e1 / depth
    std::uint64_t seed = 0;
    double wall_time = 0.0; ///< seconds; not part of the canonical store
    std::string error;      ///< nonempty when the cell failed

    /// Fills e1 and e2 from the arithmetic identities.
    [[nodiscard]] static RunRecord make(std::string method_id, std::uint64_t instance_id,
                                        int depth, double p_success, std::uint64_t n_evals,
                                        std::uint64_t seed);
    [[nodiscard]] static RunRecord failed(std::string method_id, std::uint64_t instance_id,
                                          int depth, std::uint64_t seed, std::string error);
    [[nodiscard]] bool ok() const noexcept { return error.empty(); }

    bool operator==(const RunRecord &) const = default;
};

/// Midpoint average for even counts. Raises InvalidArgument on empty input.
[[nodiscard]] double median(std::vector<double> values);

struct WilcoxonResult {
    double statistic = 0.0; ///< W = min(W+, W-)
    double w_plus = 0.0;
    double w_minus = 0.0;
    double p_value = 1.0;   ///< two-sided
    std::size_t n_used = 0; ///< pairs with a nonzero difference
    std::size_t n_zero = 0; ///< dropped zero differences
    bool exact = false;     ///< exact null distribution rather than normal approximation
};

/// Sample sizes below this use the exact null distribution.
inline constexpr std::size_t wilcoxon_exact_limit = 20;

/**
 * Two-sided paired signed-rank test on a - b. Zero differences are dropped,
 * ties get average ranks. Exact p for fewer than 20 nonzero pairs, otherwise
 * the normal approximation with tie-corrected variance and continuity
 * correction. Raises DegenerateSampleError when every difference is zero and
 * DimensionError when the lengths differ.
 */
[[nodiscard]] WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                                  std::span<const double> b);

/// Holm step-down adjustment, returned in input order and truncated at 1.
[[nodiscard]] std::vector<double> holm_adjust(std::span<const double> p_values);

struct TestResult {
    std::string metric;
    int depth = 0;
    std::string method_a;
    std::string method_b;
    double statistic = 0.0;
    double p_raw = 1.0;
    double p_adj = 1.0;
    std::size_t n_pairs = 0;
    int direction = 0; ///< sign of the median of a - b
    bool significant = false;
    bool degenerate = false; ///< every difference was zero; not part of the adjustment
};

/// Columns: metric, depth, method_a, method_b, W, p_raw, p_adj, significant.
void write_test_results_csv(std::ostream &out, std::span<const TestResult> results);

/// Shortest decimal form that round-trips.
[[nodiscard]] std::string format_number(double value);

} // namespace ofq
