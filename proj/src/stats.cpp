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
#include "ofalqon/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ofalqon/error.hpp"

namespace ofq {

double success_probability(const Statevector &state, std::span<const Bitstring> optimal) {
    if (optimal.empty()) {
        throw InvalidArgument("optimal set must be nonempty");
    }
    const auto amps = state.amplitudes();
    double acc = 0.0;
    for (Bitstring x : optimal) {
        if (x >= amps.size()) {
            throw DimensionError("optimal bitstring outside the state space");
        }
        acc += std::norm(amps[x]);
    }
    return acc;
}

double success_probability(const Histogram &counts, std::span<const Bitstring> optimal) {
    if (optimal.empty()) {
        throw InvalidArgument("optimal set must be nonempty");
    }
    std::uint64_t total = 0;
    std::uint64_t hits = 0;
    for (const auto &[x, c] : counts) {
        total += c;
    }
    for (Bitstring x : optimal) {
        if (const auto it = counts.find(x); it != counts.end()) {
            hits += it->second;
        }
    }
    if (total == 0) {
        throw InvalidArgument("empty histogram");
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

RunRecord RunRecord::make(std::string method_id, std::uint64_t instance_id, int depth,
                          double p_success, std::uint64_t n_evals, std::uint64_t seed) {
    if (depth < 1) {
        throw InvalidArgument("depth must be at least 1");
    }
    if (n_evals == 0) {
        throw InvalidArgument("evaluation count must be positive");
    }
    if (!(p_success >= 0.0 && p_success <= 1.0 + 1e-12)) {
        throw InvalidArgument("success probability outside [0, 1]");
    }
    RunRecord r;
    r.method_id = std::move(method_id);
    r.instance_id = instance_id;
    r.depth = depth;
    r.p_success = std::min(p_success, 1.0);
    r.n_evals = n_evals;
    r.e1 = r.p_success / static_cast<double>(n_evals);
    r.e2 = r.e1 / static_cast<double>(depth);
    r.seed = seed;
    return r;
}

RunRecord RunRecord::failed(std::string method_id, std::uint64_t instance_id, int depth,
                            std::uint64_t seed, std::string error) {
    RunRecord r;
    r.method_id = std::move(method_id);
    r.instance_id = instance_id;
    r.depth = depth;
    r.seed = seed;
    r.error = error.empty() ? "unknown error" : std::move(error);
    return r;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw InvalidArgument("median of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("paired samples have different lengths");
    }
    WilcoxonResult out;
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (!std::isfinite(d)) {
            throw InvalidArgument("paired samples must be finite");
        }
        if (d == 0.0) {
            ++out.n_zero;
        } else {
            diffs.push_back(d);
        }
    }
    const std::size_t n = diffs.size();
    if (n == 0) {
        throw DegenerateSampleError("all paired differences are zero");
    }
    out.n_used = n;

    // Average ranks of |d|, stored doubled so that they stay integers.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(diffs[i]) < std::abs(diffs[j]);
    });
    std::vector<long> rank2(n);
    double tie_term = 0.0;
    for (std::size_t lo = 0; lo < n;) {
        std::size_t hi = lo;
        while (hi + 1 < n && std::abs(diffs[order[hi + 1]]) == std::abs(diffs[order[lo]])) {
            ++hi;
        }
        const long r2 = static_cast<long>(lo + 1 + hi + 1); // 2 * average rank
        for (std::size_t k = lo; k <= hi; ++k) {
            rank2[order[k]] = r2;
        }
        const double t = static_cast<double>(hi - lo + 1);
        tie_term += t * t * t - t;
        lo = hi + 1;
    }
    long plus2 = 0;
    long total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += rank2[i];
        if (diffs[i] > 0) {
            plus2 += rank2[i];
        }
    }
    const long minus2 = total2 - plus2;
    const long w2 = std::min(plus2, minus2);
    out.w_plus = 0.5 * static_cast<double>(plus2);
    out.w_minus = 0.5 * static_cast<double>(minus2);
    out.statistic = 0.5 * static_cast<double>(w2);

    if (n < wilcoxon_exact_limit) {
        // Null distribution of the doubled positive-rank sum over all 2^n
        // equally likely sign patterns.
        std::vector<double> ways(static_cast<std::size_t>(total2) + 1, 0.0);
        ways[0] = 1.0;
        long reach = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (long s = reach; s >= 0; --s) {
                ways[static_cast<std::size_t>(s + rank2[i])] += ways[static_cast<std::size_t>(s)];
            }
            reach += rank2[i];
        }
        double tail = 0.0;
        for (long s = 0; s <= total2; ++s) {
            if (std::min(s, total2 - s) <= w2) {
                tail += ways[static_cast<std::size_t>(s)];
            }
        }
        out.p_value = std::min(1.0, tail / std::ldexp(1.0, static_cast<int>(n)));
        out.exact = true;
        return out;
    }

    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) {
        out.p_value = 1.0;
        return out;
    }
    const double dev = std::max(0.0, std::abs(out.statistic - mean) - 0.5);
    out.p_value = std::min(1.0, std::erfc(dev / std::sqrt(2.0 * var)));
    return out;
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
    const std::size_t m = p_values.size();
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument("p-values must lie in [0, 1]");
        }
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return p_values[i] < p_values[j]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        const double scaled = static_cast<double>(m - r) * p_values[order[r]];
        running = std::max(running, std::min(1.0, scaled));
        adjusted[order[r]] = running;
    }
    return adjusted;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_test_results_csv(std::ostream &out, std::span<const TestResult> results) {
    out << "metric,depth,method_a,method_b,W,p_raw,p_adj,significant\n";
    for (const auto &r : results) {
        out << r.metric << ',' << r.depth << ',' << r.method_a << ',' << r.method_b << ','
            << format_number(r.statistic) << ',' << format_number(r.p_raw) << ','
            << format_number(r.p_adj) << ',' << (r.significant ? "true" : "false") << '\n';
    }
}

} // namespace ofq
