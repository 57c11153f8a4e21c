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
#include "ofalqon/qaoa.hpp"

#include <cmath>

#include "json.hpp"

#include "ofalqon/error.hpp"

namespace ofq {

namespace {

constexpr const char *flattening_order = "layer-major, gammas before betas";

std::size_t gamma_width(AnsatzVariant variant, const Graph &g) {
    return variant == AnsatzVariant::standard ? 1 : g.n_edges();
}

std::size_t beta_width(AnsatzVariant variant, const Graph &g) {
    return variant == AnsatzVariant::standard ? 1
                                              : static_cast<std::size_t>(g.n_vertices());
}

AnsatzVariant parse_variant(const std::string &name) {
    if (name == "standard") {
        return AnsatzVariant::standard;
    }
    if (name == "multi-angle") {
        return AnsatzVariant::multi_angle;
    }
    throw ParseError("unknown ansatz variant '" + name + "'");
}

} // namespace

std::string_view to_string(AnsatzVariant variant) {
    return variant == AnsatzVariant::standard ? "standard" : "multi-angle";
}

std::string_view to_string(OptimizerKind kind) {
    return kind == OptimizerKind::powell ? "powell" : "gradient-descent";
}

std::size_t angles_per_layer(AnsatzVariant variant, const Graph &g) {
    return gamma_width(variant, g) + beta_width(variant, g);
}

void QaoaParams::validate(const Graph &g) const {
    if (gammas.size() != betas.size()) {
        throw DimensionError("gamma and beta layer counts differ (" +
                             std::to_string(gammas.size()) + " vs " +
                             std::to_string(betas.size()) + ")");
    }
    const std::size_t gw = gamma_width(variant, g);
    const std::size_t bw = beta_width(variant, g);
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        if (gammas[k].size() != gw || betas[k].size() != bw) {
            throw DimensionError("layer " + std::to_string(k + 1) + " of a " +
                                 std::string(to_string(variant)) + " ansatz needs " +
                                 std::to_string(gw) + " gammas and " + std::to_string(bw) +
                                 " betas, got " + std::to_string(gammas[k].size()) + " and " +
                                 std::to_string(betas[k].size()));
        }
    }
}

std::vector<double> QaoaParams::flatten() const {
    std::vector<double> flat;
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        flat.insert(flat.end(), gammas[k].begin(), gammas[k].end());
        flat.insert(flat.end(), betas[k].begin(), betas[k].end());
    }
    return flat;
}

QaoaParams QaoaParams::unflatten(AnsatzVariant variant, int n_layers, const Graph &g,
                                 std::span<const double> flat) {
    if (n_layers < 0) {
        throw InvalidArgument("layer count must be non-negative");
    }
    const std::size_t gw = gamma_width(variant, g);
    const std::size_t bw = beta_width(variant, g);
    if (flat.size() != static_cast<std::size_t>(n_layers) * (gw + bw)) {
        throw DimensionError("flat parameter vector has " + std::to_string(flat.size()) +
                             " entries, expected " +
                             std::to_string(static_cast<std::size_t>(n_layers) * (gw + bw)));
    }
    QaoaParams p;
    p.variant = variant;
    auto it = flat.begin();
    for (int k = 0; k < n_layers; ++k) {
        p.gammas.emplace_back(it, it + static_cast<std::ptrdiff_t>(gw));
        it += static_cast<std::ptrdiff_t>(gw);
        p.betas.emplace_back(it, it + static_cast<std::ptrdiff_t>(bw));
        it += static_cast<std::ptrdiff_t>(bw);
    }
    return p;
}

QaoaParams QaoaParams::filled(AnsatzVariant variant, int n_layers, const Graph &g,
                              double value) {
    if (n_layers < 0) {
        throw InvalidArgument("layer count must be non-negative");
    }
    QaoaParams p;
    p.variant = variant;
    p.gammas.assign(static_cast<std::size_t>(n_layers),
                    std::vector<double>(gamma_width(variant, g), value));
    p.betas.assign(static_cast<std::size_t>(n_layers),
                   std::vector<double>(beta_width(variant, g), value));
    return p;
}

Statevector prepare_qaoa_state(const IsingProblem &problem, const QaoaParams &params) {
    const Graph &g = problem.graph();
    params.validate(g);
    auto state = plus_state(problem.n_qubits());
    for (int k = 0; k < params.n_layers(); ++k) {
        const auto &gk = params.gammas[static_cast<std::size_t>(k)];
        const auto &bk = params.betas[static_cast<std::size_t>(k)];
        if (params.variant == AnsatzVariant::standard) {
            apply_problem_layer(state, problem.energies(), gk.front());
            apply_driver_layer(state, bk.front());
        } else {
            apply_problem_layer(state, g, gk);
            apply_driver_layer(state, bk);
        }
    }
    return state;
}

double qaoa_cost(const IsingProblem &problem, const QaoaParams &params) {
    return diagonal_expectation(prepare_qaoa_state(problem, params), problem.energies());
}

double qaoa_cost(const IsingProblem &problem, const QaoaParams &params, std::uint64_t shots,
                 Rng &rng) {
    return estimate_cost(problem, prepare_qaoa_state(problem, params), shots, rng);
}

QaoaParams warm_start_params(const WarmStartSource &source, const FalqonTrace *trace,
                             AnsatzVariant variant, int n_layers, const Graph &g) {
    if (source.kind == WarmStartKind::fixed) {
        return QaoaParams::filled(variant, n_layers, g, source.fixed_value);
    }
    if (trace == nullptr) {
        throw InsufficientTraceError("warm start needs a FALQON trace");
    }
    if (trace->layers.size() < static_cast<std::size_t>(n_layers)) {
        throw InsufficientTraceError("FALQON trace has " + std::to_string(trace->layers.size()) +
                                     " layers, warm start needs " + std::to_string(n_layers));
    }
    QaoaParams p;
    p.variant = variant;
    for (int k = 0; k < n_layers; ++k) {
        const auto &layer = trace->layers[static_cast<std::size_t>(k)];
        p.gammas.emplace_back(gamma_width(variant, g), layer.gamma);
        p.betas.emplace_back(beta_width(variant, g), layer.beta);
    }
    return p;
}

QaoaOptimization optimize_qaoa(const IsingProblem &problem, const QaoaParams &init,
                               OptimizerKind optimizer, const OptimizerBudget &budget,
                               const ShotPolicy &shots, std::uint64_t seed,
                               const GradientSettings &gradient) {
    const Graph &g = problem.graph();
    init.validate(g);
    Rng rng(seed);
    const int n_layers = init.n_layers();
    const AnsatzVariant variant = init.variant;
    const auto cost = [&](std::span<const double> x) {
        return qaoa_cost(problem, QaoaParams::unflatten(variant, n_layers, g, x),
                         shots.cost_shots, rng);
    };
    const std::vector<double> x0 = init.flatten();

    QaoaOptimization out;
    if (budget.max_iterations == 0 || x0.empty()) {
        out.params = init;
        out.result.best_params = x0;
        const double v = cost(x0);
        if (!std::isfinite(v)) {
            throw OptimizerError("cost is not finite at the starting point");
        }
        out.result.best_value = v;
        out.result.n_evals = 1;
        out.result.converged = x0.empty();
        return out;
    }
    if (optimizer == OptimizerKind::powell) {
        out.result = powell_minimize(cost, x0, budget);
    } else {
        out.result = gradient_descent_minimize(cost, x0, budget, gradient.learning_rate,
                                               gradient.fd_step);
        const double v = cost(out.result.best_params);
        if (!std::isfinite(v)) {
            throw OptimizerError("cost is not finite at the final gradient-descent iterate");
        }
        out.result.best_value = v;
        ++out.result.n_evals;
    }
    out.params = QaoaParams::unflatten(variant, n_layers, g, out.result.best_params);
    return out;
}

std::string params_to_json(const QaoaParams &params) {
    nlohmann::ordered_json j;
    j["variant"] = std::string(to_string(params.variant));
    j["n_layers"] = params.n_layers();
    j["flattening"] = flattening_order;
    j["gammas"] = params.gammas;
    j["betas"] = params.betas;
    return j.dump(2);
}

QaoaParams params_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("invalid parameter JSON: ") + e.what(), e.byte);
    }
    try {
        QaoaParams p;
        p.variant = parse_variant(j.at("variant").get<std::string>());
        p.gammas = j.at("gammas").get<std::vector<std::vector<double>>>();
        p.betas = j.at("betas").get<std::vector<std::vector<double>>>();
        if (j.contains("n_layers") && j.at("n_layers").get<int>() != p.n_layers()) {
            throw ParseError("n_layers disagrees with the number of gamma rows");
        }
        if (p.gammas.size() != p.betas.size()) {
            throw ParseError("gamma and beta layer counts differ");
        }
        return p;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("invalid parameter document: ") + e.what());
    }
}

} // namespace ofq
