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
#include "ofalqon/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "ofalqon/error.hpp"

namespace ofq {

namespace {

struct BudgetExhausted {};

std::string format_point(std::span<const double> x) {
    std::ostringstream out;
    out.precision(17);
    out << '(';
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << (i ? ", " : "") << x[i];
    }
    out << ')';
    return out.str();
}

void require_finite(std::span<const double> x0) {
    for (double v : x0) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("starting point is not finite: " + format_point(x0));
        }
    }
}

// Counts calls, enforces the evaluation cap and tracks the incumbent.
class CountedObjective {
  public:
    CountedObjective(const Objective &f, std::uint64_t cap) : f_(f), cap_(cap) {}

    double operator()(std::span<const double> x) {
        if (cap_ != 0 && n_ >= cap_) {
            throw BudgetExhausted{};
        }
        const double v = f_(x);
        ++n_;
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "objective returned " << v << " at " << format_point(x);
            throw OptimizerError(msg.str());
        }
        if (!best_value_ || v < *best_value_) {
            best_value_ = v;
            best_x_.assign(x.begin(), x.end());
        }
        return v;
    }

    [[nodiscard]] std::uint64_t count() const noexcept { return n_; }
    [[nodiscard]] const std::optional<double> &best_value() const noexcept {
        return best_value_;
    }
    [[nodiscard]] const std::vector<double> &best_x() const noexcept { return best_x_; }

  private:
    const Objective &f_;
    std::uint64_t cap_;
    std::uint64_t n_ = 0;
    std::optional<double> best_value_;
    std::vector<double> best_x_;
};

class LineSearch {
  public:
    LineSearch(CountedObjective &f, const OptimizerBudget &budget)
        : f_(f), budget_(budget) {}

    // Minimizes along p + t * dir starting from f(p) = f0. Moves p only on
    // strict improvement; returns the new value at p.
    double minimize(std::vector<double> &p, std::span<const double> dir, double f0) {
        p_ = &p;
        dir_ = dir;
        trial_.resize(p.size());

        double ax = 0.0;
        double fa = f0;
        double bx = budget_.bracket_step;
        double fb = at(bx);
        int probes = 1;
        if (fb > fa) {
            std::swap(ax, bx);
            std::swap(fa, fb);
        }
        double cx = bx + budget_.bracket_expansion * (bx - ax);
        double fc = at(cx);
        ++probes;
        while (fb > fc && probes < budget_.max_bracket_probes) {
            ax = bx;
            fa = fb;
            bx = cx;
            fb = fc;
            cx = bx + budget_.bracket_expansion * (bx - ax);
            fc = at(cx);
            ++probes;
        }

        double t_min = bx;
        double f_min = fb;
        if (fb > fc) {
            t_min = cx;
            f_min = fc;
        } else {
            std::tie(t_min, f_min) = brent(ax, bx, cx, fb);
        }
        if (f_min < f0) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                p[i] += t_min * dir_[i];
            }
            return f_min;
        }
        return f0;
    }

  private:
    double at(double t) {
        for (std::size_t i = 0; i < trial_.size(); ++i) {
            trial_[i] = (*p_)[i] + t * dir_[i];
        }
        return f_(trial_);
    }

    // Brent's parabolic/golden-section refinement of a bracket (ax, bx, cx)
    // with f(bx) below both ends.
    std::pair<double, double> brent(double ax, double bx, double cx, double fbx) {
        constexpr double cgold = 0.3819660112501051;
        constexpr int max_iter = 100;
        const double tol = budget_.line_search_tolerance;
        double a = std::min(ax, cx);
        double b = std::max(ax, cx);
        double x = bx;
        double w = bx;
        double v = bx;
        double fx = fbx;
        double fw = fbx;
        double fv = fbx;
        double d = 0.0;
        double e = 0.0;
        for (int iter = 0; iter < max_iter; ++iter) {
            const double xm = 0.5 * (a + b);
            const double tol1 = 0.5 * tol * (1.0 + std::abs(x));
            const double tol2 = 2.0 * tol1;
            if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) {
                break;
            }
            bool golden = true;
            if (std::abs(e) > tol1) {
                const double r = (x - w) * (fx - fv);
                double q = (x - v) * (fx - fw);
                double pp = (x - v) * q - (x - w) * r;
                q = 2.0 * (q - r);
                if (q > 0.0) {
                    pp = -pp;
                }
                q = std::abs(q);
                const double e_prev = e;
                if (std::abs(pp) < std::abs(0.5 * q * e_prev) && pp > q * (a - x) &&
                    pp < q * (b - x)) {
                    e = d;
                    d = pp / q;
                    const double u = x + d;
                    if (u - a < tol2 || b - u < tol2) {
                        d = std::copysign(tol1, xm - x);
                    }
                    golden = false;
                }
            }
            if (golden) {
                e = (x >= xm) ? a - x : b - x;
                d = cgold * e;
            }
            const double u = (std::abs(d) >= tol1) ? x + d : x + std::copysign(tol1, d);
            const double fu = at(u);
            if (fu <= fx) {
                if (u >= x) {
                    a = x;
                } else {
                    b = x;
                }
                v = w;
                fv = fw;
                w = x;
                fw = fx;
                x = u;
                fx = fu;
            } else {
                if (u < x) {
                    a = u;
                } else {
                    b = u;
                }
                if (fu <= fw || w == x) {
                    v = w;
                    fv = fw;
                    w = u;
                    fw = fu;
                } else if (fu <= fv || v == x || v == w) {
                    v = u;
                    fv = fu;
                }
            }
        }
        return {x, fx};
    }

    CountedObjective &f_;
    const OptimizerBudget &budget_;
    std::vector<double> *p_ = nullptr;
    std::span<const double> dir_;
    std::vector<double> trial_;
};

} // namespace

OptResult powell_minimize(const Objective &objective, std::span<const double> x0,
                          const OptimizerBudget &budget) {
    require_finite(x0);
    if (budget.max_iterations < 1) {
        throw InvalidArgument("Powell needs at least one outer iteration");
    }
    if (x0.empty()) {
        throw InvalidArgument("Powell needs at least one parameter");
    }
    const std::size_t dim = x0.size();
    CountedObjective f(objective, budget.max_evaluations);
    LineSearch line(f, budget);
    OptResult result;

    try {
        std::vector<double> p(x0.begin(), x0.end());
        std::vector<std::vector<double>> dirs(dim, std::vector<double>(dim, 0.0));
        for (std::size_t i = 0; i < dim; ++i) {
            dirs[i][i] = 1.0;
        }
        double fret = f(p);
        for (int iter = 1; iter <= budget.max_iterations; ++iter) {
            result.iterations = iter;
            const double fp = fret;
            const std::vector<double> pt = p;
            std::size_t ibig = 0;
            double biggest_drop = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double before = fret;
                fret = line.minimize(p, dirs[i], fret);
                if (before - fret > biggest_drop) {
                    biggest_drop = before - fret;
                    ibig = i;
                }
            }
            if (2.0 * (fp - fret) <=
                budget.parameter_tolerance * (std::abs(fp) + std::abs(fret)) + 1e-25) {
                result.converged = true;
                break;
            }
            if (iter == budget.max_iterations) {
                break;
            }
            std::vector<double> extrapolated(dim);
            std::vector<double> net(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                extrapolated[j] = 2.0 * p[j] - pt[j];
                net[j] = p[j] - pt[j];
            }
            const double fe = f(extrapolated);
            if (fe < fp) {
                const double a = fp - fret - biggest_drop;
                const double b = fp - fe;
                const double t = 2.0 * (fp - 2.0 * fret + fe) * a * a -
                                 biggest_drop * b * b;
                if (t < 0.0) {
                    fret = line.minimize(p, net, fret);
                    dirs[ibig] = std::move(dirs.back());
                    dirs.back() = net;
                }
            }
        }
    } catch (const BudgetExhausted &) {
        result.converged = false;
    }

    result.best_params = f.best_x();
    result.best_value = f.best_value();
    result.n_evals = f.count();
    return result;
}

OptResult gradient_descent_minimize(const Objective &objective,
                                    std::span<const double> x0,
                                    const OptimizerBudget &budget,
                                    double learning_rate, double fd_step) {
    require_finite(x0);
    if (!(learning_rate > 0.0) || !(fd_step > 0.0)) {
        throw InvalidArgument("learning rate and finite-difference step must be positive");
    }
    if (budget.max_iterations < 0) {
        throw InvalidArgument("iteration budget must be non-negative");
    }
    const std::size_t dim = x0.size();
    CountedObjective f(objective, 0);
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> grad(dim);
    std::vector<double> probe(dim);
    OptResult result;
    const std::uint64_t per_step = 2 * dim;

    for (int iter = 0; iter < budget.max_iterations; ++iter) {
        if (budget.max_evaluations != 0 && f.count() + per_step > budget.max_evaluations) {
            break;
        }
        for (std::size_t i = 0; i < dim; ++i) {
            probe = x;
            probe[i] = x[i] + fd_step;
            const double up = f(probe);
            probe[i] = x[i] - fd_step;
            const double down = f(probe);
            grad[i] = (up - down) / (2.0 * fd_step);
            if (!std::isfinite(grad[i])) {
                throw OptimizerError("non-finite gradient component " + std::to_string(i) +
                                     " at " + format_point(x));
            }
        }
        for (std::size_t i = 0; i < dim; ++i) {
            x[i] -= learning_rate * grad[i];
        }
        result.iterations = iter + 1;
        result.converged =
            std::all_of(grad.begin(), grad.end(), [](double g) { return g == 0.0; });
    }

    result.best_params = std::move(x);
    result.n_evals = f.count();
    return result;
}

} // namespace ofq
