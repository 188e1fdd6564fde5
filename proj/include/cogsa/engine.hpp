#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cogsa/agent.hpp"
#include "cogsa/bench.hpp"
#include "cogsa/chaos.hpp"
#include "cogsa/obl.hpp"
#include "cogsa/rng.hpp"
#include "cogsa/run_record.hpp"

namespace cogsa::engine {

// Population snapshot at iteration t.
struct SwarmState {
    std::vector<Agent> agents;
    std::size_t iteration = 0;
    double best_fitness = 0.0;
    double worst_fitness = 0.0;
    std::size_t kbest_size = 0;
    double gravitational_constant = 0.0;
};

struct FixedAlpha {
    double alpha = 20.0;
};
using AlphaMode = std::variant<FixedAlpha, chaos::ChaoticAlphaConfig>;

struct EngineConfig {
    double G0 = 100.0;
    AlphaMode alpha_mode = FixedAlpha{20.0};
    double epsilon = 1e-100;  // distance regularizer, a pure singularity guard
    double kbest_final_fraction = 0.02;
    bool obl_enabled = false;
    std::size_t T = 1000;  // iterations
    std::size_t N = 50;    // population size

    void validate() const {
        if (N < 2) throw std::invalid_argument("EngineConfig: N must be >= 2");
        if (T < 1) throw std::invalid_argument("EngineConfig: T must be >= 1");
        if (!(G0 > 0.0) || !std::isfinite(G0))
            throw std::invalid_argument("EngineConfig: G0 must be positive and finite");
        if (!(epsilon > 0.0)) throw std::invalid_argument("EngineConfig: epsilon must be > 0");
        if (!(kbest_final_fraction > 0.0 && kbest_final_fraction <= 1.0))
            throw std::invalid_argument("EngineConfig: kbest_final_fraction must lie in (0, 1]");
        if (const auto* c = std::get_if<chaos::ChaoticAlphaConfig>(&alpha_mode)) {
            c->validate();
            if (c->T != T)
                throw std::invalid_argument("EngineConfig: chaotic alpha T must equal engine T");
        } else if (!(std::get<FixedAlpha>(alpha_mode).alpha > 0.0)) {
            throw std::invalid_argument("EngineConfig: fixed alpha must be > 0");
        }
    }

    bool chaotic_alpha_mode() const {
        return std::holds_alternative<chaos::ChaoticAlphaConfig>(alpha_mode);
    }
};

// Normalized masses from raw fitness values (minimization):
// q_i = (fit_i - worst) / (best - worst), M_i = q_i / sum(q). A flat swarm
// (best == worst) degenerates to equal masses 1/N.
inline std::vector<double> compute_masses(std::span<const double> fitnesses) {
    if (fitnesses.empty()) throw std::invalid_argument("compute_masses: empty fitness vector");
    for (double f : fitnesses)
        if (!std::isfinite(f))
            throw std::invalid_argument("compute_masses: non-finite fitness from objective");
    auto [lo, hi] = std::minmax_element(fitnesses.begin(), fitnesses.end());
    double best = *lo, worst = *hi;
    std::size_t n = fitnesses.size();
    std::vector<double> masses(n);
    if (best == worst) {
        std::fill(masses.begin(), masses.end(), 1.0 / static_cast<double>(n));
        return masses;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        masses[i] = (fitnesses[i] - worst) / (best - worst);
        total += masses[i];
    }
    for (double& m : masses) m /= total;
    return masses;
}

// K(t) shrinks linearly from N at t = 0 to max(1, round(N * p)) at t = T.
inline std::size_t kbest_size(std::size_t t, const EngineConfig& cfg) {
    if (t > cfg.T) throw std::invalid_argument("kbest_size: t must satisfy 0 <= t <= T");
    double p = cfg.kbest_final_fraction;
    double frac = p + (1.0 - static_cast<double>(t) / static_cast<double>(cfg.T)) * (1.0 - p);
    auto k = static_cast<std::size_t>(std::llround(static_cast<double>(cfg.N) * frac));
    return std::clamp<std::size_t>(k, 1, cfg.N);
}

// G(t) = G0 * exp(-alpha * t / T)
inline double gravitational_constant(std::size_t t, double alpha, const EngineConfig& cfg) {
    if (t > cfg.T) throw std::invalid_argument("gravitational_constant: t must satisfy 0 <= t <= T");
    if (!(alpha > 0.0)) throw std::invalid_argument("gravitational_constant: alpha must be > 0");
    return cfg.G0 * std::exp(-alpha * static_cast<double>(t) / static_cast<double>(cfg.T));
}

// Indices of the kbest_size best-fitness agents, best first; equal fitness
// resolves by agent index so the selection is deterministic.
inline std::vector<std::size_t> kbest_indices(const SwarmState& state) {
    std::vector<std::size_t> order(state.agents.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return state.agents[a].fitness < state.agents[b].fitness;
    });
    order.resize(std::min(state.kbest_size, order.size()));
    return order;
}

// a_i^d = sum over j in Kbest, j != i of rand * G * M_j / (R_ij + eps) * (x_j^d - x_i^d),
// with an independent uniform draw per (i, j, dimension) in loop order
// (i ascending, j in Kbest order, d ascending). The per-dimension draws keep
// the stochastic dither anisotropic; sharing one draw across dimensions turns
// the update into pure consensus contraction and the swarm freezes several
// orders of magnitude early.
template <class RngT>
std::vector<std::vector<double>> compute_accelerations(const SwarmState& state, double epsilon,
                                                       RngT& rng) {
    std::size_t count = state.agents.size();
    std::size_t dim = count > 0 ? state.agents[0].position.size() : 0;
    std::vector<std::size_t> kbest = kbest_indices(state);
    double g = state.gravitational_constant;

    std::vector<std::vector<double>> accel(count, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < count; ++i) {
        const auto& xi = state.agents[i].position;
        for (std::size_t j : kbest) {
            if (j == i) continue;
            const auto& xj = state.agents[j].position;
            double dist_sq = 0.0;
            for (std::size_t d = 0; d < dim; ++d) dist_sq += (xj[d] - xi[d]) * (xj[d] - xi[d]);
            double coeff = g * state.agents[j].mass / (std::sqrt(dist_sq) + epsilon);
            for (std::size_t d = 0; d < dim; ++d)
                accel[i][d] += rng.uniform01() * coeff * (xj[d] - xi[d]);
        }
    }
    return accel;
}

// v_i^d <- rand * v_i^d + a_i^d with an independent draw per (agent,
// dimension), x_i^d <- x_i^d + v_i^d, then clamp to the box, zeroing the
// velocity of any clamped component. Fitness values are stale afterwards.
template <class RngT>
void step_velocity_position(SwarmState& state, const std::vector<std::vector<double>>& accel,
                            const obl::Bounds& bounds, RngT& rng) {
    if (accel.size() != state.agents.size())
        throw std::invalid_argument("step_velocity_position: acceleration shape mismatch");
    for (std::size_t i = 0; i < state.agents.size(); ++i) {
        Agent& agent = state.agents[i];
        for (std::size_t d = 0; d < agent.position.size(); ++d) {
            agent.velocity[d] = rng.uniform01() * agent.velocity[d] + accel[i][d];
            agent.position[d] += agent.velocity[d];
            if (agent.position[d] < bounds.lower[d]) {
                agent.position[d] = bounds.lower[d];
                agent.velocity[d] = 0.0;
            } else if (agent.position[d] > bounds.upper[d]) {
                agent.position[d] = bounds.upper[d];
                agent.velocity[d] = 0.0;
            }
        }
    }
}

// One full GSA/COGSA run. All randomness flows from `seed`; identical
// (objective, cfg, seed) yield identical records.
inline RunRecord run(const bench::BenchmarkSpec& objective, const EngineConfig& cfg,
                     std::uint64_t seed, std::string algorithm_label = "") {
    cfg.validate();
    objective.bounds.validate();
    if (objective.bounds.dimension() != objective.dimension)
        throw std::invalid_argument("run: objective bounds/dimension mismatch");

    auto started = std::chrono::steady_clock::now();
    const std::size_t dim = objective.dimension;
    const obl::Bounds& bounds = objective.bounds;
    Rng rng(seed);

    RunRecord rec;
    rec.algorithm = !algorithm_label.empty() ? algorithm_label
                    : (cfg.obl_enabled || cfg.chaotic_alpha_mode()) ? "cogsa"
                                                                    : "gsa";
    rec.benchmark = objective.name;
    rec.dimension = dim;
    rec.seed = seed;
    rec.best_trace.reserve(cfg.T);

    SwarmState state;
    state.agents.resize(cfg.N);
    for (Agent& agent : state.agents) {
        agent.position.resize(dim);
        agent.velocity.assign(dim, 0.0);
        for (std::size_t d = 0; d < dim; ++d)
            agent.position[d] = rng.uniform(bounds.lower[d], bounds.upper[d]);
    }

    // Both Algorithm-1 alpha draws and the opposition operator consume the
    // same precomputed logistic sequence, one value per iteration.
    chaos::ChaoticSequence cs;
    if (cfg.chaotic_alpha_mode() || cfg.obl_enabled)
        cs = chaos::logistic_sequence(4.0, 0.7, cfg.T);

    double best_so_far = std::numeric_limits<double>::infinity();
    std::vector<double> best_position;
    std::vector<double> fitnesses(cfg.N);

    auto evaluate = [&](std::span<const double> x) {
        double value = objective.evaluate(x, &rng);
        ++rec.evaluations;
        if (!std::isfinite(value))
            throw std::runtime_error("run: objective '" + objective.name +
                                     "' returned non-finite value at iteration " +
                                     std::to_string(state.iteration));
        return value;
    };

    for (std::size_t t = 1; t <= cfg.T; ++t) {
        state.iteration = t;
        for (std::size_t i = 0; i < cfg.N; ++i) {
            Agent& agent = state.agents[i];
            agent.fitness = evaluate(agent.position);
            fitnesses[i] = agent.fitness;
            if (agent.fitness < best_so_far) {
                best_so_far = agent.fitness;
                best_position = agent.position;
            }
        }
        auto [lo, hi] = std::minmax_element(fitnesses.begin(), fitnesses.end());
        state.best_fitness = *lo;
        state.worst_fitness = *hi;

        std::vector<double> masses = compute_masses(fitnesses);
        for (std::size_t i = 0; i < cfg.N; ++i) state.agents[i].mass = masses[i];

        double alpha;
        if (const auto* chaotic = std::get_if<chaos::ChaoticAlphaConfig>(&cfg.alpha_mode))
            alpha = chaos::chaotic_alpha(*chaotic, cs.at(t), t, rng.uniform01());
        else
            alpha = std::get<FixedAlpha>(cfg.alpha_mode).alpha;

        state.gravitational_constant = gravitational_constant(t, alpha, cfg);
        state.kbest_size = kbest_size(t, cfg);

        auto accel = compute_accelerations(state, cfg.epsilon, rng);
        step_velocity_position(state, accel, bounds, rng);

        if (cfg.obl_enabled) {
            auto obl_result = obl::apply_obl_step(state.agents, bounds, cs.at(t), rng, evaluate);
            if (obl_result.opposite_fitness < best_so_far) {
                best_so_far = obl_result.opposite_fitness;
                best_position = state.agents[obl_result.index].position;
            }
        }
        rec.best_trace.push_back(best_so_far);
    }

    rec.final_best_fitness = best_so_far;
    rec.final_best_position = std::move(best_position);
    rec.wall_time = std::chrono::steady_clock::now() - started;
    return rec;
}

}  // namespace cogsa::engine
