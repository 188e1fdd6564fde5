#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "cogsa/agent.hpp"

namespace cogsa::obl {

// Box constraints of the search space, one [lower_j, upper_j] pair per dimension.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    Bounds() = default;
    Bounds(std::vector<double> lo, std::vector<double> up)
        : lower(std::move(lo)), upper(std::move(up)) {
        validate();
    }
    // Symmetric helper: the same [lo, hi] in every dimension.
    Bounds(std::size_t dimension, double lo, double hi)
        : lower(dimension, lo), upper(dimension, hi) {
        validate();
    }

    std::size_t dimension() const { return lower.size(); }

    void validate() const {
        if (lower.size() != upper.size())
            throw std::invalid_argument("Bounds: lower/upper dimension mismatch");
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || !(lower[j] < upper[j]))
                throw std::invalid_argument("Bounds: need finite lower < upper per dimension");
        }
    }

    bool contains(std::span<const double> x) const {
        if (x.size() != lower.size()) return false;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] < lower[j] || x[j] > upper[j]) return false;
        return true;
    }

    double clamp(double v, std::size_t j) const { return std::clamp(v, lower[j], upper[j]); }
};

// y_j = lb_j + ub_j - x_j. An involution: applying it twice restores x exactly.
inline std::vector<double> classical_opposite(std::span<const double> x, const Bounds& b) {
    if (x.size() != b.dimension())
        throw std::invalid_argument("classical_opposite: dimension mismatch");
    std::vector<double> y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        y[j] = b.lower[j] + b.upper[j] - x[j];
    return y;
}

// Stochastic opposite y_j = cs_t * (lb_j + ub_j - x_j), clamped into the box.
// The raw point can leave the box for asymmetric bounds (e.g. [0, 1] with
// small cs_t), hence the clamp.
inline std::vector<double> chaotic_opposite(std::span<const double> x, const Bounds& b, double cs_t) {
    if (x.size() != b.dimension())
        throw std::invalid_argument("chaotic_opposite: dimension mismatch");
    if (!(cs_t > 0.0 && cs_t < 1.0))
        throw std::invalid_argument("chaotic_opposite: cs_t must lie in (0, 1)");
    std::vector<double> y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        y[j] = b.clamp(cs_t * (b.lower[j] + b.upper[j] - x[j]), j);
    return y;
}

struct OblStepResult {
    std::size_t index = 0;           // agent chosen for opposition
    double opposite_fitness = 0.0;   // fitness of the evaluated opposite point
    bool replaced = false;           // true iff the opposite strictly improved
    std::size_t evaluations_used = 1;
};

// One opposition step: pick one agent uniformly at random, evaluate its
// chaotic opposite (exactly one objective evaluation), and replace the
// agent's position and fitness iff the opposite is strictly better. The
// agent's velocity and all other agents are left untouched.
template <class RngT, class ObjectiveT>
OblStepResult apply_obl_step(std::vector<Agent>& agents, const Bounds& b, double cs_t,
                             RngT& rng, ObjectiveT&& objective) {
    if (agents.empty())
        throw std::invalid_argument("apply_obl_step: empty swarm");
    OblStepResult res;
    res.index = rng.uniform_index(agents.size());
    Agent& agent = agents[res.index];
    std::vector<double> opposite = chaotic_opposite(agent.position, b, cs_t);
    res.opposite_fitness = objective(std::span<const double>(opposite));
    res.evaluations_used = 1;
    if (res.opposite_fitness < agent.fitness) {
        agent.position = std::move(opposite);
        agent.fitness = res.opposite_fitness;
        res.replaced = true;
    }
    return res;
}

}  // namespace cogsa::obl
