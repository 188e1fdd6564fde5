#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace cogsa {

// Everything one optimization run produces. wall_time is measured, never
// persisted, so serialized records stay reproducible.
struct RunRecord {
    std::string algorithm;  // "gsa" | "cogsa"
    std::string benchmark;
    std::size_t dimension = 0;
    std::uint64_t seed = 0;
    std::vector<double> best_trace;  // best-so-far fitness, one entry per iteration
    double final_best_fitness = 0.0;
    std::vector<double> final_best_position;
    std::size_t evaluations = 0;
    std::chrono::duration<double> wall_time{0.0};
    bool failed = false;
    std::string error;
};

}  // namespace cogsa
