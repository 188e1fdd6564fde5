#pragma once

#include <limits>
#include <vector>

namespace cogsa {

// One candidate solution. mass is the normalized mass in [0, 1]; fitness is
// the objective value at position (quiet NaN until first evaluation).
struct Agent {
    std::vector<double> position;
    std::vector<double> velocity;
    double fitness = std::numeric_limits<double>::quiet_NaN();
    double mass = 0.0;
};

}  // namespace cogsa
