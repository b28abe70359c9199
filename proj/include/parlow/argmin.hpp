#pragma once

// Grid minimization of parametric objectives. The selector is deterministic:
// exact value ties resolve to the lowest grid index, so equal inputs always
// produce equal minimizers.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace parlow {

struct ArgminResult {
    double c_star = 0.0;
    double value = 0.0;
};

// Minimize objective(c) over the grid; ties keep the earliest grid point.
template <typename F>
ArgminResult grid_argmin(F&& objective, const std::vector<double>& c_grid) {
    if (c_grid.empty()) {
        throw std::invalid_argument("grid_argmin: empty grid");
    }
    ArgminResult best;
    bool have = false;
    for (const double c : c_grid) {
        const double v = objective(c);
        if (!std::isfinite(v)) {
            throw std::invalid_argument("grid_argmin: non-finite objective at c=" +
                                        std::to_string(c));
        }
        if (!have || v < best.value) {
            best = {c, v};
            have = true;
        }
    }
    return best;
}

}  // namespace parlow
