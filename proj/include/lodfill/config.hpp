#pragma once

#include <stdexcept>

namespace lodfill {

/*
 * All geometric tolerances used across the pipeline, in one place.
 * Comparisons in the library never use ad-hoc epsilons; they take the
 * thresholds from here so tests can pin them.
 *
 * eps_distance / eps_area_ratio are the hole-vs-pseudo-hole decision
 * thresholds; distances are meters.
 */
struct RepairConfig {
    double eps_distance = 0.1;       // max vertex-to-plane distance for a covering face
    double eps_area_ratio = 0.01;    // min overlap-area ratio for a covering face
    double eps_duplicate = 1e-3;     // duplicate-vertex radius
    double coplanar_tolerance = 1e-3;  // ring-completion coplanarity check
    int max_completion_iterations = 64;

    void validate() const {
        if (eps_distance <= 0.0 || eps_area_ratio <= 0.0 || eps_duplicate <= 0.0 ||
            coplanar_tolerance <= 0.0 || max_completion_iterations <= 0) {
            throw std::invalid_argument("RepairConfig: all tolerances must be positive");
        }
        if (eps_duplicate >= eps_distance) {
            throw std::invalid_argument("RepairConfig: eps_duplicate must be below eps_distance");
        }
    }
};

}  // namespace lodfill
