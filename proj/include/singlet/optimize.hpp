#pragma once

#include <vector>

#include "singlet/bell.hpp"

namespace singlet {

struct AnglePoint {
    double beta = 0.0;
    double visibility = 0.0;
    double antivisibility = 0.0;
    double objective = 0.0;  // V + A
};

struct AngleScan {
    std::vector<AnglePoint> grid;
    double beta_opt = 0.0;
    double objective_opt = 0.0;
};

// Maximizes V(beta) + A(beta) over beta in (-pi/2, pi/2): 129-point coarse
// grid over both half-ranges, then golden-section refinement to 1e-6. Ties
// between mirrored angles resolve to the (-pi/2, 0] half.
AngleScan optimal_angle(const Gain& gain, const FilterSpec& filter, double eps);

struct GainScanRow {
    double g = 0.0;
    double beta_opt = 0.0;
    double bell = 0.0;
};

// Per-gain optimum and Bell value at that optimum.
std::vector<GainScanRow> scan_gain(double g_min, double g_max, int steps,
                                   const FilterSpec& filter, double eps);

}  // namespace singlet
