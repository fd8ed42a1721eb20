#include "singlet/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "singlet/errors.hpp"
#include "singlet/parallel.hpp"

namespace singlet {

namespace {

constexpr int kGridPoints = 129;
constexpr double kRefineTol = 1e-6;
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

}  // namespace

AngleScan optimal_angle(const Gain& gain, const FilterSpec& filter, double eps) {
    const WeightVector weights = preselected_weights(gain, filter, eps);
    const double half_pi = std::numbers::pi / 2.0;
    const double margin = half_pi / (kGridPoints + 1);
    const double lo = -half_pi + margin, hi = half_pi - margin;

    AngleScan scan;
    scan.grid.resize(kGridPoints);
    parallel_for(kGridPoints, [&](std::size_t i) {
        const double beta = lo + (hi - lo) * static_cast<double>(i) / (kGridPoints - 1);
        const auto [v, a] = va_totals(beta, weights, filter);
        scan.grid[i] = AnglePoint{beta, v, a, v + a};
    });

    int best = 0;
    double f_min = scan.grid[0].objective, f_max = scan.grid[0].objective;
    for (int i = 0; i < kGridPoints; ++i) {
        const double f = scan.grid[i].objective;
        f_min = std::min(f_min, f);
        f_max = std::max(f_max, f);
        if (f > scan.grid[best].objective) best = i;
    }
    if (f_max - f_min < 1e-12 * std::max(1.0, std::abs(f_max)))
        throw NoOptimumError("objective is flat over the angle range");

    const auto objective = [&](double beta) {
        const auto [v, a] = va_totals(beta, weights, filter);
        return v + a;
    };

    double a = scan.grid[std::max(0, best - 1)].beta;
    double b = scan.grid[std::min(kGridPoints - 1, best + 1)].beta;
    double best_beta = scan.grid[best].beta;
    double best_val = scan.grid[best].objective;
    double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > kRefineTol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = objective(d);
        }
        if (fc > best_val) { best_val = fc; best_beta = c; }
        if (fd > best_val) { best_val = fd; best_beta = d; }
    }

    // Mirrored tie goes to the nonpositive half.
    if (best_beta > 0.0) {
        const double mirrored = objective(-best_beta);
        if (mirrored >= best_val - 1e-12) {
            best_beta = -best_beta;
            best_val = std::max(best_val, mirrored);
        }
    }
    scan.beta_opt = best_beta;
    scan.objective_opt = best_val;
    return scan;
}

std::vector<GainScanRow> scan_gain(double g_min, double g_max, int steps,
                                   const FilterSpec& filter, double eps) {
    if (!(g_min >= 0.0) || !(g_min < g_max)) throw ConfigError("need 0 <= g_min < g_max");
    if (steps < 2) throw ConfigError("need at least 2 sweep steps");
    std::vector<GainScanRow> rows(steps);
    for (int i = 0; i < steps; ++i) {
        const double g = g_min + (g_max - g_min) * static_cast<double>(i) / (steps - 1);
        const Gain gain(g);
        const AngleScan scan = optimal_angle(gain, filter, eps);
        const BellReport report =
            bell_parameter(BellSettings::standard(scan.beta_opt), gain, filter, eps);
        rows[i] = GainScanRow{g, scan.beta_opt, report.b_total};
    }
    return rows;
}

}  // namespace singlet
