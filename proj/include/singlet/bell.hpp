#pragma once

#include <vector>

#include "singlet/fockspace.hpp"
#include "singlet/preselect.hpp"

namespace singlet {

// CHSH measurement angles. theta is the preselection basis and must stay 0.
struct BellSettings {
    double alpha = 0.0;
    double alpha_prime = 0.0;
    double beta = 0.0;
    double beta_prime = 0.0;
    double theta = 0.0;

    // alpha = 0, alpha' = pi/2, beta' = -beta.
    static BellSettings standard(double beta);
    bool is_standard() const;
};

struct SectorTerm {
    int k = 0;
    double visibility = 0.0;
    double antivisibility = 0.0;
    double bell = 0.0;
    double weight = 0.0;
};

struct BellReport {
    double angle_used = 0.0;
    std::vector<SectorTerm> per_sector;
    double v_total = 0.0;
    double a_total = 0.0;
    double b_total = 0.0;
    double abs_b = 0.0;
    double tail_mass = 0.0;
    Gain gain{0.0};
    FilterSpec filter = FilterSpec::none();
};

// V_k(beta) = <Phi_k^P| O(beta) |Phi_k^P> via rotate-and-project. Throws
// UndefinedVisibilityError when the filter empties the sector.
double sector_visibility(int k, double angle, const FilterSpec& filter);

// A_k(beta) = <PhiBar_k^P| O(beta) |Phi_k^P>.
double sector_antivisibility(int k, double angle, const FilterSpec& filter);

// Both quantities from one rotation pass.
std::pair<double, double> sector_va(int k, double angle, const FilterSpec& filter);

// E(alpha, beta) = -cos(alpha) V(beta) - sin(alpha) A(beta) with V, A the
// weight-summed totals of the (preselected) state.
double correlation(double alpha, double beta, const Gain& gain, const FilterSpec& filter,
                   double eps);

// Weight-summed V(beta) and A(beta); sectors evaluate in parallel and reduce
// in k order.
std::pair<double, double> va_totals(double beta, const WeightVector& weights,
                                    const FilterSpec& filter);

// Full CHSH evaluation. The reported B carries the sign convention under
// which the optimum is a positive maximum (B = 2(V+A) at standard settings);
// the four-correlation combination is evaluated as a cross-check and at
// standard settings must agree with the two-term form to 1e-10.
BellReport bell_parameter(const BellSettings& settings, const Gain& gain,
                          const FilterSpec& filter, double eps);

// Per-sector Bell contribution B_k = 2(V_k + A_k), checked against the
// four-term combination to 1e-12.
double sector_bell(int k, double angle, const FilterSpec& filter);

}  // namespace singlet
