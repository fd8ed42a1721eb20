#include "singlet/bell.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "singlet/errors.hpp"
#include "singlet/parallel.hpp"
#include "singlet/polarization.hpp"

namespace singlet {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

BellSettings BellSettings::standard(double beta) {
    BellSettings s;
    s.alpha = 0.0;
    s.alpha_prime = kHalfPi;
    s.beta = beta;
    s.beta_prime = -beta;
    s.theta = 0.0;
    return s;
}

bool BellSettings::is_standard() const {
    return near(alpha, 0.0, 1e-12) && near(alpha_prime, kHalfPi, 1e-12) &&
           near(beta_prime, -beta, 1e-12);
}

std::pair<double, double> sector_va(int k, double angle, const FilterSpec& filter) {
    const SectorState phi = apply_filter(sector_state(k, Flavor::Phi), filter);
    const SectorState phibar = apply_filter(sector_state(k, Flavor::PhiBar), filter);
    if (phi.norm_sq == 0.0 || phibar.norm_sq == 0.0)
        throw UndefinedVisibilityError("sector " + std::to_string(k) +
                                       " is empty after preselection");
    const int n_total = 2 * k + 1;
    const Eigen::VectorXd rp = rotate_amplitudes(phi.amplitudes, angle);
    const Eigen::VectorXd rb = rotate_amplitudes(phibar.amplitudes, angle);
    double v = 0.0, a = 0.0;
    for (int m = 0; m <= n_total; ++m) {
        const double sign = (n_total - 2 * m >= 0) ? 1.0 : -1.0;
        v += sign * rp[m] * rp[m];
        a += sign * rb[m] * rp[m];
    }
    return {v, a};
}

double sector_visibility(int k, double angle, const FilterSpec& filter) {
    return sector_va(k, angle, filter).first;
}

double sector_antivisibility(int k, double angle, const FilterSpec& filter) {
    return sector_va(k, angle, filter).second;
}

std::pair<double, double> va_totals(double beta, const WeightVector& weights,
                                    const FilterSpec& filter) {
    const std::size_t n = weights.weights.size();
    std::vector<double> vs(n, 0.0), as(n, 0.0);
    parallel_for(n, [&](std::size_t k) {
        if (weights.weights[k] == 0.0) return;
        const auto [v, a] = sector_va(static_cast<int>(k), beta, filter);
        vs[k] = v;
        as[k] = a;
    });
    double v_total = 0.0, a_total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        v_total += weights.weights[k] * vs[k];
        a_total += weights.weights[k] * as[k];
    }
    return {v_total, a_total};
}

double correlation(double alpha, double beta, const Gain& gain, const FilterSpec& filter,
                   double eps) {
    const WeightVector weights = preselected_weights(gain, filter, eps);
    const auto [v, a] = va_totals(beta, weights, filter);
    return -std::cos(alpha) * v - std::sin(alpha) * a;
}

BellReport bell_parameter(const BellSettings& settings, const Gain& gain,
                          const FilterSpec& filter, double eps) {
    if (!near(settings.theta, 0.0, 1e-12))
        throw ConfigError("preselection basis theta must be 0");
    const WeightVector weights = preselected_weights(gain, filter, eps);

    const std::size_t n = weights.weights.size();
    std::vector<double> v_b(n, 0.0), a_b(n, 0.0), v_bp(n, 0.0), a_bp(n, 0.0);
    parallel_for(n, [&](std::size_t k) {
        if (weights.weights[k] == 0.0) return;
        const auto [v1, a1] = sector_va(static_cast<int>(k), settings.beta, filter);
        const auto [v2, a2] = sector_va(static_cast<int>(k), settings.beta_prime, filter);
        v_b[k] = v1;
        a_b[k] = a1;
        v_bp[k] = v2;
        a_bp[k] = a2;
    });

    BellReport report;
    report.gain = gain;
    report.filter = filter;
    report.angle_used = settings.beta;
    report.tail_mass = weights.tail_mass;
    report.per_sector.reserve(n);
    double vb = 0.0, ab = 0.0, vbp = 0.0, abp = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = weights.weights[k];
        vb += w * v_b[k];
        ab += w * a_b[k];
        vbp += w * v_bp[k];
        abp += w * a_bp[k];
        report.per_sector.push_back(SectorTerm{static_cast<int>(k), v_b[k], a_b[k],
                                               2.0 * (v_b[k] + a_b[k]), w});
    }
    report.v_total = vb;
    report.a_total = ab;

    const auto corr = [](double alpha, double v, double a) {
        return -std::cos(alpha) * v - std::sin(alpha) * a;
    };
    const double four_term = corr(settings.alpha, vb, ab) + corr(settings.alpha, vbp, abp) +
                             corr(settings.alpha_prime, vb, ab) -
                             corr(settings.alpha_prime, vbp, abp);
    report.b_total = -four_term;
    report.abs_b = std::abs(report.b_total);

    if (settings.is_standard()) {
        // The two-term form relies on V(-b) = V(b), A(-b) = -A(b); disagreement
        // means the state construction broke the parity structure.
        const double two_term = 2.0 * (vb + ab);
        if (!near(report.b_total, two_term, 1e-10))
            throw std::logic_error("four-term and two-term Bell forms disagree");
    }
    return report;
}

double sector_bell(int k, double angle, const FilterSpec& filter) {
    const auto [v, a] = sector_va(k, angle, filter);
    const auto [vm, am] = sector_va(k, -angle, filter);
    const double two_term = 2.0 * (v + a);
    const double four_term = v + vm + a - am;
    if (!near(two_term, four_term, 1e-12))
        throw std::logic_error("sector Bell parity reduction failed");
    return two_term;
}

}  // namespace singlet
