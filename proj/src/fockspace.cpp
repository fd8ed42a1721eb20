#include "singlet/fockspace.hpp"

#include <cmath>
#include <mutex>

#include "singlet/errors.hpp"

namespace singlet {

namespace {

constexpr int kTableSize = 2 * kSectorHardCap + 4;

const std::vector<double>& factorial_table() {
    static std::vector<double> table = [] {
        std::vector<double> t(kTableSize, 0.0);
        for (int n = 2; n < kTableSize; ++n) t[n] = t[n - 1] + std::log(static_cast<double>(n));
        return t;
    }();
    return table;
}

void check_sector_cap(int k) {
    if (k < 0) throw ConfigError("sector index must be nonnegative");
    if (k > kSectorHardCap)
        throw CapacityError("sector index " + std::to_string(k) + " exceeds hard cap " +
                            std::to_string(kSectorHardCap));
}

double log_binomial(int n, int j) {
    return log_factorial(n) - log_factorial(j) - log_factorial(n - j);
}

// Mass beyond sector K for the geometric-times-linear weight series,
// sum_{k>K} (1+k) x^k (1-x)^2 = x^(K+1) [(K+2)(1-x) + x].
double weight_tail(int K, double x) {
    return std::pow(x, K + 1) * ((K + 2) * (1.0 - x) + x);
}

}  // namespace

double log_factorial(int n) {
    if (n < 0) throw ConfigError("factorial of negative argument");
    if (n >= kTableSize) throw CapacityError("factorial table exceeded");
    return factorial_table()[n];
}

Gain::Gain(double g) : g_(g) {
    if (!(g >= 0.0)) throw ConfigError("gain must be nonnegative");
    cosh_g_ = std::cosh(g);
    sinh_g_ = std::sinh(g);
    tanh_g_ = std::tanh(g);
}

double log_sector_norm(int k) {
    return k * std::log(4.0) + 2.0 * log_factorial(k) + std::log1p(static_cast<double>(k));
}

SectorState sector_state(int k, Flavor flavor) {
    check_sector_cap(k);
    const int n_total = 2 * k + 1;
    SectorState state;
    state.k = k;
    state.amplitudes = Eigen::VectorXd::Zero(n_total + 1);
    const double half_log_norm = 0.5 * log_sector_norm(k);
    for (int j = 0; j <= k; ++j) {
        if (flavor == Flavor::Phi) {
            // component |2j+1, (2k-2j)_perp|; perp occupation m = 2(k-j)
            const int m = 2 * (k - j);
            const double ln = log_binomial(k, j) +
                              0.5 * (log_factorial(2 * j + 1) + log_factorial(2 * k - 2 * j)) -
                              half_log_norm;
            state.amplitudes[m] = std::exp(ln);
        } else {
            const int m = 2 * k + 1 - 2 * j;
            const double ln = log_binomial(k, j) +
                              0.5 * (log_factorial(2 * j) + log_factorial(2 * k + 1 - 2 * j)) -
                              half_log_norm;
            state.amplitudes[m] = std::exp(ln);
        }
    }
    state.amplitudes /= state.amplitudes.norm();
    state.norm_sq = 1.0;
    return state;
}

WeightVector gain_weights(const Gain& gain, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("tail tolerance must lie in (0,1)");
    const double x = gain.tanh_g() * gain.tanh_g();
    WeightVector out;
    if (x == 0.0) {
        out.weights = {1.0};
        out.tail_mass = 0.0;
        out.k_max = 0;
        return out;
    }
    int k_max = 0;
    while (weight_tail(k_max, x) > eps) {
        ++k_max;
        if (k_max > kSectorHardCap)
            throw CapacityError("gain too large: truncation needs more than " +
                                std::to_string(kSectorHardCap) + " sectors");
    }
    const double scale = (1.0 - x) * (1.0 - x);
    out.weights.resize(k_max + 1);
    double sum = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        out.weights[k] = scale * (1.0 + k) * std::pow(x, k);
        sum += out.weights[k];
    }
    out.tail_mass = std::max(0.0, 1.0 - sum);
    out.k_max = k_max;
    return out;
}

double mean_photon_number(const Gain& gain) {
    return 4.0 * gain.sinh_g() * gain.sinh_g() + 1.0;
}

double gamma_amplitude(int i, int j, const Gain& gain) {
    if (i < 0 || j < 0) throw ConfigError("gamma_amplitude needs nonnegative indices");
    if (gain.tanh_g() == 0.0) return (i == 0 && j == 0) ? 1.0 : 0.0;
    const double ln = -2.0 * std::log(gain.cosh_g()) +
                      (i + j) * std::log(gain.tanh_g() / 2.0) +
                      0.5 * (log_factorial(2 * i + 1) + log_factorial(2 * j)) -
                      log_factorial(i) - log_factorial(j);
    return std::exp(ln);
}

}  // namespace singlet
