#include "singlet/preselect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "singlet/errors.hpp"

namespace singlet {

namespace {

double log_binomial(int n, int j) {
    return log_factorial(n) - log_factorial(j) - log_factorial(n - j);
}

// log(sum exp(terms)) without overflow; -inf for an empty sum.
double log_sum_exp(const std::vector<double>& terms) {
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    const double peak = *std::max_element(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - peak);
    return peak + std::log(acc);
}

// ln N_k^P; -inf when the filter rejects every component.
double log_filtered_norm(int k, Flavor flavor, const FilterSpec& filter) {
    std::vector<double> terms;
    terms.reserve(k + 1);
    const int sigma = 2 * k + 1;
    for (int j = 0; j <= k; ++j) {
        if (flavor == Flavor::Phi) {
            const int delta = 2 * k - 2 * j - (2 * j + 1);  // perp minus reference
            if (!filter.passes(sigma, delta)) continue;
            terms.push_back(2.0 * log_binomial(k, j) + log_factorial(2 * j + 1) +
                            log_factorial(2 * k - 2 * j));
        } else {
            const int delta = 2 * k + 1 - 2 * j - 2 * j;
            if (!filter.passes(sigma, delta)) continue;
            terms.push_back(2.0 * log_binomial(k, j) + log_factorial(2 * j) +
                            log_factorial(2 * k + 1 - 2 * j));
        }
    }
    return log_sum_exp(terms);
}

}  // namespace

FilterSpec FilterSpec::none() {
    FilterSpec f;
    f.kind_ = FilterKind::None;
    f.label_ = "none";
    return f;
}

FilterSpec FilterSpec::corner(int delta_th) {
    if (delta_th < 0) throw ConfigError("corner threshold must be nonnegative");
    FilterSpec f;
    f.kind_ = FilterKind::Corner;
    f.delta_th_ = delta_th;
    f.label_ = "corner";
    return f;
}

FilterSpec FilterSpec::mdf(int delta_th) {
    if (delta_th < 0) throw ConfigError("mdf threshold must be nonnegative");
    FilterSpec f;
    f.kind_ = FilterKind::Mdf;
    f.delta_th_ = delta_th;
    f.label_ = "mdf";
    return f;
}

FilterSpec FilterSpec::custom(std::function<bool(int, int)> predicate, std::string label) {
    if (!predicate) throw ConfigError("custom filter needs a predicate");
    // The weight-equality identity between the two sector flavors requires
    // C(sigma, delta) = C(sigma, -delta); reject asymmetric predicates early.
    for (int sigma = 0; sigma <= 2 * 64 + 1; ++sigma)
        for (int delta = -sigma; delta <= sigma; ++delta)
            if (predicate(sigma, delta) != predicate(sigma, -delta))
                throw ConfigError("preselection predicate is not symmetric in delta");
    FilterSpec f;
    f.kind_ = FilterKind::None;
    f.predicate_ = std::move(predicate);
    f.label_ = std::move(label);
    return f;
}

bool FilterSpec::passes(int sigma, int delta) const {
    if (predicate_) return predicate_(sigma, delta);
    switch (kind_) {
        case FilterKind::None: return true;
        case FilterKind::Corner: return sigma - delta_th_ <= std::abs(delta);
        case FilterKind::Mdf: return std::abs(delta) >= delta_th_;
    }
    return true;
}

SectorState apply_filter(const SectorState& state, const FilterSpec& filter) {
    const int n_total = static_cast<int>(state.amplitudes.size()) - 1;
    SectorState out = state;
    double surviving = 0.0;
    for (int m = 0; m <= n_total; ++m) {
        const int delta = 2 * m - n_total;
        if (filter.passes(n_total, delta)) {
            surviving += out.amplitudes[m] * out.amplitudes[m];
        } else {
            out.amplitudes[m] = 0.0;
        }
    }
    if (surviving == 0.0) {
        out.amplitudes.setZero();
        out.norm_sq = 0.0;
        return out;
    }
    out.amplitudes /= std::sqrt(surviving);
    out.norm_sq = state.norm_sq * surviving;
    return out;
}

double filtered_norm(int k, Flavor flavor, const FilterSpec& filter) {
    if (k < 0) throw ConfigError("sector index must be nonnegative");
    if (k > kSectorHardCap) throw CapacityError("sector index exceeds hard cap");
    return std::exp(log_filtered_norm(k, flavor, filter));
}

double survival_fraction(int k, Flavor flavor, const FilterSpec& filter) {
    if (k < 0) throw ConfigError("sector index must be nonnegative");
    if (k > kSectorHardCap) throw CapacityError("sector index exceeds hard cap");
    const double ln = log_filtered_norm(k, flavor, filter);
    if (std::isinf(ln)) return 0.0;
    return std::exp(ln - log_sector_norm(k));
}

WeightVector preselected_weights(const Gain& gain, const FilterSpec& filter, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("tail tolerance must lie in (0,1)");
    if (filter.is_none()) return gain_weights(gain, eps);

    // Filtered masses mu_k = beta_k^2 * N_k^P/N_k summed far past the target
    // tolerance; the unfiltered tail bounds whatever the filter would keep.
    const double deep_eps = std::min(eps * 1e-4, 1e-15);
    WeightVector base = gain_weights(gain, std::max(deep_eps, 1e-306));
    std::vector<double> mass(base.weights.size());
    double total = 0.0;
    for (std::size_t k = 0; k < base.weights.size(); ++k) {
        mass[k] = base.weights[k] * survival_fraction(static_cast<int>(k), Flavor::Phi, filter);
        total += mass[k];
    }
    const double bound = base.tail_mass;
    if (total <= 0.0)
        throw DegenerateFilterError("filter rejects every component of the truncated state");
    const double norm = total + bound;

    WeightVector out;
    out.weights.assign(mass.size(), 0.0);
    for (std::size_t k = 0; k < mass.size(); ++k) out.weights[k] = mass[k] / norm;

    // Report k_max at the requested tolerance; the remainder goes to the tail.
    double suffix = bound / norm;
    int k_max = static_cast<int>(mass.size()) - 1;
    while (k_max > 0 && suffix + out.weights[k_max] <= eps) {
        suffix += out.weights[k_max];
        --k_max;
    }
    out.weights.resize(k_max + 1);
    double sum = 0.0;
    for (double w : out.weights) sum += w;
    out.tail_mass = std::max(0.0, 1.0 - sum);
    out.k_max = k_max;
    return out;
}

double success_probability(const Gain& gain, const FilterSpec& filter, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("tail tolerance must lie in (0,1)");
    const double deep_eps = std::min(eps * 1e-4, 1e-15);
    WeightVector base = gain_weights(gain, std::max(deep_eps, 1e-306));
    double total = 0.0;
    for (std::size_t k = 0; k < base.weights.size(); ++k)
        total += base.weights[k] * survival_fraction(static_cast<int>(k), Flavor::Phi, filter);
    return total + base.tail_mass;
}

}  // namespace singlet
