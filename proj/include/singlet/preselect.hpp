#pragma once

#include <functional>
#include <string>

#include "singlet/fockspace.hpp"

namespace singlet {

enum class FilterKind { None, Corner, Mdf };

// Diagonal POVM preselection described by a predicate C(sigma, delta) on the
// total photon number and the occupation difference (perp minus reference).
// The predicate must be symmetric in delta; custom() enforces this at
// construction because the sector-weight equality relies on it.
class FilterSpec {
  public:
    static FilterSpec none();
    static FilterSpec corner(int delta_th);
    static FilterSpec mdf(int delta_th);
    static FilterSpec custom(std::function<bool(int sigma, int delta)> predicate,
                             std::string label);

    bool passes(int sigma, int delta) const;
    FilterKind kind() const { return kind_; }
    int delta_th() const { return delta_th_; }
    const std::string& label() const { return label_; }
    bool is_none() const { return kind_ == FilterKind::None && !predicate_; }

  private:
    FilterSpec() = default;

    FilterKind kind_ = FilterKind::None;
    int delta_th_ = 0;
    std::function<bool(int, int)> predicate_;
    std::string label_ = "none";
};

// Projects the state onto the components accepted by the filter and
// renormalizes. norm_sq is multiplied by the surviving squared weight, so a
// fresh sector ends up with norm_sq = N_k^P / N_k. An all-zero state with
// norm_sq = 0 is returned when nothing survives.
SectorState apply_filter(const SectorState& state, const FilterSpec& filter);

// Filtered sector normalization N_k^P (the constrained combinatorial sum).
// Overflows to +inf for k beyond ~85; use survival_fraction for large k.
double filtered_norm(int k, Flavor flavor, const FilterSpec& filter);

// N_k^P / N_k evaluated in log space; always finite.
double survival_fraction(int k, Flavor flavor, const FilterSpec& filter);

// Sector weights (beta_k^P)^2 of the preselected state; reduces to
// gain_weights when the filter accepts everything.
WeightVector preselected_weights(const Gain& gain, const FilterSpec& filter, double eps);

// Probability that the ideal POVM accepts the amplified state,
// sum_k beta_k^2 N_k^P / N_k.
double success_probability(const Gain& gain, const FilterSpec& filter, double eps);

}  // namespace singlet
