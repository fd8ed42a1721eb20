#pragma once

#include <Eigen/Core>
#include <vector>

namespace singlet {

// Hard cap on the sector index k (total photons 2k+1). Guards runaway gains;
// legitimate configurations stay far below it.
inline constexpr int kSectorHardCap = 500;

// ln(n!) from a table built once at startup; valid for n <= 2*kSectorHardCap+3.
double log_factorial(int n);

// Parametric amplification gain with cached hyperbolics.
class Gain {
  public:
    explicit Gain(double g);

    double g() const { return g_; }
    double cosh_g() const { return cosh_g_; }
    double sinh_g() const { return sinh_g_; }
    double tanh_g() const { return tanh_g_; }

  private:
    double g_;
    double cosh_g_;
    double sinh_g_;
    double tanh_g_;
};

enum class Flavor { Phi, PhiBar };

// One fixed-photon-number sector of the multi-photon qubit. Amplitudes are
// indexed by m = photons in the perpendicular mode, m in [0, 2k+1]; the
// reference mode holds 2k+1-m. Phi sectors occupy even m only, PhiBar odd m.
// norm_sq tracks the squared weight surviving preselection (1 when unfiltered).
struct SectorState {
    int k = 0;
    Eigen::VectorXd amplitudes;
    double norm_sq = 1.0;

    int total_photons() const { return 2 * k + 1; }
};

// Truncated probability weights over sectors k = 0..k_max plus the discarded
// tail mass; weights sum to 1 - tail_mass.
struct WeightVector {
    std::vector<double> weights;
    double tail_mass = 0.0;
    int k_max = 0;
};

// ln N_k for the sector normalization N_k = 4^k k!^2 (1+k).
double log_sector_norm(int k);

// Normalized (2k+1)-photon sector state.
SectorState sector_state(int k, Flavor flavor);

// Sector weights beta_k^2 = cosh^-4(g) tanh^2k(g) (1+k), truncated at the
// smallest k_max whose tail mass is <= eps.
WeightVector gain_weights(const Gain& gain, double eps);

// Average population of the amplified state: 4 sinh^2(g) + 1.
double mean_photon_number(const Gain& gain);

// Amplitude of |(2i+1), (2j)_perp> in the amplified single photon.
double gamma_amplitude(int i, int j, const Gain& gain);

}  // namespace singlet
