#pragma once

#include <Eigen/Core>
#include <memory>
#include <utility>
#include <vector>

#include "singlet/bell.hpp"

namespace singlet {

// Fractional photon loss per mode; the macro loss acts independently and with
// equal strength on both polarization modes.
struct LossParams {
    double lambda_a = 0.0;
    double lambda_b = 0.0;

    LossParams(double a, double b);
};

enum class VacuumConvention { OperatorAsWritten, AssignMinusOne };

// Enumerated two-mode occupation basis for the multi-photon arm, closed under
// photon removal so loss channels never map outside it.
class MacroBasis {
  public:
    static std::shared_ptr<const MacroBasis> down_closure(
        const std::vector<std::pair<int, int>>& support);

    int size() const { return static_cast<int>(states_.size()); }
    const std::pair<int, int>& state(int idx) const { return states_[idx]; }
    int index(int n_ref, int n_perp) const;
    int cutoff() const { return cutoff_; }

  private:
    std::vector<std::pair<int, int>> states_;
    std::vector<int> lookup_;
    int cutoff_ = 0;
};

// Micro factor ordering: vacuum, single photon in the reference mode, single
// photon in the perpendicular mode.
inline constexpr int kMicroDim = 3;
enum MicroIndex { kMicroVacuum = 0, kMicroRef = 1, kMicroPerp = 2 };

struct JointPureState {
    std::shared_ptr<const MacroBasis> basis;
    Eigen::VectorXd amplitudes;  // size kMicroDim * basis->size()
};

// Mixed micro-macro state over the enumerated joint basis.
struct TwoModeDensityMatrix {
    std::shared_ptr<const MacroBasis> basis;
    Eigen::MatrixXd rho;

    static TwoModeDensityMatrix from_pure(const JointPureState& psi);
    double trace() const { return rho.trace(); }
    int cutoff() const { return basis->cutoff(); }
};

// Corner-preselected joint state: the superposition of odd-N N11N branches,
// truncated at tail mass eps and renormalized.
JointPureState n11n_state(const Gain& gain, double eps);

// Independent binomial pure-loss channels: lambda_a on both micro polarization
// modes, lambda_b on both macro modes. Trace preserving.
TwoModeDensityMatrix apply_loss(const TwoModeDensityMatrix& state, const LossParams& params);

// E(alpha, beta) = Tr[rho O_micro(alpha) x O_macro(beta)]. Macro vacuum sits
// on the +1 branch of the sign observable; the micro vacuum outcome follows
// the chosen convention.
double correlation_under_loss(const TwoModeDensityMatrix& state, double alpha, double beta,
                              VacuumConvention convention);

struct LossBellOptions {
    VacuumConvention convention = VacuumConvention::OperatorAsWritten;
    bool reoptimize_angle = true;   // otherwise evaluate at frozen_beta
    double frozen_beta = 0.0;
};

// Four-correlation CHSH at standard settings for the lossy N11N state, with
// beta re-optimized per loss point unless frozen. per_sector is empty: loss
// mixes photon-number sectors.
BellReport bell_with_losses(const Gain& gain, const LossParams& params,
                            const LossBellOptions& options, double eps);

}  // namespace singlet
