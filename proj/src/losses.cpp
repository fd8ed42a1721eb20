#include "singlet/losses.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "singlet/errors.hpp"
#include "singlet/polarization.hpp"

namespace singlet {

namespace {

constexpr int kJointDimCap = 8192;

double binomial(int n, int k) {
    return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

// sqrt(C(n,l) (1-lam)^(n-l) lam^l): amplitude for losing l of n photons.
std::vector<std::vector<double>> loss_amplitudes(int n_max, double lam) {
    std::vector<std::vector<double>> t(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        t[n].resize(n + 1);
        for (int l = 0; l <= n; ++l)
            t[n][l] = std::sqrt(binomial(n, l) * std::pow(1.0 - lam, n - l) * std::pow(lam, l));
    }
    return t;
}

// Macro observable matrix elements grouped by total photon number. Only the
// entries between basis states of equal total are nonzero.
class MacroObservable {
  public:
    MacroObservable(const MacroBasis& basis, double beta) : basis_(basis) {
        const int n = basis.size();
        columns_.resize(n);
        for (int i = 0; i < n; ++i) columns_[i] = rotated_column(basis.state(i), beta);
    }

    double entry(int i, int j) const {
        const auto& [u1, w1] = basis_.state(i);
        const auto& [u2, w2] = basis_.state(j);
        const int total = u1 + w1;
        if (total != u2 + w2) return 0.0;
        const Eigen::VectorXd& ci = columns_[i];
        const Eigen::VectorXd& cj = columns_[j];
        double sum = 0.0;
        for (int w = 0; w <= total; ++w) {
            const double sign = (total - 2 * w >= 0) ? 1.0 : -1.0;
            sum += sign * ci[w] * cj[w];
        }
        return sum;
    }

  private:
    // Coefficients of the basis state |n_ref, n_perp> in the rotated basis,
    // indexed by rotated perp occupation. Extremal columns have single-signed
    // closed forms; interior columns go through the spectral engine.
    static Eigen::VectorXd rotated_column(const std::pair<int, int>& occ, double beta) {
        const int total = occ.first + occ.second;
        const int m = occ.second;
        const double c = std::cos(beta / 2.0), s = std::sin(beta / 2.0);
        Eigen::VectorXd col(total + 1);
        if (total == 0) {
            col[0] = 1.0;
            return col;
        }
        if (m == 0) {
            for (int w = 0; w <= total; ++w)
                col[w] = std::sqrt(binomial(total, w)) * std::pow(c, total - w) * std::pow(s, w);
            return col;
        }
        if (m == total) {
            for (int w = 0; w <= total; ++w)
                col[w] = std::sqrt(binomial(total, w)) *
                         ((total - w) % 2 == 0 ? 1.0 : -1.0) * std::pow(s, total - w) *
                         std::pow(c, w);
            return col;
        }
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(total + 1);
        unit[m] = 1.0;
        return rotate_amplitudes(unit, beta);
    }

    const MacroBasis& basis_;
    std::vector<Eigen::VectorXd> columns_;
};

Eigen::Matrix3d micro_observable(double alpha, VacuumConvention convention) {
    Eigen::Matrix3d om = Eigen::Matrix3d::Zero();
    om(kMicroRef, kMicroRef) = std::cos(alpha);
    om(kMicroPerp, kMicroPerp) = -std::cos(alpha);
    om(kMicroRef, kMicroPerp) = om(kMicroPerp, kMicroRef) = std::sin(alpha);
    if (convention == VacuumConvention::AssignMinusOne)
        om(kMicroVacuum, kMicroVacuum) = -1.0;
    return om;
}

}  // namespace

LossParams::LossParams(double a, double b) : lambda_a(a), lambda_b(b) {
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
        throw ConfigError("loss fractions must lie in [0,1]");
}

std::shared_ptr<const MacroBasis> MacroBasis::down_closure(
    const std::vector<std::pair<int, int>>& support) {
    std::set<std::pair<int, int>> closed;
    for (const auto& [a, b] : support) {
        if (a < 0 || b < 0) throw ConfigError("negative occupation");
        for (int x = 0; x <= a; ++x)
            for (int y = 0; y <= b; ++y) closed.insert({x, y});
    }
    auto basis = std::make_shared<MacroBasis>(MacroBasis{});
    basis->states_.assign(closed.begin(), closed.end());
    for (const auto& [a, b] : basis->states_) basis->cutoff_ = std::max(basis->cutoff_, a + b);
    if (kMicroDim * basis->size() > kJointDimCap)
        throw CapacityError("joint loss basis exceeds the size cap");
    basis->lookup_.assign((basis->cutoff_ + 1) * (basis->cutoff_ + 1), -1);
    for (int i = 0; i < basis->size(); ++i) {
        const auto& [a, b] = basis->states_[i];
        basis->lookup_[a * (basis->cutoff_ + 1) + b] = i;
    }
    return basis;
}

int MacroBasis::index(int n_ref, int n_perp) const {
    if (n_ref < 0 || n_perp < 0 || n_ref > cutoff_ || n_perp > cutoff_) return -1;
    return lookup_[n_ref * (cutoff_ + 1) + n_perp];
}

TwoModeDensityMatrix TwoModeDensityMatrix::from_pure(const JointPureState& psi) {
    TwoModeDensityMatrix dm;
    dm.basis = psi.basis;
    dm.rho = psi.amplitudes * psi.amplitudes.transpose();
    return dm;
}

JointPureState n11n_state(const Gain& gain, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("tail tolerance must lie in (0,1)");
    // Branch amplitudes sqrt(cosh g / 2) * gamma_i0; each branch carries the
    // pair weight 2 gamma~^2.
    const double pair_scale = std::sqrt(gain.cosh_g() / 2.0);
    std::vector<double> branch;
    double total = 0.0;
    for (int i = 0;; ++i) {
        if (i > kSectorHardCap) throw CapacityError("n11n truncation exceeds the sector cap");
        const double amp = pair_scale * gamma_amplitude(i, 0, gain);
        branch.push_back(amp);
        total += 2.0 * amp * amp;
        if (1.0 - total <= eps) break;
        if (gain.tanh_g() == 0.0) break;  // only the two-photon branch exists
    }
    const int branches = static_cast<int>(branch.size());

    std::vector<std::pair<int, int>> support;
    support.reserve(2 * branches);
    for (int i = 0; i < branches; ++i) {
        support.push_back({2 * i + 1, 0});
        support.push_back({0, 2 * i + 1});
    }
    auto basis = MacroBasis::down_closure(support);

    JointPureState psi;
    psi.basis = basis;
    psi.amplitudes = Eigen::VectorXd::Zero(kMicroDim * basis->size());
    const int stride = basis->size();
    double norm_sq = 0.0;
    for (int i = 0; i < branches; ++i) {
        const int perp_branch = basis->index(0, 2 * i + 1);
        const int ref_branch = basis->index(2 * i + 1, 0);
        psi.amplitudes[kMicroRef * stride + perp_branch] = branch[i];
        psi.amplitudes[kMicroPerp * stride + ref_branch] = -branch[i];
        norm_sq += 2.0 * branch[i] * branch[i];
    }
    psi.amplitudes /= std::sqrt(norm_sq);
    return psi;
}

TwoModeDensityMatrix apply_loss(const TwoModeDensityMatrix& state, const LossParams& params) {
    const MacroBasis& basis = *state.basis;
    const int stride = basis.size();

    // Micro channel: coherences scale by sqrt(1-lam) per photon, lost photons
    // pile into the vacuum row/column.
    Eigen::MatrixXd rho = state.rho;
    if (params.lambda_a > 0.0) {
        const double keep = std::sqrt(1.0 - params.lambda_a);
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rho.rows(), rho.cols());
        const double factor[kMicroDim] = {1.0, keep, keep};
        for (int mu = 0; mu < kMicroDim; ++mu)
            for (int nu = 0; nu < kMicroDim; ++nu)
                out.block(mu * stride, nu * stride, stride, stride) =
                    factor[mu] * factor[nu] *
                    rho.block(mu * stride, nu * stride, stride, stride);
        out.block(0, 0, stride, stride) +=
            params.lambda_a * (rho.block(stride, stride, stride, stride) +
                               rho.block(2 * stride, 2 * stride, stride, stride));
        rho = std::move(out);
    }

    if (params.lambda_b > 0.0) {
        const auto t = loss_amplitudes(basis.cutoff(), params.lambda_b);
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rho.rows(), rho.cols());
        for (int i = 0; i < stride; ++i) {
            const auto& [a1, b1] = basis.state(i);
            for (int j = 0; j < stride; ++j) {
                const auto& [a2, b2] = basis.state(j);
                // Kraus indices must match on both sides of the coherence.
                for (int l = 0; l <= std::min(a1, a2); ++l) {
                    const double amp_ref = t[a1][l] * t[a2][l];
                    if (amp_ref == 0.0) continue;
                    for (int p = 0; p <= std::min(b1, b2); ++p) {
                        const double amp = amp_ref * t[b1][p] * t[b2][p];
                        if (amp == 0.0) continue;
                        const int ti = basis.index(a1 - l, b1 - p);
                        const int tj = basis.index(a2 - l, b2 - p);
                        for (int mu = 0; mu < kMicroDim; ++mu)
                            for (int nu = 0; nu < kMicroDim; ++nu)
                                out(mu * stride + ti, nu * stride + tj) +=
                                    amp * rho(mu * stride + i, nu * stride + j);
                    }
                }
            }
        }
        rho = std::move(out);
    }

    TwoModeDensityMatrix result;
    result.basis = state.basis;
    result.rho = std::move(rho);
    return result;
}

double correlation_under_loss(const TwoModeDensityMatrix& state, double alpha, double beta,
                              VacuumConvention convention) {
    const MacroBasis& basis = *state.basis;
    const int stride = basis.size();
    const Eigen::Matrix3d om = micro_observable(alpha, convention);
    const MacroObservable macro(basis, beta);

    // Group once by total photon number so only in-block pairs are touched.
    std::map<int, std::vector<int>> blocks;
    for (int i = 0; i < stride; ++i) {
        const auto& [a, b] = basis.state(i);
        blocks[a + b].push_back(i);
    }

    double expectation = 0.0;
    for (int mu = 0; mu < kMicroDim; ++mu) {
        for (int nu = 0; nu < kMicroDim; ++nu) {
            if (om(nu, mu) == 0.0) continue;
            double partial = 0.0;
            for (const auto& [total, idx] : blocks) {
                for (int x : idx)
                    for (int y : idx)
                        partial += state.rho(mu * stride + x, nu * stride + y) * macro.entry(y, x);
            }
            expectation += om(nu, mu) * partial;
        }
    }
    return expectation;
}

BellReport bell_with_losses(const Gain& gain, const LossParams& params,
                            const LossBellOptions& options, double eps) {
    const JointPureState psi = n11n_state(gain, eps);
    TwoModeDensityMatrix rho = TwoModeDensityMatrix::from_pure(psi);
    rho = apply_loss(rho, params);

    const double half_pi = std::numbers::pi / 2.0;
    const auto bell_at = [&](double beta) {
        const double e1 = correlation_under_loss(rho, 0.0, beta, options.convention);
        const double e2 = correlation_under_loss(rho, 0.0, -beta, options.convention);
        const double e3 = correlation_under_loss(rho, half_pi, beta, options.convention);
        const double e4 = correlation_under_loss(rho, half_pi, -beta, options.convention);
        return -(e1 + e2 + e3 - e4);
    };

    double beta = options.frozen_beta;
    if (options.reoptimize_angle) {
        constexpr int kGrid = 129;
        const double margin = half_pi / (kGrid + 1);
        const double lo = -half_pi + margin, hi = half_pi - margin;
        int best = 0;
        std::vector<double> vals(kGrid);
        for (int i = 0; i < kGrid; ++i) {
            const double b = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
            vals[i] = bell_at(b);
            if (vals[i] > vals[best]) best = i;
        }
        const double step = (hi - lo) / (kGrid - 1);
        double a = lo + step * std::max(0, best - 1);
        double b = lo + step * std::min(kGrid - 1, best + 1);
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        double best_beta = lo + step * best, best_val = vals[best];
        double c = b - golden * (b - a), d = a + golden * (b - a);
        double fc = bell_at(c), fd = bell_at(d);
        while (b - a > 1e-6) {
            if (fc > fd) {
                b = d; d = c; fd = fc;
                c = b - golden * (b - a);
                fc = bell_at(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + golden * (b - a);
                fd = bell_at(d);
            }
            if (fc > best_val) { best_val = fc; best_beta = c; }
            if (fd > best_val) { best_val = fd; best_beta = d; }
        }
        beta = best_beta;
    }

    BellReport report;
    report.gain = gain;
    report.filter = FilterSpec::corner(0);
    report.angle_used = beta;
    report.v_total = -correlation_under_loss(rho, 0.0, beta, options.convention);
    report.a_total = -correlation_under_loss(rho, half_pi, beta, options.convention);
    report.b_total = bell_at(beta);
    report.abs_b = std::abs(report.b_total);
    report.tail_mass = 0.0;
    return report;
}

}  // namespace singlet
