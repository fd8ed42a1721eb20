#include "singlet/polarization.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "singlet/errors.hpp"

namespace singlet {

namespace {

// The rotation of a sector is exp(beta*G) with G the antisymmetric tridiagonal
// generator G[m+1][m] = +0.5*sqrt((N-m)(m+1)). iG is similar (via the diagonal
// phase i^m) to a real symmetric tridiagonal matrix with known integer-spaced
// spectrum w - N/2, so one eigendecomposition per N yields every angle. This
// avoids the alternating factorial sums of the direct expansion, which cancel
// catastrophically beyond N of a few dozen.
struct SectorEigenbasis {
    Eigen::MatrixXd vectors;    // eigenvectors of the similar tridiagonal T
    Eigen::VectorXd spectrum;   // exact half-integer eigenvalues w - N/2
};

const SectorEigenbasis& eigenbasis(int n_total) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<SectorEigenbasis>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n_total);
    if (it != cache.end()) return *it->second;

    auto basis = std::make_unique<SectorEigenbasis>();
    const int dim = n_total + 1;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sub(dim > 1 ? dim - 1 : 0);
    for (int m = 0; m + 1 < dim; ++m)
        sub[m] = 0.5 * std::sqrt(static_cast<double>(n_total - m) * (m + 1));
    if (dim == 1) {
        basis->vectors = Eigen::MatrixXd::Ones(1, 1);
        basis->spectrum = Eigen::VectorXd::Zero(1);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (solver.info() != Eigen::Success)
            throw std::logic_error("sector rotation eigensolve failed");
        basis->vectors = solver.eigenvectors();
        basis->spectrum.resize(dim);
        const double offset = 0.5 * n_total;
        for (int w = 0; w < dim; ++w) {
            const double exact = w - offset;
            if (std::abs(solver.eigenvalues()[w] - exact) > 1e-8)
                throw std::logic_error("sector rotation spectrum off the exact grid");
            basis->spectrum[w] = exact;
        }
    }
    const SectorEigenbasis& ref = *basis;
    cache[n_total] = std::move(basis);
    return ref;
}

}  // namespace

Eigen::VectorXd rotate_amplitudes(const Eigen::VectorXd& amplitudes, double angle) {
    const int dim = static_cast<int>(amplitudes.size());
    const int n_total = dim - 1;
    if (dim == 1 || angle == 0.0) return amplitudes;
    const SectorEigenbasis& basis = eigenbasis(n_total);

    // out = Re[ D V e^{-i beta L} V^T D^+ c ] with D = diag(i^m).
    Eigen::VectorXd y_re(dim), y_im(dim);
    for (int m = 0; m < dim; ++m) {
        switch (m & 3) {  // (-i)^m
            case 0: y_re[m] = amplitudes[m]; y_im[m] = 0.0; break;
            case 1: y_re[m] = 0.0; y_im[m] = -amplitudes[m]; break;
            case 2: y_re[m] = -amplitudes[m]; y_im[m] = 0.0; break;
            default: y_re[m] = 0.0; y_im[m] = amplitudes[m]; break;
        }
    }
    Eigen::VectorXd z_re = basis.vectors.transpose() * y_re;
    Eigen::VectorXd z_im = basis.vectors.transpose() * y_im;
    for (int w = 0; w < dim; ++w) {
        const double phase = -angle * basis.spectrum[w];
        const double c = std::cos(phase), s = std::sin(phase);
        const double re = z_re[w] * c - z_im[w] * s;
        const double im = z_re[w] * s + z_im[w] * c;
        z_re[w] = re;
        z_im[w] = im;
    }
    Eigen::VectorXd u_re = basis.vectors * z_re;
    Eigen::VectorXd u_im = basis.vectors * z_im;
    Eigen::VectorXd out(dim);
    for (int m = 0; m < dim; ++m) {
        switch (m & 3) {  // Re[i^m u]
            case 0: out[m] = u_re[m]; break;
            case 1: out[m] = -u_im[m]; break;
            case 2: out[m] = -u_re[m]; break;
            default: out[m] = u_im[m]; break;
        }
    }
    return out;
}

RotationMatrix rotation_matrix(int n_total, double angle) {
    if (n_total < 0) throw ConfigError("sector photon number must be nonnegative");
    RotationMatrix rot;
    rot.n_total = n_total;
    rot.entries.resize(n_total + 1, n_total + 1);
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(n_total + 1);
    for (int m = 0; m <= n_total; ++m) {
        unit[m] = 1.0;
        rot.entries.col(m) = rotate_amplitudes(unit, angle);
        unit[m] = 0.0;
    }
    return rot;
}

SectorState rotate(const SectorState& state, double angle) {
    SectorState out = state;
    out.amplitudes = rotate_amplitudes(state.amplitudes, angle);
    return out;
}

double micro_expectation(const std::pair<double, double>& bra,
                         const std::pair<double, double>& ket, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return bra.first * (c * ket.first + s * ket.second) +
           bra.second * (s * ket.first - c * ket.second);
}

DiagonalObservable sign_difference_observable() {
    return DiagonalObservable{
        [](int u, int w) { return (u - w >= 0) ? 1.0 : -1.0; },
        "sign_difference"};
}

double observable_expectation(const SectorState& bra, const SectorState& ket,
                              const DiagonalObservable& obs, double angle) {
    if (bra.amplitudes.size() != ket.amplitudes.size())
        throw DimensionError("bra and ket live in different sectors");
    const int n_total = static_cast<int>(bra.amplitudes.size()) - 1;
    const Eigen::VectorXd rb = rotate_amplitudes(bra.amplitudes, angle);
    const Eigen::VectorXd rk = rotate_amplitudes(ket.amplitudes, angle);
    double sum = 0.0;
    for (int m = 0; m <= n_total; ++m)
        sum += obs.condition(n_total - m, m) * rb[m] * rk[m];
    return sum;
}

}  // namespace singlet
