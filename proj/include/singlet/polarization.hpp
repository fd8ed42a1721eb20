#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <utility>

#include "singlet/fockspace.hpp"

namespace singlet {

// Basis-change matrix for one photon-number sector. Rows and columns are
// indexed by the perpendicular-mode occupation; entries map amplitudes in the
// reference basis to amplitudes in the basis rotated by `angle`.
//
// Sign convention: the handedness is fixed so that the k = 0 sector gives
// antivisibility A_0(beta) = -sin(beta), which puts the optimum of V_0 + A_0
// at beta = -pi/4. Concretely R(1, beta) = [[cos(b/2), -sin(b/2)],
// [sin(b/2), cos(b/2)]].
struct RotationMatrix {
    int n_total = 0;
    Eigen::MatrixXd entries;
};

RotationMatrix rotation_matrix(int n_total, double angle);

// Amplitudes of `state` expressed in the angle-rotated basis. Norm-preserving.
SectorState rotate(const SectorState& state, double angle);
Eigen::VectorXd rotate_amplitudes(const Eigen::VectorXd& amplitudes, double angle);

// Single-photon observable cos(a)(|1><1| - |1p><1p|) + sin(a)(|1><1p| + |1p><1|)
// sandwiched between two-amplitude micro states (index 0 = reference mode).
double micro_expectation(const std::pair<double, double>& bra,
                         const std::pair<double, double>& ket, double angle);

// Binary +/-1 assignment over a sector basis, diagonal in the measured basis.
// u = photons in the measured reference mode, w = perpendicular mode.
struct DiagonalObservable {
    std::function<double(int u, int w)> condition;
    std::string label;
};

// Sign of the population difference: +1 when u - w >= 0, else -1.
DiagonalObservable sign_difference_observable();

// <bra| O(angle) |ket> evaluated by rotating both states into the measured
// basis and summing condition-weighted amplitude products.
double observable_expectation(const SectorState& bra, const SectorState& ket,
                              const DiagonalObservable& obs, double angle);

}  // namespace singlet
