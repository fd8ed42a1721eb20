#include "oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

using singlet::FilterSpec;
using singlet::Flavor;

BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

BigInt binomial(int n, int j) {
    if (j < 0 || j > n) return 0;
    return factorial(n) / (factorial(j) * factorial(n - j));
}

namespace {

bool phi_component_passes(int k, int j, const FilterSpec& filter) {
    return filter.passes(2 * k + 1, 2 * k - 2 * j - (2 * j + 1));
}

bool phibar_component_passes(int k, int j, const FilterSpec& filter) {
    return filter.passes(2 * k + 1, 2 * k + 1 - 2 * j - 2 * j);
}

}  // namespace

Rational sector_amplitude_sq(int k, Flavor flavor, int m) {
    if (m < 0 || m > 2 * k + 1) return 0;
    const BigInt norm = [&] {
        BigInt four_k = 1;
        for (int i = 0; i < k; ++i) four_k *= 4;
        return four_k * factorial(k) * factorial(k) * (k + 1);
    }();
    if (flavor == Flavor::Phi) {
        if (m % 2 != 0) return 0;
        const int j = k - m / 2;
        if (j < 0) return 0;
        return Rational(binomial(k, j) * binomial(k, j) * factorial(2 * j + 1) *
                            factorial(2 * k - 2 * j),
                        norm);
    }
    if (m % 2 != 1) return 0;
    const int j = (2 * k + 1 - m) / 2;
    if (j < 0 || j > k) return 0;
    return Rational(binomial(k, j) * binomial(k, j) * factorial(2 * j) *
                        factorial(2 * k + 1 - 2 * j),
                    norm);
}

BigInt filtered_norm_exact(int k, Flavor flavor, const FilterSpec& filter) {
    BigInt sum = 0;
    for (int j = 0; j <= k; ++j) {
        if (flavor == Flavor::Phi) {
            if (!phi_component_passes(k, j, filter)) continue;
            sum += binomial(k, j) * binomial(k, j) * factorial(2 * j + 1) *
                   factorial(2 * k - 2 * j);
        } else {
            if (!phibar_component_passes(k, j, filter)) continue;
            sum += binomial(k, j) * binomial(k, j) * factorial(2 * j) *
                   factorial(2 * k + 1 - 2 * j);
        }
    }
    return sum;
}

std::vector<HighFloat> sector_amplitudes_high(int k, Flavor flavor, const FilterSpec& filter) {
    const int n_total = 2 * k + 1;
    std::vector<Rational> squares(n_total + 1, 0);
    Rational total = 0;
    for (int m = 0; m <= n_total; ++m) {
        if (!filter.passes(n_total, 2 * m - n_total)) continue;
        squares[m] = sector_amplitude_sq(k, flavor, m);
        total += squares[m];
    }
    if (total == 0) throw std::runtime_error("oracle: sector emptied by filter");
    std::vector<HighFloat> amps(n_total + 1, HighFloat(0));
    for (int m = 0; m <= n_total; ++m) {
        if (squares[m] == 0) continue;
        amps[m] = sqrt(HighFloat(Rational(squares[m] / total)));
    }
    return amps;
}

std::vector<HighFloat> rotated_column(int n_total, int m, HighFloat angle) {
    const HighFloat c = cos(angle / 2), s = sin(angle / 2);
    std::vector<HighFloat> col(n_total + 1, HighFloat(0));
    for (int w = 0; w <= n_total; ++w) {
        HighFloat sum = 0;
        const int q_lo = std::max(0, w - (n_total - m));
        const int q_hi = std::min(m, w);
        for (int q = q_lo; q <= q_hi; ++q) {
            HighFloat term = HighFloat(binomial(n_total - m, w - q) * binomial(m, q));
            if ((m - q) % 2 != 0) term = -term;
            term *= pow(c, n_total - m - w + 2 * q) * pow(s, w + m - 2 * q);
            sum += term;
        }
        const HighFloat scale =
            sqrt(HighFloat(Rational(factorial(n_total - w) * factorial(w),
                                    factorial(n_total - m) * factorial(m))));
        col[w] = scale * sum;
    }
    return col;
}

DenseSectorOperator dense_observable(int n_total, HighFloat angle,
                                     const std::function<double(int, int)>& condition) {
    if (n_total > kMaxDenseTotal) throw std::runtime_error("oracle: dense sector too large");
    DenseSectorOperator op;
    op.n_total = n_total;
    op.matrix.assign(n_total + 1, std::vector<HighFloat>(n_total + 1, HighFloat(0)));
    std::vector<std::vector<HighFloat>> cols(n_total + 1);
    for (int m = 0; m <= n_total; ++m) cols[m] = rotated_column(n_total, m, angle);
    for (int m1 = 0; m1 <= n_total; ++m1)
        for (int m2 = 0; m2 <= n_total; ++m2) {
            HighFloat sum = 0;
            for (int w = 0; w <= n_total; ++w)
                sum += HighFloat(condition(n_total - w, w)) * cols[m1][w] * cols[m2][w];
            op.matrix[m1][m2] = sum;
        }
    return op;
}

HighFloat dense_expectation(const std::vector<HighFloat>& bra, const DenseSectorOperator& op,
                            const std::vector<HighFloat>& ket) {
    HighFloat sum = 0;
    for (std::size_t i = 0; i < bra.size(); ++i)
        for (std::size_t j = 0; j < ket.size(); ++j) sum += bra[i] * op.matrix[i][j] * ket[j];
    return sum;
}

namespace {

// Inner binomial sum shared by both closed forms.
HighFloat inner_sum(int u, int w, int target, const HighFloat& c, const HighFloat& s) {
    HighFloat total = 0;
    for (int m = 0; m <= u; ++m) {
        for (int n = 0; n <= w; ++n) {
            if (m + n != target) continue;
            HighFloat term = HighFloat(binomial(u, m) * binomial(w, n));
            if (n % 2 != 0) term = -term;
            term *= pow(c, u - m) * pow(s, m) * pow(s, w - n) * pow(c, n);
            total += term;
        }
    }
    return total;
}

}  // namespace

double vk_closed_form(int k, double angle, const FilterSpec& filter) {
    const int n_total = 2 * k + 1;
    const HighFloat c = cos(HighFloat(angle) / 2), s = sin(HighFloat(angle) / 2);
    const BigInt norm = filtered_norm_exact(k, Flavor::Phi, filter);
    if (norm == 0) throw std::runtime_error("oracle: empty filtered sector");
    HighFloat total = 0;
    for (int u = 0; u <= n_total; ++u) {
        const int w = n_total - u;
        const HighFloat sign = (u - w >= 0) ? 1 : -1;
        HighFloat brace = 0;
        for (int j = 0; j <= k; ++j) {
            if (!phi_component_passes(k, j, filter)) continue;
            brace += HighFloat(binomial(k, j) * factorial(2 * j + 1) * factorial(2 * k - 2 * j)) *
                     inner_sum(u, w, 2 * k - 2 * j, c, s);
        }
        total += sign * brace * brace / HighFloat(factorial(u) * factorial(w));
    }
    return static_cast<double>(total / HighFloat(norm));
}

double ak_closed_form(int k, double angle, const FilterSpec& filter) {
    const int n_total = 2 * k + 1;
    const HighFloat c = cos(HighFloat(angle) / 2), s = sin(HighFloat(angle) / 2);
    const BigInt norm_phi = filtered_norm_exact(k, Flavor::Phi, filter);
    const BigInt norm_bar = filtered_norm_exact(k, Flavor::PhiBar, filter);
    if (norm_phi == 0 || norm_bar == 0) throw std::runtime_error("oracle: empty filtered sector");
    HighFloat total = 0;
    for (int u = 0; u <= n_total; ++u) {
        const int w = n_total - u;
        if (u == w) continue;
        const HighFloat sign = (u - w > 0) ? 1 : -1;
        HighFloat phi_brace = 0, bar_brace = 0;
        for (int j = 0; j <= k; ++j) {
            if (phi_component_passes(k, j, filter))
                phi_brace +=
                    HighFloat(binomial(k, j) * factorial(2 * j + 1) * factorial(2 * k - 2 * j)) *
                    inner_sum(u, w, 2 * k - 2 * j, c, s);
            if (phibar_component_passes(k, j, filter))
                bar_brace +=
                    HighFloat(binomial(k, j) * factorial(2 * j) * factorial(2 * k + 1 - 2 * j)) *
                    inner_sum(u, w, 2 * k + 1 - 2 * j, c, s);
        }
        total += sign * phi_brace * bar_brace / HighFloat(factorial(u) * factorial(w));
    }
    return static_cast<double>(total / sqrt(HighFloat(norm_phi) * HighFloat(norm_bar)));
}

ParityReport check_parity_symmetry(const std::vector<double>& xi,
                                   const std::vector<double>& xibar, int n_total) {
    ParityReport report;

    bool xi_odd_zero = true, xi_even_zero = true;
    bool bar_odd_zero = true, bar_even_zero = true;
    for (int m = 0; m <= n_total; ++m) {
        if (m % 2 == 1) {
            if (xi[m] != 0.0) xi_odd_zero = false;
            if (xibar[m] != 0.0) bar_odd_zero = false;
        } else {
            if (xi[m] != 0.0) xi_even_zero = false;
            if (xibar[m] != 0.0) bar_even_zero = false;
        }
    }
    bool mirrored_equal = true, mirrored_opposite = true;
    for (int m = 0; m <= n_total; ++m) {
        const double flipped = (m % 2 == 0) ? xibar[m] : -xibar[m];
        if (xi[m] != flipped) mirrored_equal = false;
        if (xi[m] != -flipped) mirrored_opposite = false;
    }
    report.v_even_predicted = xi_odd_zero;
    report.a_odd_predicted = (xi_odd_zero && bar_even_zero) || (xi_even_zero && bar_odd_zero);
    report.a_even_predicted =
        (xi_odd_zero && bar_odd_zero) || (xi_even_zero && bar_even_zero) || mirrored_equal ||
        mirrored_opposite;

    const auto sign_condition = [](int u, int w) { return (u - w >= 0) ? 1.0 : -1.0; };
    const HighFloat tol("1e-30");
    report.v_even_observed = true;
    report.a_odd_observed = true;
    report.a_even_observed = true;
    std::vector<HighFloat> xi_h(xi.begin(), xi.end());
    std::vector<HighFloat> bar_h(xibar.begin(), xibar.end());
    for (int i = 1; i <= 5; ++i) {
        const HighFloat beta = HighFloat(i) * HighFloat("0.251");
        const DenseSectorOperator plus = dense_observable(n_total, beta, sign_condition);
        const DenseSectorOperator minus = dense_observable(n_total, -beta, sign_condition);
        const HighFloat v_plus = dense_expectation(xi_h, plus, xi_h);
        const HighFloat v_minus = dense_expectation(xi_h, minus, xi_h);
        const HighFloat a_plus = dense_expectation(bar_h, plus, xi_h);
        const HighFloat a_minus = dense_expectation(bar_h, minus, xi_h);
        if (abs(v_plus - v_minus) > tol) report.v_even_observed = false;
        if (abs(a_plus + a_minus) > tol) report.a_odd_observed = false;
        if (abs(a_plus - a_minus) > tol) report.a_even_observed = false;
    }
    return report;
}

}  // namespace oracle
