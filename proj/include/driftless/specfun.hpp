#pragma once

/**
 * @file specfun.hpp
 * @brief Bessel functions J0, J1, Y0, Y1 (and Y_{-1}) for real arguments.
 *
 * Two evaluation branches:
 *  - |x| <= kSeriesCutoff: ascending power series summed in extended precision
 *    (long double), so that the cancellation between large alternating terms
 *    still leaves ~1e-14 absolute accuracy in the double result.
 *  - |x| >  kSeriesCutoff: Hankel asymptotic expansion, truncated at the
 *    smallest term.
 *
 * Arguments are limited to |x| <= kMaxArgument.
 */

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "driftless/errors.hpp"

namespace driftless::specfun {

enum class BesselOrder : int { minus_one = -1, zero = 0, one = 1 };

enum class BesselKind { J, Y };

struct EvalResult {
    double value = 0.0;
    double est_abs_error = 0.0;
};

inline constexpr double kMaxArgument = 50.0;
inline constexpr double kSeriesCutoff = 15.0;

/// Largest |x| accepted by small_arg_limit.
inline constexpr double kSmallArgumentWindow = 0.1;

inline BesselOrder to_order(int n) {
    if (n < -1 || n > 1) {
        throw RangeError("Bessel order " + std::to_string(n) + " not supported (orders -1, 0, 1)");
    }
    return static_cast<BesselOrder>(n);
}

namespace detail {

using Ext = long double;

inline constexpr Ext kPi = 3.141592653589793238462643383279502884L;
inline constexpr Ext kEulerGamma = 0.577215664901532860606512090082402431L;
inline constexpr Ext kExtEps = 1.0842021724855044340e-19L;  // 2^-63
inline constexpr int kMaxSeriesTerms = 200;

struct Partial {
    Ext value = 0;
    Ext magnitude = 0;  // sum of |terms|, drives the roundoff estimate
};

// Regular parts of the ascending series, with q = x^2 / 4:
//   J0 = sum (-q)^k / (k!)^2
//   J1 = (x/2) sum (-q)^k / (k! (k+1)!)
// and the harmonic-number sums that enter Y0 and Y1:
//   S0 = sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2
//   S1 = (x/2) sum_{k>=0} (-1)^k (H_k + H_{k+1}) q^k / (k! (k+1)!)
struct SeriesParts {
    Partial j0, j1, s0, s1;
};

inline SeriesParts ascending_series(Ext x) {
    const Ext q = x * x / 4;
    const Ext half_x = x / 2;
    SeriesParts p;

    Ext t0 = 1;       // (-q)^k / (k!)^2
    Ext t1 = half_x;  // (x/2) (-q)^k / (k! (k+1)!)
    Ext harmonic = 0; // H_k
    p.j0 = {t0, std::fabs(t0)};
    p.j1 = {t1, std::fabs(t1)};
    p.s1 = {t1, std::fabs(t1)};  // k = 0: (H_0 + H_1) = 1
    for (int k = 1; k < kMaxSeriesTerms; ++k) {
        const Ext kk = k;
        t0 *= -q / (kk * kk);
        t1 *= -q / (kk * (kk + 1));
        harmonic += 1 / kk;
        const Ext s0_term = -t0 * harmonic;
        const Ext s1_term = t1 * (2 * harmonic + 1 / (kk + 1));
        p.j0.value += t0;
        p.j0.magnitude += std::fabs(t0);
        p.j1.value += t1;
        p.j1.magnitude += std::fabs(t1);
        p.s0.value += s0_term;
        p.s0.magnitude += std::fabs(s0_term);
        p.s1.value += s1_term;
        p.s1.magnitude += std::fabs(s1_term);
        const Ext scale = std::fabs(p.j0.value) + std::fabs(p.j1.value) + 1;
        if (std::fabs(s1_term) + std::fabs(s0_term) < kExtEps * 1e-3L * scale && k > 2) {
            break;
        }
    }
    return p;
}

inline EvalResult to_result(Ext value, Ext magnitude) {
    const double v = static_cast<double>(value);
    const double err = static_cast<double>(16 * kExtEps * magnitude) +
                       0.5 * std::numeric_limits<double>::epsilon() * std::fabs(v);
    return {v, err};
}

inline EvalResult series_j(int n, Ext x) {
    const SeriesParts p = ascending_series(x);
    return n == 0 ? to_result(p.j0.value, p.j0.magnitude) : to_result(p.j1.value, p.j1.magnitude);
}

inline EvalResult series_y(int n, Ext x) {
    const SeriesParts p = ascending_series(x);
    const Ext log_term = std::log(x / 2) + kEulerGamma;
    if (n == 0) {
        const Ext value = (2 / kPi) * (log_term * p.j0.value + p.s0.value);
        const Ext magnitude =
            (2 / kPi) * (std::fabs(log_term) * p.j0.magnitude + p.s0.magnitude + 1);
        return to_result(value, magnitude);
    }
    const Ext value = (2 / kPi) * log_term * p.j1.value - p.s1.value / kPi - 2 / (kPi * x);
    const Ext magnitude = (2 / kPi) * std::fabs(log_term) * p.j1.magnitude +
                          p.s1.magnitude / kPi + 2 / (kPi * x);
    return to_result(value, magnitude);
}

// Hankel expansion: with mu = 4 n^2,
//   a_k = (mu - 1)(mu - 9)...(mu - (2k-1)^2) / (k! 8^k)
//   P = sum (-1)^k a_{2k} / x^{2k},  Q = sum (-1)^k a_{2k+1} / x^{2k+1}
//   J_n = sqrt(2/(pi x)) (P cos chi - Q sin chi)
//   Y_n = sqrt(2/(pi x)) (P sin chi + Q cos chi),  chi = x - (n/2 + 1/4) pi
inline EvalResult hankel(BesselKind kind, int n, Ext x) {
    const Ext mu = 4 * n * n;
    Ext P = 0;
    Ext Q = 0;
    Ext term = 1;  // a_k / x^k
    Ext previous = std::numeric_limits<Ext>::infinity();
    Ext omitted = 0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        if (k > 0) {
            const Ext odd = 2 * k - 1;
            term *= (mu - odd * odd) / (k * 8 * x);
        }
        const Ext size = std::fabs(term);
        if (size >= previous || size < kExtEps * 1e-3L) {
            omitted = size;
            break;
        }
        previous = size;
        // Sign pattern (+P, +Q, -P, -Q, ...) for k = 0, 1, 2, 3, ...
        const Ext signed_term = (k % 4 < 2) ? term : -term;
        if (k % 2 == 0) {
            P += signed_term;
        } else {
            Q += signed_term;
        }
    }
    const Ext chi = x - (static_cast<Ext>(n) / 2 + 0.25L) * kPi;
    const Ext amp = std::sqrt(2 / (kPi * x));
    const Ext c = std::cos(chi);
    const Ext s = std::sin(chi);
    const Ext value = kind == BesselKind::J ? amp * (P * c - Q * s) : amp * (P * s + Q * c);
    const double v = static_cast<double>(value);
    const double err = static_cast<double>(amp * (omitted + 16 * kExtEps * (1 + x * kExtEps))) +
                       0.5 * std::numeric_limits<double>::epsilon() * std::fabs(v);
    return {v, err};
}

inline void check_range(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("Bessel argument must be finite");
    }
    if (std::fabs(x) > kMaxArgument) {
        throw RangeError("Bessel argument |x| = " + std::to_string(std::fabs(x)) +
                         " exceeds supported range " + std::to_string(kMaxArgument));
    }
}

}  // namespace detail

/// First-kind Bessel function J_n(x), n in {-1, 0, 1}. J0 is even, J1 odd, J_{-1} = -J1.
inline EvalResult bessel_j(BesselOrder order, double x) {
    detail::check_range(x);
    const int n = order == BesselOrder::zero ? 0 : 1;
    const long double ax = std::fabs(x);
    EvalResult r = ax <= kSeriesCutoff ? detail::series_j(n, ax)
                                       : detail::hankel(BesselKind::J, n, ax);
    // J1(-x) = -J1(x); J_{-1} = -J1.
    const bool flip = (n == 1 && x < 0) != (order == BesselOrder::minus_one);
    if (flip) {
        r.value = -r.value;
    }
    return r;
}

/// Second-kind Bessel function Y_n(x), n in {-1, 0, 1}, x > 0. Y_{-1} = -Y1.
inline EvalResult bessel_y(BesselOrder order, double x) {
    if (!(x > 0)) {
        throw DomainError("Bessel Y requires x > 0 (got " + std::to_string(x) + ")");
    }
    detail::check_range(x);
    const int n = order == BesselOrder::zero ? 0 : 1;
    const long double lx = x;
    EvalResult r = x <= kSeriesCutoff ? detail::series_y(n, lx)
                                      : detail::hankel(BesselKind::Y, n, lx);
    if (order == BesselOrder::minus_one) {
        r.value = -r.value;
    }
    return r;
}

inline double bessel_j0(double x) { return bessel_j(BesselOrder::zero, x).value; }
inline double bessel_j1(double x) { return bessel_j(BesselOrder::one, x).value; }
inline double bessel_y0(double x) { return bessel_y(BesselOrder::zero, x).value; }
inline double bessel_y1(double x) { return bessel_y(BesselOrder::one, x).value; }

/**
 * Leading-order behaviour near the origin:
 *   J_n(x) ~ (x/2)^n / n!
 *   Y_0(x) ~ (2/pi) (ln(x/2) + gamma)
 *   Y_1(x) ~ -2 / (pi x)
 * Only n in {0, 1} is needed, so n! = Gamma(n+1) = 1 throughout.
 */
inline double small_arg_limit(BesselKind kind, int n, double x) {
    if (n != 0 && n != 1) {
        throw RangeError("small_arg_limit supports orders 0 and 1");
    }
    if (kind == BesselKind::J) {
        if (!(std::fabs(x) <= kSmallArgumentWindow)) {
            throw RangeError("small_arg_limit(J) requires |x| <= 0.1");
        }
        return n == 0 ? 1.0 : x / 2;
    }
    if (!(x > 0 && x <= kSmallArgumentWindow)) {
        throw RangeError("small_arg_limit(Y) requires 0 < x <= 0.1");
    }
    constexpr double pi = std::numbers::pi;
    if (n == 0) {
        return (2 / pi) * (std::log(x / 2) + std::numbers::egamma);
    }
    return -2 / (pi * x);
}

}  // namespace driftless::specfun
