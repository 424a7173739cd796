#pragma once

// Explicit Dormand-Prince 5(4) integrator with local error control.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "frailty/error.hpp"

namespace frailty::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerance {
    double relative = 1e-12;
    double absolute = 1e-14;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

template <std::size_t N>
struct Solution {
    State<N> y{};
    Stats stats;
};

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 >= t0).
template <std::size_t N, class Rhs>
Solution<N> integrate(Rhs&& rhs, double t0, const State<N>& y0, double t1,
                      Tolerance tol = {}, std::size_t max_steps = 2'000'000) {
    // Butcher tableau (Dormand & Prince 1980).
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    // b - b_hat
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Solution<N> out;
    out.y = y0;
    if (!(t1 > t0)) return out;

    auto axpy = [](const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
        State<N> r = y;
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (const auto& [w, k] : terms) acc += w * (*k)[i];
            r[i] += h * acc;
        }
        return r;
    };

    double t = t0;
    State<N>& y = out.y;
    State<N> k1 = rhs(t, y);
    double h = std::min(t1 - t0, 1e-3 * std::max(1.0, t1 - t0));
    double err_prev = 1e-4;

    while (t < t1) {
        if (out.stats.accepted + out.stats.rejected > max_steps)
            fail(ErrorKind::NumericalOverflow, "ode: step budget exhausted");
        if (t + h > t1) h = t1 - t;

        const State<N> k2 = rhs(t + c2 * h, axpy(y, h, {{a21, &k1}}));
        const State<N> k3 = rhs(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const State<N> k4 = rhs(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<N> k5 =
            rhs(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<N> k6 = rhs(
            t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<N> y_new =
            axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State<N> k7 = rhs(t + h, y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double local =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale =
                tol.absolute + tol.relative * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(local) / scale);
        }
        if (!std::isfinite(err)) fail(ErrorKind::NumericalOverflow, "ode: non-finite state");

        if (err <= 1.0) {
            t = (t1 - (t + h) < 1e-15 * std::max(1.0, std::abs(t1))) ? t1 : t + h;
            y = y_new;
            k1 = k7;  // first-same-as-last
            ++out.stats.accepted;
            // PI controller (Hairer, Norsett & Wanner II.4).
            const double fac = std::pow(std::max(err, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
            h *= std::clamp(0.9 * fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-4);
        } else {
            ++out.stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5));
        }
    }
    return out;
}

}  // namespace frailty::ode
