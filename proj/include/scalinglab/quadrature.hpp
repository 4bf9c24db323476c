#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace scalinglab {

inline constexpr double kHalfPi = 1.57079632679489661923132169163975;

/// 16-point Gauss-Legendre rule on [a,b].
template <typename F>
double gauss_legendre_16(F&& f, double a, double b) {
    static const double nodes[8] = {
        0.0950125098376374401853193, 0.2816035507792589132304605,
        0.4580167776572273863424194, 0.6178762444026437484466718,
        0.7554044083550030338951012, 0.8656312023878317438804679,
        0.9445750230732325760779884, 0.9894009349916499325961542};
    static const double weights[8] = {
        0.1894506104550684962853967, 0.1826034150449235888667637,
        0.1691565193950025381893121, 0.1495959888165767320815017,
        0.1246289712555338720524763, 0.0951585116824927848099251,
        0.0622535239386478928628438, 0.0271524594117540948517806};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * nodes[i];
        acc += weights[i] * (f(mid + dx) + f(mid - dx));
    }
    return acc * half;
}

/// Composite 16-point Gauss-Legendre with `panels` subdivisions.
template <typename F>
double gauss_legendre_16(F&& f, double a, double b, std::size_t panels) {
    double acc = 0.0;
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t k = 0; k < panels; ++k)
        acc += gauss_legendre_16(f, a + static_cast<double>(k) * h,
                                 a + static_cast<double>(k + 1) * h);
    return acc;
}

/// Tanh-sinh (double exponential) quadrature on (a,b). Converges fast even
/// with algebraic endpoint singularities such as u^{2H} at u=0.
template <typename F>
double tanh_sinh(F&& f, double a, double b, int levels = 12) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double h = 1.0;
    double acc = kHalfPi * f(mid);
    for (int k = 1; k <= 6; ++k) {  // integer nodes of the level-0 trapezoid
        const double t = static_cast<double>(k);
        const double sinh_t = std::sinh(t);
        const double u = std::tanh(kHalfPi * sinh_t);
        const double cosh_ps = std::cosh(kHalfPi * sinh_t);
        const double w = kHalfPi * std::cosh(t) / (cosh_ps * cosh_ps);
        const double x_plus = mid + half * u;
        const double x_minus = mid - half * u;
        double contrib = 0.0;
        if (x_plus > a && x_plus < b) contrib += f(x_plus);
        if (x_minus > a && x_minus < b) contrib += f(x_minus);
        acc += w * contrib;
    }
    acc *= h;
    for (int level = 1; level <= levels; ++level) {
        h *= 0.5;
        double level_sum = 0.0;
        for (int k = 1;; k += 2) {
            const double t = h * static_cast<double>(k);
            if (t > 6.5) break;
            const double sinh_t = std::sinh(t);
            const double u = std::tanh(kHalfPi * sinh_t);
            const double cosh_ps = std::cosh(kHalfPi * sinh_t);
            const double w = kHalfPi * std::cosh(t) / (cosh_ps * cosh_ps);
            const double x_plus = mid + half * u;
            const double x_minus = mid - half * u;
            double contrib = 0.0;
            if (x_plus > a && x_plus < b) contrib += f(x_plus);
            if (x_minus > a && x_minus < b) contrib += f(x_minus);
            level_sum += w * contrib;
        }
        const double prev = acc;
        acc = 0.5 * acc + h * level_sum;
        if (level >= 5 && std::abs(acc - prev) <= 1e-14 * (std::abs(acc) + 1e-300)) break;
    }
    return acc * half;
}

/// Composite Simpson rule over tabulated uniform samples (odd point count).
inline double simpson_uniform(const std::vector<double>& values, double spacing) {
    if (values.size() < 3 || values.size() % 2 == 0)
        throw std::invalid_argument("simpson_uniform: need an odd number of nodes >= 3");
    double acc = values.front() + values.back();
    for (std::size_t i = 1; i + 1 < values.size(); ++i)
        acc += values[i] * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * spacing / 3.0;
}

/// Trapezoid rule over tabulated uniform samples.
inline double trapezoid_uniform(const std::vector<double>& values, double spacing) {
    if (values.size() < 2) throw std::invalid_argument("trapezoid_uniform: need >= 2 nodes");
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
    return acc * spacing;
}

}
