#include "optomech/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace optomech::numeric {

namespace {

double polish(double a, double b, double c, double d, double x) {
    for (int i = 0; i < 3; ++i) {
        const double f = ((a * x + b) * x + c) * x + d;
        const double df = (3.0 * a * x + 2.0 * b) * x + c;
        if (df == 0.0) break;
        const double next = x - f / df;
        if (!std::isfinite(next)) break;
        x = next;
    }
    return x;
}

std::vector<double> quadratic_roots(double a, double b, double c) {
    if (a == 0.0) {
        if (b == 0.0) return {};
        return {-c / b};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return {};
    // Cancellation-free form.
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> r;
    if (q != 0.0) {
        r = {q / a, c / q};
    } else {
        r = {0.0, 0.0};
    }
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace

std::vector<double> real_cubic_roots(double a, double b, double c, double d) {
    if (a == 0.0) {
        return quadratic_roots(b, c, d);
    }
    // Depressed cubic x = y - b/(3a): y^3 + p y + q = 0.
    const double bn = b / a, cn = c / a, dn = d / a;
    const double shift = bn / 3.0;
    const double p = cn - bn * bn / 3.0;
    const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
    std::vector<double> roots;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (p < 0.0 && disc < 0.0) {
        // Three real roots, trigonometric form.
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
        }
    } else {
        const double s = std::sqrt(std::max(disc, 0.0));
        const double y = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
        roots.push_back(y - shift);
    }
    for (auto& r : roots) r = polish(a, b, c, d, r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace optomech::numeric
