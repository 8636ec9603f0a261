#pragma once

#include <vector>

namespace optomech::numeric {

// Real roots of a x^3 + b x^2 + c x + d, ascending. Degenerates gracefully to
// the quadratic/linear case when leading coefficients vanish. Each root is
// polished with a couple of Newton steps on the original polynomial.
std::vector<double> real_cubic_roots(double a, double b, double c, double d);

}  // namespace optomech::numeric
