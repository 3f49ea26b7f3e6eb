#include "power_integrals.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lorentz::detail {

namespace {

constexpr int kMaxBinomialDegree = 40;

bool small_integer(double n) {
    return n >= 0.0 && n <= kMaxBinomialDegree && std::floor(n) == n;
}

}  // namespace

double power_integral(double gamma, double a, double b) {
    if (!(b > a)) return 0.0;
    const double g1 = gamma + 1.0;
    if (std::isinf(b)) return -std::pow(a, g1) / g1;  // gamma < -1
    if (a == 0.0) return std::pow(b, g1) / g1;
    // a^{g1} * (exp(g1 ln(b/a)) - 1) / g1, stable as g1 -> 0.
    const double log_ratio = std::log(b / a);
    if (g1 == 0.0) return log_ratio;
    return std::pow(a, g1) * std::expm1(g1 * log_ratio) / g1;
}

double binomial_power_integral(double beta, double c, double v, double n, double a, double b) {
    if (!(b > a)) return 0.0;
    if (v == 0.0) return std::pow(c, n) * power_integral(beta, a, b);
    if (c == 0.0) return std::pow(v, n) * power_integral(beta + n, a, b);
    if (small_integer(n)) {
        const int deg = static_cast<int>(n);
        double sum = 0.0;
        double binom = 1.0;
        for (int k = 0; k <= deg; ++k) {
            sum += binom * std::pow(c, deg - k) * std::pow(v, k) * power_integral(beta + k, a, b);
            binom = binom * (deg - k) / (k + 1);
        }
        return sum;
    }
    auto integrand = [=](double t) { return std::pow(t, beta) * std::pow(c + v * t, n); };
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, a, b, 15, 1e-10,
                                                                         &error);
}

}  // namespace lorentz::detail
