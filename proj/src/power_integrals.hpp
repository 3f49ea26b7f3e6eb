#pragma once

namespace lorentz::detail {

// int_a^b t^gamma dt for 0 <= a < b (a = 0 needs gamma > -1); b may be +inf
// when gamma < -1.
double power_integral(double gamma, double a, double b);

// int_a^b t^beta (c + v t)^n dt with c, v >= 0 and 0 < a < b < inf.
// Closed form by binomial expansion when n is a small nonnegative integer,
// adaptive Gauss-Kronrod (relative 1e-10) otherwise.
double binomial_power_integral(double beta, double c, double v, double n, double a, double b);

}  // namespace lorentz::detail
