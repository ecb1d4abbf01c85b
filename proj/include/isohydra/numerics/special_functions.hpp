#pragma once

namespace isohydra {

// Regularized lower incomplete gamma P(a, x) for integer order a >= 1.
double regularized_lower_gamma(int a, double x);
// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
double regularized_upper_gamma(int a, double x);

// log Q(a, x), finite where Q itself underflows.
double log_regularized_upper_gamma(int a, double x);

// log(n!) for n >= 0.
double log_factorial(int n);
double factorial(int n);

}  // namespace isohydra
