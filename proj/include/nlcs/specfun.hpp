#pragma once

#include <vector>

namespace nlcs {

/// Generalized Laguerre polynomial L_n^m(x) for integer degree n >= 0 and
/// integer order m >= 0, evaluated by the upward three-term recurrence
///
///   (n+1) L_{n+1}^m = (2n + 1 + m - x) L_n^m - (n + m) L_{n-1}^m
///
/// which is forward-stable for x >= 0. Non-finite x or negative n, m are
/// rejected with InvalidArgument.
double laguerre(int degree, int order, double x);

/// All of L_0^m(x) .. L_degree_max^m(x) in one forward pass. Shares the
/// recurrence with laguerre(); returns degree_max + 1 values.
std::vector<double> laguerre_row(int degree_max, int order, double x);

/// ln(n!) for n >= 0. Exact 0 for n <= 1.
double log_factorial(int n);

} // namespace nlcs
