#include "nlcs/specfun.hpp"

#include <cmath>
#include <string>

#include "nlcs/errors.hpp"

namespace nlcs {

namespace {

void check_laguerre_args(int degree, int order, double x) {
    if (degree < 0) throw InvalidArgument("laguerre: degree must be >= 0, got " + std::to_string(degree));
    if (order < 0) throw InvalidArgument("laguerre: order must be >= 0, got " + std::to_string(order));
    if (!std::isfinite(x)) throw InvalidArgument("laguerre: x must be finite");
}

} // namespace

double laguerre(int degree, int order, double x) {
    check_laguerre_args(degree, order, x);
    double prev = 1.0; // L_0
    if (degree == 0) return prev;
    double cur = 1.0 + order - x; // L_1
    for (int n = 1; n < degree; ++n) {
        // (n+1) L_{n+1} = (2n+1+m-x) L_n - (n+m) L_{n-1}
        const double next = ((2.0 * n + 1.0 + order - x) * cur - (n + order) * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> laguerre_row(int degree_max, int order, double x) {
    check_laguerre_args(degree_max, order, x);
    std::vector<double> row(static_cast<size_t>(degree_max) + 1);
    row[0] = 1.0;
    if (degree_max == 0) return row;
    row[1] = 1.0 + order - x;
    for (int n = 1; n < degree_max; ++n)
        row[n + 1] = ((2.0 * n + 1.0 + order - x) * row[n] - (n + order) * row[n - 1]) / (n + 1.0);
    return row;
}

double log_factorial(int n) {
    if (n < 0) throw InvalidArgument("log_factorial: n must be >= 0, got " + std::to_string(n));
    if (n <= 1) return 0.0;
    return std::lgamma(n + 1.0);
}

} // namespace nlcs
