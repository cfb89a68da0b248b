#include "morsespec/errors.hpp"
#include "morsespec/specfun.hpp"

namespace morsespec::specfun {

double laguerre(int n, double alpha, double x) {
    if (n < 0) throw InvalidArgument("laguerre: degree n must be non-negative");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        // (k+1) L_{k+1} = (2k+1+α-x) L_k - (k+α) L_{k-1}
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace morsespec::specfun
