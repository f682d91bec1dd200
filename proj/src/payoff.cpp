#include "nlbs/payoff.hpp"

#include <algorithm>
#include <cmath>

namespace nlbs {

H5Certificate h5_certify(double eps, std::size_t n, double K) {
    if (!(eps > 0.0)) throw ValidationError("eps must be positive", "eps");
    if (n < 3) throw ValidationError("h5_certify needs at least 3 samples", "n");

    H5Certificate c;
    c.bound_d1 = 22.5 / eps;
    c.bound_d2 = 40.5 / (eps * eps);
    const double lo = K - eps, hi = K + eps;
    for (std::size_t i = 0; i < n; ++i) {
        const double x =
            i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        c.sup_value = std::max(c.sup_value, std::abs(h5_eval(x, K, eps)));
        c.sup_d1 = std::max(c.sup_d1, std::abs(h5_d1(x, K, eps)));
        c.sup_d2 = std::max(c.sup_d2, std::abs(h5_d2(x, K, eps)));
    }
    c.value_ok = c.sup_value <= c.bound_value;
    c.d1_ok = c.sup_d1 <= c.bound_d1;
    c.d2_ok = c.sup_d2 <= c.bound_d2;
    return c;
}

}  // namespace nlbs
