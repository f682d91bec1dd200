#include "nlbs/model.hpp"

#include <string>

namespace nlbs {

namespace {

void require(bool ok, const char* key, const std::string& message) {
    if (!ok) throw ValidationError(std::string(key) + ": " + message, key);
}

}  // namespace

void validate(const MarketParams& m) {
    require(std::isfinite(m.sigma) && m.sigma > 0.0, "sigma", "must be positive");
    require(std::isfinite(m.r) && m.r >= 0.0, "r", "must be nonnegative");
    require(std::isfinite(m.q) && m.q >= 0.0, "q", "must be nonnegative");
    require(std::isfinite(m.a) && m.a >= 0.0, "a", "must be nonnegative");
    require(std::isfinite(m.K) && m.K > 0.0, "K", "must be positive");
    require(std::isfinite(m.T) && m.T >= 0.0, "T", "must be nonnegative");
}

void validate(const MarketParams& m, const DomainParams& d) {
    validate(m);
    require(std::isfinite(d.b) && d.b > m.K, "b", "must exceed the strike K");
}

void validate(const MarketParams& m, const DomainParams& d, const RegularizationParams& reg) {
    validate(m, d);
    require(std::isfinite(reg.eps) && reg.eps > 0.0 && reg.eps < m.K, "eps", "must lie in (0, K)");
    const double w = reg.half_width();
    require(std::isfinite(w) && w < m.K && m.K + w < d.b, "eps_smooth",
            "smoothing band [K - w, K + w] must lie inside (0, b)");
}

}  // namespace nlbs
