#pragma once

#include <cstdint>
#include <string>

namespace fcmix {

/// Numerical value with an honest error bound and provenance. For quadrature
/// the bound is the engine's refinement delta plus any analytic tail bound;
/// for Monte Carlo it is three standard errors (plus bias bounds where the
/// producer adds them).
struct Estimate {
    enum class Method { quadrature, monte_carlo };

    double value = 0.0;
    double abs_error = 0.0;
    Method method = Method::quadrature;
    long detail_n = 0;          // nodes per axis (quadrature) or sample count (MC)
    std::uint64_t seed = 0;     // MC only

    std::string method_name() const {
        return method == Method::quadrature ? "quadrature" : "monte-carlo";
    }
};

} // namespace fcmix
