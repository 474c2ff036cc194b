#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fcmix {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when a time integrand is detected to be non-integrable at t=0.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a simulated path leaves the finite range of doubles.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, long step, std::uint64_t seed)
        : std::runtime_error(what), step(step), seed(seed) {}
    long step;
    std::uint64_t seed;
};

/// Thrown when a matrix factorization fails (non-SPD input).
class FactorizationError : public std::runtime_error {
public:
    explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline void require_finite(const Vec& x, const std::string& name) {
    for (int i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw std::invalid_argument(name + " has non-finite coordinate " + std::to_string(i));
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) { v[0] = 0.5 * (lo + hi); return v; }
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return v;
}

inline std::vector<double> logspace(double log10_lo, double log10_hi, int n) {
    std::vector<double> v = linspace(log10_lo, log10_hi, n);
    for (double& t : v) t = std::pow(10.0, t);
    return v;
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

inline double fit_intercept(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    return (sy - fit_slope(x, y) * sx) / double(n);
}

} // namespace fcmix
