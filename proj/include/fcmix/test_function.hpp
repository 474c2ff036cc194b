#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fcmix/common.hpp"
#include "fcmix/rng.hpp"

namespace fcmix {

/// Twice continuously differentiable, compactly supported test function with
/// analytic gradient and Hessian. value(x) == 0 whenever |x| > support_radius.
struct TestFunction {
    int dim = 1;
    std::string name;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad;
    std::function<Mat(const Vec&)> hess;
    double support_radius = 0.0; // radius about the origin outside which value == 0
    double sup_norm = 1.0;       // upper bound on sup |value|
};

/// Polynomial bump amp*(1-|x-c|^2/R^2)^3 inside the ball |x-c|<R, zero outside.
/// The cubic power makes value, gradient and Hessian vanish at the boundary.
inline TestFunction make_bump(int dim, const Vec& center, double radius, double amplitude = 1.0) {
    require(dim >= 1 && center.size() == dim && radius > 0.0, "make_bump: bad arguments");
    const Vec c = center;
    const double R2 = radius * radius;
    TestFunction f;
    f.dim = dim;
    f.name = "bump";
    f.support_radius = center.norm() + radius;
    f.sup_norm = std::abs(amplitude);
    f.value = [c, R2, amplitude](const Vec& x) {
        const double s = (x - c).squaredNorm() / R2;
        if (s >= 1.0) return 0.0;
        const double u = 1.0 - s;
        return amplitude * u * u * u;
    };
    f.grad = [c, R2, amplitude, dim](const Vec& x) {
        const Vec q = x - c;
        const double s = q.squaredNorm() / R2;
        if (s >= 1.0) return Vec(Vec::Zero(dim));
        const double u = 1.0 - s;
        return Vec(amplitude * (-6.0 * u * u / R2) * q);
    };
    f.hess = [c, R2, amplitude, dim](const Vec& x) {
        const Vec q = x - c;
        const double s = q.squaredNorm() / R2;
        if (s >= 1.0) return Mat(Mat::Zero(dim, dim));
        const double u = 1.0 - s;
        Mat h = (24.0 * u / (R2 * R2)) * (q * q.transpose());
        h -= (6.0 * u * u / R2) * Mat::Identity(dim, dim);
        return Mat(amplitude * h);
    };
    return f;
}

/// Bump modulated by an affine factor (b0 + b.(x-c)/R); |b0| + |b| <= 1 keeps
/// the sup norm at most 1.
inline TestFunction make_modulated_bump(int dim, const Vec& center, double radius,
                                        double b0, const Vec& b) {
    TestFunction base = make_bump(dim, center, radius, 1.0);
    const Vec c = center;
    const double R = radius;
    TestFunction f;
    f.dim = dim;
    f.name = "modulated-bump";
    f.support_radius = base.support_radius;
    f.sup_norm = std::abs(b0) + b.lpNorm<1>();
    f.value = [base, c, R, b0, b](const Vec& x) {
        const double ell = b0 + b.dot(x - c) / R;
        return base.value(x) * ell;
    };
    f.grad = [base, c, R, b0, b](const Vec& x) {
        const double ell = b0 + b.dot(x - c) / R;
        return Vec(base.grad(x) * ell + base.value(x) * (b / R));
    };
    f.hess = [base, c, R, b0, b](const Vec& x) {
        const double ell = b0 + b.dot(x - c) / R;
        const Vec gb = base.grad(x);
        Mat h = base.hess(x) * ell;
        h += gb * (b / R).transpose();
        h += (b / R) * gb.transpose();
        return h;
    };
    return f;
}

/// Deterministic corpus of unit-sup-norm test functions: the centered bump
/// plus shifted and affinely modulated bumps.
inline std::vector<TestFunction> make_test_corpus(int dim, int count, std::uint64_t seed,
                                                  double radius = 2.0) {
    std::vector<TestFunction> out;
    out.reserve(count);
    Rng rng = Rng::substream(seed, 0xC0F5);
    for (int k = 0; k < count; ++k) {
        Vec c = Vec::Zero(dim);
        if (k > 0)
            for (int i = 0; i < dim; ++i) c[i] = 2.0 * rng.uniform() - 1.0;
        if (k % 2 == 0) {
            out.push_back(make_bump(dim, c, radius, 1.0));
        } else {
            Vec b = Vec::Zero(dim);
            for (int i = 0; i < dim; ++i) b[i] = rng.uniform() - 0.5;
            const double bn = b.lpNorm<1>();
            const double b0 = 0.5;
            if (bn > 0.5) b *= 0.5 / bn; // |b0| + |b|_1 <= 1
            out.push_back(make_modulated_bump(dim, c, radius, b0, b));
        }
        out.back().name += "-" + std::to_string(k);
    }
    return out;
}

} // namespace fcmix
