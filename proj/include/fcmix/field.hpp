#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fcmix/common.hpp"
#include "fcmix/rng.hpp"
#include "fcmix/spd.hpp"
#include "fcmix/test_function.hpp"

namespace fcmix {

/// Variable diffusion-coefficient field x -> a(x) together with its declared
/// ellipticity range [lambda_min, lambda_max] and Holder modulus
/// |a_ij(x)-a_ij(y)| <= holder_c1 * (1 and |x-y|^holder_alpha).
struct CoefficientField {
    int dim = 1;
    std::string name;
    std::function<Mat(const Vec&)> raw; // entry evaluator, must be symmetric
    double lambda_min = 1.0;
    double lambda_max = 1.0;
    double holder_c1 = 0.0;
    double holder_alpha = 1.0;
};

/// Evaluate a(x) as a validated SPD matrix with cached inverse and determinant.
inline SpdMatrix eval_field(const CoefficientField& field, const Vec& x) {
    require(x.size() == field.dim, "eval_field: dimension mismatch");
    require_finite(x, "eval_field: x");
    return SpdMatrix(field.raw(x));
}

/// Apply the generator sum_ij a_ij(x) D_ij f(x) (Frobenius product of a(x)
/// with the Hessian of f).
inline double apply_generator(const CoefficientField& field, const TestFunction& f, const Vec& x) {
    require(f.dim == field.dim && x.size() == field.dim, "apply_generator: dimension mismatch");
    require_finite(x, "apply_generator: x");
    const SpdMatrix a = eval_field(field, x);
    return a.entries().cwiseProduct(f.hess(x)).sum();
}

// ---------------------------------------------------------------------------
// Field validation
// ---------------------------------------------------------------------------

struct SamplingSpec {
    int grid_points_per_axis = 41;
    double box_lo = -5.0;
    double box_hi = 5.0;
    long n_random_pairs = 10000;
    std::uint64_t seed = 1;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst = 0.0; // worst observed value of the checked quantity
    double bound = 0.0; // bound it is compared against
    Vec witness_x, witness_y;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    double c1_hat = 0.0; // empirical sup of |a_ij(x)-a_ij(y)| / (1 and |x-y|^alpha)
    bool all_pass() const {
        for (const auto& c : checks) if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline std::vector<Vec> tensor_grid(int dim, const std::vector<double>& axis) {
    std::vector<Vec> pts;
    const std::size_t n = axis.size();
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= n;
    pts.reserve(total);
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t k = 0; k < total; ++k) {
        Vec x(dim);
        for (int i = 0; i < dim; ++i) x[i] = axis[idx[i]];
        pts.push_back(x);
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < n) break;
            idx[i] = 0;
        }
    }
    return pts;
}

inline double column_norm_max(const Mat& m) {
    double worst = 0.0;
    for (int j = 0; j < m.cols(); ++j) worst = std::max(worst, m.col(j).norm());
    return worst;
}

} // namespace detail

/// Sampling-based validation of the ellipticity, Holder and column-norm
/// hypotheses. A violated bound is reported with its witness point(s), not
/// thrown.
inline ValidationReport validate_field(const CoefficientField& field, const SamplingSpec& spec) {
    require(spec.grid_points_per_axis >= 2, "validate_field: empty sampling grid");
    const double tol = 1e-9;
    ValidationReport rep;

    const std::vector<Vec> grid =
        detail::tensor_grid(field.dim, linspace(spec.box_lo, spec.box_hi, spec.grid_points_per_axis));

    CheckResult sym{"symmetry", true, 0.0, 1e-12, {}, {}};
    CheckResult emin{"ellipticity-min", true, std::numeric_limits<double>::infinity(),
                     field.lambda_min, {}, {}};
    CheckResult emax{"ellipticity-max", true, 0.0, field.lambda_max, {}, {}};
    CheckResult cola{"column-norm-a", true, 0.0, field.lambda_max, {}, {}};
    CheckResult colA{"column-norm-inv", true, 0.0, 1.0 / field.lambda_min, {}, {}};

    for (const Vec& x : grid) {
        const Mat m = field.raw(x);
        const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
        if (asym > sym.worst) { sym.worst = asym; sym.witness_x = x; }

        const SpdMatrix a = eval_field(field, x);
        Eigen::SelfAdjointEigenSolver<Mat> es(a.entries(), Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (lo < emin.worst) { emin.worst = lo; emin.witness_x = x; }
        if (hi > emax.worst) { emax.worst = hi; emax.witness_x = x; }

        const double ca = detail::column_norm_max(a.entries());
        if (ca > cola.worst) { cola.worst = ca; cola.witness_x = x; }
        const double cA = detail::column_norm_max(a.inverse());
        if (cA > colA.worst) { colA.worst = cA; colA.witness_x = x; }
    }
    sym.pass = sym.worst <= sym.bound;
    emin.pass = emin.worst >= emin.bound - tol * std::max(1.0, std::abs(emin.bound));
    emax.pass = emax.worst <= emax.bound + tol * std::max(1.0, emax.bound);
    cola.pass = cola.worst <= cola.bound + tol * std::max(1.0, cola.bound);
    colA.pass = colA.worst <= colA.bound + tol * std::max(1.0, colA.bound);

    // Holder modulus over adjacent grid pairs plus seeded random pairs; half
    // of the random pairs are short-range to probe the modulus near its
    // exponent-sensitive small-separation regime.
    CheckResult hold{"holder", true, 0.0, field.holder_c1, {}, {}};
    double c1_hat = 0.0;
    auto check_pair = [&](const Vec& x, const Vec& y) {
        const double r = (x - y).norm();
        if (r == 0.0) return;
        const Mat dx = field.raw(x) - field.raw(y);
        const double diff = dx.cwiseAbs().maxCoeff();
        const double modulus = std::min(1.0, std::pow(r, field.holder_alpha));
        const double ratio = diff / modulus;
        if (ratio > c1_hat) {
            c1_hat = ratio;
            hold.witness_x = x;
            hold.witness_y = y;
        }
    };

    const auto axis = linspace(spec.box_lo, spec.box_hi, spec.grid_points_per_axis);
    const double step = axis.size() > 1 ? axis[1] - axis[0] : 1.0;
    for (const Vec& x : grid) {
        for (int i = 0; i < field.dim; ++i) {
            Vec y = x;
            y[i] += step;
            if (y[i] <= spec.box_hi + 1e-12) check_pair(x, y);
        }
    }
    Rng rng = Rng::substream(spec.seed, 0x401D);
    for (long k = 0; k < spec.n_random_pairs; ++k) {
        Vec x(field.dim), y(field.dim);
        for (int i = 0; i < field.dim; ++i)
            x[i] = spec.box_lo + (spec.box_hi - spec.box_lo) * rng.uniform();
        if (k % 2 == 0) {
            for (int i = 0; i < field.dim; ++i)
                y[i] = spec.box_lo + (spec.box_hi - spec.box_lo) * rng.uniform();
        } else {
            // short-range pair at scale up to one grid step
            const double r = step * std::pow(rng.uniform(), 2.0);
            for (int i = 0; i < field.dim; ++i) y[i] = x[i] + r * (2.0 * rng.uniform() - 1.0);
        }
        check_pair(x, y);
    }
    hold.worst = c1_hat;
    hold.pass = c1_hat <= field.holder_c1 + tol * std::max(1.0, field.holder_c1);
    rep.c1_hat = c1_hat;

    rep.checks = {sym, emin, emax, cola, colA, hold};
    return rep;
}

// ---------------------------------------------------------------------------
// Built-in field corpus
// ---------------------------------------------------------------------------

/// a(x) = I.
inline CoefficientField make_identity_field(int dim) {
    CoefficientField f;
    f.dim = dim;
    f.name = "identity-d" + std::to_string(dim);
    f.raw = [dim](const Vec&) { return Mat(Mat::Identity(dim, dim)); };
    f.lambda_min = f.lambda_max = 1.0;
    f.holder_c1 = 0.0;
    f.holder_alpha = 1.0;
    return f;
}

/// Constant field a(x) = a0.
inline CoefficientField make_constant_field(const Mat& a0) {
    CoefficientField f;
    f.dim = int(a0.rows());
    f.name = "constant-d" + std::to_string(f.dim);
    SpdMatrix chk(a0); // validates SPD up front
    f.raw = [a0](const Vec&) { return a0; };
    f.lambda_min = chk.min_eigenvalue();
    f.lambda_max = chk.max_eigenvalue();
    f.holder_c1 = 0.0;
    f.holder_alpha = 1.0;
    return f;
}

/// Smooth d=2 diagonal field diag(1 + sin(x1)/2, 1 + cos(x2)/2).
inline CoefficientField make_smooth_diag2_field() {
    CoefficientField f;
    f.dim = 2;
    f.name = "smooth-diag2";
    f.raw = [](const Vec& x) {
        Mat m = Mat::Zero(2, 2);
        m(0, 0) = 1.0 + 0.5 * std::sin(x[0]);
        m(1, 1) = 1.0 + 0.5 * std::cos(x[1]);
        return m;
    };
    f.lambda_min = 0.5;
    f.lambda_max = 1.5;
    // |sin u - sin v| saturates at 2, so the unit-capped modulus needs c1 = 1
    f.holder_c1 = 1.0;
    f.holder_alpha = 1.0;
    return f;
}

/// Genuinely Holder scalar field (1 + min(1,|x|^alpha)/2) * I.
inline CoefficientField make_holder_field(int dim, double alpha) {
    require(alpha > 0.0 && alpha <= 1.0, "make_holder_field: alpha must be in (0,1]");
    CoefficientField f;
    f.dim = dim;
    std::ostringstream nm;
    nm << "holder-a" << alpha << "-d" << dim;
    f.name = nm.str();
    f.raw = [dim, alpha](const Vec& x) {
        const double s = 1.0 + 0.5 * std::min(1.0, std::pow(x.norm(), alpha));
        return Mat(s * Mat::Identity(dim, dim));
    };
    f.lambda_min = 1.0;
    f.lambda_max = 1.5;
    f.holder_c1 = 0.5;
    f.holder_alpha = alpha;
    return f;
}

/// Rotation-mixing d=2 field R(x1)^T diag(1,2) R(x1) with bounded rotation
/// angle theta(x1) = 0.3 sin(x1). Eigenvalues are identically {1,2}.
inline CoefficientField make_rotating_field() {
    CoefficientField f;
    f.dim = 2;
    f.name = "rotating-d2";
    f.raw = [](const Vec& x) {
        const double th = 0.3 * std::sin(x[0]);
        const double c = std::cos(th), s = std::sin(th);
        Mat r(2, 2);
        r << c, -s, s, c;
        Mat d = Mat::Zero(2, 2);
        d(0, 0) = 1.0;
        d(1, 1) = 2.0;
        return Mat(r.transpose() * d * r);
    };
    f.lambda_min = 1.0;
    f.lambda_max = 2.0;
    f.holder_c1 = 0.6;
    f.holder_alpha = 1.0;
    return f;
}

/// Built-in corpus spanning the smooth and rough regimes.
inline std::vector<CoefficientField> make_field_corpus() {
    return {
        make_identity_field(1),
        make_holder_field(1, 0.25),
        make_holder_field(1, 0.5),
        make_identity_field(2),
        make_smooth_diag2_field(),
        make_rotating_field(),
    };
}

/// Look up a corpus field by name ("identity-d1", "holder-a0.5-d1", ...).
inline CoefficientField find_corpus_field(const std::string& name) {
    for (auto& f : make_field_corpus())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown corpus field: " + name);
}

} // namespace fcmix
