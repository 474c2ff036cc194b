#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "fcmix/common.hpp"
#include "fcmix/estimate.hpp"
#include "fcmix/parallel.hpp"
#include "fcmix/rng.hpp"
#include "fcmix/spd.hpp"

namespace fcmix {

// ---------------------------------------------------------------------------
// 1-d rules (Golub-Welsch)
// ---------------------------------------------------------------------------

struct Rule1d {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace quad_detail {

inline Rule1d golub_welsch(int n, const std::function<double(int)>& offdiag, double mu0) {
    Mat j = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        j(k - 1, k) = offdiag(k);
        j(k, k - 1) = offdiag(k);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(j);
    Rule1d r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        r.nodes[k] = es.eigenvalues()[k];
        const double v0 = es.eigenvectors()(0, k);
        r.weights[k] = mu0 * v0 * v0;
    }
    return r;
}

} // namespace quad_detail

/// Gauss-Hermite rule for weight e^{-x^2}; weights already include the
/// e^{+x^2} de-weighting factor, i.e. sum_k w_k f(x_k) ~ integral f(x) dx for
/// f concentrated like the weight.
inline const Rule1d& gauss_hermite(int n) {
    static std::map<int, Rule1d> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Rule1d r = quad_detail::golub_welsch(
        n, [](int k) { return std::sqrt(0.5 * k); }, std::sqrt(M_PI));
    for (int k = 0; k < n; ++k) r.weights[k] *= std::exp(r.nodes[k] * r.nodes[k]);
    return cache.emplace(n, std::move(r)).first->second;
}

/// Gauss-Legendre rule on [-1,1].
inline const Rule1d& gauss_legendre(int n) {
    static std::map<int, Rule1d> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Rule1d r = quad_detail::golub_welsch(
        n, [](int k) { return double(k) / std::sqrt(4.0 * k * k - 1.0); }, 2.0);
    return cache.emplace(n, std::move(r)).first->second;
}

// ---------------------------------------------------------------------------
// Spatial integration over R^d with a Gaussian proposal
// ---------------------------------------------------------------------------

/// Gaussian reference measure used both as the quadrature frame (tensor mode)
/// and as the importance-sampling proposal (Monte Carlo mode).
struct Proposal {
    Vec center;
    Mat cov;
};

struct IntegrationSpec {
    enum class Mode { tensor, monte_carlo };
    Mode mode = Mode::tensor;
    int nodes_per_axis = 32;
    long n_samples = 100000;
    Proposal proposal;
    std::uint64_t seed = 1;
    double target_abs_err = 1e-10;
};

using Integrand = std::function<double(const Vec&)>;

namespace quad_detail {

[[noreturn]] inline void bad_node(const Vec& y, const char* what) {
    std::ostringstream os;
    os << what << " at node (";
    for (int i = 0; i < y.size(); ++i) os << (i ? "," : "") << y[i];
    os << ")";
    throw std::runtime_error(os.str());
}

inline double tensor_pass(const Integrand& h, const Vec& c, const Mat& chol_lower,
                          double sqrt_det, int d, int n) {
    const Rule1d& gh = gauss_hermite(n);
    const double jac = std::pow(2.0, 0.5 * d) * sqrt_det;
    std::vector<int> idx(d, 0);
    long total = 1;
    for (int i = 0; i < d; ++i) total *= n;

    // chunk the flattened tensor grid; partial sums merged in chunk order
    const long chunk = 4096;
    const long n_chunks = (total + chunk - 1) / chunk;
    std::function<double(long)> work = [&](long b) -> double {
        double acc = 0.0;
        Vec z(d), y(d);
        for (long k = b * chunk; k < std::min(total, (b + 1) * chunk); ++k) {
            long rem = k;
            double w = 1.0;
            for (int i = 0; i < d; ++i) {
                const int j = int(rem % n);
                rem /= n;
                z[i] = gh.nodes[j];
                w *= gh.weights[j];
            }
            y = c + std::sqrt(2.0) * (chol_lower * z);
            const double hv = h(y);
            if (!std::isfinite(hv)) bad_node(y, "non-finite integrand");
            acc += w * hv;
        }
        return acc;
    };
    std::vector<double> parts = n_chunks > 1 ? parallel_blocks<double>(n_chunks, work)
                                             : std::vector<double>{work(0)};
    double sum = 0.0;
    for (double p : parts) sum += p;
    return jac * sum;
}

} // namespace quad_detail

/// Integral of h over R^d. Tensor mode maps Gauss-Hermite nodes through the
/// proposal frame and reports the delta between the two finest refinement
/// levels as abs_error; Monte Carlo mode importance-samples from the proposal
/// and reports three standard errors.
inline Estimate integrate_spatial(const Integrand& h, const IntegrationSpec& spec) {
    const int d = int(spec.proposal.center.size());
    require(d >= 1 && spec.proposal.cov.rows() == d && spec.proposal.cov.cols() == d,
            "integrate_spatial: bad proposal");
    const SpdMatrix cov(spec.proposal.cov);

    if (spec.mode == IntegrationSpec::Mode::tensor) {
        const int n = std::max(4, spec.nodes_per_axis);
        std::vector<int> ladder = {std::max(4, n / 4), std::max(6, n / 2), n};
        ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
        const double sqrt_det = std::sqrt(cov.det());
        double prev = 0.0, cur = 0.0, delta = 0.0;
        bool have_prev = false;
        int used = ladder.front();
        for (int lev : ladder) {
            cur = quad_detail::tensor_pass(h, spec.proposal.center, cov.cholesky_lower(),
                                           sqrt_det, d, lev);
            used = lev;
            if (have_prev) {
                delta = std::abs(cur - prev);
                if (delta <= spec.target_abs_err) break;
            }
            prev = cur;
            have_prev = true;
        }
        Estimate e;
        e.value = cur;
        e.abs_error = delta;
        e.method = Estimate::Method::quadrature;
        e.detail_n = used;
        return e;
    }

    // Monte Carlo importance sampling from the proposal.
    const long n = std::max<long>(2, spec.n_samples);
    const Mat L = cov.cholesky_lower();
    const double log_norm = -0.5 * d * std::log(2.0 * M_PI) - 0.5 * std::log(cov.det());
    const long block = 8192;
    const long n_blocks = (n + block - 1) / block;
    struct Acc { double sum = 0.0, sumsq = 0.0; };
    std::function<Acc(long)> work = [&](long b) -> Acc {
        Rng rng = Rng::substream(spec.seed, std::uint64_t(b));
        Acc a;
        Vec xi(d), y(d);
        for (long k = b * block; k < std::min(n, (b + 1) * block); ++k) {
            for (int i = 0; i < d; ++i) xi[i] = rng.normal();
            y = spec.proposal.center + L * xi;
            const double log_pdf = log_norm - 0.5 * xi.squaredNorm();
            const double hv = h(y);
            if (!std::isfinite(hv)) quad_detail::bad_node(y, "non-finite integrand");
            const double w = hv * std::exp(-log_pdf);
            a.sum += w;
            a.sumsq += w * w;
        }
        return a;
    };
    std::vector<Acc> parts = parallel_blocks<Acc>(n_blocks, work);
    double sum = 0.0, sumsq = 0.0;
    for (const Acc& a : parts) { sum += a.sum; sumsq += a.sumsq; }
    const double mean = sum / double(n);
    const double var = std::max(0.0, sumsq / double(n) - mean * mean);
    Estimate e;
    e.value = mean;
    e.abs_error = 3.0 * std::sqrt(var / double(n));
    e.method = Estimate::Method::monte_carlo;
    e.detail_n = n;
    e.seed = spec.seed;
    return e;
}

// ---------------------------------------------------------------------------
// Laplace-transform time quadrature
// ---------------------------------------------------------------------------

/// Controls for integral_0^inf e^{-lambda t} f(t) dt. The grid is one cell
/// [0, t_min] followed by geometrically growing cells up to the truncation
/// horizon T = max(1, lambda_T_factor / lambda); each cell carries a
/// Gauss-Legendre rule, so integrable endpoint singularities t^{c} with
/// c > -1 are resolved by the grading.
struct TimeQuadSpec {
    double t_min = 1e-80;
    double ratio = 2.0;
    int gl_nodes = 16;
    double lambda_T_factor = 40.0;
};

namespace quad_detail {

inline double laplace_pass(const std::function<double(double)>& f, double lambda,
                           const std::vector<double>& edges, int n_gl) {
    const Rule1d& gl = gauss_legendre(n_gl);
    double acc = 0.0;
    for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
        const double a = edges[c], b = edges[c + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double cell = 0.0;
        for (int k = 0; k < n_gl; ++k) {
            const double t = mid + half * gl.nodes[k];
            const double v = std::exp(-lambda * t) * f(t);
            if (!std::isfinite(v))
                throw std::runtime_error("integrate_time_laplace: non-finite integrand at t=" +
                                         std::to_string(t));
            cell += gl.weights[k] * v;
        }
        acc += half * cell;
    }
    return acc;
}

} // namespace quad_detail

/// integral_0^inf e^{-lambda t} f(t) dt for f locally integrable with at worst
/// an integrable power blowup at 0 and at most mild growth at infinity.
/// Detects non-integrable behaviour (empirical log-log slope <= -1 at 0) and
/// throws SingularityError. abs_error = node-halving delta + analytic tail
/// bound beyond the truncation horizon.
inline Estimate integrate_time_laplace(const std::function<double(double)>& f, double lambda,
                                       const TimeQuadSpec& spec = {}) {
    if (!(lambda > 0.0)) throw std::domain_error("integrate_time_laplace: lambda must be > 0");

    // singularity probe at two small times
    {
        const double t1 = 1e-10, t2 = 1e-8;
        const double f1 = std::abs(f(t1)), f2 = std::abs(f(t2));
        if (f1 > 1e-280 && f2 > 1e-280) {
            const double slope = std::log(f1 / f2) / std::log(t1 / t2);
            if (slope <= -1.0 + 1e-9)
                throw SingularityError(
                    "integrate_time_laplace: non-integrable singularity at 0 (slope " +
                    std::to_string(slope) + ")");
        }
    }

    const double T = std::max(1.0, spec.lambda_T_factor / lambda);
    std::vector<double> edges;
    edges.push_back(0.0);
    for (double t = std::min(spec.t_min, T / 4.0); t < T; t *= spec.ratio) edges.push_back(t);
    edges.push_back(T);

    const int n = std::max(4, spec.gl_nodes);
    const double fine = quad_detail::laplace_pass(f, lambda, edges, n);
    const double coarse = quad_detail::laplace_pass(f, lambda, edges, std::max(2, n / 2));

    // tail bound: sample |f| beyond T and allow a factor-2 growth margin
    double m = 0.0;
    for (double s : {T, 1.5 * T, 2.0 * T, 4.0 * T}) m = std::max(m, std::abs(f(s)));
    const double tail = 2.0 * m * std::exp(-lambda * T) / lambda;

    Estimate e;
    e.value = fine;
    e.abs_error = std::abs(fine - coarse) + tail;
    e.method = Estimate::Method::quadrature;
    e.detail_n = n;
    return e;
}

// ---------------------------------------------------------------------------
// Seeded Monte Carlo reduction
// ---------------------------------------------------------------------------

/// Mean of n draws of `sampler` with abs_error = 3 * (sample std) / sqrt(n).
/// Work is split into fixed blocks with seed-derived substreams, and block
/// statistics are merged in index order, so the result is independent of the
/// worker count and reproducible by seed.
inline Estimate mc_reduce(const std::function<double(Rng&)>& sampler, long n, std::uint64_t seed) {
    require(n >= 2, "mc_reduce: need n >= 2");
    const long block = 16384;
    const long n_blocks = (n + block - 1) / block;
    struct Acc {
        long cnt = 0;
        double mean = 0.0, m2 = 0.0;
    };
    std::function<Acc(long)> work = [&](long b) -> Acc {
        Rng rng = Rng::substream(seed, std::uint64_t(b));
        Acc a;
        for (long k = b * block; k < std::min(n, (b + 1) * block); ++k) {
            const double v = sampler(rng);
            ++a.cnt;
            const double d1 = v - a.mean;
            a.mean += d1 / double(a.cnt);
            a.m2 += d1 * (v - a.mean);
        }
        return a;
    };
    std::vector<Acc> parts = parallel_blocks<Acc>(n_blocks, work);
    Acc tot;
    for (const Acc& a : parts) {
        if (a.cnt == 0) continue;
        if (tot.cnt == 0) { tot = a; continue; }
        const double d = a.mean - tot.mean;
        const long m = tot.cnt + a.cnt;
        tot.m2 += a.m2 + d * d * double(tot.cnt) * double(a.cnt) / double(m);
        tot.mean += d * double(a.cnt) / double(m);
        tot.cnt = m;
    }
    const double var = tot.cnt > 1 ? tot.m2 / double(tot.cnt - 1) : 0.0;
    Estimate e;
    e.value = tot.mean;
    e.abs_error = 3.0 * std::sqrt(var / double(tot.cnt));
    e.method = Estimate::Method::monte_carlo;
    e.detail_n = n;
    e.seed = seed;
    return e;
}

// ---------------------------------------------------------------------------
// Ball-interior integrals (for Gaussian tail mass in d <= 2)
// ---------------------------------------------------------------------------

/// integral over the ball |y - x| <= r of h(y) dy, via Gauss-Legendre in the
/// radius (and a periodic trapezoid rule in the angle for d=2). The integrand
/// is assumed smooth; used to compute tail masses as (full mass) - (interior).
inline double ball_integral(const Integrand& h, const Vec& x, double r, int n_radial = 64,
                            int n_angular = 64) {
    const int d = int(x.size());
    require(d == 1 || d == 2, "ball_integral: only d <= 2 supported");
    const Rule1d& gl = gauss_legendre(n_radial);
    if (d == 1) {
        double acc = 0.0;
        Vec y(1);
        for (int k = 0; k < n_radial; ++k) {
            y[0] = x[0] + r * gl.nodes[k];
            acc += gl.weights[k] * h(y);
        }
        return r * acc;
    }
    double acc = 0.0;
    Vec y(2);
    for (int k = 0; k < n_radial; ++k) {
        const double rho = 0.5 * r * (gl.nodes[k] + 1.0);
        double ring = 0.0;
        for (int j = 0; j < n_angular; ++j) {
            const double th = 2.0 * M_PI * double(j) / double(n_angular);
            y[0] = x[0] + rho * std::cos(th);
            y[1] = x[1] + rho * std::sin(th);
            ring += h(y);
        }
        acc += gl.weights[k] * rho * ring * (2.0 * M_PI / double(n_angular));
    }
    return 0.5 * r * acc;
}

} // namespace fcmix
