#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "fcmix/common.hpp"

namespace fcmix {

/// Symmetric positive-definite matrix with cached inverse, determinant and
/// Cholesky factor. Input is symmetrized exactly on construction; a
/// non-positive-definite input throws.
class SpdMatrix {
public:
    explicit SpdMatrix(Mat m) {
        require(m.rows() == m.cols() && m.rows() > 0, "SpdMatrix: matrix must be square");
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale,
                "SpdMatrix: input is not symmetric");
        a_ = 0.5 * (m + m.transpose());
        dim_ = int(a_.rows());

        Eigen::LLT<Mat> llt(a_);
        if (llt.info() != Eigen::Success)
            throw FactorizationError("SpdMatrix: input is not positive definite");
        chol_lower_ = llt.matrixL();

        double log_det = 0.0;
        for (int i = 0; i < dim_; ++i) log_det += std::log(chol_lower_(i, i));
        det_ = std::exp(2.0 * log_det);

        inv_ = llt.solve(Mat::Identity(dim_, dim_));
        // one Newton step tightens the inverse to machine precision
        inv_ = inv_ * (2.0 * Mat::Identity(dim_, dim_) - a_ * inv_);
        inv_ = 0.5 * (inv_ + inv_.transpose());
    }

    int dim() const { return dim_; }
    const Mat& entries() const { return a_; }
    const Mat& inverse() const { return inv_; }
    double det() const { return det_; }
    const Mat& cholesky_lower() const { return chol_lower_; }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Mat> es(a_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
    double max_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Mat> es(a_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    }

    /// Symmetric square root (spectral).
    Mat sqrt_spectral() const {
        Eigen::SelfAdjointEigenSolver<Mat> es(a_);
        return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
               es.eigenvectors().transpose();
    }

    static SpdMatrix identity(int d) { return SpdMatrix(Mat::Identity(d, d)); }

private:
    Mat a_, inv_, chol_lower_;
    double det_ = 0.0;
    int dim_ = 0;
};

} // namespace fcmix
