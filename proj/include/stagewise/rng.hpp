#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>

namespace stagewise {

// Deterministic sampler with fully specified output (no reliance on the
// standard library's implementation-defined distributions), so seeded runs
// produce identical bytes on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller (one value per call; no caching so the
    // stream is position-independent).
    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    Eigen::VectorXd gaussian_vector(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian();
        return v;
    }

    Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian();
        return m;
    }

    // Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the R
    // diagonal's signs folded in (makes the factorization unique).
    Eigen::MatrixXd random_orthogonal(Eigen::Index n) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(n, n));
        Eigen::MatrixXd Q = qr.householderQ();
        Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index j = 0; j < n; ++j)
            if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
        return Q;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace stagewise
