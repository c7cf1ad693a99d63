#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace vmt {

// Deterministic xoshiro256++ generator. All randomized routines in the
// library draw from this engine so that results depend only on the seed,
// not on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(uint64_t seed = 1) {
        // splitmix64 seeding, as recommended by the xoshiro authors
        uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe under log().
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (cosine branch only, for determinism).
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Standard complex normal, E|z|^2 = 1.
    std::complex<double> cnormal() {
        return {normal() * 0.7071067811865475244, normal() * 0.7071067811865475244};
    }

    /// Independent substream; salt distinguishes parallel uses of one seed.
    Rng fork(uint64_t salt) const {
        return Rng(state_[0] ^ (salt * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
    }

    Eigen::VectorXd gaussian_vector(int d) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v[i] = normal();
        return v;
    }

    Eigen::VectorXcd gaussian_cvector(int d) {
        Eigen::VectorXcd v(d);
        for (int i = 0; i < d; ++i) v[i] = cnormal();
        return v;
    }

    Eigen::MatrixXd gaussian_matrix(int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = normal();
        return m;
    }

    Eigen::MatrixXcd gaussian_cmatrix(int rows, int cols) {
        Eigen::MatrixXcd m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = cnormal();
        return m;
    }

    /// Uniform direction on the real unit sphere in R^d.
    Eigen::VectorXd unit_vector(int d) {
        Eigen::VectorXd v = gaussian_vector(d);
        double n = v.norm();
        while (n < 1e-300) {
            v = gaussian_vector(d);
            n = v.norm();
        }
        return v / n;
    }

    Eigen::VectorXcd unit_cvector(int d) {
        Eigen::VectorXcd v = gaussian_cvector(d);
        double n = v.norm();
        while (n < 1e-300) {
            v = gaussian_cvector(d);
            n = v.norm();
        }
        return v / n;
    }

    /// Haar-distributed unitary: QR of a Gaussian with the R diagonal
    /// rephased to be positive.
    Eigen::MatrixXcd unitary(int n) {
        Eigen::MatrixXcd g = gaussian_cmatrix(n, n);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
        Eigen::MatrixXcd q = qr.householderQ();
        Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < n; ++j) {
            std::complex<double> d = r(j, j);
            double a = std::abs(d);
            q.col(j) *= (a > 0) ? d / a : 1.0;
        }
        return q;
    }

    Eigen::MatrixXd orthogonal(int n) {
        Eigen::MatrixXd g = gaussian_matrix(n, n);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd q = qr.householderQ();
        Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < n; ++j)
            if (r(j, j) < 0) q.col(j) = -q.col(j);
        return q;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4];
};

}  // namespace vmt
