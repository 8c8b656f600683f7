#pragma once

// Helpers shared by the unit tests. Oracles here are written from the
// signal model directly and do not call into the code they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ftdoa::test {

inline Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            a(i, j) = {g(rng), g(rng)};
        }
    }
    return a;
}

inline Eigen::MatrixXcd random_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                                    std::uint64_t seed) {
    return random_matrix(rows, rank, seed) * random_matrix(rank, cols, seed + 1);
}

inline Eigen::MatrixXcd random_unitary(Eigen::Index n, std::uint64_t seed) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_matrix(n, n, seed));
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

inline double relative_error(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
    return (got - want).norm() / want.norm();
}

// Pole for a source at `deg` on a d = spacing (wavelength 1) array.
inline std::complex<double> pole(double deg, double spacing = 0.5) {
    return std::polar(1.0, 2.0 * std::numbers::pi * spacing * std::sin(deg * std::numbers::pi / 180.0));
}

// x_m = sum_n s_n z_n^m, m = 0..M-1, built by repeated multiplication.
inline Eigen::VectorXcd exponential_sum(const std::vector<std::complex<double>>& poles,
                                        const std::vector<std::complex<double>>& amps, std::size_t m) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t n = 0; n < poles.size(); ++n) {
        std::complex<double> power = amps[n];
        for (std::size_t k = 0; k < m; ++k) {
            x(static_cast<Eigen::Index>(k)) += power;
            power *= poles[n];
        }
    }
    return x;
}

// Hankel matrix written out element by element.
inline Eigen::MatrixXcd hankel_of(const Eigen::VectorXcd& x, std::size_t window) {
    const auto rows = x.size() - static_cast<Eigen::Index>(window);
    Eigen::MatrixXcd h(rows, static_cast<Eigen::Index>(window) + 1);
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
            h(i, j) = x(i + j);
        }
    }
    return h;
}

inline std::vector<std::complex<double>> unit_phases(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    std::vector<std::complex<double>> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::polar(1.0, u(rng)));
    }
    return out;
}

}  // namespace ftdoa::test
