#pragma once

#include <cstdint>
#include <random>

#include "otoclab/tensor_core.hpp"

namespace otoclab {

// Deterministic sample stream keyed by (seed, stream id). Engine is
// std::mt19937_64 seeded through std::seed_seq; both are fixed by the
// standard, so integer streams are identical on every conforming platform.
class SeededSource {
public:
    SeededSource(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Standard normal via Box-Muller.
    double normal();
    // (N(0,1) + i N(0,1)) / sqrt(2).
    cplx complex_normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Ginibre matrix, QR, and phase correction from the diagonal of R.
Mat haar_unitary(int dim, SeededSource& src);

// diag(1, w, w^2, ...) with w = exp(2 pi i / dim).
Mat clock_matrix(int dim);

struct TracelessProbe {
    Mat base;   // fixed traceless unitary W
    Mat frame;  // Haar sample R
    Mat value;  // R^dagger W R
};

TracelessProbe traceless_probe(int dim_a, SeededSource& src);

// Swap operator on C^d (x) C^d.
Mat swap_operator(int d);

// Exact 2-fold twirl E_U[(U (x) U) X (U (x) U)^dagger] on C^d (x) C^d.
Mat twofold_haar_average(const Mat& x, int d);

}  // namespace otoclab
