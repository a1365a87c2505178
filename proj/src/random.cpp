#include "otoclab/random.hpp"

#include <cmath>
#include <numbers>

namespace otoclab {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

SeededSource::SeededSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

double SeededSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SeededSource::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

cplx SeededSource::complex_normal() {
    const double re = normal();
    const double im = normal();
    return cplx(re, im) / std::sqrt(2.0);
}

Mat haar_unitary(int dim, SeededSource& src) {
    if (dim < 1) throw DomainError("haar_unitary: dimension must be at least 1");
    Mat g(dim, dim);
    for (int c = 0; c < dim; ++c) {
        for (int r = 0; r < dim; ++r) g(r, c) = src.complex_normal();
    }
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(dim, dim);
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < dim; ++k) {
        const cplx rkk = r(k, k);
        const double a = std::abs(rkk);
        q.col(k) *= (a > 0.0 ? rkk / a : cplx(1.0));
    }
    return q;
}

Mat clock_matrix(int dim) {
    Mat w = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        w(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / dim);
    }
    return w;
}

TracelessProbe traceless_probe(int dim_a, SeededSource& src) {
    if (dim_a < 2) throw DomainError("traceless_probe: no traceless unitary exists below dimension 2");
    TracelessProbe p;
    p.base = clock_matrix(dim_a);
    p.frame = haar_unitary(dim_a, src);
    p.value = p.frame.adjoint() * p.base * p.frame;
    return p;
}

Mat swap_operator(int d) {
    Mat s = Mat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
    }
    return s;
}

Mat twofold_haar_average(const Mat& x, int d) {
    if (d < 2 || x.rows() != static_cast<Eigen::Index>(d) * d || x.cols() != x.rows()) {
        throw StructuralError("twofold_haar_average: operand must act on C^d (x) C^d with d >= 2");
    }
    const Mat s = swap_operator(d);
    const Mat id = Mat::Identity(d * d, d * d);
    const cplx tr_x = x.trace();
    const cplx tr_sx = (s * x).trace();
    const double dd = static_cast<double>(d);
    return (id * tr_x + s * tr_sx - s * (tr_x / dd) - id * (tr_sx / dd)) / (dd * dd - 1.0);
}

}  // namespace otoclab
