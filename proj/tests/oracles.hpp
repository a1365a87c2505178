#pragma once

// Independent reference computations for tests. Everything here works on
// plain matrices with explicit index loops; nothing calls the library
// kernels, contraction helpers or closed forms it is compared against.

#include <vector>

#include "otoclab/brickwork.hpp"

namespace oracle {

using otoclab::cplx;
using otoclab::Mat;
using otoclab::Vec;

// 1 (x) g (x) 1 on n qubits, g on positions (pos, pos + 1). Position 0 is
// the most significant bit.
Mat embed_two_site(const Mat& g, int n, int pos);
// 1 (x) m (x) 1 with m on positions [pos, pos + width).
Mat embed_block(const Mat& m, int n, int pos, int width);

// V_t on the 2L-site lightcone window by full-layer dense products.
Mat evolve_dense(const otoclab::BrickworkCircuit& c, const Mat& v, int layers);

// nu_A of the Choi state of v (n qubits), A = positions [pos, pos + m).
// Legs ordered (A, A').
Mat reduced_choi(const Mat& v, int n, int pos, int m);

// <phi+_A| nu_A |phi+_A> as |tr_A v|_F^2 / (D d_A).
double phi_plus_fidelity(const Mat& v, int n, int pos, int m);

// Choi vector of v regrouped as (A A') x (rest rest'), row-major.
Vec choi_cut(const Mat& v, int n, int pos, int m);

double g_from_nu(const Mat& nu, long long d_a);
double purity(const Mat& nu);

// tr[W^dag V^dag W V] / D with w on positions [pos, pos + m).
cplx otoc_trace(const Mat& v, int n, const Mat& w, int pos, int m);

// Pauli transfer matrix of tr_k[U^dag (X on leg k) U] / 2 on the other leg,
// k = 0 for m_plus and 1 for m_minus.
Eigen::Matrix4d pauli_channel(const Mat& u, int traced_leg);

// Largest squared singular value of psi reshaped as (rows x cols), found by
// alternating maximization over product vectors.
double max_product_overlap(const Vec& psi, long long rows, long long cols, int iterations = 2000);

// Dense width-w transfer matrix with the ket row entering from `side` and
// the bra row from conj(side). Built as a product of embedded folded
// two-site maps.
Mat transfer_dense(const Mat& u, int width, const Vec& side);

// Kolmogorov-Smirnov statistic of samples against a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf);

}  // namespace oracle

#include <algorithm>

template <class Cdf>
double oracle::ks_statistic(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return d;
}
