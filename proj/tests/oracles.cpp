#include "oracles.hpp"

#include <cmath>

namespace oracle {

namespace {

int bit(long long i, int n, int pos) { return static_cast<int>((i >> (n - 1 - pos)) & 1); }

// Extracts the bits at positions [pos, pos + m) and the remaining bits.
void split(long long i, int n, int pos, int m, long long& a, long long& r) {
    a = 0;
    r = 0;
    for (int p = 0; p < n; ++p) {
        if (p >= pos && p < pos + m) {
            a = 2 * a + bit(i, n, p);
        } else {
            r = 2 * r + bit(i, n, p);
        }
    }
}

long long join(long long a, long long r, int n, int pos, int m) {
    long long i = 0;
    int ai = m - 1, ri = n - m - 1;
    for (int p = 0; p < n; ++p) {
        int b;
        if (p >= pos && p < pos + m) {
            b = static_cast<int>((a >> ai--) & 1);
        } else {
            b = static_cast<int>((r >> ri--) & 1);
        }
        i = 2 * i + b;
    }
    return i;
}

}  // namespace

Mat embed_block(const Mat& m, int n, int pos, int width) {
    const long long dim = 1LL << n;
    Mat out = Mat::Zero(dim, dim);
    for (long long i = 0; i < dim; ++i) {
        long long ai, ri;
        split(i, n, pos, width, ai, ri);
        for (long long bj = 0; bj < m.cols(); ++bj) {
            out(i, join(bj, ri, n, pos, width)) = m(ai, bj);
        }
    }
    return out;
}

Mat embed_two_site(const Mat& g, int n, int pos) { return embed_block(g, n, pos, 2); }

Mat evolve_dense(const otoclab::BrickworkCircuit& c, const Mat& v, int layers) {
    const int n = 2 * layers;
    const long long dim = 1LL << n;
    // Window starts at origin - (L-1)/2, so offset k sits at position k + L - 1.
    Mat vt = embed_block(v, n, layers - 1, 1);
    for (int j = 1; j <= layers; ++j) {
        Mat layer = Mat::Identity(dim, dim);
        for (int k = -(j - 1); k <= j - 1; ++k) {
            if (((k - j - 1) % 2 + 2) % 2 != 0) continue;
            layer = layer * embed_two_site(c.gate(j, k), n, k + layers - 1);
        }
        vt = layer.adjoint() * vt * layer;
    }
    return vt;
}

Mat reduced_choi(const Mat& v, int n, int pos, int m) {
    const long long da = 1LL << m, dr = 1LL << (n - m);
    const double d = static_cast<double>(v.rows());
    Mat nu = Mat::Zero(da * da, da * da);
    for (long long a = 0; a < da; ++a)
    for (long long ap = 0; ap < da; ++ap)
    for (long long b = 0; b < da; ++b)
    for (long long bp = 0; bp < da; ++bp) {
        cplx acc = 0.0;
        for (long long r = 0; r < dr; ++r) {
            for (long long rp = 0; rp < dr; ++rp) {
                acc += v(join(a, r, n, pos, m), join(ap, rp, n, pos, m)) *
                       std::conj(v(join(b, r, n, pos, m), join(bp, rp, n, pos, m)));
            }
        }
        nu(a * da + ap, b * da + bp) = acc / d;
    }
    return nu;
}

double phi_plus_fidelity(const Mat& v, int n, int pos, int m) {
    const long long da = 1LL << m, dr = 1LL << (n - m);
    Mat tr = Mat::Zero(dr, dr);
    for (long long r = 0; r < dr; ++r)
        for (long long rp = 0; rp < dr; ++rp)
            for (long long a = 0; a < da; ++a) tr(r, rp) += v(join(a, r, n, pos, m), join(a, rp, n, pos, m));
    return tr.squaredNorm() / (static_cast<double>(v.rows()) * da);
}

Vec choi_cut(const Mat& v, int n, int pos, int m) {
    const long long da = 1LL << m, dr = 1LL << (n - m);
    const double norm = std::sqrt(static_cast<double>(v.rows()));
    Vec psi(da * da * dr * dr);
    for (long long a = 0; a < da; ++a)
    for (long long ap = 0; ap < da; ++ap)
    for (long long r = 0; r < dr; ++r)
    for (long long rp = 0; rp < dr; ++rp) {
        psi[(a * da + ap) * dr * dr + r * dr + rp] = v(join(a, r, n, pos, m), join(ap, rp, n, pos, m)) / norm;
    }
    return psi;
}

double g_from_nu(const Mat& nu, long long d_a) {
    cplx f = 0.0;
    for (long long a = 0; a < d_a; ++a)
        for (long long b = 0; b < d_a; ++b) f += nu(a * d_a + a, b * d_a + b);
    f /= static_cast<double>(d_a);
    const double d2 = static_cast<double>(d_a) * d_a;
    return (d2 * f.real() - 1.0) / (d2 - 1.0);
}

double purity(const Mat& nu) { return (nu * nu).trace().real(); }

cplx otoc_trace(const Mat& v, int n, const Mat& w, int pos, int m) {
    const Mat wf = embed_block(w, n, pos, m);
    return (wf.adjoint() * v.adjoint() * wf * v).trace() / static_cast<double>(v.rows());
}

Eigen::Matrix4d pauli_channel(const Mat& u, int traced_leg) {
    Mat s[4];
    s[0] = Mat::Identity(2, 2);
    s[1] = Mat::Zero(2, 2);
    s[1](0, 1) = s[1](1, 0) = 1.0;
    s[2] = Mat::Zero(2, 2);
    s[2](0, 1) = cplx(0, -1);
    s[2](1, 0) = cplx(0, 1);
    s[3] = Mat::Zero(2, 2);
    s[3](0, 0) = 1.0;
    s[3](1, 1) = -1.0;
    Eigen::Matrix4d out;
    for (int b = 0; b < 4; ++b) {
        // Y = tr_k[U^dag (sigma_b on leg k) U] / 2 by explicit index sums.
        Mat y = Mat::Zero(2, 2);
        for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
        for (int t = 0; t < 2; ++t)
        for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2)
        for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2) {
            // Input indices (row, col) of U^dag ... U on legs (0, 1).
            const int in_r = traced_leg == 0 ? t * 2 + i : i * 2 + t;
            const int in_c = traced_leg == 0 ? t * 2 + j : j * 2 + t;
            const cplx op = traced_leg == 0 ? s[b](x1, y1) * cplx(x2 == y2 ? 1.0 : 0.0)
                                            : s[b](x2, y2) * cplx(x1 == y1 ? 1.0 : 0.0);
            if (op == cplx(0.0)) continue;
            y(i, j) += std::conj(u(x1 * 2 + x2, in_r)) * op * u(y1 * 2 + y2, in_c);
        }
        y /= 2.0;
        for (int a = 0; a < 4; ++a) out(a, b) = ((s[a] * y).trace() / 2.0).real();
    }
    return out;
}

double max_product_overlap(const Vec& psi, long long rows, long long cols, int iterations) {
    Mat m(rows, cols);
    for (long long r = 0; r < rows; ++r)
        for (long long c = 0; c < cols; ++c) m(r, c) = psi[r * cols + c];
    Vec b = Vec::Ones(cols) / std::sqrt(static_cast<double>(cols));
    for (long long c = 0; c < cols; ++c) b[c] += 0.01 * static_cast<double>(c % 7);
    b.normalize();
    double best = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Vec a = m * b.conjugate();
        const double na = a.norm();
        if (na == 0.0) break;
        a /= na;
        b = (m.transpose() * a.conjugate());
        const double nb = b.norm();
        b /= nb;
        if (std::abs(nb * nb - best) < 1e-16) {
            best = nb * nb;
            break;
        }
        best = nb * nb;
    }
    return best;
}

Mat transfer_dense(const Mat& u, int width, const Vec& side) {
    // S[(i1 i2),(o1 o2)] = conj(u[(a1 a2),(r1 r2)]) u[(b1 b2),(c1 c2)] with
    // folded legs i = 2 r + c, o = 2 a + b.
    Mat s(16, 16);
    for (int i1 = 0; i1 < 4; ++i1)
    for (int i2 = 0; i2 < 4; ++i2)
    for (int o1 = 0; o1 < 4; ++o1)
    for (int o2 = 0; o2 < 4; ++o2) {
        const int r1 = i1 / 2, c1 = i1 % 2, r2 = i2 / 2, c2 = i2 % 2;
        const int a1 = o1 / 2, b1 = o1 % 2, a2 = o2 / 2, b2 = o2 % 2;
        s(i1 * 4 + i2, o1 * 4 + o2) = std::conj(u(a1 * 2 + a2, r1 * 2 + r2)) * u(b1 * 2 + b2, c1 * 2 + c2);
    }
    // Row map on (chain, v_0 .. v_{w-1}) -> (u_0 .. u_{w-1}, chain). Step p
    // feeds the chain (position p) and v_p (position p + 1) into S.
    const long long full = 1LL << (2 * (width + 1));
    Mat row = Mat::Identity(full, full);
    for (int p = 0; p < width; ++p) {
        const long long left = 1LL << (2 * p), right = 1LL << (2 * (width - 1 - p));
        Mat step = Mat::Zero(full, full);
        for (long long l = 0; l < left; ++l)
            for (long long r = 0; r < right; ++r)
                for (int i = 0; i < 16; ++i)
                    for (int o = 0; o < 16; ++o) step((l * 16 + i) * right + r, (l * 16 + o) * right + r) = s(i, o);
        row = step * row;
    }
    const long long n = 1LL << (2 * width);
    // Ket row with chain input side, bra row with conj.
    Mat ket(full, n), bra(full, n);
    for (long long v = 0; v < n; ++v) {
        Vec in_k = Vec::Zero(full), in_b = Vec::Zero(full);
        for (int c = 0; c < 4; ++c) {
            in_k[c * n + v] = side[c];
            in_b[c * n + v] = std::conj(side[c]);
        }
        ket.col(v) = row * in_k;
        bra.col(v) = row.conjugate() * in_b;
    }
    Mat t = Mat::Zero(n * n, n * n);
    for (long long uk = 0; uk < n; ++uk)
    for (long long ub = 0; ub < n; ++ub)
    for (long long vk = 0; vk < n; ++vk)
    for (long long vb = 0; vb < n; ++vb) {
        cplx acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += ket(uk * 4 + c, vk) * bra(ub * 4 + c, vb);
        t(uk * n + ub, vk * n + vb) = acc;
    }
    return t;
}

}  // namespace oracle
