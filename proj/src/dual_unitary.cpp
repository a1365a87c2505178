#include "otoclab/dual_unitary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "otoclab/otoc.hpp"

namespace otoclab {

namespace {

double unitarity_residual(const Mat& m) {
    return (m.adjoint() * m - Mat::Identity(m.rows(), m.cols())).norm();
}

void check_dressing(const Mat& m, const char* name) {
    if (m.rows() != 2 || m.cols() != 2) throw StructuralError(std::string("dressing ") + name + " must be 2x2");
    if (unitarity_residual(m) > 1e-10) throw DomainError(std::string("dressing ") + name + " is not unitary");
}

void require_dual_unitary(const Mat& u) {
    const DualityCheck c = check_dual_unitarity(u, 1e-8);
    if (!c.time_unitary || !c.space_unitary) {
        throw DomainError("gate is not dual-unitary (space residual " + std::to_string(c.space_residual) + ")");
    }
}

PauliChannelMatrix channel_matrix(const Mat& u, bool plus) {
    PauliChannelMatrix m;
    const Mat id = Mat::Identity(2, 2);
    for (int b = 0; b < 4; ++b) {
        const Mat t = u.adjoint() * (plus ? kron_mat(pauli(b), id) : kron_mat(id, pauli(b))) * u;
        Mat out = Mat::Zero(2, 2);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                for (int a = 0; a < 2; ++a) {
                    out(i, j) += plus ? t(a * 2 + i, a * 2 + j) : t(i * 2 + a, j * 2 + a);
                }
            }
        }
        out /= 2.0;
        for (int a = 0; a < 4; ++a) m(a, b) = (pauli(a) * out).trace().real() / 2.0;
    }
    return m;
}

// out[(x, y)] = sum a[(x, y), (x', y')] in[(x', y')] on two legs of
// dimension 4 in an array of num_legs such legs (leg 0 most significant).
void apply_pair(const Vec& in, Vec& out, int num_legs, int x, int y, const Mat& a, bool parallel) {
    const long long sx = ipow(4, num_legs - 1 - x);
    const long long sy = ipow(4, num_legs - 1 - y);
    const long long rest = ipow(4, num_legs - 2);
    const int lo = std::min(x, y);
    const int hi = std::max(x, y);
    const long long s_lo = ipow(4, num_legs - 1 - lo);
    const long long s_hi = ipow(4, num_legs - 1 - hi);
    out.resize(in.size());
#pragma omp parallel for if (parallel && rest >= 1024)
    for (long long r = 0; r < rest; ++r) {
        // Insert zero digits at the positions of hi (less significant) and lo.
        const long long low = r % s_hi;
        long long tmp = r / s_hi;
        const long long mid = tmp % (s_lo / (s_hi * 4));
        tmp /= (s_lo / (s_hi * 4));
        const long long base = tmp * s_lo * 4 + mid * s_hi * 4 + low;
        cplx buf[16];
        for (int p = 0; p < 4; ++p) {
            for (int q = 0; q < 4; ++q) buf[p * 4 + q] = in[base + p * sx + q * sy];
        }
        for (int p = 0; p < 4; ++p) {
            for (int q = 0; q < 4; ++q) {
                cplx acc = 0.0;
                for (int k = 0; k < 16; ++k) acc += a(p * 4 + q, k) * buf[k];
                out[base + p * sx + q * sy] = acc;
            }
        }
    }
}

// Column order (o1, o2) -> (o2, o1) so the chain leg is the second input.
Mat chain_form(const Mat& s) {
    Mat a(16, 16);
    for (int r = 0; r < 16; ++r) {
        for (int o1 = 0; o1 < 4; ++o1) {
            for (int o2 = 0; o2 < 4; ++o2) a(r, o2 * 4 + o1) = s(r, o1 * 4 + o2);
        }
    }
    return a;
}

Vec product_identity(int width) {
    const Vec c = folded_identity();
    Vec out = Vec::Ones(1);
    for (int p = 0; p < width; ++p) {
        Vec next(out.size() * 4);
        for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * 4, 4) = out[i] * c;
        out = std::move(next);
    }
    return out;
}

cplx fidelity_readout_complex(const Vec& state, const Vec& circ) {
    const long long n = circ.size();
    const Eigen::Map<const Mat> x(state.data(), n, n);  // x(bra, ket) in column-major
    return (circ.transpose() * x.transpose() * circ).value();
}

double fidelity_readout(const Vec& state, const Vec& circ) { return fidelity_readout_complex(state, circ).real(); }

double purity_readout(const Vec& state, long long n) {
    const Eigen::Map<const Mat> x(state.data(), n, n);
    return (x * x).trace().real();
}

double slope(const std::vector<int>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

double second_modulus(const PauliChannelMatrix& m) {
    Eigen::EigenSolver<PauliChannelMatrix> es(m, false);
    std::vector<double> mods;
    for (int i = 0; i < 4; ++i) mods.push_back(std::abs(es.eigenvalues()[i]));
    std::sort(mods.begin(), mods.end(), std::greater<>());
    return mods[1];
}

}  // namespace

DualUnitaryGate make_du_gate(double j, const Dressings& d, double phase) {
    check_dressing(d.u_plus, "u+");
    check_dressing(d.u_minus, "u-");
    check_dressing(d.v_minus, "v-");
    check_dressing(d.v_plus, "v+");
    DualUnitaryGate g;
    g.u = std::polar(1.0, phase) * kron_mat(d.u_plus, d.u_minus) * xxz_gate(j) * kron_mat(d.v_minus, d.v_plus);
    g.j = j;
    g.phase = phase;
    g.dressings = d;
    const DualityCheck c = check_dual_unitarity(g.u);
    if (!c.time_unitary || !c.space_unitary) throw StructuralError("constructed gate failed the duality check");
    return g;
}

DualUnitaryGate make_random_du_gate(double j, SeededSource& src) {
    Dressings d;
    d.u_plus = haar_unitary(2, src);
    d.u_minus = haar_unitary(2, src);
    d.v_minus = haar_unitary(2, src);
    d.v_plus = haar_unitary(2, src);
    const double phase = 2.0 * std::numbers::pi * src.uniform();
    return make_du_gate(j, d, phase);
}

Mat reshuffle(const Mat& u) {
    if (u.rows() != 4 || u.cols() != 4) throw StructuralError("reshuffle expects a 4x4 gate");
    Mat r(4, 4);
    for (int o1 = 0; o1 < 2; ++o1)
        for (int o2 = 0; o2 < 2; ++o2)
            for (int i1 = 0; i1 < 2; ++i1)
                for (int i2 = 0; i2 < 2; ++i2) r(o1 * 2 + i1, o2 * 2 + i2) = u(o1 * 2 + o2, i1 * 2 + i2);
    return r;
}

DualityCheck check_dual_unitarity(const Mat& u, double tol) {
    DualityCheck c;
    c.time_residual = unitarity_residual(u);
    c.space_residual = unitarity_residual(reshuffle(u));
    c.time_unitary = c.time_residual <= tol;
    c.space_unitary = c.space_residual <= tol;
    return c;
}

PauliChannelMatrix m_plus(const Mat& u) {
    require_dual_unitary(u);
    return channel_matrix(u, true);
}

PauliChannelMatrix m_minus(const Mat& u) {
    require_dual_unitary(u);
    return channel_matrix(u, false);
}

PauliVector pauli_coefficients(const Mat& v) {
    if (v.rows() != 2 || v.cols() != 2) throw StructuralError("pauli_coefficients expects a 2x2 operator");
    PauliVector c;
    for (int k = 0; k < 4; ++k) c[k] = (pauli(k) * v).trace() / 2.0;
    return c;
}

DuGeometry du_geometry(const Region& a, SiteIndex origin, int layers) {
    auto [lc_lo, lc_hi] = lightcone(origin, layers);
    DuGeometry g;
    if (a.hi < lc_lo || a.lo > lc_hi) return g;
    if (a.hi >= lc_hi) {
        g.branch = DuBranch::RightEdge;
        return g;
    }
    check_region(a, lc_lo, lc_hi);
    const int c = a.hi.twice - origin.twice;
    g.branch = DuBranch::LeftEdge;
    g.x_plus = 0.5 * (layers + c);
    g.x_minus = 0.5 * (layers - c);
    return g;
}

double g_dual_unitary(const Mat& u, const PauliVector& v, double x_plus, long long d_a, DuBranch branch) {
    if (std::abs(v.squaredNorm() - 1.0) > 1e-10) throw DomainError("Pauli coefficient vector is not normalized");
    if (std::abs(v[0]) > 1e-10) throw DomainError("Pauli coefficient vector has an identity component");
    if (d_a < 2) throw DomainError("region dimension d_A must be at least 2");
    const double d2 = static_cast<double>(d_a) * d_a;
    switch (branch) {
        case DuBranch::Disjoint:
            require_dual_unitary(u);
            return 1.0;
        case DuBranch::RightEdge:
            require_dual_unitary(u);
            return -1.0 / (d2 - 1.0);
        case DuBranch::LeftEdge:
            break;
    }
    const PauliChannelMatrix m = m_plus(u);
    const int p = std::max(0, static_cast<int>(std::ceil(x_plus)));
    PauliVector w = v;
    for (int i = 0; i < p; ++i) w = m.cast<cplx>() * w;
    return (d2 * w.squaredNorm() - 1.0) / (d2 - 1.0);
}

XxzClosedForm g_xxz_closed_form(double j, const PauliVector& v, double exponent, long long d_a,
                                XxzConvention conv) {
    if (d_a < 2) throw DomainError("region dimension d_A must be at least 2");
    if (std::abs(v.squaredNorm() - 1.0) > 1e-10) throw DomainError("Pauli coefficient vector is not normalized");
    XxzClosedForm r;
    const double s = std::sin(2.0 * j);
    const double d2 = static_cast<double>(d_a) * d_a;
    const double beta = d2 * (std::norm(v[1]) + std::norm(v[2])) / (d2 - 1.0);
    if (std::abs(std::abs(s) - 1.0) < 1e-15) {
        r.degenerate = true;
        r.value = 1.0;
        return r;
    }
    const double decay = conv == XxzConvention::Appendix ? std::pow(s, 2.0 * exponent)
                                                         : std::exp(-std::log(1.0 / std::abs(s)) * exponent);
    r.value = beta * decay + 1.0 - beta;
    return r;
}

Mat folded_superop(const Mat& u) {
    if (u.rows() != 4 || u.cols() != 4) throw StructuralError("folded_superop expects a 4x4 gate");
    Mat s(16, 16);
    for (int r1 = 0; r1 < 2; ++r1)
    for (int c1 = 0; c1 < 2; ++c1)
    for (int r2 = 0; r2 < 2; ++r2)
    for (int c2 = 0; c2 < 2; ++c2)
    for (int a1 = 0; a1 < 2; ++a1)
    for (int b1 = 0; b1 < 2; ++b1)
    for (int a2 = 0; a2 < 2; ++a2)
    for (int b2 = 0; b2 < 2; ++b2) {
        const int i1 = r1 * 2 + c1, i2 = r2 * 2 + c2, o1 = a1 * 2 + b1, o2 = a2 * 2 + b2;
        s(i1 * 4 + i2, o1 * 4 + o2) =
            std::conj(u(a1 * 2 + a2, r1 * 2 + r2)) * u(b1 * 2 + b2, c1 * 2 + c2);
    }
    return s;
}

Vec folded_identity() {
    Vec c = Vec::Zero(4);
    c[0] = c[3] = 1.0 / std::sqrt(2.0);
    return c;
}

Vec fold(const Mat& v) {
    if (v.rows() != 2 || v.cols() != 2) throw StructuralError("fold expects a 2x2 operator");
    Vec f(4);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) f[r * 2 + c] = v(r, c) / std::sqrt(2.0);
    return f;
}

Vec apply_transfer(const Mat& superop, const Vec& state, int width, const Vec& side, bool parallel) {
    if (width < 1) throw DomainError("transfer width must be at least 1");
    const long long n = ipow(16, width);
    if (state.size() != n) throw StructuralError("transfer state has wrong dimension");
    if (side.size() != 4) throw StructuralError("transfer side vector must have 4 entries");
    const Mat ak = chain_form(superop);
    const Mat ab = ak.conjugate();

    // Ket pass: legs (ket.., bra.., chain_k).
    Vec t(n * 4);
    for (long long i = 0; i < n; ++i) t.segment(i * 4, 4) = state[i] * side;
    Vec tmp;
    for (int p = 0; p < width; ++p) {
        apply_pair(t, tmp, 2 * width + 1, p, 2 * width, ak, parallel);
        t.swap(tmp);
    }
    // Bra pass: legs (ket.., bra.., chain_k, chain_b).
    const Vec side_b = side.conjugate();
    Vec u(n * 16);
    for (long long i = 0; i < n * 4; ++i) u.segment(i * 4, 4) = t[i] * side_b;
    for (int p = 0; p < width; ++p) {
        apply_pair(u, tmp, 2 * width + 2, width + p, 2 * width + 1, ab, parallel);
        u.swap(tmp);
    }
    Vec out(n);
    for (long long i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += u[i * 16 + c * 4 + c];
        out[i] = acc;
    }
    return out;
}

Mat transfer_matrix(const Mat& u, int s, int s_max) {
    if (s_max > kTransferHardCap) {
        throw ResourceError("transfer width cap " + std::to_string(s_max) + " exceeds the hard cap " +
                            std::to_string(kTransferHardCap));
    }
    if (s < 1 || s > s_max) {
        throw ResourceError("transfer width " + std::to_string(s) + " outside [1, " + std::to_string(s_max) +
                            "] (dimension 16^s)");
    }
    const Mat sup = folded_superop(u);
    const long long n = ipow(16, s);
    const Vec side = folded_identity();
    Mat t(n, n);
    for (long long j = 0; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e[j] = 1.0;
        t.col(j) = apply_transfer(sup, e, s, side, false);
    }
    return t;
}

ScalingCurves scaling_curves(const Mat& u, const Mat& v, int width, int q_max, bool parallel) {
    if (q_max < 1) throw DomainError("q_max must be at least 1");
    const Mat sup = folded_superop(u);
    const Vec circ = product_identity(width);
    const long long n = circ.size();
    Vec state(n * n);
    for (long long i = 0; i < n; ++i) state.segment(i * n, n) = circ[i] * circ.conjugate();
    ScalingCurves out;
    out.width = width;
    const Vec side = folded_identity();
    for (int q = 1; q <= q_max; ++q) {
        state = apply_transfer(sup, state, width, q == 1 ? fold(v) : side, parallel);
        out.fidelity.push_back(fidelity_readout(state, circ));
        out.purity.push_back(purity_readout(state, n));
    }
    return out;
}

ScalingTerms scaling_expressions(const Mat& u, const Mat& v, double x_plus, double x_minus) {
    const int p = static_cast<int>(std::ceil(x_plus));
    const int q = static_cast<int>(std::ceil(x_minus));
    if (p < 1 || q < 1) throw DomainError("scaling expressions need x_plus > 0 and x_minus > 0");
    if (p > 5) throw ResourceError("width " + std::to_string(p) + " exceeds the state cap of 5 (16^5 amplitudes)");
    const ScalingCurves c = scaling_curves(u, v, p, q);
    return ScalingTerms{c.fidelity.back(), c.purity.back()};
}

std::vector<Vec> rainbow_vectors(int width) {
    const Vec circ = folded_identity();
    const long long n = ipow(4, width);
    std::vector<Vec> out;
    for (int m = 0; m <= width; ++m) {
        Vec r(n * n);
        for (long long ket = 0; ket < n; ++ket) {
            for (long long bra = 0; bra < n; ++bra) {
                cplx val = 1.0;
                long long k = ket, b = bra;
                for (int p = width - 1; p >= 0; --p) {
                    const int kd = static_cast<int>(k % 4), bd = static_cast<int>(b % 4);
                    k /= 4;
                    b /= 4;
                    val *= p < m ? circ[kd] * std::conj(circ[bd]) : cplx(kd == bd ? 0.5 : 0.0);
                }
                r[ket * n + bra] = val;
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

ChaoticDiagnostic completely_chaotic_diagnostic(const Mat& u, int s_max) {
    ChaoticDiagnostic d;
    d.minimal = true;
    for (int s = 1; s <= s_max; ++s) {
        Eigen::ComplexEigenSolver<Mat> es(transfer_matrix(u, s, s_max), false);
        int count = 0;
        double radius = 0.0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (std::abs(es.eigenvalues()[i] - cplx(1.0)) < 1e-8) ++count;
            radius = std::max(radius, std::abs(es.eigenvalues()[i]));
        }
        d.eigenvalue_one_dims.push_back(count);
        d.spectral_radius.push_back(radius);
        if (count != s + 1) d.minimal = false;
    }
    d.lambda_plus = second_modulus(m_plus(u));
    d.lambda_minus = second_modulus(m_minus(u));
    d.lambda = d.lambda_plus;
    return d;
}

bool zero_prefactor_flag(const Mat& u, const Mat& v, int s_max) {
    const Mat sup = folded_superop(u);
    for (int s = 1; s <= s_max; ++s) {
        const Mat t = transfer_matrix(u, s, s_max);
        const Vec circ = product_identity(s);
        const long long n = circ.size();
        Vec x0(n * n);
        for (long long i = 0; i < n; ++i) x0.segment(i * n, n) = circ[i] * circ.conjugate();
        x0 = apply_transfer(sup, x0, s, fold(v), false);
        Vec x_inf = x0;
        for (int i = 0; i < 2000; ++i) x_inf = t * x_inf;

        Eigen::ComplexEigenSolver<Mat> es(t, true);
        const Vec alpha = es.eigenvectors().partialPivLu().solve(x0);
        double lead = 0.0;
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
            const cplx l = es.eigenvalues()[i];
            if (std::abs(l - cplx(1.0)) >= 1e-8 && std::abs(alpha[i]) > 1e-10) lead = std::max(lead, std::abs(l));
        }
        if (lead < 1e-12) continue;
        double w_fid = 0.0, w_pur = 0.0;
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
            const cplx l = es.eigenvalues()[i];
            if (std::abs(l - cplx(1.0)) < 1e-8 || std::abs(std::abs(l) - lead) > 1e-8) continue;
            const Vec r = alpha[i] * es.eigenvectors().col(i);
            w_fid += std::abs(fidelity_readout_complex(r, circ));
            const Eigen::Map<const Mat> xr(r.data(), n, n);
            const Eigen::Map<const Mat> xi(x_inf.data(), n, n);
            w_pur += 2.0 * std::abs((xi * xr).trace());
        }
        const bool fid_zero = w_fid < 1e-8;
        const bool pur_zero = w_pur < 1e-8;
        if (fid_zero != pur_zero) return true;
    }
    return false;
}

SlopeFit observation2_slopes(const Mat& u, const Mat& v, int x_minus, const std::vector<int>& x_plus) {
    if (x_plus.size() < 2) throw DomainError("slope fit needs at least two x_plus values");
    SlopeFit f;
    for (int p : x_plus) {
        const ScalingCurves c = scaling_curves(u, v, p, x_minus);
        f.log_fidelity.push_back(std::log(std::abs(c.fidelity.back())));
        f.half_log_purity.push_back(0.5 * std::log(c.purity.back()));
    }
    f.slope_fidelity = slope(x_plus, f.log_fidelity);
    f.slope_purity = slope(x_plus, f.half_log_purity);
    f.relative_difference = std::abs(f.slope_fidelity - f.slope_purity) / std::abs(f.slope_purity);
    f.zero_prefactor = zero_prefactor_flag(u, v);
    return f;
}

CorollaryGaps corollary_gaps(const Mat& u, const Mat& v, int x_minus, const std::vector<int>& x_plus) {
    CorollaryGaps g;
    g.x_plus = x_plus;
    for (int p : x_plus) {
        const ScalingCurves c = scaling_curves(u, v, p, x_minus);
        const double gv = g_from_fidelity(c.fidelity.back(), ipow(4, p));
        const double rp = std::sqrt(c.purity.back());
        g.g.push_back(gv);
        g.root_purity.push_back(rp);
        g.gap.push_back(std::abs(gv - rp));
    }
    g.monotone = true;
    for (std::size_t i = 1; i < g.gap.size(); ++i) {
        if (!(g.gap[i] < g.gap[i - 1])) g.monotone = false;
    }
    return g;
}

}  // namespace otoclab
