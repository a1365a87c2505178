#include "otoclab/otoc.hpp"

#include <cmath>

#include "otoclab/kernels.hpp"
#include "otoclab/random.hpp"

namespace otoclab {

namespace {

Region region_of(const DenseOperator& w) {
    const SiteList& s = w.sites();
    if (s.empty()) throw StructuralError("probe operator has no sites");
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].twice != s[i - 1].twice + 1) throw StructuralError("probe support must be contiguous");
    }
    return Region{s.front(), s.back()};
}

struct Window {
    Mat v;      // V_t on the window
    int n = 0;  // window sites
    int pos = 0;
    int width = 0;
};

Window make_window(const HeisenbergOperator& vt, const Region& a) {
    auto [lo, hi] = hull(vt.lc_lo, vt.lc_hi, a.lo, a.hi);
    Window w;
    w.v = embed(vt, lo, hi).data();
    w.n = hi.twice - lo.twice + 1;
    w.pos = a.lo.twice - lo.twice;
    w.width = a.size();
    return w;
}

// (1/D) tr[(V W)^dag (W V)].
cplx otoc_on_window(const Window& win, const Mat& w, bool parallel) {
    Mat x = win.v;
    Mat y = win.v;
    kernels::apply_left(x.data(), x.rows(), x.cols(), win.n, win.pos, win.width, w, parallel);
    kernels::apply_right(y.data(), y.rows(), y.cols(), win.n, win.pos, win.width, w, parallel);
    const cplx s = (y.conjugate().array() * x.array()).sum();
    return s / static_cast<double>(win.v.rows());
}

// Sum in a fixed binary tree so the result does not depend on thread count.
cplx pairwise_sum(const cplx* x, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

void check_origin(const Region& a, const HeisenbergOperator& vt) {
    if (a.contains(vt.origin)) {
        throw DomainError("probe region contains the origin of V; the OTOC needs disjoint supports");
    }
}

}  // namespace

cplx otoc_general(const Mat& w, const Region& a, const HeisenbergOperator& vt, bool parallel) {
    const Window win = make_window(vt, a);
    return otoc_on_window(win, w, parallel);
}

OtocResult otoc_direct(const DenseOperator& w, const HeisenbergOperator& vt, bool parallel) {
    const Region a = region_of(w);
    check_origin(a, vt);
    const cplx f = otoc_general(w.data(), a, vt, parallel);
    return OtocResult{f, f.real(), OtocMethod::DirectTrace};
}

OtocResult otoc_choi(const DenseOperator& w, const ChoiState& c) {
    const Region a = region_of(w);
    const SiteList& win = c.vec.sites();
    if (a.lo < win.front() || a.hi > win.back()) throw StructuralError("probe lies outside the Choi window");
    if (a.contains(SiteIndex{c.lc_lo.twice + (c.layers > 0 ? c.layers - 1 : 0)})) {
        throw DomainError("probe region contains the origin of V; the OTOC needs disjoint supports");
    }
    const int n = c.vec.num_sites();
    const int pos = a.lo.twice - win.front().twice;
    Vec x = c.vec.data();
    kernels::apply_left(x.data(), x.size(), 1, 2 * n, pos, a.size(), w.data(), true);
    kernels::apply_left(x.data(), x.size(), 1, 2 * n, n + pos, a.size(), w.data().conjugate(), true);
    const cplx f = c.vec.data().dot(x);
    return OtocResult{f, f.real(), OtocMethod::ChoiExpectation};
}

double g_from_fidelity(double fidelity, long long d_a) {
    if (d_a < 2) throw DomainError("region dimension d_A must be at least 2");
    const double d2 = static_cast<double>(d_a) * d_a;
    return (d2 * fidelity - 1.0) / (d2 - 1.0);
}

double g_exact(const DenseOperator& nu_a, long long d_a) {
    if (!nu_a.doubled() || nu_a.dim() != d_a * d_a) {
        throw StructuralError("g_exact expects nu_A on A (x) A' with dimension d_A^2");
    }
    const Vec phi = Eigen::Map<const Vec>(Mat(Mat::Identity(d_a, d_a)).data(), d_a * d_a) /
                    std::sqrt(static_cast<double>(d_a));
    const double f = phi.dot(nu_a.data() * phi).real();
    return g_from_fidelity(f, d_a);
}

double phi_plus_fidelity(const ChoiState& c, const Region& a) {
    const SiteList& win = c.vec.sites();
    if (a.lo < win.front() || a.hi > win.back()) throw StructuralError("region lies outside the Choi window");
    check_region(a, c.lc_lo, c.lc_hi);
    const int n = c.vec.num_sites();
    const int pos = a.lo.twice - win.front().twice;
    const int m = a.size();
    std::vector<int> perm;
    for (int k = 0; k < m; ++k) perm.push_back(pos + k);
    for (int k = 0; k < m; ++k) perm.push_back(n + pos + k);
    for (int k = 0; k < 2 * n; ++k) {
        const bool in_a = (k >= pos && k < pos + m) || (k >= n + pos && k < n + pos + m);
        if (!in_a) perm.push_back(k);
    }
    const Vec p = permute_legs(c.vec.data(), 2 * n, 2, perm);
    const long long da = ipow(2, m);
    const long long dr = p.size() / (da * da);
    Vec w = Vec::Zero(dr);
    for (long long i = 0; i < da; ++i) w += p.segment((i * da + i) * dr, dr);
    return w.squaredNorm() / static_cast<double>(da);
}

double g_from_choi(const ChoiState& c, const Region& a) {
    return g_from_fidelity(phi_plus_fidelity(c, a), ipow(2, a.size()));
}

double g_twirled(const HeisenbergOperator& vt, const Region& a) {
    const Window win = make_window(vt, a);
    const int n = win.n;
    const int m = win.width;
    const long long da = ipow(2, m);
    const long long db = win.v.rows() / da;
    // Move the A legs to the front on both row and column sides.
    std::vector<int> order;
    for (int k = 0; k < m; ++k) order.push_back(win.pos + k);
    for (int k = 0; k < n; ++k) {
        if (k < win.pos || k >= win.pos + m) order.push_back(k);
    }
    std::vector<int> perm;
    for (int k : order) perm.push_back(k);
    for (int k : order) perm.push_back(n + k);
    const Vec flat = Eigen::Map<const Vec>(win.v.data(), win.v.size());
    const Vec pv = permute_legs(flat, 2 * n, 2, perm);
    const Mat y = Eigen::Map<const Mat>(pv.data(), win.v.rows(), win.v.cols());
    const Mat x = y.adjoint();
    const Mat w = clock_matrix(static_cast<int>(da));
    const Mat t = twofold_haar_average(kron_mat(w.adjoint(), w), static_cast<int>(da));
    // tr[S M] = sum T[(ja,ia),(ma,na)] tr(X_{ma,ia} Y_{na,ja}) over dB x dB blocks.
    cplx acc = 0.0;
    for (long long ia = 0; ia < da; ++ia) {
        for (long long ja = 0; ja < da; ++ja) {
            for (long long ma = 0; ma < da; ++ma) {
                for (long long na = 0; na < da; ++na) {
                    const cplx tv = t(ja * da + ia, ma * da + na);
                    if (tv == cplx(0.0)) continue;
                    const auto xb = x.block(ma * db, ia * db, db, db);
                    const auto yb = y.block(na * db, ja * db, db, db);
                    acc += tv * (xb.transpose().array() * yb.array()).sum();
                }
            }
        }
    }
    return (acc / static_cast<double>(win.v.rows())).real();
}

MonteCarloResult g_monte_carlo(const HeisenbergOperator& vt, const Region& a, int n_samples,
                               std::uint64_t seed, bool parallel) {
    if (n_samples < 2) throw DomainError("Monte-Carlo estimate needs at least 2 samples");
    check_origin(a, vt);
    const Window win = make_window(vt, a);
    const int da = static_cast<int>(ipow(2, a.size()));
    std::vector<cplx> f(n_samples);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < n_samples; ++i) {
        SeededSource src(seed, static_cast<std::uint64_t>(i));
        const TracelessProbe probe = traceless_probe(da, src);
        f[i] = otoc_on_window(win, probe.value, false);
    }
    MonteCarloResult r;
    r.samples = f;
    const cplx mean = pairwise_sum(f.data(), f.size()) / static_cast<double>(n_samples);
    std::vector<cplx> dev(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const cplx d = f[i] - mean;
        dev[i] = cplx(d.real() * d.real(), d.imag() * d.imag());
    }
    const cplx ss = pairwise_sum(dev.data(), dev.size()) / static_cast<double>(n_samples - 1);
    r.mean = mean.real();
    r.imag_mean = mean.imag();
    r.std_error = std::sqrt(ss.real() / n_samples);
    r.imag_std_error = std::sqrt(ss.imag() / n_samples);
    return r;
}

double levy_bound(long long d_a, double epsilon) {
    const double d2 = static_cast<double>(d_a) * d_a;
    return std::exp(-d2 * epsilon * epsilon / 64.0);
}

ConcentrationStats concentration_from_samples(const std::vector<cplx>& samples, double g, long long d_a,
                                              double epsilon) {
    if (epsilon <= 0.0) throw DomainError("epsilon must be positive");
    ConcentrationStats s;
    s.samples = static_cast<int>(samples.size());
    s.epsilon = epsilon;
    s.g_exact = g;
    s.d_a = d_a;
    long long hits = 0;
    for (const cplx& f : samples) {
        if (std::abs(f - g) >= epsilon) ++hits;
    }
    s.empirical_tail = static_cast<double>(hits) / static_cast<double>(samples.size());
    s.levy_bound = levy_bound(d_a, epsilon);
    s.binomial_se = std::sqrt(s.levy_bound * (1.0 - s.levy_bound) / static_cast<double>(samples.size()));
    return s;
}

ConcentrationStats concentration_experiment(const HeisenbergOperator& vt, const Region& a, double epsilon,
                                            int n_samples, std::uint64_t seed, bool parallel) {
    const MonteCarloResult mc = g_monte_carlo(vt, a, n_samples, seed, parallel);
    const ChoiState c = choi_state_for_region(vt, a);
    return concentration_from_samples(mc.samples, g_from_choi(c, a), ipow(2, a.size()), epsilon);
}

TracelessReduction traceless_reduction_check(const DenseOperator& w_full, const HeisenbergOperator& vt) {
    const Region a = region_of(w_full);
    const Window win = make_window(vt, a);
    const long long da = w_full.dim();
    const cplx c = w_full.data().trace() / static_cast<double>(da);
    const Mat w_tl = w_full.data() - c * Mat::Identity(da, da);
    const cplx f_full = otoc_on_window(win, w_full.data(), true);
    const cplx f_tl = otoc_on_window(win, w_tl, true);
    TracelessReduction r;
    r.f_full = f_full.real();
    r.f_traceless = f_tl.real();
    r.constant = std::norm(c);
    r.residual = std::abs(f_full - f_tl - r.constant);
    return r;
}

}  // namespace otoclab
