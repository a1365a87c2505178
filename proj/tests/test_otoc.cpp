#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "otoclab/otoc.hpp"

using namespace otoclab;

namespace {

Region region(double lo, double hi) { return Region{SiteIndex::from_label(lo), SiteIndex::from_label(hi)}; }

DenseOperator on_region(const Region& a, const Mat& m) { return DenseOperator(a.sites(), m); }

}  // namespace

TEST(Otoc, TimeZeroIsOne) {
    const BrickworkCircuit c = build_haar_circuit(1, 2, true);
    const HeisenbergOperator v0 = evolve_heisenberg(c, pauli(3), 0);
    const DenseOperator w = on_region(region(1, 1), pauli(1));
    EXPECT_NEAR(otoc_direct(w, v0).real_part, 1.0, 1e-14);
}

TEST(Otoc, DirectAndChoiMatchDenseTrace) {
    SeededSource src(2, 0);
    for (int t = 1; t <= 3; ++t) {
        const BrickworkCircuit c = build_haar_circuit(60 + t, 3, false);
        const HeisenbergOperator vt = evolve_heisenberg(c, pauli(2), t);
        for (const Region& a : {region(0.5, 1), region(-1, -0.5), region(1.5, 1.5)}) {
            const Mat wm = haar_unitary(1 << a.size(), src);
            const DenseOperator w = on_region(a, wm);
            const cplx f1 = otoc_direct(w, vt).value;
            const cplx f2 = otoc_choi(w, choi_state_for_region(vt, a)).value;
            // Oracle on a common window [-1, 1.5].
            const DenseOperator vfull = embed(vt, SiteIndex::from_label(-1), SiteIndex::from_label(1.5));
            const cplx f3 = oracle::otoc_trace(vfull.data(), 6, wm, a.lo.twice + 2, a.size());
            EXPECT_LT(std::abs(f1 - f3), 1e-12);
            EXPECT_LT(std::abs(f2 - f3), 1e-12);
        }
    }
}

TEST(Otoc, ProbeOnOriginIsRejected) {
    const BrickworkCircuit c = build_haar_circuit(3, 2, true);
    const HeisenbergOperator vt = evolve_heisenberg(c, pauli(3), 2);
    SeededSource src(1, 1);
    const DenseOperator w = on_region(region(0, 0.5), haar_unitary(4, src));
    EXPECT_THROW(otoc_direct(w, vt), DomainError);
    EXPECT_THROW(otoc_choi(w, choi_state(vt)), DomainError);
}

TEST(Otoc, MaximallyEntangledOperatorGivesZero) {
    // V = SWAP on (0, 1/2) has flat operator-Schmidt spectrum across the
    // two sites, so F vanishes for any traceless W on one of them.
    HeisenbergOperator v;
    v.op = DenseOperator(region(0, 0.5).sites(), swap_gate());
    v.layers = 1;
    v.origin = SiteIndex{0};
    v.lc_lo = SiteIndex{0};
    v.lc_hi = SiteIndex{1};
    for (int k = 1; k <= 3; ++k) {
        EXPECT_LT(std::abs(otoc_general(pauli(k), region(0.5, 0.5), v)), 1e-14);
    }
    EXPECT_NEAR(std::abs(otoc_general(Mat::Identity(2, 2), region(0.5, 0.5), v)), 1.0, 1e-14);
}

TEST(GExact, ExtremesOfTheFidelity) {
    const long long d = 4;
    const Vec phi = Eigen::Map<const Vec>(Mat(Mat::Identity(d, d)).data(), d * d) / 2.0;
    SiteList s = region(0, 0.5).sites();
    const DenseOperator on_phi(s, phi * phi.adjoint(), 2, true);
    EXPECT_NEAR(g_exact(on_phi, d), 1.0, 1e-14);
    Vec orth = Vec::Zero(d * d);
    orth[1] = 1.0;
    const DenseOperator off_phi(s, orth * orth.adjoint(), 2, true);
    EXPECT_NEAR(g_exact(off_phi, d), -1.0 / 15.0, 1e-14);
    EXPECT_THROW(g_exact(off_phi, 2), StructuralError);
    EXPECT_THROW(g_from_fidelity(0.5, 1), DomainError);
}

TEST(GExact, ChoiContractionMatchesOracleReduction) {
    for (std::uint64_t seed = 70; seed < 74; ++seed) {
        const BrickworkCircuit c = build_haar_circuit(seed, 3, seed % 2 == 0);
        const HeisenbergOperator vt = evolve_heisenberg(c, pauli(1), 3);
        const ChoiState ch = choi_state(vt);
        for (const Region& a : {region(1, 1.5), region(0.5, 1.5), region(-1, -1)}) {
            const int pos = a.lo.twice + 2;
            const long long da = 1LL << a.size();
            const double expect = oracle::g_from_nu(oracle::reduced_choi(vt.op.data(), 6, pos, a.size()), da);
            EXPECT_NEAR(g_from_choi(ch, a), expect, 1e-12);
            EXPECT_NEAR(g_exact(reduced_choi(ch, a), da), expect, 1e-12);
            EXPECT_NEAR(phi_plus_fidelity(ch, a), oracle::phi_plus_fidelity(vt.op.data(), 6, pos, a.size()),
                        1e-12);
            EXPECT_GE(expect, -1.0 / (da * da - 1.0) - 1e-12);
            EXPECT_LE(expect, 1.0 + 1e-12);
        }
    }
}

TEST(GTwirled, EqualsChoiFormula) {
    for (std::uint64_t seed = 80; seed < 84; ++seed) {
        const BrickworkCircuit c = build_haar_circuit(seed, 3, false);
        for (int t = 1; t <= 3; ++t) {
            const HeisenbergOperator vt = evolve_heisenberg(c, pauli(3), t);
            for (const Region& a : {region(1, 1.5), region(1.5, 2)}) {
                const double g = g_from_choi(choi_state_for_region(vt, a), a);
                EXPECT_NEAR(g_twirled(vt, a), g, 1e-12);
            }
        }
    }
}

TEST(MonteCarlo, AgreesWithExactWithinErrorBars) {
    const BrickworkCircuit c = build_haar_circuit(90, 3, false);
    const HeisenbergOperator vt = evolve_heisenberg(c, pauli(3), 3);
    const Region a = region(1, 1.5);
    const MonteCarloResult mc = g_monte_carlo(vt, a, 1000, 5);
    const double g = g_from_choi(choi_state_for_region(vt, a), a);
    EXPECT_GT(mc.std_error, 0.0);
    EXPECT_LE(std::abs(mc.mean - g), 4.0 * mc.std_error);
    EXPECT_EQ(mc.samples.size(), 1000u);
}

TEST(MonteCarlo, ThreadingDoesNotChangeTheResult) {
    const BrickworkCircuit c = build_haar_circuit(91, 2, true);
    const HeisenbergOperator vt = evolve_heisenberg(c, pauli(1), 2);
    const MonteCarloResult a = g_monte_carlo(vt, region(0.5, 1), 64, 9, true);
    const MonteCarloResult b = g_monte_carlo(vt, region(0.5, 1), 64, 9, false);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_THROW(g_monte_carlo(vt, region(0.5, 1), 1, 9), DomainError);
}

TEST(MonteCarlo, DisjointOperatorGivesOneWithoutSpread) {
    const BrickworkCircuit c = build_swap_circuit(8, 1);
    const HeisenbergOperator vt = evolve_heisenberg(c, pauli(1), 1);
    const MonteCarloResult mc = g_monte_carlo(vt, region(1, 1.5), 50, 3);
    EXPECT_NEAR(mc.mean, 1.0, 1e-12);
    EXPECT_LT(mc.std_error, 1e-12);
}

TEST(Concentration, LevyValueAndTailCounting) {
    EXPECT_NEAR(levy_bound(16, 0.5), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(levy_bound(4, 0.25), std::exp(-1.0 / 64.0), 1e-15);
    const std::vector<cplx> s = {0.0, 0.1, 0.5, cplx(0.0, 0.6), -0.7};
    const ConcentrationStats st = concentration_from_samples(s, 0.0, 4, 0.5);
    EXPECT_DOUBLE_EQ(st.empirical_tail, 3.0 / 5.0);
    EXPECT_THROW(concentration_from_samples(s, 0.0, 4, 0.0), DomainError);
    const BrickworkCircuit c = build_haar_circuit(92, 3, true);
    const HeisenbergOperator vt = evolve_heisenberg(c, pauli(3), 3);
    // |F - G| <= 2 always, so epsilon = 2.5 leaves no tail.
    EXPECT_EQ(concentration_experiment(vt, region(1, 1.5), 2.5, 100, 1).empirical_tail, 0.0);
}

TEST(TracelessReduction, IdentityAndPhaseShiftedProbes) {
    const BrickworkCircuit c = build_haar_circuit(93, 3, false);
    const HeisenbergOperator vt = evolve_heisenberg(c, pauli(2), 3);
    const Region a = region(1, 1.5);
    TracelessReduction r = traceless_reduction_check(on_region(a, Mat::Identity(4, 4)), vt);
    EXPECT_NEAR(r.f_full, 1.0, 1e-13);
    EXPECT_NEAR(r.constant, 1.0, 1e-15);
    EXPECT_NEAR(r.f_traceless, 0.0, 1e-13);
    SeededSource src(4, 0);
    for (int k = 0; k < 5; ++k) {
        const Mat w = haar_unitary(4, src);
        r = traceless_reduction_check(on_region(a, w), vt);
        EXPECT_LT(r.residual, 1e-10);
        EXPECT_NEAR(r.constant, std::norm(w.trace() / 4.0), 1e-15);
    }
}
