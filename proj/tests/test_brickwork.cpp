#include <gtest/gtest.h>

#include "oracles.hpp"
#include "otoclab/brickwork.hpp"
#include "otoclab/kernels.hpp"

using namespace otoclab;

namespace {

Region region(double lo, double hi) { return Region{SiteIndex::from_label(lo), SiteIndex::from_label(hi)}; }

}  // namespace

TEST(Brickwork, BondOffsetsPerLayer) {
    EXPECT_EQ(BrickworkCircuit::bonds(1), (std::vector<int>{0}));
    EXPECT_EQ(BrickworkCircuit::bonds(2), (std::vector<int>{-1, 1}));
    EXPECT_EQ(BrickworkCircuit::bonds(3), (std::vector<int>{-2, 0, 2}));
    EXPECT_EQ(BrickworkCircuit::bonds(4), (std::vector<int>{-3, -1, 1, 3}));
}

TEST(Brickwork, LightconeEdges) {
    for (int l = 1; l <= 5; ++l) {
        const auto [lo, hi] = lightcone(SiteIndex{0}, l);
        EXPECT_EQ(lo.twice, -(l - 1));
        EXPECT_EQ(hi.twice, l);
    }
    const auto [lo, hi] = lightcone(SiteIndex{4}, 3);
    EXPECT_EQ(lo.twice, 2);
    EXPECT_EQ(hi.twice, 7);
}

TEST(Brickwork, RejectsBadGatesAndChains) {
    EXPECT_THROW(build_gate_circuit(Mat::Identity(2, 2), 1), StructuralError);
    EXPECT_THROW(build_gate_circuit(Mat::Identity(4, 4) * 2.0, 1), DomainError);
    EXPECT_THROW(build_gate_circuit(swap_gate(), 3, 4), DomainError);
    EXPECT_THROW(build_swap_circuit(1, 1), DomainError);
}

TEST(Brickwork, HomogeneousGateDoesNotDependOnDepth) {
    const BrickworkCircuit a = build_haar_circuit(9, 2, true);
    const BrickworkCircuit b = build_haar_circuit(9, 4, true);
    EXPECT_TRUE(a.homogeneous());
    EXPECT_EQ(a.gate(1, 0), b.gate(4, 3));
    const BrickworkCircuit c = build_haar_circuit(9, 2, false);
    const BrickworkCircuit e = build_haar_circuit(9, 4, false);
    EXPECT_FALSE(c.homogeneous());
    EXPECT_EQ(c.gate(2, -1), e.gate(2, -1));
    EXPECT_NE(c.gate(2, -1), c.gate(2, 1));
}

TEST(Kernels, ConjugationMatchesDenseReference) {
    SeededSource src(11, 0);
    for (int n : {2, 5, 9}) {
        for (int pos = 0; pos + 1 < n; pos += 3) {
            const long long dim = 1LL << n;
            Mat op(dim, dim);
            for (long long i = 0; i < op.size(); ++i) op.data()[i] = src.complex_normal();
            const Mat g = haar_unitary(4, src);
            Mat ref = op, ser = op, par = op;
            kernels::conjugate_two_site_reference(ref, n, pos, g);
            kernels::conjugate_two_site(ser, n, pos, g, false);
            kernels::conjugate_two_site(par, n, pos, g, true);
            const Mat emb = oracle::embed_two_site(g, n, pos);
            const Mat expect = emb.adjoint() * op * emb;
            EXPECT_LT((ref - expect).norm(), 1e-11);
            EXPECT_LT((ser - expect).norm(), 1e-11);
            EXPECT_EQ(ser, par) << "serial and parallel paths must agree bitwise";
        }
    }
}

TEST(Kernels, ApplyLeftRightMatchEmbedding) {
    SeededSource src(12, 0);
    const int n = 6;
    Mat op(64, 64);
    for (long long i = 0; i < op.size(); ++i) op.data()[i] = src.complex_normal();
    const Mat m = haar_unitary(8, src);
    Mat l = op, r = op;
    kernels::apply_left(l.data(), 64, 64, n, 2, 3, m, false);
    kernels::apply_right(r.data(), 64, 64, n, 2, 3, m, true);
    const Mat emb = oracle::embed_block(m, n, 2, 3);
    EXPECT_LT((l - emb * op).norm(), 1e-11);
    EXPECT_LT((r - op * emb).norm(), 1e-11);
    EXPECT_THROW(kernels::apply_left(l.data(), 64, 64, n, 5, 3, m, false), StructuralError);
}

TEST(Evolution, MatchesDenseProductOfLayers) {
    for (int layers = 1; layers <= 4; ++layers) {
        for (bool homogeneous : {true, false}) {
            const BrickworkCircuit c = build_haar_circuit(100 + layers, layers, homogeneous);
            for (int k = 1; k <= 3; ++k) {
                const HeisenbergOperator vt = evolve_heisenberg(c, pauli(k), layers);
                const Mat dense = oracle::evolve_dense(c, pauli(k), layers);
                EXPECT_EQ(vt.op.num_sites(), 2 * layers);
                EXPECT_LT((vt.op.data() - dense).norm(), 1e-11) << "layers " << layers;
                EXPECT_LT(vt.op.unitarity_residual(), 1e-11);
                EXPECT_LT(std::abs(vt.op.data().trace()), 1e-10);
            }
        }
    }
}

TEST(Evolution, PartialStepsAndSerialPathAgree) {
    const BrickworkCircuit c = build_haar_circuit(5, 4, false);
    const HeisenbergOperator a = evolve_heisenberg(c, pauli(2), 3, true);
    const HeisenbergOperator b = evolve_heisenberg(c, pauli(2), 3, false);
    EXPECT_EQ(a.op.data(), b.op.data());
    EXPECT_EQ(a.lc_lo.twice, -2);
    EXPECT_EQ(a.lc_hi.twice, 3);
    const HeisenbergOperator z = evolve_heisenberg(c, pauli(2), 0);
    EXPECT_EQ(z.op.num_sites(), 1);
    EXPECT_LT((z.op.data() - pauli(2)).norm(), 1e-15);
}

TEST(Evolution, RejectsBadInitialOperatorsAndOversizedWindows) {
    const BrickworkCircuit c = build_haar_circuit(5, 7, true);
    EXPECT_THROW(evolve_heisenberg(c, Mat::Identity(2, 2), 1), DomainError);
    EXPECT_THROW(evolve_heisenberg(c, pauli(3) * 2.0, 1), DomainError);
    EXPECT_THROW(evolve_heisenberg(c, Mat::Identity(4, 4), 1), StructuralError);
    EXPECT_THROW(evolve_heisenberg(c, pauli(3), 8), DomainError);
    EXPECT_THROW(evolve_heisenberg(c, pauli(3), 7), ResourceError);
}

TEST(Evolution, SwapCircuitTranslatesTheOperator) {
    const BrickworkCircuit c = build_swap_circuit(10, 3);
    for (int t = 1; t <= 3; ++t) {
        const HeisenbergOperator vt = evolve_heisenberg(c, pauli(1), t);
        // V moves to the right lightcone edge.
        const int n = vt.op.num_sites();
        const Mat expect = oracle::embed_block(pauli(1), n, n - 1, 1);
        EXPECT_LT((vt.op.data() - expect).norm(), 1e-13) << t;
    }
}

TEST(Choi, StateIsNormalizedAndReducesLikeTheOracle) {
    const BrickworkCircuit c = build_haar_circuit(21, 3, false);
    const HeisenbergOperator vt = evolve_heisenberg(c, pauli(3), 3);
    const ChoiState ch = choi_state(vt);
    EXPECT_TRUE(ch.vec.is_normalized(1e-12));
    EXPECT_TRUE(ch.vec.doubled());
    for (auto [lo, hi] : {std::pair{-1.0, -0.5}, std::pair{1.0, 1.5}, std::pair{0.5, 1.5}}) {
        const Region a = region(lo, hi);
        const DenseOperator nu = reduced_choi(ch, a);
        const int pos = a.lo.twice - vt.lc_lo.twice;
        const Mat expect = oracle::reduced_choi(vt.op.data(), 6, pos, a.size());
        EXPECT_LT((nu.data() - expect).norm(), 1e-12);
        EXPECT_NEAR(nu.data().trace().real(), 1.0, 1e-12);
    }
    EXPECT_THROW(reduced_choi(ch, region(3, 3.5)), StructuralError);
}

TEST(Choi, WiderWindowOnlyAddsBellPairs) {
    const BrickworkCircuit c = build_haar_circuit(22, 2, true);
    const HeisenbergOperator vt = evolve_heisenberg(c, pauli(1), 2);
    const ChoiState wide = choi_state(vt, SiteIndex::from_label(-1.5), SiteIndex::from_label(2));
    EXPECT_EQ(wide.vec.num_sites(), 8);
    const Region inside = region(0.5, 1);
    EXPECT_LT((reduced_choi(wide, inside).data() - reduced_choi(choi_state(vt), inside).data()).norm(), 1e-13);
    // Outside the lightcone V acts as the identity: each site pairs with its copy.
    const DenseOperator outside = reduced_choi(wide, region(-1.5, -1.5));
    Vec bell = Vec::Zero(4);
    bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
    EXPECT_LT((outside.data() - bell * bell.adjoint()).norm(), 1e-13);
    EXPECT_THROW(choi_state(vt, SiteIndex::from_label(0), SiteIndex::from_label(2)), StructuralError);
}

TEST(Region, EdgeRule) {
    const SiteIndex lo = SiteIndex::from_label(-1), hi = SiteIndex::from_label(1.5);
    EXPECT_NO_THROW(check_region(region(1, 1.5), lo, hi));
    EXPECT_NO_THROW(check_region(region(-2, -1), lo, hi));
    EXPECT_NO_THROW(check_region(region(2, 3), lo, hi));
    EXPECT_NO_THROW(check_region(region(-3, 3), lo, hi));
    EXPECT_THROW(check_region(region(0, 0.5), lo, hi), DomainError);
    EXPECT_THROW(check_region(region(1, 0), lo, hi), DomainError);
    EXPECT_EQ(region(-1, 1.5).size(), 6);
    const auto [a, b] = hull(lo, hi, SiteIndex::from_label(2), SiteIndex::from_label(2.5));
    EXPECT_EQ(a, lo);
    EXPECT_EQ(b.twice, 5);
}
