#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "otoclab/random.hpp"

using namespace otoclab;

TEST(SeededSource, StreamsAreReproducibleAndDistinct) {
    SeededSource a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        EXPECT_NE(x, c.next_u64());
        EXPECT_NE(x, d.next_u64());
    }
}

TEST(SeededSource, UniformAndNormalMoments) {
    SeededSource src(1, 0);
    const int n = 200000;
    double su = 0.0, sn = 0.0, sn2 = 0.0, umin = 1.0, umax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = src.uniform();
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        su += u;
        const double z = src.normal();
        sn += z;
        sn2 += z * z;
    }
    EXPECT_GE(umin, 0.0);
    EXPECT_LT(umax, 1.0);
    EXPECT_NEAR(su / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sn / n, 0.0, 5 / std::sqrt(n));
    EXPECT_NEAR(sn2 / n, 1.0, 5 * std::sqrt(2.0 / n));
}

TEST(HaarUnitary, IsUnitary) {
    SeededSource src(2, 0);
    for (int d : {1, 2, 4, 16}) {
        const Mat u = haar_unitary(d, src);
        EXPECT_LT((u.adjoint() * u - Mat::Identity(d, d)).norm(), 1e-12) << d;
    }
    EXPECT_THROW(haar_unitary(0, src), DomainError);
}

TEST(HaarUnitary, EntryModulusFollowsBetaLaw) {
    // |U_00|^2 ~ Beta(1, d - 1) for Haar U(d); KS test at the 1% level.
    SeededSource src(3, 0);
    const int d = 4, n = 4000;
    std::vector<double> xs, ys;
    for (int i = 0; i < n; ++i) {
        const Mat u = haar_unitary(d, src);
        xs.push_back(std::norm(u(0, 0)));
        ys.push_back(std::norm(u(d - 1, 2)));
    }
    auto cdf = [&](double x) { return 1.0 - std::pow(1.0 - x, d - 1); };
    const double crit = 1.63 / std::sqrt(static_cast<double>(n));
    EXPECT_LT(oracle::ks_statistic(xs, cdf), crit);
    EXPECT_LT(oracle::ks_statistic(ys, cdf), crit);
}

TEST(HaarUnitary, EigenphasesAreNotBiased) {
    // The phase fix makes the eigenphase density flat on average: E[tr U] = 0
    // and E[|tr U|^2] = 1.
    SeededSource src(4, 0);
    const int n = 20000;
    cplx mean = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx t = haar_unitary(3, src).trace();
        mean += t;
        m2 += std::norm(t);
    }
    mean /= n;
    m2 /= n;
    EXPECT_LT(std::abs(mean), 5.0 / std::sqrt(n));
    EXPECT_NEAR(m2, 1.0, 0.05);
}

TEST(TracelessProbe, TracelessUnitaryConjugate) {
    SeededSource src(5, 0);
    for (int d : {2, 4, 8}) {
        const TracelessProbe p = traceless_probe(d, src);
        EXPECT_LT(std::abs(p.value.trace()), 1e-12);
        EXPECT_LT((p.value.adjoint() * p.value - Mat::Identity(d, d)).norm(), 1e-12);
        EXPECT_LT((p.frame * p.value * p.frame.adjoint() - clock_matrix(d)).norm(), 1e-12);
    }
    EXPECT_THROW(traceless_probe(1, src), DomainError);
}

TEST(TwofoldAverage, ExactInvariants) {
    SeededSource src(6, 0);
    const int d = 3;
    Mat x(d * d, d * d);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = src.complex_normal();
    const Mat t = twofold_haar_average(x, d);
    const Mat s = swap_operator(d);
    EXPECT_LT(std::abs(t.trace() - x.trace()), 1e-12);
    EXPECT_LT(std::abs((s * t).trace() - (s * x).trace()), 1e-12);
    EXPECT_LT((twofold_haar_average(t, d) - t).norm(), 1e-12);
    for (int k = 0; k < 3; ++k) {
        const Mat u = haar_unitary(d, src);
        const Mat uu = kron_mat(u, u);
        EXPECT_LT((uu * t * uu.adjoint() - t).norm(), 1e-12);
    }
    EXPECT_THROW(twofold_haar_average(x, 2), StructuralError);
}

TEST(TwofoldAverage, MatchesSampledAverage) {
    SeededSource src(7, 0);
    const int d = 2, n = 40000;
    Mat x(4, 4);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = src.complex_normal();
    Mat acc = Mat::Zero(4, 4);
    for (int i = 0; i < n; ++i) {
        const Mat u = haar_unitary(d, src);
        const Mat uu = kron_mat(u, u);
        acc += uu * x * uu.adjoint();
    }
    acc /= n;
    // Entries are O(1) with O(1) spread; 40000 samples leave ~0.005 noise.
    EXPECT_LT((acc - twofold_haar_average(x, d)).cwiseAbs().maxCoeff(), 0.04);
}

TEST(ClockMatrix, TracelessDiagonalUnitary) {
    for (int d : {2, 3, 8}) {
        const Mat w = clock_matrix(d);
        EXPECT_LT(std::abs(w.trace()), 1e-12);
        EXPECT_LT((w.adjoint() * w - Mat::Identity(d, d)).norm(), 1e-12);
    }
}
