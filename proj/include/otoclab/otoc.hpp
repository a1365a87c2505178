#pragma once

#include <vector>

#include "otoclab/brickwork.hpp"

namespace otoclab {

enum class OtocMethod { DirectTrace, ChoiExpectation, Theorem1Fidelity, MonteCarlo };

struct OtocResult {
    cplx value;
    double real_part = 0.0;
    OtocMethod method = OtocMethod::DirectTrace;
};

// (1/D) tr[W^dag V_t^dag W V_t] on the window spanning the lightcone and the
// support of w. The support of w must not contain the origin of V.
OtocResult otoc_direct(const DenseOperator& w, const HeisenbergOperator& vt, bool parallel = true);

// <V_t| W (x) W* |V_t> with W on the A legs and W* on the primed A legs.
OtocResult otoc_choi(const DenseOperator& w, const ChoiState& c);

// Average G from the reduced Choi state.
double g_exact(const DenseOperator& nu_a, long long d_a);
// <phi+_A| nu_A |phi+_A> contracted directly from the Choi vector.
double phi_plus_fidelity(const ChoiState& c, const Region& a);
// G from the Choi state without materializing nu_A.
double g_from_choi(const ChoiState& c, const Region& a);
double g_from_fidelity(double fidelity, long long d_a);

// (1/D) tr[S (T_A (x) 1)(V_t^dag (x) V_t)] with T_A the 2-fold twirl of
// W^dag (x) W for the clock probe W on A.
double g_twirled(const HeisenbergOperator& vt, const Region& a);

struct MonteCarloResult {
    double mean = 0.0;
    double std_error = 0.0;
    double imag_mean = 0.0;
    double imag_std_error = 0.0;
    std::vector<cplx> samples;
};

// Samples F over traceless probes W_R = R^dag W R on A; sample i uses
// stream i of `seed`. Reduction is in fixed order, independent of threads.
MonteCarloResult g_monte_carlo(const HeisenbergOperator& vt, const Region& a, int n_samples,
                               std::uint64_t seed, bool parallel = true);

struct ConcentrationStats {
    int samples = 0;
    double epsilon = 0.0;
    double g_exact = 0.0;
    double empirical_tail = 0.0;
    double levy_bound = 0.0;
    // Binomial standard error of the tail fraction at p = levy_bound.
    double binomial_se = 0.0;
    long long d_a = 0;
};

double levy_bound(long long d_a, double epsilon);

ConcentrationStats concentration_experiment(const HeisenbergOperator& vt, const Region& a,
                                            double epsilon, int n_samples, std::uint64_t seed,
                                            bool parallel = true);
// Tail statistics from precomputed samples.
ConcentrationStats concentration_from_samples(const std::vector<cplx>& samples, double g,
                                              long long d_a, double epsilon);

struct TracelessReduction {
    double f_full = 0.0;
    double f_traceless = 0.0;
    double constant = 0.0;  // |tr W|^2 / d_A^2
    double residual = 0.0;  // |F(W) - F(W') - constant|
};

// F(W) against F(W') for W' = W - tr(W)/d_A; w need not be traceless.
TracelessReduction traceless_reduction_check(const DenseOperator& w_full, const HeisenbergOperator& vt);

// F for an arbitrary (possibly non-unitary) w on the combined window.
cplx otoc_general(const Mat& w, const Region& a, const HeisenbergOperator& vt, bool parallel = true);

}  // namespace otoclab
