#pragma once

#include <vector>

#include "otoclab/brickwork.hpp"
#include "otoclab/random.hpp"

// Qubit dual-unitary gates, their single-site channels, and the folded
// spacetime transfer operator of a homogeneous brickwork.
namespace otoclab {

using PauliChannelMatrix = Eigen::Matrix4d;
using PauliVector = Eigen::Vector4cd;

struct Dressings {
    Mat u_plus = Mat::Identity(2, 2);
    Mat u_minus = Mat::Identity(2, 2);
    Mat v_minus = Mat::Identity(2, 2);
    Mat v_plus = Mat::Identity(2, 2);
};

struct DualUnitaryGate {
    Mat u;
    double j = 0.0;
    double phase = 0.0;
    Dressings dressings;
};

// U = e^{i phase} (u+ (x) u-) V[J] (v- (x) v+), V[J] the XXZ gate.
DualUnitaryGate make_du_gate(double j, const Dressings& d = Dressings{}, double phase = 0.0);
// Haar dressings and a uniform phase drawn from src.
DualUnitaryGate make_random_du_gate(double j, SeededSource& src);

struct DualityCheck {
    bool time_unitary = false;
    bool space_unitary = false;
    double time_residual = 0.0;
    double space_residual = 0.0;
};

// u~_{(o1 i1),(o2 i2)} = u_{(o1 o2),(i1 i2)}.
Mat reshuffle(const Mat& u);
DualityCheck check_dual_unitarity(const Mat& u, double tol = 1e-10);

// Channel matrices in the basis (1, X, Y, Z)/sqrt(2):
//   m_plus(X)  = tr_1[U^dag (X (x) 1) U] / 2
//   m_minus(X) = tr_2[U^dag (1 (x) X) U] / 2
PauliChannelMatrix m_plus(const Mat& u);
PauliChannelMatrix m_minus(const Mat& u);
// c_k = tr[sigma_k v] / 2; unit operator norm tr[v^dag v]/2 = 1 gives |c| = 1.
PauliVector pauli_coefficients(const Mat& v);

// Where the region sits relative to the lightcone of V_t.
enum class DuBranch {
    Disjoint,   // A misses the lightcone: G = 1
    LeftEdge,   // A holds the left edge only: G from the channel power
    RightEdge,  // A holds the right edge: G = -1/(d_A^2 - 1)
};

struct DuGeometry {
    DuBranch branch = DuBranch::Disjoint;
    double x_plus = 0.0;
    double x_minus = 0.0;
};

// Branch and lightcone coordinates of region a after `layers` layers.
DuGeometry du_geometry(const Region& a, SiteIndex origin, int layers);

// Exact G for a dual-unitary brickwork. LeftEdge uses
// f = |m_plus^P v|^2 with P = ceil(x_plus).
double g_dual_unitary(const Mat& u, const PauliVector& v, double x_plus, long long d_a, DuBranch branch);

enum class XxzConvention {
    Appendix,  // sin(2J)^(2 x); confirmed by dense simulation
    MainText,  // beta exp(-alpha x) + 1 - beta, alpha = ln(1/sin 2J)
};

struct XxzClosedForm {
    double value = 0.0;
    bool degenerate = false;  // |sin 2J| = 1: SWAP-like, no decay
};

// G = 1 + d_A^2 (|a_x|^2 + |a_y|^2)(s^(2 e) - 1)/(d_A^2 - 1), s = sin 2J,
// e = exponent (Appendix) or s^e (MainText).
XxzClosedForm g_xxz_closed_form(double j, const PauliVector& v, double exponent, long long d_a,
                                XxzConvention conv = XxzConvention::Appendix);

// Folded two-site gate S[(i1 i2),(o1 o2)] on folded legs f = 2 r + c.
Mat folded_superop(const Mat& u);
// Folded single-site identity (1, 0, 0, 1)/sqrt(2).
Vec folded_identity();
// Row-major vec(v)/sqrt(2).
Vec fold(const Mat& v);

// One application of the width-`width` transfer operator to a state on
// legs (ket 0..width-1, bra 0..width-1), each of dimension 4. The ket row
// enters from `side`, the bra row from conj(side).
Vec apply_transfer(const Mat& superop, const Vec& state, int width, const Vec& side, bool parallel = true);

inline constexpr int kTransferDefaultCap = 2;
inline constexpr int kTransferHardCap = 3;

// Dense T_s (dimension 16^s) with identity side. s in [1, s_max],
// s_max <= kTransferHardCap.
Mat transfer_matrix(const Mat& u, int s, int s_max = kTransferDefaultCap);

struct ScalingCurves {
    int width = 0;
    std::vector<double> fidelity;  // <phi+| nu_A |phi+>, index q - 1
    std::vector<double> purity;    // tr nu_A^2
};

// Fidelity and purity for q = 1..q_max at fixed width, from transfer powers.
ScalingCurves scaling_curves(const Mat& u, const Mat& v, int width, int q_max, bool parallel = true);

struct ScalingTerms {
    double fidelity_term = 0.0;
    double purity_term = 0.0;
};

// Width ceil(x_plus), power ceil(x_minus); A holds the left lightcone edge.
ScalingTerms scaling_expressions(const Mat& u, const Mat& v, double x_plus, double x_minus);

// Eigenvalue-one vectors built from folded identities and bond pairings.
std::vector<Vec> rainbow_vectors(int width);

struct ChaoticDiagnostic {
    std::vector<int> eigenvalue_one_dims;  // widths 1..s_max
    std::vector<double> spectral_radius;   // widths 1..s_max
    bool minimal = false;                  // every width has exactly width + 1
    double lambda_plus = 0.0;              // largest nontrivial |eig| of m_plus
    double lambda_minus = 0.0;
    double lambda = 0.0;                   // channel governing G here (m_plus)
};

ChaoticDiagnostic completely_chaotic_diagnostic(const Mat& u, int s_max = kTransferDefaultCap);

struct SlopeFit {
    double slope_fidelity = 0.0;
    double slope_purity = 0.0;
    double relative_difference = 0.0;
    bool zero_prefactor = false;  // leading mode invisible in one readout only
    std::vector<double> log_fidelity;
    std::vector<double> half_log_purity;
};

// Slopes in x_plus of log f and (1/2) log p at fixed x_minus.
SlopeFit observation2_slopes(const Mat& u, const Mat& v, int x_minus, const std::vector<int>& x_plus);

// True when, at some width <= s_max, the leading nontrivial transfer mode has
// vanishing weight in exactly one of the fidelity and purity readouts.
bool zero_prefactor_flag(const Mat& u, const Mat& v, int s_max = kTransferDefaultCap);

struct CorollaryGaps {
    std::vector<int> x_plus;
    std::vector<double> g;
    std::vector<double> root_purity;  // exp(-S2/2)
    std::vector<double> gap;
    bool monotone = false;
};

// |G - exp(-S2/2)| at fixed x_minus with d_A = 4^x_plus.
CorollaryGaps corollary_gaps(const Mat& u, const Mat& v, int x_minus, const std::vector<int>& x_plus);

}  // namespace otoclab
