#pragma once

#include <map>
#include <optional>
#include <utility>

#include "otoclab/random.hpp"
#include "otoclab/tensor_core.hpp"

namespace otoclab {

// Layered two-site gates on a chain. Layers are counted outward from the
// initial operator: layer 1 holds the single bond (origin, origin + 1/2),
// layer j holds the bonds whose left site is origin + k/2 with
// k in [-(j-1), j-1] and k = j + 1 (mod 2). After j layers the lightcone
// spans origin - (j-1)/2 .. origin + j/2.
class BrickworkCircuit {
public:
    BrickworkCircuit(int layers, int length, SiteIndex origin, Mat gate);
    BrickworkCircuit(int layers, int length, SiteIndex origin,
                     std::map<std::pair<int, int>, Mat> gates);

    int layers() const { return layers_; }
    int length() const { return length_; }
    SiteIndex origin() const { return origin_; }
    bool homogeneous() const { return homogeneous_; }

    // Gate of layer `layer` on the bond whose left site is origin + k/2.
    const Mat& gate(int layer, int k) const;

    // Bond offsets k of a layer, ascending.
    static std::vector<int> bonds(int layer);

private:
    int layers_;
    int length_;
    SiteIndex origin_;
    bool homogeneous_;
    Mat single_;
    std::map<std::pair<int, int>, Mat> gates_;
};

// Lightcone edges after `layers` layers around `origin`.
std::pair<SiteIndex, SiteIndex> lightcone(SiteIndex origin, int layers);

Mat swap_gate();
// exp[-i (pi/4 XX + pi/4 YY + J ZZ)].
Mat xxz_gate(double j);

BrickworkCircuit build_gate_circuit(const Mat& gate, int layers, int length = 0,
                                    SiteIndex origin = SiteIndex{0});
BrickworkCircuit build_swap_circuit(int length, int layers);
// Homogeneous: one Haar gate from stream 0. Otherwise each (layer, bond)
// gate comes from its own stream.
BrickworkCircuit build_haar_circuit(std::uint64_t seed, int layers, bool homogeneous,
                                    int length = 0, SiteIndex origin = SiteIndex{0});

struct HeisenbergOperator {
    DenseOperator op;  // on the lightcone window
    int layers = 0;
    SiteIndex origin;
    SiteIndex lc_lo;
    SiteIndex lc_hi;
};

// V_t on the lightcone. v must be a traceless unitary single-site operator.
HeisenbergOperator evolve_heisenberg(const BrickworkCircuit& circuit, const Mat& v, int steps,
                                     bool parallel = true);

// V_t embedded on the window [lo, hi], which must contain the lightcone.
DenseOperator embed(const HeisenbergOperator& vt, SiteIndex lo, SiteIndex hi);

struct ChoiState {
    StateVector vec;  // doubled, on the computation window
    int layers = 0;
    SiteIndex lc_lo;
    SiteIndex lc_hi;
};

// Contiguous block of chain sites [lo, hi].
struct Region {
    SiteIndex lo;
    SiteIndex hi;

    SiteList sites() const { return site_range(lo, hi); }
    int size() const { return hi.twice - lo.twice + 1; }
    bool contains(SiteIndex s) const { return lo <= s && s <= hi; }
};

// Choi state (V_t (x) 1)|phi+> on the lightcone window.
ChoiState choi_state(const HeisenbergOperator& vt);
// Same on the window [lo, hi] containing the lightcone.
ChoiState choi_state(const HeisenbergOperator& vt, SiteIndex lo, SiteIndex hi);
// Window spanning the lightcone and the region.
ChoiState choi_state_for_region(const HeisenbergOperator& vt, const Region& a);

// Throws DomainError when a meets the lightcone only in its interior.
void check_region(const Region& a, SiteIndex lc_lo, SiteIndex lc_hi);

// nu_A on A (x) A'. Region must lie inside the state's window.
DenseOperator reduced_choi(const ChoiState& c, const Region& a);

// Smallest window containing both ranges.
std::pair<SiteIndex, SiteIndex> hull(SiteIndex lo1, SiteIndex hi1, SiteIndex lo2, SiteIndex hi2);

}  // namespace otoclab
