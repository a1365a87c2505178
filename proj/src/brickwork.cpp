#include "otoclab/brickwork.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "otoclab/kernels.hpp"

namespace otoclab {

namespace {

constexpr int kMaxWindowSites = 12;

int lightcone_sites(int layers) { return layers == 0 ? 1 : 2 * layers; }

void check_length(int layers, int length) {
    if (layers < 0) throw DomainError("layer count must be non-negative");
    if (length != 0 && lightcone_sites(layers) > length) {
        throw DomainError("chain of " + std::to_string(length) + " sites cannot hold the " +
                          std::to_string(lightcone_sites(layers)) + "-site lightcone of " +
                          std::to_string(layers) + " layers");
    }
}

void check_gate(const Mat& g) {
    if (g.rows() != 4 || g.cols() != 4) throw StructuralError("brickwork gates must be 4x4");
    const double r = (g.adjoint() * g - Mat::Identity(4, 4)).cwiseAbs().maxCoeff();
    if (r > 1e-10) throw DomainError("brickwork gate is not unitary");
}

}  // namespace

BrickworkCircuit::BrickworkCircuit(int layers, int length, SiteIndex origin, Mat gate)
    : layers_(layers), length_(length), origin_(origin), homogeneous_(true), single_(std::move(gate)) {
    check_length(layers_, length_);
    check_gate(single_);
}

BrickworkCircuit::BrickworkCircuit(int layers, int length, SiteIndex origin,
                                   std::map<std::pair<int, int>, Mat> gates)
    : layers_(layers), length_(length), origin_(origin), homogeneous_(false), gates_(std::move(gates)) {
    check_length(layers_, length_);
    for (int j = 1; j <= layers_; ++j) {
        for (int k : bonds(j)) {
            auto it = gates_.find({j, k});
            if (it == gates_.end()) throw StructuralError("missing gate inside the lightcone");
            check_gate(it->second);
        }
    }
}

const Mat& BrickworkCircuit::gate(int layer, int k) const {
    if (homogeneous_) return single_;
    auto it = gates_.find({layer, k});
    if (it == gates_.end()) throw StructuralError("no gate at requested layer/bond");
    return it->second;
}

std::vector<int> BrickworkCircuit::bonds(int layer) {
    std::vector<int> out;
    for (int k = -(layer - 1); k < layer; ++k) {
        if (((k - (layer + 1)) % 2 + 2) % 2 == 0) out.push_back(k);
    }
    return out;
}

std::pair<SiteIndex, SiteIndex> lightcone(SiteIndex origin, int layers) {
    if (layers == 0) return {origin, origin};
    return {SiteIndex{origin.twice - (layers - 1)}, SiteIndex{origin.twice + layers}};
}

Mat swap_gate() { return swap_operator(2); }

Mat xxz_gate(double j) {
    const Mat xx = kron_mat(pauli(1), pauli(1));
    const Mat yy = kron_mat(pauli(2), pauli(2));
    const Mat zz = kron_mat(pauli(3), pauli(3));
    const Mat h = (std::numbers::pi / 4.0) * (xx + yy) + j * zz;
    return herm_expm(h, 1.0);
}

BrickworkCircuit build_gate_circuit(const Mat& gate, int layers, int length, SiteIndex origin) {
    return BrickworkCircuit(layers, length, origin, gate);
}

BrickworkCircuit build_swap_circuit(int length, int layers) {
    if (length < 2) throw DomainError("swap circuit needs a chain of at least 2 sites");
    return BrickworkCircuit(layers, length, SiteIndex{0}, swap_gate());
}

BrickworkCircuit build_haar_circuit(std::uint64_t seed, int layers, bool homogeneous, int length,
                                    SiteIndex origin) {
    if (homogeneous) {
        SeededSource src(seed, 0);
        return BrickworkCircuit(layers, length, origin, haar_unitary(4, src));
    }
    std::map<std::pair<int, int>, Mat> gates;
    for (int j = 1; j <= layers; ++j) {
        for (int k : BrickworkCircuit::bonds(j)) {
            // Stream id packs (layer, bond) so gates do not depend on the layer count.
            const std::uint64_t stream = (static_cast<std::uint64_t>(j) << 32) ^
                                         static_cast<std::uint32_t>(k + (1 << 20));
            SeededSource src(seed, stream);
            gates[{j, k}] = haar_unitary(4, src);
        }
    }
    return BrickworkCircuit(layers, length, origin, std::move(gates));
}

HeisenbergOperator evolve_heisenberg(const BrickworkCircuit& circuit, const Mat& v, int steps,
                                     bool parallel) {
    if (v.rows() != 2 || v.cols() != 2) throw StructuralError("initial operator must be single-site (2x2)");
    if ((v.adjoint() * v - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-10) {
        throw DomainError("initial operator must be unitary");
    }
    if (std::abs(v.trace()) > 1e-10) {
        throw DomainError("initial operator must be traceless; project out the identity part, v - tr(v)/2 * 1, "
                          "and account for the constant separately");
    }
    if (steps < 0 || steps > circuit.layers()) throw DomainError("steps outside the circuit's layer range");
    if (lightcone_sites(steps) > kMaxWindowSites) {
        throw ResourceError("lightcone window of " + std::to_string(lightcone_sites(steps)) +
                            " sites exceeds the dense cap of " + std::to_string(kMaxWindowSites));
    }
    const SiteIndex o = circuit.origin();
    Mat op = v;
    const Mat id2 = Mat::Identity(2, 2);
    for (int j = 1; j <= steps; ++j) {
        if (j > 1) op = kron_mat(id2, op);
        op = kron_mat(op, id2);
        const int n = 2 * j;
        const int lo_rel = -(j - 1);
        for (int k : BrickworkCircuit::bonds(j)) {
            kernels::conjugate_two_site(op, n, k - lo_rel, circuit.gate(j, k), parallel);
        }
    }
    auto [lo, hi] = lightcone(o, steps);
    HeisenbergOperator out{DenseOperator(site_range(lo, hi), std::move(op)), steps, o, lo, hi};
    return out;
}

DenseOperator embed(const HeisenbergOperator& vt, SiteIndex lo, SiteIndex hi) {
    if (lo > vt.lc_lo || hi < vt.lc_hi) throw StructuralError("window does not contain the lightcone");
    const int left = vt.lc_lo.twice - lo.twice;
    const int right = hi.twice - vt.lc_hi.twice;
    if (hi.twice - lo.twice + 1 > kMaxWindowSites) {
        throw ResourceError("computation window of " + std::to_string(hi.twice - lo.twice + 1) +
                            " sites exceeds the dense cap of " + std::to_string(kMaxWindowSites));
    }
    Mat m = vt.op.data();
    if (left > 0) m = kron_mat(Mat::Identity(ipow(2, left), ipow(2, left)), m);
    if (right > 0) m = kron_mat(m, Mat::Identity(ipow(2, right), ipow(2, right)));
    return DenseOperator(site_range(lo, hi), std::move(m));
}

ChoiState choi_state(const HeisenbergOperator& vt) { return choi_state(vt, vt.lc_lo, vt.lc_hi); }

ChoiState choi_state(const HeisenbergOperator& vt, SiteIndex lo, SiteIndex hi) {
    const DenseOperator w = embed(vt, lo, hi);
    // Row-major vec(V) / sqrt(D): leg order is [sites, primed sites].
    const Mat t = w.data().transpose();
    Vec v = Eigen::Map<const Vec>(t.data(), t.size()) / std::sqrt(static_cast<double>(w.dim()));
    return ChoiState{StateVector(w.sites(), std::move(v), 2, true), vt.layers, vt.lc_lo, vt.lc_hi};
}

std::pair<SiteIndex, SiteIndex> hull(SiteIndex lo1, SiteIndex hi1, SiteIndex lo2, SiteIndex hi2) {
    return {std::min(lo1, lo2), std::max(hi1, hi2)};
}

ChoiState choi_state_for_region(const HeisenbergOperator& vt, const Region& a) {
    auto [lo, hi] = hull(vt.lc_lo, vt.lc_hi, a.lo, a.hi);
    return choi_state(vt, lo, hi);
}

void check_region(const Region& a, SiteIndex lc_lo, SiteIndex lc_hi) {
    if (a.hi < a.lo) throw DomainError("region is empty");
    const SiteIndex lo = std::max(a.lo, lc_lo);
    const SiteIndex hi = std::min(a.hi, lc_hi);
    if (hi < lo) return;
    if (a.lo <= lc_lo || a.hi >= lc_hi) return;
    throw DomainError("region [" + to_string(a.lo) + ", " + to_string(a.hi) +
                      "] meets the lightcone [" + to_string(lc_lo) + ", " + to_string(lc_hi) +
                      "] without containing either edge");
}

DenseOperator reduced_choi(const ChoiState& c, const Region& a) {
    const SiteList& w = c.vec.sites();
    if (a.lo < w.front() || a.hi > w.back()) throw StructuralError("region lies outside the Choi window");
    check_region(a, c.lc_lo, c.lc_hi);
    return partial_trace(c.vec, a.sites());
}

}  // namespace otoclab
