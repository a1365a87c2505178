#include "otoclab/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace otoclab {

SiteIndex SiteIndex::from_label(double label) {
    const double t = 2.0 * label;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9) {
        throw DomainError("site label " + std::to_string(label) + " is not a half-integer");
    }
    return SiteIndex{static_cast<int>(r)};
}

std::string to_string(SiteIndex s) {
    if (s.twice % 2 == 0) return std::to_string(s.twice / 2);
    return std::to_string(s.twice) + "/2";
}

SiteList site_range(SiteIndex lo, SiteIndex hi) {
    SiteList out;
    for (int t = lo.twice; t <= hi.twice; ++t) out.push_back(SiteIndex{t});
    return out;
}

void check_ordered(const SiteList& sites) {
    for (std::size_t i = 1; i < sites.size(); ++i) {
        if (!(sites[i - 1] < sites[i])) {
            throw StructuralError("site labels must be strictly increasing");
        }
    }
}

long long ipow(int base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

Mat kron_mat(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Mat pauli(int k) {
    Mat p(2, 2);
    const cplx i(0.0, 1.0);
    switch (k) {
        case 0: p << 1, 0, 0, 1; break;
        case 1: p << 0, 1, 1, 0; break;
        case 2: p << 0, -i, i, 0; break;
        case 3: p << 1, 0, 0, -1; break;
        default: throw DomainError("pauli index must be 0..3");
    }
    return p;
}

DenseOperator::DenseOperator(SiteList sites, Mat data, int local_dim, bool doubled)
    : sites_(std::move(sites)), data_(std::move(data)), local_dim_(local_dim), doubled_(doubled) {
    check_ordered(sites_);
    if (local_dim_ < 1) throw DomainError("local dimension must be positive");
    const long long expect = ipow(local_dim_, num_legs());
    if (data_.rows() != expect || data_.cols() != expect) {
        throw StructuralError("operator dimension " + std::to_string(data_.rows()) + "x" +
                              std::to_string(data_.cols()) + " does not equal d^n = " +
                              std::to_string(expect));
    }
}

DenseOperator DenseOperator::identity(SiteList sites, int local_dim) {
    const long long n = ipow(local_dim, static_cast<int>(sites.size()));
    return DenseOperator(std::move(sites), Mat::Identity(n, n), local_dim);
}

double DenseOperator::unitarity_residual() const {
    const Mat r = data_.adjoint() * data_ - Mat::Identity(data_.rows(), data_.cols());
    return r.cwiseAbs().maxCoeff();
}

bool DenseOperator::is_unitary(double tol) const { return unitarity_residual() <= tol; }

bool DenseOperator::is_hermitian(double tol) const {
    return (data_ - data_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void DenseOperator::certify_unitary(double tol) const {
    const double r = unitarity_residual();
    if (r > tol) {
        throw DomainError("operator is not unitary: max|U^dag U - 1| = " + std::to_string(r));
    }
}

StateVector::StateVector(SiteList sites, Vec data, int local_dim, bool doubled)
    : sites_(std::move(sites)), data_(std::move(data)), local_dim_(local_dim), doubled_(doubled) {
    check_ordered(sites_);
    const long long expect = ipow(local_dim_, num_legs());
    if (data_.size() != expect) {
        throw StructuralError("state dimension does not equal d^n");
    }
}

bool StateVector::is_normalized(double tol) const { return std::abs(data_.norm() - 1.0) <= tol; }

Vec permute_legs(const Vec& v, int num_legs, int local_dim, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != num_legs) throw StructuralError("permutation size mismatch");
    std::vector<long long> in_stride(num_legs);
    long long s = 1;
    for (int k = num_legs - 1; k >= 0; --k) {
        in_stride[k] = s;
        s *= local_dim;
    }
    if (v.size() != s) throw StructuralError("vector size does not match leg count");
    // Odometer over output digits; out leg i reads input leg perm[i].
    std::vector<long long> step(num_legs);
    for (int i = 0; i < num_legs; ++i) step[i] = in_stride[perm[i]];
    std::vector<int> digit(num_legs, 0);
    Vec out(v.size());
    long long in_index = 0;
    for (long long o = 0; o < v.size(); ++o) {
        out[o] = v[in_index];
        for (int i = num_legs - 1; i >= 0; --i) {
            if (++digit[i] < local_dim) {
                in_index += step[i];
                break;
            }
            digit[i] = 0;
            in_index -= step[i] * (local_dim - 1);
        }
    }
    return out;
}

namespace {

// Operator data as a flat vector with legs [columns..., rows...].
Vec op_as_vector(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat vector_as_op(const Vec& v, long long dim) {
    return Eigen::Map<const Mat>(v.data(), dim, dim);
}

std::vector<int> positions_of(const SiteList& sites, const SiteList& subset) {
    std::vector<int> pos;
    for (const auto& s : subset) {
        auto it = std::find(sites.begin(), sites.end(), s);
        if (it == sites.end()) {
            throw StructuralError("site " + to_string(s) + " is not in the object's site list");
        }
        pos.push_back(static_cast<int>(it - sites.begin()));
    }
    return pos;
}

SiteList sorted_unique(SiteList s) {
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw StructuralError("duplicate site in site set");
    }
    return s;
}

// Leg indices of the given site positions, including primed copies.
std::vector<int> legs_of(const std::vector<int>& site_pos, int n, bool doubled) {
    std::vector<int> legs = site_pos;
    if (doubled) {
        for (int p : site_pos) legs.push_back(n + p);
    }
    return legs;
}

std::vector<int> complement(const std::vector<int>& legs, int total) {
    std::vector<int> out;
    for (int k = 0; k < total; ++k) {
        if (std::find(legs.begin(), legs.end(), k) == legs.end()) out.push_back(k);
    }
    return out;
}

}  // namespace

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    if (a.local_dim() != b.local_dim()) throw StructuralError("kron of different local dimensions");
    if (a.doubled() || b.doubled()) throw StructuralError("kron of doubled operators is not supported");
    for (const auto& s : a.sites()) {
        if (std::find(b.sites().begin(), b.sites().end(), s) != b.sites().end()) {
            throw StructuralError("kron operands share site " + to_string(s));
        }
    }
    SiteList joined = a.sites();
    joined.insert(joined.end(), b.sites().begin(), b.sites().end());
    Mat data = kron_mat(a.data(), b.data());
    const int n = static_cast<int>(joined.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return joined[x] < joined[y]; });
    if (!std::is_sorted(joined.begin(), joined.end())) {
        std::vector<int> perm(2 * n);
        for (int i = 0; i < n; ++i) {
            perm[i] = order[i];
            perm[n + i] = n + order[i];
        }
        data = vector_as_op(permute_legs(op_as_vector(data), 2 * n, a.local_dim(), perm), data.rows());
        SiteList sorted(n);
        for (int i = 0; i < n; ++i) sorted[i] = joined[order[i]];
        joined = sorted;
    }
    return DenseOperator(joined, data, a.local_dim());
}

DenseOperator partial_trace(const DenseOperator& op, const SiteList& keep_in) {
    const SiteList keep = sorted_unique(keep_in);
    const int n = op.num_sites();
    const int d = op.local_dim();
    const std::vector<int> kpos = positions_of(op.sites(), keep);
    const int legs = op.num_legs();
    const std::vector<int> klegs = legs_of(kpos, n, op.doubled());
    const std::vector<int> tlegs = complement(klegs, legs);
    // Flat layout is [column legs, row legs]; reorder to [cK, cT, rK, rT].
    std::vector<int> perm;
    for (int k : klegs) perm.push_back(k);
    for (int k : tlegs) perm.push_back(k);
    for (int k : klegs) perm.push_back(legs + k);
    for (int k : tlegs) perm.push_back(legs + k);
    const Vec v = permute_legs(op_as_vector(op.data()), 2 * legs, d, perm);
    const long long dk = ipow(d, static_cast<int>(klegs.size()));
    const long long dt = ipow(d, static_cast<int>(tlegs.size()));
    Mat out = Mat::Zero(dk, dk);
    for (long long ck = 0; ck < dk; ++ck) {
        for (long long rk = 0; rk < dk; ++rk) {
            cplx acc = 0.0;
            for (long long t = 0; t < dt; ++t) acc += v[((ck * dt + t) * dk + rk) * dt + t];
            out(rk, ck) = acc;
        }
    }
    return DenseOperator(keep, out, d, op.doubled());
}

namespace {

// Column-major (rest x side) matrix of the state split at `side`.
Mat split_state(const StateVector& v, const SiteList& side_in, SiteList* side_sorted) {
    const SiteList side = sorted_unique(side_in);
    if (side_sorted) *side_sorted = side;
    const int n = v.num_sites();
    const std::vector<int> spos = positions_of(v.sites(), side);
    const std::vector<int> slegs = legs_of(spos, n, v.doubled());
    const std::vector<int> rlegs = complement(slegs, v.num_legs());
    std::vector<int> perm = slegs;
    perm.insert(perm.end(), rlegs.begin(), rlegs.end());
    const Vec p = permute_legs(v.data(), v.num_legs(), v.local_dim(), perm);
    const long long ds = ipow(v.local_dim(), static_cast<int>(slegs.size()));
    const long long dr = ipow(v.local_dim(), static_cast<int>(rlegs.size()));
    return Eigen::Map<const Mat>(p.data(), dr, ds);
}

}  // namespace

DenseOperator partial_trace(const StateVector& v, const SiteList& keep) {
    SiteList sorted;
    const Mat m = split_state(v, keep, &sorted);
    // rho(k, k') = sum_r psi(k, r) conj(psi(k', r)).
    Mat rho = m.transpose() * m.conjugate();
    return DenseOperator(sorted, rho, v.local_dim(), v.doubled());
}

RVec schmidt_values(const StateVector& v, const SiteList& side) {
    if (side.empty() || static_cast<int>(side.size()) >= v.num_sites()) {
        throw StructuralError("Schmidt cut has an empty side");
    }
    const Mat m = split_state(v, side, nullptr);
    RVec s;
    if (std::min(m.rows(), m.cols()) <= 256) {
        Eigen::BDCSVD<Mat> svd(m);
        s = svd.singularValues();
    } else {
        const Mat g = m.rows() <= m.cols() ? Mat(m * m.adjoint()) : Mat(m.adjoint() * m);
        Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
        const RVec ev = es.eigenvalues();
        s.resize(ev.size());
        for (Eigen::Index i = 0; i < ev.size(); ++i) s[i] = std::sqrt(std::max(0.0, ev[ev.size() - 1 - i]));
    }
    std::sort(s.data(), s.data() + s.size(), std::greater<double>());
    return s;
}

Mat herm_expm(const Mat& h, double scale, double tol) {
    if (h.rows() != h.cols()) throw StructuralError("generator must be square");
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw DomainError("generator is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const RVec w = es.eigenvalues();
    Vec phase(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) phase[i] = std::exp(cplx(0.0, -scale * w[i]));
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

DenseOperator herm_expm(const DenseOperator& generator, double scale, double tol) {
    return DenseOperator(generator.sites(), herm_expm(generator.data(), scale, tol), generator.local_dim());
}

}  // namespace otoclab
