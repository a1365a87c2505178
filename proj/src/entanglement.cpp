#include "otoclab/entanglement.hpp"

#include <cmath>

namespace otoclab {

namespace {

constexpr double kClamp = 1e-14;

RVec density_spectrum(const DenseOperator& nu) {
    const double tr = nu.data().trace().real();
    if (std::abs(tr - 1.0) > 1e-8) {
        throw DomainError("density operator trace " + std::to_string(tr) + " differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(nu.data(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double entropy_of(const RVec& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > kClamp) s -= p[i] * std::log(p[i]);
    }
    return s;
}

void check_da(long long d_a) {
    if (d_a < 2) throw DomainError("region dimension d_A must be at least 2");
}

}  // namespace

double renyi2_entropy(const DenseOperator& nu) {
    const double tr = nu.data().trace().real();
    if (std::abs(tr - 1.0) > 1e-8) {
        throw DomainError("density operator trace " + std::to_string(tr) + " differs from 1");
    }
    // tr[nu^2] = sum |nu_ij|^2 for Hermitian nu.
    return -std::log(nu.data().squaredNorm());
}

double von_neumann_entropy(const DenseOperator& nu) { return entropy_of(density_spectrum(nu)); }

EntanglementReport entanglement_from_schmidt(const RVec& schmidt) {
    const RVec p = schmidt.array().square();
    EntanglementReport r;
    r.purity = p.array().square().sum();
    r.renyi2 = -std::log(r.purity);
    r.von_neumann = entropy_of(p);
    r.geometric = std::max(0.0, 1.0 - p.maxCoeff());
    return r;
}

EntanglementReport entanglement_report(const ChoiState& c, const Region& a) {
    check_region(a, c.lc_lo, c.lc_hi);
    if (a.size() >= c.vec.num_sites()) {
        // No complement inside the window: nu_A is pure.
        return EntanglementReport{};
    }
    return entanglement_from_schmidt(schmidt_values(c.vec, a.sites()));
}

double geometric_entanglement(const ChoiState& c, const Region& a) {
    return entanglement_report(c, a).geometric;
}

double bound_geometric(const EntanglementReport& r, long long d_a) {
    check_da(d_a);
    const double d2 = static_cast<double>(d_a) * d_a;
    return 1.0 - d2 / (d2 - 1.0) * r.geometric;
}

double bound_renyi(const EntanglementReport& r, long long d_a) {
    check_da(d_a);
    const double d2 = static_cast<double>(d_a) * d_a;
    return (d2 * std::exp(-0.5 * r.renyi2) - 1.0) / (d2 - 1.0);
}

}  // namespace otoclab
