#pragma once

#include "otoclab/brickwork.hpp"

namespace otoclab {

// Entropies in nats.
struct EntanglementReport {
    double renyi2 = 0.0;
    double von_neumann = 0.0;
    double geometric = 0.0;
    double purity = 1.0;
};

double renyi2_entropy(const DenseOperator& nu);
double von_neumann_entropy(const DenseOperator& nu);

// Report for the cut A A' | rest of a Choi state, from its Schmidt spectrum.
EntanglementReport entanglement_report(const ChoiState& c, const Region& a);
EntanglementReport entanglement_from_schmidt(const RVec& schmidt);

// 1 - (largest Schmidt coefficient)^2 across A A' | rest.
double geometric_entanglement(const ChoiState& c, const Region& a);

// Right-hand sides of the geometric and Renyi-2 bounds on G.
double bound_geometric(const EntanglementReport& r, long long d_a);
double bound_renyi(const EntanglementReport& r, long long d_a);

}  // namespace otoclab
