#pragma once

#include "otoclab/tensor_core.hpp"

// Strided kernels applying a small matrix to a contiguous block of legs of a
// column-major array whose row (and column) index is a product of legs.
// Each has an OpenMP path and a serial path selected by `parallel`.
namespace otoclab::kernels {

// rows <- (1 (x) m (x) 1) rows, m acting on legs [pos, pos + width).
void apply_left(cplx* data, long long rows, long long cols, int num_legs, int pos, int width,
                const Mat& m, bool parallel, int local_dim = 2);

// data <- data (1 (x) m (x) 1), m acting on column legs [pos, pos + width).
void apply_right(cplx* data, long long rows, long long cols, int num_legs, int pos, int width,
                 const Mat& m, bool parallel, int local_dim = 2);

// op <- g^dagger op g for a two-site gate g on sites (pos, pos + 1).
void conjugate_two_site(Mat& op, int num_sites, int pos, const Mat& gate, bool parallel);

// Dense reference: builds 1 (x) g (x) 1 explicitly. Test and benchmark use only.
void conjugate_two_site_reference(Mat& op, int num_sites, int pos, const Mat& gate);

void set_num_threads(int n);
int max_threads();

}  // namespace otoclab::kernels
