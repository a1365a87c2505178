#include "otoclab/kernels.hpp"

#include <omp.h>

#include <vector>

namespace otoclab::kernels {

namespace {

constexpr long long kParallelThreshold = 1 << 14;

struct BlockGeometry {
    long long block;   // local_dim^width
    long long stride;  // local_dim^(num_legs - pos - width)
    long long groups;  // number of (hi, lo) index pairs
};

BlockGeometry geometry(long long extent, int num_legs, int pos, int width, int local_dim) {
    if (pos < 0 || width < 1 || pos + width > num_legs) {
        throw StructuralError("kernel block outside leg range");
    }
    BlockGeometry g;
    g.block = ipow(local_dim, width);
    g.stride = ipow(local_dim, num_legs - pos - width);
    if (ipow(local_dim, num_legs) != extent) {
        throw StructuralError("kernel extent does not match leg count");
    }
    g.groups = extent / g.block;
    return g;
}

inline long long group_base(long long group, const BlockGeometry& g) {
    long long hi = group / g.stride;
    long long lo = group % g.stride;
    return hi * g.block * g.stride + lo;
}

}  // namespace

void apply_left(cplx* data, long long rows, long long cols, int num_legs, int pos, int width,
                const Mat& m, bool parallel, int local_dim) {
    const BlockGeometry g = geometry(rows, num_legs, pos, width, local_dim);
    if (m.rows() != g.block || m.cols() != g.block) {
        throw StructuralError("kernel matrix size does not match block");
    }
    const long long total = cols * g.groups;
    const long long b = g.block;
    const bool go_parallel = parallel && total * b * b > kParallelThreshold;

#pragma omp parallel if (go_parallel)
    {
        std::vector<cplx> in(b);
#pragma omp for schedule(static)
        for (long long task = 0; task < total; ++task) {
            const long long col = task / g.groups;
            const long long base = group_base(task % g.groups, g);
            cplx* column = data + col * rows;
            for (long long j = 0; j < b; ++j) in[j] = column[base + j * g.stride];
            for (long long i = 0; i < b; ++i) {
                cplx acc = 0.0;
                for (long long j = 0; j < b; ++j) acc += m(i, j) * in[j];
                column[base + i * g.stride] = acc;
            }
        }
    }
}

void apply_right(cplx* data, long long rows, long long cols, int num_legs, int pos, int width,
                 const Mat& m, bool parallel, int local_dim) {
    const BlockGeometry g = geometry(cols, num_legs, pos, width, local_dim);
    if (m.rows() != g.block || m.cols() != g.block) {
        throw StructuralError("kernel matrix size does not match block");
    }
    const long long b = g.block;
    const bool go_parallel = parallel && g.groups * rows * b * b > kParallelThreshold;

#pragma omp parallel if (go_parallel)
    {
        std::vector<cplx> in(b);
        std::vector<cplx*> ptr(b);
#pragma omp for schedule(static)
        for (long long group = 0; group < g.groups; ++group) {
            const long long base = group_base(group, g);
            for (long long j = 0; j < b; ++j) ptr[j] = data + (base + j * g.stride) * rows;
            for (long long r = 0; r < rows; ++r) {
                for (long long j = 0; j < b; ++j) in[j] = ptr[j][r];
                for (long long i = 0; i < b; ++i) {
                    cplx acc = 0.0;
                    for (long long j = 0; j < b; ++j) acc += in[j] * m(j, i);
                    ptr[i][r] = acc;
                }
            }
        }
    }
}

void conjugate_two_site(Mat& op, int num_sites, int pos, const Mat& gate, bool parallel) {
    const Mat gd = gate.adjoint();
    apply_left(op.data(), op.rows(), op.cols(), num_sites, pos, 2, gd, parallel);
    apply_right(op.data(), op.rows(), op.cols(), num_sites, pos, 2, gate, parallel);
}

void conjugate_two_site_reference(Mat& op, int num_sites, int pos, const Mat& gate) {
    Mat full = Mat::Identity(1, 1);
    const Mat id2 = Mat::Identity(2, 2);
    for (int s = 0; s < num_sites;) {
        if (s == pos) {
            full = kron_mat(full, gate);
            s += 2;
        } else {
            full = kron_mat(full, id2);
            s += 1;
        }
    }
    op = full.adjoint() * op * full;
}

void set_num_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace otoclab::kernels
