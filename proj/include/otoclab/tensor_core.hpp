#pragma once

#include <Eigen/Dense>
#include <complex>
#include <compare>
#include <string>
#include <vector>

#include "otoclab/errors.hpp"

namespace otoclab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-10;

// Half-integer chain position, stored as twice the label.
struct SiteIndex {
    int twice = 0;

    static SiteIndex from_label(double label);
    static constexpr SiteIndex from_twice(int t) { return SiteIndex{t}; }
    double label() const { return twice / 2.0; }
    auto operator<=>(const SiteIndex&) const = default;
};

std::string to_string(SiteIndex s);

using SiteList = std::vector<SiteIndex>;

// Consecutive sites lo, lo + 1/2, ..., hi.
SiteList site_range(SiteIndex lo, SiteIndex hi);
void check_ordered(const SiteList& sites);

long long ipow(int base, int exp);

// Operator on an ordered site list. A doubled operator acts on the sites
// followed by a primed copy of the same sites, so its dimension is d^(2n).
class DenseOperator {
public:
    DenseOperator() = default;
    DenseOperator(SiteList sites, Mat data, int local_dim = 2, bool doubled = false);

    static DenseOperator identity(SiteList sites, int local_dim = 2);

    const SiteList& sites() const { return sites_; }
    const Mat& data() const { return data_; }
    int local_dim() const { return local_dim_; }
    bool doubled() const { return doubled_; }
    int num_sites() const { return static_cast<int>(sites_.size()); }
    int num_legs() const { return doubled_ ? 2 * num_sites() : num_sites(); }
    long long dim() const { return data_.rows(); }

    double unitarity_residual() const;
    bool is_unitary(double tol = kDefaultTol) const;
    bool is_hermitian(double tol = kDefaultTol) const;
    // Throws DomainError unless unitary within tol.
    void certify_unitary(double tol = kDefaultTol) const;

private:
    SiteList sites_;
    Mat data_;
    int local_dim_ = 2;
    bool doubled_ = false;
};

// Pure state on an ordered site list; doubled states carry the primed copy
// after the unprimed legs.
class StateVector {
public:
    StateVector() = default;
    StateVector(SiteList sites, Vec data, int local_dim = 2, bool doubled = false);

    const SiteList& sites() const { return sites_; }
    const Vec& data() const { return data_; }
    int local_dim() const { return local_dim_; }
    bool doubled() const { return doubled_; }
    int num_sites() const { return static_cast<int>(sites_.size()); }
    int num_legs() const { return doubled_ ? 2 * num_sites() : num_sites(); }
    bool is_normalized(double tol = kDefaultTol) const;

private:
    SiteList sites_;
    Vec data_;
    int local_dim_ = 2;
    bool doubled_ = false;
};

// Tensor legs: result axis i is input axis perm[i]. Leg 0 is the most
// significant digit of the flat index.
Vec permute_legs(const Vec& v, int num_legs, int local_dim, const std::vector<int>& perm);

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);

DenseOperator partial_trace(const DenseOperator& op, const SiteList& keep);
// Reduced density of |v><v| on keep (and its primed copy for doubled v).
DenseOperator partial_trace(const StateVector& v, const SiteList& keep);

// Descending Schmidt coefficients for the cut (side | rest). For doubled
// states the side includes the primed copies of its sites.
RVec schmidt_values(const StateVector& v, const SiteList& side);

// exp(-i * scale * H) by Hermitian eigendecomposition.
DenseOperator herm_expm(const DenseOperator& generator, double scale, double tol = kDefaultTol);
Mat herm_expm(const Mat& generator, double scale, double tol = kDefaultTol);

// Pauli matrices 0..3 = 1, X, Y, Z.
Mat pauli(int k);
Mat kron_mat(const Mat& a, const Mat& b);

}  // namespace otoclab
