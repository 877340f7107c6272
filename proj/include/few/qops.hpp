#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace few::qops {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// --------------------------- elementary operations --------------------------

// Kronecker product; the first factor owns the slowest-varying index, so
// kron(A, B) acts on |a>|b> ordered as |00>,|01>,|10>,|11>.
Matrix tensor_product(const Matrix& a, const Matrix& b);
Vector tensor_product(const Vector& a, const Vector& b);

// Hilbert-Schmidt inner product Tr(a† b); throws on dimension mismatch.
Complex hs_inner(const Matrix& a, const Matrix& b);

// sqrt(Re Tr(a† a))
double hs_norm(const Matrix& a);

bool is_hermitian(const Matrix& m, double tol = 1e-12);

// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

// --------------------------- generator bases --------------------------------

// Orthogonal Hermitian operator basis of a d-dimensional subsystem:
// element 0 is I_d, elements 1..d²-1 are traceless with Tr(g_j g_k) = 2 δ_jk.
// d = 2 gives the Pauli matrices, d = 3 the Gell-Mann matrices.
struct GeneratorBasis {
    int dim = 0;
    std::vector<Matrix> elements;
};

GeneratorBasis su_d_basis(int d);

std::vector<GeneratorBasis> bases_for(std::span<const int> dims);

// --------------------------- coefficient tensors ----------------------------

// Real expansion coefficients of a traceless Hermitian operator over a
// product generator basis. Flat row-major storage over shape [d1², ..., dn²];
// the identity-product coefficient (flat index 0) is pinned to zero.
struct CoefficientTensor {
    std::vector<int> shape;
    std::vector<double> values;
    std::vector<double> lo;
    std::vector<double> hi;

    static CoefficientTensor zeros(std::span<const int> dims, double bound);

    std::size_t size() const { return values.size(); }
    void validate() const;  // throws on violated invariants
};

// Σ τ_{i1..in} g_{i1} ⊗ ... ⊗ g_{in}. Hermitian and traceless by construction.
// Throws if tau's shape does not match the bases or tau[0,...,0] != 0.
Matrix assemble_observable(const CoefficientTensor& tau, std::span<const GeneratorBasis> bases);

// Inverse of assemble_observable on traceless Hermitian input:
// τ_f = Tr(z · G_f) / Tr(G_f²) for each product generator G_f.
CoefficientTensor project_observable(const Matrix& z, std::span<const int> dims, double bound);

}  // namespace few::qops
