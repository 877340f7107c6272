#include "few/qops.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace few::qops {

Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("hs_inner: operands must be square with equal dimension");
    Complex sum{0.0, 0.0};
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            sum += std::conj(a(i, j)) * b(i, j);
    return sum;
}

double hs_norm(const Matrix& a) { return std::sqrt(std::real(hs_inner(a, a))); }

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
    return solver.eigenvalues();
}

// --------------------------- generator bases --------------------------------

GeneratorBasis su_d_basis(int d) {
    if (d < 2) throw std::invalid_argument("su_d_basis: dimension must be >= 2");
    GeneratorBasis basis;
    basis.dim = d;
    basis.elements.reserve(static_cast<std::size_t>(d) * d);
    basis.elements.push_back(Matrix::Identity(d, d));
    // For each new level k: symmetric and antisymmetric pair generators with
    // all j < k, then the diagonal generator. This ordering reproduces the
    // Pauli set for d = 2 and the Gell-Mann set for d = 3.
    for (int k = 1; k < d; ++k) {
        for (int j = 0; j < k; ++j) {
            Matrix sym = Matrix::Zero(d, d);
            sym(j, k) = 1.0;
            sym(k, j) = 1.0;
            basis.elements.push_back(std::move(sym));
            Matrix asym = Matrix::Zero(d, d);
            asym(j, k) = Complex(0.0, -1.0);
            asym(k, j) = Complex(0.0, 1.0);
            basis.elements.push_back(std::move(asym));
        }
        Matrix diag = Matrix::Zero(d, d);
        const double scale = std::sqrt(2.0 / (static_cast<double>(k) * (k + 1)));
        for (int j = 0; j < k; ++j) diag(j, j) = scale;
        diag(k, k) = -scale * k;
        basis.elements.push_back(std::move(diag));
    }
    return basis;
}

std::vector<GeneratorBasis> bases_for(std::span<const int> dims) {
    std::vector<GeneratorBasis> out;
    out.reserve(dims.size());
    for (int d : dims) out.push_back(su_d_basis(d));
    return out;
}

// --------------------------- coefficient tensors ----------------------------

CoefficientTensor CoefficientTensor::zeros(std::span<const int> dims, double bound) {
    CoefficientTensor tau;
    std::size_t total = 1;
    for (int d : dims) {
        tau.shape.push_back(d * d);
        total *= static_cast<std::size_t>(d) * d;
    }
    tau.values.assign(total, 0.0);
    tau.lo.assign(total, -bound);
    tau.hi.assign(total, bound);
    return tau;
}

void CoefficientTensor::validate() const {
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    if (values.size() != total || lo.size() != total || hi.size() != total)
        throw std::invalid_argument("CoefficientTensor: value count does not match shape");
    if (values.empty() || values[0] != 0.0)
        throw std::invalid_argument("CoefficientTensor: identity-product coefficient must be zero");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] < lo[i] || values[i] > hi[i])
            throw std::invalid_argument("CoefficientTensor: value outside declared bounds");
}

namespace {

// product generator for a flat row-major index over shape [d1², ..., dn²]
Matrix product_generator(std::size_t flat, std::span<const GeneratorBasis> bases,
                         std::span<const int> shape) {
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t s = shape.size(); s-- > 0;) {
        idx[s] = flat % static_cast<std::size_t>(shape[s]);
        flat /= static_cast<std::size_t>(shape[s]);
    }
    Matrix g = bases[0].elements[idx[0]];
    for (std::size_t s = 1; s < bases.size(); ++s)
        g = tensor_product(g, bases[s].elements[idx[s]]);
    return g;
}

}  // namespace

Matrix assemble_observable(const CoefficientTensor& tau, std::span<const GeneratorBasis> bases) {
    if (tau.shape.size() != bases.size())
        throw std::invalid_argument("assemble_observable: rank mismatch between tau and bases");
    std::size_t total = 1;
    Eigen::Index dim = 1;
    for (std::size_t s = 0; s < bases.size(); ++s) {
        if (tau.shape[s] != bases[s].dim * bases[s].dim)
            throw std::invalid_argument("assemble_observable: tau shape does not match basis dimension");
        total *= static_cast<std::size_t>(tau.shape[s]);
        dim *= bases[s].dim;
    }
    if (tau.values.size() != total)
        throw std::invalid_argument("assemble_observable: tau value count does not match shape");
    if (tau.values[0] != 0.0)
        throw std::invalid_argument("assemble_observable: identity-product coefficient must be zero");

    Matrix z = Matrix::Zero(dim, dim);
    for (std::size_t f = 1; f < total; ++f) {
        const double c = tau.values[f];
        if (c == 0.0) continue;
        z.noalias() += c * product_generator(f, bases, tau.shape);
    }
    return z;
}

CoefficientTensor project_observable(const Matrix& z, std::span<const int> dims, double bound) {
    const auto bases = bases_for(dims);
    CoefficientTensor tau = CoefficientTensor::zeros(dims, bound);
    const std::size_t total = tau.values.size();
    for (std::size_t f = 1; f < total; ++f) {
        const Matrix g = product_generator(f, bases, tau.shape);
        // Tr(G²) factorizes: d for identity factors, 2 for the rest.
        double norm2 = 1.0;
        std::size_t rem = f;
        for (std::size_t s = tau.shape.size(); s-- > 0;) {
            const std::size_t i = rem % static_cast<std::size_t>(tau.shape[s]);
            rem /= static_cast<std::size_t>(tau.shape[s]);
            norm2 *= (i == 0) ? static_cast<double>(dims[s]) : 2.0;
        }
        const Complex coeff = hs_inner(g, z);
        if (std::abs(coeff.imag()) > 1e-9)
            throw std::invalid_argument("project_observable: input is not Hermitian");
        tau.values[f] = coeff.real() / norm2;
        if (std::abs(tau.values[f]) > bound) {
            tau.lo[f] = -std::abs(tau.values[f]);
            tau.hi[f] = std::abs(tau.values[f]);
        }
    }
    return tau;
}

}  // namespace few::qops
