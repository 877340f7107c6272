#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "few/qops.hpp"
#include "few/rng.hpp"

#include <cmath>

using namespace few;
using qops::Complex;
using qops::Matrix;

namespace {

Matrix pauli(int i) {
    Matrix m(2, 2);
    switch (i) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

Matrix bell00_projector() {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    return psi * psi.adjoint();
}

}  // namespace

TEST_CASE("tensor product identities") {
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK((qops::tensor_product(i2, i2) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    const Matrix zz = qops::tensor_product(pauli(3), pauli(3));
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 1;
    expected(1, 1) = -1;
    expected(2, 2) = -1;
    expected(3, 3) = 1;
    CHECK((zz - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("index convention: subsystem 1 is most significant") {
    // |0><0| ⊗ |1><1| must project onto |01> (index 1)
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    const Matrix proj = qops::tensor_product(p0, p1);
    CHECK(proj(1, 1).real() == 1.0);
    CHECK(proj.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("reduction-map matrix reproduced by projector expansion") {
    const Matrix w = Matrix::Identity(4, 4) - 2.0 * bell00_projector();
    Matrix expected(4, 4);
    expected << 0, 0, 0, -1,
                0, 1, 0, 0,
                0, 0, 1, 0,
               -1, 0, 0, 0;
    CHECK((w - expected).cwiseAbs().maxCoeff() <= 1e-14);
    // the antidiagonal corners come from the XX and YY product terms
    const double txx = qops::hs_inner(qops::tensor_product(pauli(1), pauli(1)), w).real() / 4.0;
    const double tyy = qops::hs_inner(qops::tensor_product(pauli(2), pauli(2)), w).real() / 4.0;
    CHECK(txx == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(tyy == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hilbert-schmidt inner product and norm") {
    CHECK(qops::hs_norm(qops::tensor_product(pauli(3), pauli(3))) == doctest::Approx(2.0));
    CHECK(std::abs(qops::hs_inner(pauli(1), pauli(2))) <= 1e-14);

    const Matrix z = Matrix::Identity(4, 4) / 4.0 - bell00_projector();
    CHECK(qops::hs_norm(z) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)qops::hs_inner(pauli(1), Matrix::Identity(4, 4)), std::invalid_argument);
}

TEST_CASE("su(2) basis is the pauli set") {
    const auto basis = qops::su_d_basis(2);
    REQUIRE(basis.elements.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK((basis.elements[static_cast<std::size_t>(i)] - pauli(i)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("su(3) basis matches the gell-mann matrices") {
    const auto basis = qops::su_d_basis(3);
    REQUIRE(basis.elements.size() == 9);

    Matrix lambda8(3, 3);
    lambda8 << 1, 0, 0, 0, 1, 0, 0, 0, -2;
    lambda8 /= std::sqrt(3.0);
    CHECK((basis.elements[8] - lambda8).cwiseAbs().maxCoeff() <= 1e-15);

    // λ7 is the antisymmetric partner of λ6, not a duplicate of it
    const Matrix& l7 = basis.elements[7];
    CHECK(l7(1, 2) == Complex(0, -1));
    CHECK(l7(2, 1) == Complex(0, 1));
    CHECK(std::abs(qops::hs_inner(basis.elements[6], l7)) <= 1e-14);
}

TEST_CASE("generator bases are orthonormal for d = 2..5") {
    for (int d = 2; d <= 5; ++d) {
        CAPTURE(d);
        const auto basis = qops::su_d_basis(d);
        REQUIRE(static_cast<int>(basis.elements.size()) == d * d);
        for (std::size_t j = 0; j < basis.elements.size(); ++j) {
            CHECK(qops::is_hermitian(basis.elements[j], 1e-14));
            if (j >= 1) CHECK(std::abs(basis.elements[j].trace()) <= 1e-14);
            for (std::size_t k = 1; k <= j; ++k) {
                const Complex ip = qops::hs_inner(basis.elements[j], basis.elements[k]);
                const double expected = (j == k) ? 2.0 : 0.0;
                CHECK(std::abs(ip - Complex(expected, 0)) <= 1e-13);
            }
        }
    }
    CHECK_THROWS_AS((void)qops::su_d_basis(1), std::invalid_argument);
}

TEST_CASE("assemble_observable basics") {
    const std::vector<int> dims{2, 2};
    const auto bases = qops::bases_for(dims);

    auto tau = qops::CoefficientTensor::zeros(dims, 1.0);
    CHECK(qops::assemble_observable(tau, bases).cwiseAbs().maxCoeff() == 0.0);

    tau.values[15] = 0.5;  // (3,3) flat index = 3*4+3
    const Matrix z = qops::assemble_observable(tau, bases);
    CHECK((z - 0.5 * qops::tensor_product(pauli(3), pauli(3))).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(qops::hs_norm(z) == doctest::Approx(1.0).epsilon(1e-12));

    auto bad = qops::CoefficientTensor::zeros(dims, 1.0);
    bad.values[0] = 0.1;
    CHECK_THROWS_AS((void)qops::assemble_observable(bad, bases), std::invalid_argument);

    const auto bases3 = qops::bases_for(std::vector<int>{3, 3});
    CHECK_THROWS_AS((void)qops::assemble_observable(tau, bases3), std::invalid_argument);
}

TEST_CASE("assembled observables are traceless and hermitian on random tensors") {
    Rng rng(2024);
    const std::vector<int> dims{2, 3};
    const auto bases = qops::bases_for(dims);
    for (int trial = 0; trial < 20; ++trial) {
        auto tau = qops::CoefficientTensor::zeros(dims, 1.0);
        for (std::size_t i = 1; i < tau.values.size(); ++i) tau.values[i] = rng.uniform(-1.0, 1.0);
        const Matrix z = qops::assemble_observable(tau, bases);
        CHECK(std::abs(z.trace()) <= 1e-12);
        CHECK((z - z.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("norm identity for qubit systems: ||Z||^2 = 2^n sum tau^2") {
    Rng rng(77);
    const std::vector<int> dims{2, 2};
    const auto bases = qops::bases_for(dims);
    for (int trial = 0; trial < 10; ++trial) {
        auto tau = qops::CoefficientTensor::zeros(dims, 1.0);
        double sum = 0.0;
        for (std::size_t i = 1; i < tau.values.size(); ++i) {
            tau.values[i] = rng.uniform(-1.0, 1.0);
            sum += tau.values[i] * tau.values[i];
        }
        const double norm = qops::hs_norm(qops::assemble_observable(tau, bases));
        CHECK(norm * norm == doctest::Approx(4.0 * sum).epsilon(1e-10));
    }
}

TEST_CASE("projection round-trips assembly") {
    Rng rng(4242);
    for (const auto& dims : {std::vector<int>{2, 2}, std::vector<int>{3, 3}, std::vector<int>{2, 2, 2}}) {
        CAPTURE(dims.size());
        const auto bases = qops::bases_for(dims);
        auto tau = qops::CoefficientTensor::zeros(dims, 1.0);
        for (std::size_t i = 1; i < tau.values.size(); ++i) tau.values[i] = rng.uniform(-1.0, 1.0);
        const Matrix z = qops::assemble_observable(tau, bases);
        const auto back = qops::project_observable(z, dims, 1.0);
        REQUIRE(back.values.size() == tau.values.size());
        for (std::size_t i = 0; i < tau.values.size(); ++i)
            CHECK(back.values[i] == doctest::Approx(tau.values[i]).epsilon(1e-10));
        // assemble(project(z)) == z
        const Matrix z2 = qops::assemble_observable(back, bases);
        CHECK((z2 - z).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("two-qubit projection uses the /4 normalization") {
    const Matrix z = Matrix::Identity(4, 4) / 4.0 - bell00_projector();
    const std::vector<int> dims{2, 2};
    const auto tau = qops::project_observable(z, dims, 1.0);
    // direct projection formula: tau_jk = Tr(Z sigma_j x sigma_k) / 4
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            if (j == 0 && k == 0) continue;
            const double direct =
                qops::hs_inner(qops::tensor_product(pauli(j), pauli(k)), z).real() / 4.0;
            CHECK(tau.values[static_cast<std::size_t>(j * 4 + k)] ==
                  doctest::Approx(direct).epsilon(1e-12));
        }
}
