#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "few/innermin.hpp"

#include <cmath>

using namespace few;
using innermin::InnerMinConfig;
using qops::Matrix;
using witness::TracelessObservable;

namespace {

const double kSqrt3 = std::sqrt(3.0);
const std::vector<int> kTwoQubits{2, 2};

TracelessObservable observable_from(const Matrix& m) {
    return witness::from_matrix(m, kTwoQubits);
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

TracelessObservable zz_half() {
    return observable_from(qops::tensor_product(sigma_z(), sigma_z()) / 2.0);
}

TracelessObservable z_i_half() {
    return observable_from(qops::tensor_product(sigma_z(), Matrix(Matrix::Identity(2, 2))) / 2.0);
}

TracelessObservable bell_candidate() {
    const Matrix z = Matrix::Identity(4, 4) / 4.0 - states::bell_state(0, 0).matrix;
    return witness::normalize(observable_from(z));
}

TracelessObservable random_normalized_z(std::uint64_t seed) {
    Rng rng(seed);
    auto tau = qops::CoefficientTensor::zeros(kTwoQubits, 1.0);
    for (std::size_t i = 1; i < tau.values.size(); ++i) tau.values[i] = rng.uniform(-1.0, 1.0);
    return witness::normalize(witness::make_observable(tau, kTwoQubits));
}

}  // namespace

TEST_CASE("config validation") {
    InnerMinConfig cfg;
    cfg.n_refine = cfg.n_probe + 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = InnerMinConfig{};
    cfg.grad_step = 0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK(InnerMinConfig::defaults_for(kTwoQubits).n_probe == 400);
    CHECK(InnerMinConfig::defaults_for(std::vector<int>{2, 2, 2}).n_probe == 500);
    CHECK(InnerMinConfig::defaults_for(std::vector<int>{3, 3}).n_probe == 800);
}

TEST_CASE("analytic minima on two qubits") {
    const InnerMinConfig cfg = InnerMinConfig::defaults_for(kTwoQubits);

    // Tr(Z rho_s) = cos(2β1)cos(2β2)/2 has minimum -1/2
    const auto r1 = innermin::min_sep_expectation(zz_half(), kTwoQubits, cfg, 42);
    CHECK(r1.mu == doctest::Approx(-0.5).epsilon(1e-8));

    const auto r2 = innermin::min_sep_expectation(z_i_half(), kTwoQubits, cfg, 42);
    CHECK(r2.mu == doctest::Approx(-0.5).epsilon(1e-8));

    // bell candidate: minimum -1/(2 sqrt 3) at maximal product overlap 1/2
    const auto r3 = innermin::min_sep_expectation(bell_candidate(), kTwoQubits, cfg, 42);
    CHECK(r3.mu == doctest::Approx(-1.0 / (2.0 * kSqrt3)).epsilon(1e-8));

    // the argmin realizes the reported value
    innermin::ProductExpectation eval(bell_candidate().matrix, kTwoQubits);
    CHECK(eval(r3.argmin.angles) == doctest::Approx(r3.mu).epsilon(1e-10));
}

TEST_CASE("refinements never increase their start value") {
    const InnerMinConfig cfg = InnerMinConfig::defaults_for(kTwoQubits);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto z = random_normalized_z(seed);
        const auto result = innermin::min_sep_expectation(z, kTwoQubits, cfg, seed);
        REQUIRE(result.refinements.size() == static_cast<std::size_t>(cfg.n_refine));
        double min_probe = std::numeric_limits<double>::infinity();
        for (const auto& r : result.refinements) {
            CHECK(r.final_value <= r.start_value + 1e-12);
            min_probe = std::min(min_probe, r.start_value);
        }
        CHECK(result.mu <= min_probe + 1e-12);
        CHECK(result.probes_used == cfg.n_probe);
    }
}

TEST_CASE("mu is strictly negative for normalized nonzero z") {
    const InnerMinConfig cfg = InnerMinConfig::defaults_for(kTwoQubits);
    for (std::uint64_t seed = 10; seed < 30; ++seed) {
        const auto z = random_normalized_z(seed);
        const auto result = innermin::min_sep_expectation(z, kTwoQubits, cfg, seed);
        CHECK(result.mu < -1e-9);
    }
}

TEST_CASE("budget monotonicity under a shared seed prefix") {
    const auto z = random_normalized_z(555);
    InnerMinConfig small = InnerMinConfig::defaults_for(kTwoQubits);
    small.n_probe = 50;
    small.n_refine = 2;
    InnerMinConfig big = small;
    big.n_probe = 200;
    big.n_refine = 6;
    const auto rs = innermin::min_sep_expectation(z, kTwoQubits, small, 99);
    const auto rb = innermin::min_sep_expectation(z, kTwoQubits, big, 99);
    CHECK(rb.mu <= rs.mu + 1e-12);
}

TEST_CASE("grid oracle analytic values") {
    CHECK(innermin::grid_oracle(zz_half(), kTwoQubits, 25) == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(innermin::grid_oracle(bell_candidate(), kTwoQubits, 41) ==
          doctest::Approx(-1.0 / (2.0 * kSqrt3)).epsilon(2e-3));
}

TEST_CASE("grid oracle refines with resolution and bounds the true minimum") {
    const auto z = random_normalized_z(77);
    const double coarse = innermin::grid_oracle(z, kTwoQubits, 9);
    const double fine = innermin::grid_oracle(z, kTwoQubits, 17);
    CHECK(fine <= coarse + 1e-12);  // 17-point grid contains the 9-point grid

    const InnerMinConfig cfg = InnerMinConfig::defaults_for(kTwoQubits);
    const auto refined = innermin::min_sep_expectation(z, kTwoQubits, cfg, 7);
    CHECK(refined.mu <= fine + 1e-12);
}

TEST_CASE("grid oracle guards its evaluation budget") {
    const auto z = random_normalized_z(1);
    CHECK_THROWS_AS((void)innermin::grid_oracle(z, kTwoQubits, 801), std::invalid_argument);
}

TEST_CASE("minimizer matches the oracle on random two-qubit operators") {
    const InnerMinConfig cfg = InnerMinConfig::defaults_for(kTwoQubits);
    for (std::uint64_t seed = 100; seed < 105; ++seed) {
        const auto z = random_normalized_z(seed);
        const double oracle = innermin::grid_oracle(z, kTwoQubits, 41);
        const auto result = innermin::min_sep_expectation(z, kTwoQubits, cfg, seed);
        CHECK(result.mu <= oracle + 1e-3);
    }
}

TEST_CASE("argmin invariance under positive scaling") {
    const auto z = random_normalized_z(2718);
    TracelessObservable half = z;
    half.matrix *= 0.5;
    for (auto& v : half.tau.values) v *= 0.5;
    half.normalized = false;

    const InnerMinConfig cfg = InnerMinConfig::defaults_for(kTwoQubits);
    const auto a = innermin::min_sep_expectation(z, kTwoQubits, cfg, 31);
    const auto b = innermin::min_sep_expectation(half, kTwoQubits, cfg, 31);
    CHECK(b.mu == doctest::Approx(0.5 * a.mu).epsilon(1e-9));
    const auto ka = states::product_ket(a.argmin.dims, a.argmin.angles);
    const auto kb = states::product_ket(b.argmin.dims, b.argmin.angles);
    CHECK(std::abs(ka.dot(kb)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("three qubit and two qutrit minimization stays consistent") {
    // max product overlap with |W> is 4/9, so min of I/8 - |W><W| over
    // products is (normalized) (1/8 - 4/9)/norm
    const std::vector<int> dims{2, 2, 2};
    const auto w = states::ghz_w_mixture(0.0);
    const Matrix base = Matrix::Identity(8, 8) / 8.0 - w.matrix;
    const auto z = witness::normalize(witness::from_matrix(base, dims));
    const double norm = qops::hs_norm(base);
    const auto cfg = InnerMinConfig::defaults_for(dims);
    const auto result = innermin::min_sep_expectation(z, dims, cfg, 5);
    CHECK(result.mu == doctest::Approx((0.125 - 4.0 / 9.0) / norm).epsilon(1e-7));

    // two separable qutrits: <lambda8> ranges over [-2/sqrt3, 1/sqrt3] per
    // factor, so min of (lambda8 x lambda8)/2 is (-2/sqrt3)(1/sqrt3)/2 = -1/3
    const std::vector<int> qdims{3, 3};
    const auto l8 = qops::su_d_basis(3).elements[8];
    const auto zq = witness::from_matrix(qops::tensor_product(l8, l8) / 2.0, qdims);
    const auto qcfg = InnerMinConfig::defaults_for(qdims);
    const auto qresult = innermin::min_sep_expectation(zq, qdims, qcfg, 5);
    CHECK(qresult.mu == doctest::Approx(-1.0 / 3.0).epsilon(1e-7));
}
