#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "few/measure.hpp"

#include "support/oracles.hpp"

#include <json.hpp>

#include <cmath>

using namespace few;
using measure::Verdict;

namespace {

const std::vector<int> kTwoQubits{2, 2};

ga::GaConfig quick_ga(std::uint64_t seed, int pop = 40, int gens = 12) {
    ga::GaConfig cfg;
    cfg.pop_size = pop;
    cfg.generations = gens;
    cfg.seed = seed;
    return cfg;
}

innermin::InnerMinConfig quick_inner(int probes = 120, int refine = 3) {
    innermin::InnerMinConfig cfg;
    cfg.n_probe = probes;
    cfg.n_refine = refine;
    return cfg;
}

}  // namespace

TEST_CASE("maximally mixed input stays undetected with e = 0") {
    const auto result =
        measure::compute_few_measure(states::werner(0.25), quick_ga(3), quick_inner());
    CHECK(result.e_value == 0.0);
    CHECK(result.best_fitness <= 0.0);
    CHECK(result.verdict == Verdict::Undetected);
    CHECK_FALSE(result.self_check_ran);
    CHECK(result.witness.mu == result.mu);
}

TEST_CASE("bell state is certified with a self-verified witness") {
    const auto bell = states::bell_state(0, 0);
    const auto result =
        measure::compute_few_measure(bell, quick_ga(11, 60, 25), quick_inner(200, 4), 2, 500);
    CHECK(result.e_value > 0.3);
    CHECK(result.e_value <= 1.0 / std::sqrt(3.0) + 1e-9);
    CHECK(result.e_value == std::max(0.0, result.best_fitness));
    CHECK(result.verdict == Verdict::EntanglementCertified);
    REQUIRE(result.self_check_ran);
    CHECK(result.self_check.pass);
    CHECK(result.witness.mu == result.mu);
    // witness acts negatively on the target
    CHECK(witness::expectation(result.witness.matrix, bell) < -1e-6);
    // and e = mu - Tr(Z rho) holds for the returned pieces
    CHECK(result.e_value ==
          doctest::Approx(result.mu - witness::expectation(result.best_z, bell)).epsilon(1e-12));
}

TEST_CASE("budget monotonicity under a shared seed") {
    const auto bell = states::bell_state(0, 0);
    const auto small = measure::compute_few_measure(bell, quick_ga(5, 30, 6), quick_inner());
    const auto big = measure::compute_few_measure(bell, quick_ga(5, 30, 12), quick_inner());
    CHECK(big.e_value >= small.e_value - 0.01);
}

TEST_CASE("local unitary invariance is exact for identity rotations") {
    const auto bell = states::bell_state(0, 0);
    std::vector<qops::Matrix> identity{qops::Matrix::Identity(2, 2),
                                       qops::Matrix::Identity(2, 2)};
    const auto cfg = quick_ga(9, 30, 8);
    const auto check =
        measure::check_lu_invariance(bell, identity, cfg, cfg, quick_inner(), 2);
    CHECK(check.delta == 0.0);
    CHECK(check.e_original == check.e_rotated);
}

TEST_CASE("convexity endpoints are exact") {
    const auto rho = states::bell_state(0, 0);
    const auto sigma = states::werner(0.25);
    const auto check =
        measure::check_convexity(rho, sigma, 0.0, quick_ga(4, 30, 6), quick_inner(), 2);
    CHECK(check.lhs == check.rhs);
    CHECK(check.slack_ok);

    CHECK_THROWS_AS((void)measure::check_convexity(rho, sigma, 1.5, quick_ga(4), quick_inner()),
                    std::invalid_argument);
}

TEST_CASE("equal mixture of two bell states is separable") {
    // oracle for the convexity example: PPT in 2x2 is conclusive
    const auto a = states::bell_state(0, 0);
    const auto b = states::bell_state(0, 1);
    const qops::Matrix mix = 0.5 * a.matrix + 0.5 * b.matrix;
    CHECK(test_oracles::min_pt_eigenvalue(mix, kTwoQubits, 1) >= -1e-12);
}

TEST_CASE("result json carries the replay information") {
    const auto result =
        measure::compute_few_measure(states::werner(0.25), quick_ga(42, 24, 4), quick_inner());
    const auto j = measure::result_to_json(result);
    CHECK(j.at("e_value").get<double>() == result.e_value);
    CHECK(j.at("verdict").get<std::string>() == "Undetected");
    CHECK(j.at("ga").at("seed").get<std::uint64_t>() == 42);
    CHECK(j.at("ga").at("pop_size").get<int>() == 24);
    CHECK(j.at("inner").at("n_probe").get<int>() == 120);
    CHECK(j.at("trace").size() == 4);
    CHECK(j.at("witness").at("mu").get<double>() == result.mu);
    CHECK(j.at("dims").get<std::vector<int>>() == kTwoQubits);
}

TEST_CASE("verdict names") {
    CHECK(std::string(measure::verdict_name(Verdict::EntanglementCertified)) ==
          "EntanglementCertified");
    CHECK(std::string(measure::verdict_name(Verdict::Undetected)) == "Undetected");
}
