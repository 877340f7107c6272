#pragma once

#include "few/qops.hpp"
#include "few/states.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace few::witness {

using qops::CoefficientTensor;
using qops::Matrix;

// Candidate operator Z: traceless Hermitian, expanded over product generator
// bases as a real coefficient tensor plus the materialized matrix.
struct TracelessObservable {
    CoefficientTensor tau;
    Matrix matrix;
    std::vector<int> dims;
    bool normalized = false;
};

// Materializes tau over the su(d) bases for dims; validates tau on entry.
TracelessObservable make_observable(CoefficientTensor tau, std::span<const int> dims);

// Reconstructs the coefficient tensor by basis projection. Input must be
// traceless and Hermitian within 1e-10; the materialized matrix round-trips.
TracelessObservable from_matrix(const Matrix& z, std::span<const int> dims);

// Rescales onto the unit Hilbert-Schmidt sphere. Throws on zero operator.
TracelessObservable normalize(const TracelessObservable& z);

// Re(Tr(op ρ)); throws on dimension mismatch or imaginary residue > 1e-10.
double expectation(const Matrix& op, const states::DensityMatrix& rho);
double expectation(const TracelessObservable& z, const states::DensityMatrix& rho);

// W = Z - μI
struct Witness {
    Matrix matrix;
    double mu = 0.0;
    TracelessObservable source;
};

Witness extract_witness(const TracelessObservable& z, double mu);

inline constexpr double kTolNeg = 1e-6;  // required margin of Tr(Wρ) below zero
inline constexpr double kTolSep = 1e-6;  // allowed dip below zero on sampled separables

// Outcome of the sampling check of the two witness conditions. The separable
// side is heuristic: pass certifies "no violation found within budget",
// not a global minimum.
struct VerificationReport {
    double target_expectation = 0.0;        // Tr(W ρ)
    double min_separable_expectation = 0.0; // min over sampled+refined product states
    states::ProductStateParams argmin;
    std::uint64_t budget = 0;
    bool pass = false;
    std::string reason;
};

VerificationReport verify_witness(const Witness& w, const states::DensityMatrix& rho,
                                  std::uint64_t budget, std::uint64_t seed, int jobs = 0);

// --------------------------- serialization ----------------------------------

struct WitnessProvenance {
    std::uint64_t seed = 0;
    int generations = 0;
    double fitness = 0.0;
};

nlohmann::json witness_to_json(const Witness& w, const WitnessProvenance& prov);
Witness witness_from_json(const nlohmann::json& j);
Witness load_witness(const std::string& path);

}  // namespace few::witness
