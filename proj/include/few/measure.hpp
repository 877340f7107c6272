#pragma once

#include "few/ga.hpp"
#include "few/innermin.hpp"
#include "few/states.hpp"
#include "few/witness.hpp"

#include <json.hpp>

#include <span>
#include <vector>

namespace few::measure {

enum class Verdict { EntanglementCertified, Undetected };

const char* verdict_name(Verdict v);

// Full outcome of one measure computation. e_value = max(0, best_fitness),
// where best_fitness re-evaluates the winning Z with a hardened inner minimum
// (the raw per-generation values live in the trace); the verdict is
// EntanglementCertified only when the extracted witness also survives its own
// sampling verification.
struct MeasureResult {
    double e_value = 0.0;
    double best_fitness = 0.0;
    witness::TracelessObservable best_z;
    double mu = 0.0;  // inner minimum at best_z
    witness::Witness witness;
    Verdict verdict = Verdict::Undetected;
    ga::GaTrace trace;
    ga::GaConfig ga_config;
    innermin::InnerMinConfig inner_config;
    std::vector<int> dims;
    bool self_check_ran = false;
    witness::VerificationReport self_check;
};

// E(ρ) = max{0, max_Z [min_ρs Tr(Zρ_s) - Tr(Zρ)]} via the genetic search over
// unit-norm traceless Z with the quasi-Newton inner minimization.
MeasureResult compute_few_measure(const states::DensityMatrix& rho, const ga::GaConfig& ga_cfg,
                                  const innermin::InnerMinConfig& inner_cfg, int jobs = 0,
                                  std::uint64_t self_verify_budget = 2000);

struct LuInvarianceCheck {
    double e_original = 0.0;
    double e_rotated = 0.0;
    double delta = 0.0;
};

// Measures ρ and (U1⊗...⊗Un) ρ (⊗U)† with the two supplied configurations.
LuInvarianceCheck check_lu_invariance(const states::DensityMatrix& rho,
                                      std::span<const qops::Matrix> unitaries,
                                      const ga::GaConfig& ga_original,
                                      const ga::GaConfig& ga_rotated,
                                      const innermin::InnerMinConfig& inner_cfg, int jobs = 0);

struct ConvexityCheck {
    double lhs = 0.0;  // E(λρ + (1-λ)σ)
    double rhs = 0.0;  // λE(ρ) + (1-λ)E(σ)
    bool slack_ok = false;
};

inline constexpr double kConvexitySlack = 0.03;

ConvexityCheck check_convexity(const states::DensityMatrix& rho, const states::DensityMatrix& sigma,
                               double lambda, const ga::GaConfig& base_cfg,
                               const innermin::InnerMinConfig& inner_cfg, int jobs = 0);

nlohmann::json result_to_json(const MeasureResult& result);

}  // namespace few::measure
