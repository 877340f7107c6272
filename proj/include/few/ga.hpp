#pragma once

#include "few/innermin.hpp"
#include "few/qops.hpp"
#include "few/rng.hpp"
#include "few/states.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace few::ga {

// one byte per bit, values 0/1
using Chromosome = std::vector<std::uint8_t>;

inline constexpr int kBitsPerCoefficient = 15;

struct GaConfig {
    int pop_size = 350;
    int generations = 80;
    double p_crossover = 0.7;
    double p_mutation = 0.007;
    int tournament_size = 2;
    int elite_count = 2;
    double tau_bound = 1.0;  // half-width of every coefficient interval
    std::uint64_t seed = 0;

    void validate() const;

    // population/generation defaults sized per state family
    static GaConfig defaults_for(std::span<const int> dims);
};

struct GenRecord {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    std::uint64_t best_hash = 0;
};

struct GaTrace {
    std::vector<GenRecord> generations;
};

// number of encoded coefficients: Π d_i² - 1 (identity product not encoded)
int coefficient_count(std::span<const int> dims);
int chromosome_length(std::span<const int> dims);

// Each 15-bit group (most-significant bit first) maps linearly onto
// [-tau_bound, +tau_bound]; group k feeds flat tensor index k+1.
qops::CoefficientTensor decode(const Chromosome& c, const GaConfig& cfg,
                               std::span<const int> dims);

// Inverse of decode on the representable lattice (rounds to nearest point).
Chromosome encode(const qops::CoefficientTensor& tau, const GaConfig& cfg);

// 𝓕 = min_ρs Tr(Z ρ_s) - Tr(Z ρ) for the decoded, unit-normalized Z.
// Returns -inf if the decoded operator is numerically zero. The inner
// minimizer's stream is keyed by (cfg.seed, chromosome bits), so identical
// chromosomes always receive identical fitness within one run.
double fitness(const Chromosome& c, const states::DensityMatrix& rho, const GaConfig& cfg,
               const innermin::InnerMinConfig& inner);

// swaps the segment [cut1, cut2) between a and b
void two_point_crossover(Chromosome& a, Chromosome& b, int cut1, int cut2);

// Next generation: elites copied verbatim, remainder bred by tournament
// selection, two-point crossover with probability p_crossover, and
// independent per-bit mutation.
std::vector<Chromosome> evolve(const std::vector<Chromosome>& pop,
                               std::span<const double> fitnesses, const GaConfig& cfg,
                               Rng& rng);

struct GaRunResult {
    Chromosome best;
    double best_fitness = 0.0;
    GaTrace trace;
};

GaRunResult run_ga(const states::DensityMatrix& rho, const GaConfig& cfg,
                   const innermin::InnerMinConfig& inner, int jobs = 0);

std::uint64_t chromosome_hash(const Chromosome& c);

// columns: generation, best_fitness, mean_fitness
void write_trace_csv(std::ostream& out, const GaTrace& trace);

}  // namespace few::ga
