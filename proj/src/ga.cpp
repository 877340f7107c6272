#include "few/ga.hpp"

#include "few/parallel.hpp"
#include "few/witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace few::ga {

void GaConfig::validate() const {
    if (pop_size < 2) throw std::invalid_argument("GaConfig: pop_size must be >= 2");
    if (generations < 1) throw std::invalid_argument("GaConfig: generations must be >= 1");
    if (p_crossover < 0.0 || p_crossover > 1.0)
        throw std::invalid_argument("GaConfig: p_crossover must lie in [0, 1]");
    if (p_mutation < 0.0 || p_mutation > 1.0)
        throw std::invalid_argument("GaConfig: p_mutation must lie in [0, 1]");
    if (tournament_size < 2) throw std::invalid_argument("GaConfig: tournament_size must be >= 2");
    if (elite_count < 0 || elite_count >= pop_size)
        throw std::invalid_argument("GaConfig: elite_count must lie in [0, pop_size)");
    if (!(tau_bound > 0.0)) throw std::invalid_argument("GaConfig: tau_bound must be positive");
}

GaConfig GaConfig::defaults_for(std::span<const int> dims) {
    GaConfig cfg;
    const std::vector<int> d(dims.begin(), dims.end());
    if (d == std::vector<int>{2, 2}) {
        cfg.pop_size = 350;
        cfg.generations = 80;
    } else if (d == std::vector<int>{2, 2, 2}) {
        cfg.pop_size = 640;
        cfg.generations = 300;
    } else if (d == std::vector<int>{3, 3}) {
        cfg.pop_size = 810;
        cfg.generations = 300;
    } else {
        cfg.pop_size = 10 * coefficient_count(dims);
        cfg.generations = 300;
    }
    return cfg;
}

int coefficient_count(std::span<const int> dims) {
    int total = 1;
    for (int d : dims) total *= d * d;
    return total - 1;
}

int chromosome_length(std::span<const int> dims) {
    return kBitsPerCoefficient * coefficient_count(dims);
}

qops::CoefficientTensor decode(const Chromosome& c, const GaConfig& cfg,
                               std::span<const int> dims) {
    const int n_coeff = coefficient_count(dims);
    if (static_cast<int>(c.size()) != kBitsPerCoefficient * n_coeff)
        throw std::invalid_argument("decode: chromosome length does not match dims");
    qops::CoefficientTensor tau = qops::CoefficientTensor::zeros(dims, cfg.tau_bound);
    constexpr double kMaxGroup = static_cast<double>((1 << kBitsPerCoefficient) - 1);
    for (int k = 0; k < n_coeff; ++k) {
        std::uint32_t g = 0;
        for (int b = 0; b < kBitsPerCoefficient; ++b)
            g = (g << 1) | c[static_cast<std::size_t>(k * kBitsPerCoefficient + b)];
        tau.values[static_cast<std::size_t>(k) + 1] =
            -cfg.tau_bound + static_cast<double>(g) / kMaxGroup * 2.0 * cfg.tau_bound;
    }
    return tau;
}

Chromosome encode(const qops::CoefficientTensor& tau, const GaConfig& cfg) {
    const std::size_t n_coeff = tau.values.size() - 1;
    Chromosome c(n_coeff * kBitsPerCoefficient, 0);
    constexpr double kMaxGroup = static_cast<double>((1 << kBitsPerCoefficient) - 1);
    for (std::size_t k = 0; k < n_coeff; ++k) {
        const double t = tau.values[k + 1];
        double g = std::round((t + cfg.tau_bound) / (2.0 * cfg.tau_bound) * kMaxGroup);
        g = std::clamp(g, 0.0, kMaxGroup);
        const auto bits = static_cast<std::uint32_t>(g);
        for (int b = 0; b < kBitsPerCoefficient; ++b)
            c[k * kBitsPerCoefficient + static_cast<std::size_t>(b)] =
                static_cast<std::uint8_t>((bits >> (kBitsPerCoefficient - 1 - b)) & 1u);
    }
    return c;
}

std::uint64_t chromosome_hash(const Chromosome& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (std::uint8_t bit : c) {
        h ^= bit;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double fitness(const Chromosome& c, const states::DensityMatrix& rho, const GaConfig& cfg,
               const innermin::InnerMinConfig& inner) {
    const qops::CoefficientTensor tau = decode(c, cfg, rho.dims);
    const auto bases = qops::bases_for(rho.dims);
    qops::Matrix z = qops::assemble_observable(tau, bases);
    const double norm = qops::hs_norm(z);
    if (norm < 1e-12) return -std::numeric_limits<double>::infinity();
    z *= 1.0 / norm;

    witness::TracelessObservable observable;
    observable.tau = tau;
    observable.matrix = std::move(z);
    observable.dims = rho.dims;
    observable.normalized = true;

    const std::uint64_t stream = derive_seed(cfg.seed, 0x666974ULL, chromosome_hash(c));  // "fit"
    const auto inner_result =
        innermin::min_sep_expectation(observable, rho.dims, inner, stream);
    const double f2 = witness::expectation(observable.matrix, rho);
    return inner_result.mu - f2;
}

void two_point_crossover(Chromosome& a, Chromosome& b, int cut1, int cut2) {
    if (a.size() != b.size()) throw std::invalid_argument("two_point_crossover: length mismatch");
    if (cut1 > cut2) std::swap(cut1, cut2);
    if (cut1 < 0 || cut2 > static_cast<int>(a.size()))
        throw std::invalid_argument("two_point_crossover: cut points out of range");
    for (int i = cut1; i < cut2; ++i) std::swap(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
}

namespace {

int tournament_pick(std::span<const double> fitnesses, int tournament_size, Rng& rng) {
    int winner = -1;
    for (int t = 0; t < tournament_size; ++t) {
        const int i = static_cast<int>(rng.below(fitnesses.size()));
        if (winner < 0 || fitnesses[static_cast<std::size_t>(i)] > fitnesses[static_cast<std::size_t>(winner)] ||
            (fitnesses[static_cast<std::size_t>(i)] == fitnesses[static_cast<std::size_t>(winner)] && i < winner))
            winner = i;
    }
    return winner;
}

void mutate(Chromosome& c, double p, Rng& rng) {
    if (p <= 0.0) return;
    for (auto& bit : c)
        if (rng.bernoulli(p)) bit ^= 1u;
}

}  // namespace

std::vector<Chromosome> evolve(const std::vector<Chromosome>& pop,
                               std::span<const double> fitnesses, const GaConfig& cfg,
                               Rng& rng) {
    if (static_cast<int>(pop.size()) != cfg.pop_size)
        throw std::invalid_argument("evolve: population size does not match config");
    if (fitnesses.size() != pop.size())
        throw std::invalid_argument("evolve: fitness count does not match population");

    std::vector<int> rank(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) rank[i] = static_cast<int>(i);
    std::sort(rank.begin(), rank.end(), [&](int a, int b) {
        const double fa = fitnesses[static_cast<std::size_t>(a)];
        const double fb = fitnesses[static_cast<std::size_t>(b)];
        return fa > fb || (fa == fb && a < b);
    });

    std::vector<Chromosome> next;
    next.reserve(pop.size());
    for (int e = 0; e < cfg.elite_count; ++e)
        next.push_back(pop[static_cast<std::size_t>(rank[static_cast<std::size_t>(e)])]);

    const int length = static_cast<int>(pop.front().size());
    while (static_cast<int>(next.size()) < cfg.pop_size) {
        const int pa = tournament_pick(fitnesses, cfg.tournament_size, rng);
        const int pb = tournament_pick(fitnesses, cfg.tournament_size, rng);
        Chromosome child_a = pop[static_cast<std::size_t>(pa)];
        Chromosome child_b = pop[static_cast<std::size_t>(pb)];
        if (rng.bernoulli(cfg.p_crossover)) {
            const int cut1 = static_cast<int>(rng.below(static_cast<std::uint64_t>(length) + 1));
            const int cut2 = static_cast<int>(rng.below(static_cast<std::uint64_t>(length) + 1));
            two_point_crossover(child_a, child_b, cut1, cut2);
        }
        mutate(child_a, cfg.p_mutation, rng);
        mutate(child_b, cfg.p_mutation, rng);
        next.push_back(std::move(child_a));
        if (static_cast<int>(next.size()) < cfg.pop_size) next.push_back(std::move(child_b));
    }
    return next;
}

namespace {

std::string bits_key(const Chromosome& c) {
    std::string key((c.size() + 7) / 8, '\0');
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) key[i / 8] = static_cast<char>(key[i / 8] | (1 << (i % 8)));
    return key;
}

}  // namespace

GaRunResult run_ga(const states::DensityMatrix& rho, const GaConfig& cfg,
                   const innermin::InnerMinConfig& inner, int jobs) {
    cfg.validate();
    inner.validate();
    const int length = chromosome_length(rho.dims);

    Rng master(derive_seed(cfg.seed, 0x6d617374ULL));  // "mast"
    std::vector<Chromosome> pop(static_cast<std::size_t>(cfg.pop_size));
    for (auto& c : pop) {
        c.resize(static_cast<std::size_t>(length));
        for (auto& bit : c) bit = static_cast<std::uint8_t>(master.below(2));
    }

    // Fitness is a pure function of (bits, cfg.seed), so survivors and clones
    // reuse their cached value instead of re-running the inner minimizer.
    std::unordered_map<std::string, double> cache;

    GaRunResult result;
    result.best_fitness = -std::numeric_limits<double>::infinity();
    std::vector<double> fitnesses(pop.size());

    for (int gen = 0; gen < cfg.generations; ++gen) {
        std::vector<std::size_t> missing;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            const auto it = cache.find(bits_key(pop[i]));
            if (it == cache.end())
                missing.push_back(i);
            else
                fitnesses[i] = it->second;
        }
        parallel_for(missing.size(), jobs, [&](std::size_t m) {
            fitnesses[missing[m]] = fitness(pop[missing[m]], rho, cfg, inner);
        });
        for (std::size_t i : missing) cache.emplace(bits_key(pop[i]), fitnesses[i]);

        std::size_t gen_best = 0;
        double mean = 0.0;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            mean += fitnesses[i];
            if (fitnesses[i] > fitnesses[gen_best]) gen_best = i;
        }
        mean /= static_cast<double>(pop.size());
        result.trace.generations.push_back(
            {gen, fitnesses[gen_best], mean, chromosome_hash(pop[gen_best])});

        if (fitnesses[gen_best] > result.best_fitness) {
            result.best_fitness = fitnesses[gen_best];
            result.best = pop[gen_best];
        }

        if (gen + 1 < cfg.generations)
            pop = evolve(pop, fitnesses, cfg, master);
    }
    return result;
}

void write_trace_csv(std::ostream& out, const GaTrace& trace) {
    out << "generation,best_fitness,mean_fitness\n";
    char buf[64];
    for (const auto& rec : trace.generations) {
        std::snprintf(buf, sizeof(buf), "%d,%.6g,%.6g\n", rec.generation, rec.best_fitness,
                      rec.mean_fitness);
        out << buf;
    }
}

}  // namespace few::ga
