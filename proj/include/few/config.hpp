#pragma once

#include "few/ga.hpp"
#include "few/innermin.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

namespace few::config {

// Partial settings layered over the per-family defaults:
// built-in defaults < config file < command-line flags.
struct GaOverrides {
    std::optional<int> pop_size, generations, tournament_size, elite_count;
    std::optional<double> p_crossover, p_mutation, tau_bound;
    bool operator==(const GaOverrides&) const = default;
};

struct InnerOverrides {
    std::optional<int> n_probe, n_refine, max_iters;
    std::optional<double> grad_step, conv_tol;
    bool operator==(const InnerOverrides&) const = default;
};

struct RunConfig {
    GaOverrides ga;
    InnerOverrides inner;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::string> out;
    std::optional<std::string> format;  // "csv" or "json"
    bool operator==(const RunConfig&) const = default;
};

// INI-style sections [ga], [inner], [run]; unknown sections or keys are
// rejected. dump writes only the keys that are set, so dump-then-load is the
// identity.
RunConfig load_config(std::istream& in);
RunConfig load_config_file(const std::string& path);
void dump_config(std::ostream& out, const RunConfig& cfg);

// effective configs for a concrete state family
ga::GaConfig resolve_ga(const RunConfig& cfg, std::span<const int> dims);
innermin::InnerMinConfig resolve_inner(const RunConfig& cfg, std::span<const int> dims);

}  // namespace few::config
