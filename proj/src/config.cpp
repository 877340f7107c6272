#include "few/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace few::config {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument("config: bad integer for " + key);
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("config: bad number for " + key);
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("config: bad integer for " + key);
    return static_cast<std::uint64_t>(v);
}

}  // namespace

RunConfig load_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config: malformed section at line " + std::to_string(lineno));
            section = trim(t.substr(1, t.size() - 2));
            if (section != "ga" && section != "inner" && section != "run")
                throw std::invalid_argument("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (section == "ga") {
            if (key == "pop_size") cfg.ga.pop_size = parse_int(key, value);
            else if (key == "generations") cfg.ga.generations = parse_int(key, value);
            else if (key == "tournament_size") cfg.ga.tournament_size = parse_int(key, value);
            else if (key == "elite_count") cfg.ga.elite_count = parse_int(key, value);
            else if (key == "p_crossover") cfg.ga.p_crossover = parse_double(key, value);
            else if (key == "p_mutation") cfg.ga.p_mutation = parse_double(key, value);
            else if (key == "tau_bound") cfg.ga.tau_bound = parse_double(key, value);
            else throw std::invalid_argument("config: unknown key " + key + " in [ga]");
        } else if (section == "inner") {
            if (key == "n_probe") cfg.inner.n_probe = parse_int(key, value);
            else if (key == "n_refine") cfg.inner.n_refine = parse_int(key, value);
            else if (key == "max_iters") cfg.inner.max_iters = parse_int(key, value);
            else if (key == "grad_step") cfg.inner.grad_step = parse_double(key, value);
            else if (key == "conv_tol") cfg.inner.conv_tol = parse_double(key, value);
            else throw std::invalid_argument("config: unknown key " + key + " in [inner]");
        } else if (section == "run") {
            if (key == "seed") cfg.seed = parse_u64(key, value);
            else if (key == "jobs") cfg.jobs = parse_int(key, value);
            else if (key == "out") cfg.out = value;
            else if (key == "format") {
                if (value != "csv" && value != "json")
                    throw std::invalid_argument("config: format must be csv or json");
                cfg.format = value;
            } else throw std::invalid_argument("config: unknown key " + key + " in [run]");
        } else {
            throw std::invalid_argument("config: key outside of any section at line " +
                                        std::to_string(lineno));
        }
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    return load_config(in);
}

void dump_config(std::ostream& out, const RunConfig& cfg) {
    std::ostringstream ga;
    if (cfg.ga.pop_size) ga << "pop_size = " << *cfg.ga.pop_size << '\n';
    if (cfg.ga.generations) ga << "generations = " << *cfg.ga.generations << '\n';
    if (cfg.ga.tournament_size) ga << "tournament_size = " << *cfg.ga.tournament_size << '\n';
    if (cfg.ga.elite_count) ga << "elite_count = " << *cfg.ga.elite_count << '\n';
    if (cfg.ga.p_crossover) ga << "p_crossover = " << *cfg.ga.p_crossover << '\n';
    if (cfg.ga.p_mutation) ga << "p_mutation = " << *cfg.ga.p_mutation << '\n';
    if (cfg.ga.tau_bound) ga << "tau_bound = " << *cfg.ga.tau_bound << '\n';
    if (!ga.str().empty()) out << "[ga]\n" << ga.str();

    std::ostringstream inner;
    if (cfg.inner.n_probe) inner << "n_probe = " << *cfg.inner.n_probe << '\n';
    if (cfg.inner.n_refine) inner << "n_refine = " << *cfg.inner.n_refine << '\n';
    if (cfg.inner.max_iters) inner << "max_iters = " << *cfg.inner.max_iters << '\n';
    if (cfg.inner.grad_step) inner << "grad_step = " << *cfg.inner.grad_step << '\n';
    if (cfg.inner.conv_tol) inner << "conv_tol = " << *cfg.inner.conv_tol << '\n';
    if (!inner.str().empty()) out << "[inner]\n" << inner.str();

    std::ostringstream run;
    if (cfg.seed) run << "seed = " << *cfg.seed << '\n';
    if (cfg.jobs) run << "jobs = " << *cfg.jobs << '\n';
    if (cfg.out) run << "out = " << *cfg.out << '\n';
    if (cfg.format) run << "format = " << *cfg.format << '\n';
    if (!run.str().empty()) out << "[run]\n" << run.str();
}

ga::GaConfig resolve_ga(const RunConfig& cfg, std::span<const int> dims) {
    ga::GaConfig out = ga::GaConfig::defaults_for(dims);
    if (cfg.ga.pop_size) out.pop_size = *cfg.ga.pop_size;
    if (cfg.ga.generations) out.generations = *cfg.ga.generations;
    if (cfg.ga.tournament_size) out.tournament_size = *cfg.ga.tournament_size;
    if (cfg.ga.elite_count) out.elite_count = *cfg.ga.elite_count;
    if (cfg.ga.p_crossover) out.p_crossover = *cfg.ga.p_crossover;
    if (cfg.ga.p_mutation) out.p_mutation = *cfg.ga.p_mutation;
    if (cfg.ga.tau_bound) out.tau_bound = *cfg.ga.tau_bound;
    if (cfg.seed) out.seed = *cfg.seed;
    out.validate();
    return out;
}

innermin::InnerMinConfig resolve_inner(const RunConfig& cfg, std::span<const int> dims) {
    innermin::InnerMinConfig out = innermin::InnerMinConfig::defaults_for(dims);
    if (cfg.inner.n_probe) out.n_probe = *cfg.inner.n_probe;
    if (cfg.inner.n_refine) out.n_refine = *cfg.inner.n_refine;
    if (cfg.inner.max_iters) out.max_iters = *cfg.inner.max_iters;
    if (cfg.inner.grad_step) out.grad_step = *cfg.inner.grad_step;
    if (cfg.inner.conv_tol) out.conv_tol = *cfg.inner.conv_tol;
    out.validate();
    return out;
}

}  // namespace few::config
