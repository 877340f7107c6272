// few — compute and sweep the floating-witness entanglement measure, and
// verify or brute-force-check the operators it produces.

#include "few/config.hpp"
#include "few/ga.hpp"
#include "few/innermin.hpp"
#include "few/measure.hpp"
#include "few/parallel.hpp"
#include "few/states.hpp"
#include "few/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitValidation = 2;

struct StateSpec {
    std::string family;          // bell | werner | ghzw | qutrit | file
    double parameter = 0.0;      // family parameter (bell packs ij as i*10+j)
    std::string path;            // for file specs
};

bool is_family_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return false;
    const std::string name = spec.substr(0, colon);
    return name == "bell" || name == "werner" || name == "ghzw" || name == "qutrit";
}

StateSpec parse_state_spec(const std::string& spec) {
    StateSpec out;
    if (!is_family_spec(spec)) {
        out.family = "file";
        out.path = spec;
        return out;
    }
    const auto colon = spec.find(':');
    out.family = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    if (out.family == "bell") {
        if (arg.size() != 2 || (arg[0] != '0' && arg[0] != '1') || (arg[1] != '0' && arg[1] != '1'))
            throw std::invalid_argument("bell spec must be bell:ij with i,j in {0,1}");
        out.parameter = 10.0 * (arg[0] - '0') + (arg[1] - '0');
        return out;
    }
    std::size_t used = 0;
    out.parameter = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument("bad family parameter: " + arg);
    return out;
}

few::states::DensityMatrix realize_state(const StateSpec& spec) {
    using namespace few::states;
    if (spec.family == "bell") {
        const int packed = static_cast<int>(spec.parameter);
        return bell_state(packed / 10, packed % 10);
    }
    if (spec.family == "werner") return werner(spec.parameter);
    if (spec.family == "ghzw") return ghz_w_mixture(spec.parameter);
    if (spec.family == "qutrit") return two_qutrit_alpha(spec.parameter);
    return load_density_matrix(spec.path);
}

few::states::DensityMatrix family_state(const std::string& family, double p) {
    StateSpec spec;
    spec.family = family;
    spec.parameter = p;
    return realize_state(spec);
}

// ---------------------------------------------------------------------------

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    bool out_set = false;
    std::string format;
    bool format_set = false;
    int jobs = 0;
    bool jobs_set = false;
    few::config::GaOverrides ga;
    few::config::InnerOverrides inner;
};

void add_common_options(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "config file (INI sections [ga], [inner], [run])");
    cmd->add_option("--seed", f.seed, "master seed")->each([&](const std::string&) { f.seed_set = true; });
    cmd->add_option("--out", f.out, "output path")->each([&](const std::string&) { f.out_set = true; });
    cmd->add_option("--format", f.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->each([&](const std::string&) { f.format_set = true; });
    cmd->add_option("--jobs", f.jobs, "parallelism degree (default: hardware)")
        ->each([&](const std::string&) { f.jobs_set = true; });

    auto opt_int = [cmd](const char* name, std::optional<int>& slot, const char* help) {
        cmd->add_option_function<int>(name, [&slot](int v) { slot = v; }, help);
    };
    auto opt_dbl = [cmd](const char* name, std::optional<double>& slot, const char* help) {
        cmd->add_option_function<double>(name, [&slot](double v) { slot = v; }, help);
    };
    opt_int("--pop", f.ga.pop_size, "GA population size");
    opt_int("--gens", f.ga.generations, "GA generations");
    opt_dbl("--pc", f.ga.p_crossover, "crossover probability");
    opt_dbl("--pm", f.ga.p_mutation, "per-bit mutation probability");
    opt_int("--tournament", f.ga.tournament_size, "tournament size");
    opt_int("--elite", f.ga.elite_count, "elite count");
    opt_dbl("--tau-bound", f.ga.tau_bound, "coefficient interval half-width");
    opt_int("--probes", f.inner.n_probe, "inner random probes");
    opt_int("--refines", f.inner.n_refine, "inner quasi-Newton starts");
    opt_int("--max-iters", f.inner.max_iters, "inner iteration cap");
    opt_dbl("--grad-step", f.inner.grad_step, "finite-difference step");
    opt_dbl("--conv-tol", f.inner.conv_tol, "gradient-norm stopping threshold");
}

// precedence: flags > config file > FEW_SEED (for the seed) > built-in defaults
few::config::RunConfig resolve_run_config(const CommonFlags& f) {
    few::config::RunConfig cfg;
    if (!f.config_path.empty()) cfg = few::config::load_config_file(f.config_path);

    auto overlay_int = [](std::optional<int>& dst, const std::optional<int>& src) {
        if (src) dst = src;
    };
    auto overlay_dbl = [](std::optional<double>& dst, const std::optional<double>& src) {
        if (src) dst = src;
    };
    overlay_int(cfg.ga.pop_size, f.ga.pop_size);
    overlay_int(cfg.ga.generations, f.ga.generations);
    overlay_int(cfg.ga.tournament_size, f.ga.tournament_size);
    overlay_int(cfg.ga.elite_count, f.ga.elite_count);
    overlay_dbl(cfg.ga.p_crossover, f.ga.p_crossover);
    overlay_dbl(cfg.ga.p_mutation, f.ga.p_mutation);
    overlay_dbl(cfg.ga.tau_bound, f.ga.tau_bound);
    overlay_int(cfg.inner.n_probe, f.inner.n_probe);
    overlay_int(cfg.inner.n_refine, f.inner.n_refine);
    overlay_int(cfg.inner.max_iters, f.inner.max_iters);
    overlay_dbl(cfg.inner.grad_step, f.inner.grad_step);
    overlay_dbl(cfg.inner.conv_tol, f.inner.conv_tol);

    if (f.seed_set) cfg.seed = f.seed;
    if (!cfg.seed) {
        if (const char* env = std::getenv("FEW_SEED")) {
            std::size_t used = 0;
            const std::string s(env);
            const auto v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument("FEW_SEED is not an integer");
            cfg.seed = static_cast<std::uint64_t>(v);
        }
    }
    if (f.jobs_set) cfg.jobs = f.jobs;
    if (f.out_set) cfg.out = f.out;
    if (f.format_set) cfg.format = f.format;
    return cfg;
}

std::string format_g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

// ---------------------------------------------------------------------------

int cmd_compute(const std::string& state_spec, const CommonFlags& flags,
                std::uint64_t verify_budget) {
    const auto cfg = resolve_run_config(flags);
    const auto rho = realize_state(parse_state_spec(state_spec));
    auto ga_cfg = few::config::resolve_ga(cfg, rho.dims);
    const auto inner_cfg = few::config::resolve_inner(cfg, rho.dims);
    ga_cfg.seed = cfg.seed.value_or(0);
    const int jobs = cfg.jobs.value_or(0);

    const auto result =
        few::measure::compute_few_measure(rho, ga_cfg, inner_cfg, jobs, verify_budget);

    std::cout << "E = " << format_g6(result.e_value) << '\n'
              << "verdict = " << few::measure::verdict_name(result.verdict) << '\n'
              << "mu = " << format_g6(result.mu) << '\n'
              << "best_fitness = " << format_g6(result.best_fitness) << '\n'
              << "witness: Tr(W rho) = "
              << format_g6(few::witness::expectation(result.witness.matrix, rho)) << ", dim "
              << rho.dim() << "x" << rho.dim() << '\n';
    if (result.self_check_ran)
        std::cout << "self_check = " << (result.self_check.pass ? "pass" : "fail") << " ("
                  << result.self_check.reason << ")\n";

    if (cfg.out) {
        const std::string format = cfg.format.value_or("json");
        if (format == "json") {
            write_text(*cfg.out, few::measure::result_to_json(result).dump(2) + "\n");
        } else {
            std::ostringstream csv;
            few::ga::write_trace_csv(csv, result.trace);
            write_text(*cfg.out, csv.str());
        }
    }
    return kExitOk;
}

struct SweepRange {
    double start = 0.0, stop = 0.0, step = 0.0;
};

SweepRange parse_range(const std::string& text) {
    SweepRange r;
    std::size_t first = text.find(':');
    std::size_t second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw std::invalid_argument("range must be start:stop:step");
    r.start = std::stod(text.substr(0, first));
    r.stop = std::stod(text.substr(first + 1, second - first - 1));
    r.step = std::stod(text.substr(second + 1));
    if (!(r.step > 0.0)) throw std::invalid_argument("range step must be positive");
    if (r.stop < r.start) throw std::invalid_argument("range stop must be >= start");
    return r;
}

std::vector<double> range_points(const SweepRange& r) {
    std::vector<double> points;
    const int n = static_cast<int>(std::floor((r.stop - r.start) / r.step + 1e-9));
    for (int i = 0; i <= n; ++i) points.push_back(r.start + i * r.step);
    return points;
}

int cmd_sweep(const std::string& family, const std::string& range_text, const CommonFlags& flags,
              std::uint64_t verify_budget) {
    if (family != "werner" && family != "ghzw" && family != "qutrit" && family != "bell")
        throw std::invalid_argument("sweep family must be one of werner, ghzw, qutrit");
    const auto cfg = resolve_run_config(flags);
    const auto points = range_points(parse_range(range_text));

    // fail fast: every grid point must construct before any compute starts
    std::vector<few::states::DensityMatrix> rhos;
    rhos.reserve(points.size());
    for (double p : points) rhos.push_back(family_state(family, p));

    const std::uint64_t master = cfg.seed.value_or(0);
    const int jobs = cfg.jobs.value_or(0);

    struct Row {
        double parameter, e_value, mu, best_fitness;
        std::string verdict;
        std::uint64_t seed;
    };
    std::vector<Row> rows(points.size());

    // points run concurrently, each compute single-threaded with its own
    // derived seed; output order is fixed by the grid, so file bytes do not
    // depend on the parallelism degree
    few::parallel_for(points.size(), jobs, [&](std::size_t i) {
        const std::uint64_t point_seed = few::derive_seed(master, 0x737765ULL, i);  // "swe"
        auto ga_cfg = few::config::resolve_ga(cfg, rhos[i].dims);
        const auto inner_cfg = few::config::resolve_inner(cfg, rhos[i].dims);
        ga_cfg.seed = point_seed;
        const auto result =
            few::measure::compute_few_measure(rhos[i], ga_cfg, inner_cfg, 1, verify_budget);
        rows[i] = {points[i],
                   result.e_value,
                   result.mu,
                   result.best_fitness,
                   few::measure::verdict_name(result.verdict),
                   point_seed};
    });

    std::ostringstream body;
    const std::string format = cfg.format.value_or("csv");
    if (format == "csv") {
        body << "parameter,e_value,verdict,mu,best_fitness,seed\n";
        for (const auto& row : rows)
            body << format_g6(row.parameter) << ',' << format_g6(row.e_value) << ',' << row.verdict
                 << ',' << format_g6(row.mu) << ',' << format_g6(row.best_fitness) << ','
                 << row.seed << '\n';
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& row : rows)
            arr.push_back({{"parameter", row.parameter},
                           {"e_value", row.e_value},
                           {"verdict", row.verdict},
                           {"mu", row.mu},
                           {"best_fitness", row.best_fitness},
                           {"seed", row.seed}});
        body << arr.dump(2) << '\n';
    }
    if (cfg.out)
        write_text(*cfg.out, body.str());
    else
        std::cout << body.str();
    return kExitOk;
}

int cmd_verify(const std::string& witness_path, const std::string& state_spec,
               std::uint64_t budget, const CommonFlags& flags) {
    if (budget < 1) throw std::invalid_argument("verify: budget must be >= 1");
    const auto cfg = resolve_run_config(flags);
    const auto w = few::witness::load_witness(witness_path);
    const auto rho = realize_state(parse_state_spec(state_spec));
    const auto report = few::witness::verify_witness(w, rho, budget, cfg.seed.value_or(0),
                                                     cfg.jobs.value_or(0));
    std::cout << "Tr(W rho) = " << format_g6(report.target_expectation) << '\n'
              << "min separable expectation = " << format_g6(report.min_separable_expectation)
              << " (budget " << report.budget << ")\n"
              << (report.pass ? "PASS" : "FAIL") << ": " << report.reason << '\n';
    return report.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_oracle(const std::string& z_path, int resolution, const std::string& dims_text) {
    std::ifstream in(z_path);
    if (!in) throw std::runtime_error("cannot open " + z_path);
    nlohmann::json j;
    in >> j;

    std::vector<int> dims;
    if (!dims_text.empty()) {
        std::stringstream ss(dims_text);
        std::string item;
        while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
    } else if (j.contains("dims")) {
        dims = j.at("dims").get<std::vector<int>>();
    } else {
        throw std::invalid_argument("oracle: dims not given and not present in the file");
    }

    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    long long total = 1;
    for (int d : dims) total *= d;
    const std::size_t n = static_cast<std::size_t>(total) * static_cast<std::size_t>(total);
    if (re.size() != n || im.size() != n)
        throw std::invalid_argument("oracle: entry arrays do not match dims");
    few::qops::Matrix m(total, total);
    for (Eigen::Index r = 0; r < total; ++r)
        for (Eigen::Index c = 0; c < total; ++c) {
            const std::size_t f = static_cast<std::size_t>(r) * static_cast<std::size_t>(total) +
                                  static_cast<std::size_t>(c);
            m(r, c) = few::qops::Complex(re[f], im[f]);
        }

    const auto z = few::witness::from_matrix(m, dims);  // validates traceless + Hermitian
    const double value = few::innermin::grid_oracle(z, dims, resolution);
    std::cout << format_g6(value) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"floating-witness entanglement measure toolkit"};
    app.require_subcommand(1);

    CommonFlags compute_flags, sweep_flags, verify_flags;
    std::string compute_state, sweep_family, sweep_range, verify_witness_path, verify_state;
    std::string oracle_z_path, oracle_dims;
    std::uint64_t compute_budget = 2000, sweep_budget = 2000, verify_budget = 0;
    int oracle_resolution = 25;

    auto* compute = app.add_subcommand("compute", "compute E(rho) for one state");
    compute->add_option("state", compute_state,
                        "bell:ij | werner:F | ghzw:q | qutrit:alpha | density-matrix JSON file")
        ->required();
    add_common_options(compute, compute_flags);
    compute->add_option("--verify-budget", compute_budget, "self-check sample budget");

    auto* sweep = app.add_subcommand("sweep", "compute E along a family parameter grid");
    sweep->add_option("family", sweep_family, "werner | ghzw | qutrit")->required();
    sweep->add_option("range", sweep_range, "start:stop:step")->required();
    add_common_options(sweep, sweep_flags);
    sweep->add_option("--verify-budget", sweep_budget, "self-check sample budget");

    auto* verify = app.add_subcommand("verify", "verify a stored witness against a state");
    verify->add_option("witness", verify_witness_path, "witness JSON file")->required();
    verify->add_option("state", verify_state, "state spec or JSON file")->required();
    verify->add_option("--budget", verify_budget, "product-state samples")->required();
    add_common_options(verify, verify_flags);

    auto* oracle = app.add_subcommand("oracle", "grid minimum of Tr(Z rho_s) over product states");
    oracle->add_option("z", oracle_z_path, "traceless Hermitian operator JSON file")->required();
    oracle->add_option("--resolution", oracle_resolution, "grid points per angle")->required();
    oracle->add_option("--dims", oracle_dims, "comma-separated subsystem dims (default: from file)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) return cmd_compute(compute_state, compute_flags, compute_budget);
        if (sweep->parsed()) return cmd_sweep(sweep_family, sweep_range, sweep_flags, sweep_budget);
        if (verify->parsed())
            return cmd_verify(verify_witness_path, verify_state, verify_budget, verify_flags);
        if (oracle->parsed()) return cmd_oracle(oracle_z_path, oracle_resolution, oracle_dims);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}
