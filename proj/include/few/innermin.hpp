#pragma once

#include "few/qops.hpp"
#include "few/states.hpp"
#include "few/witness.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace few::innermin {

struct InnerMinConfig {
    int n_probe = 400;      // random product-state probes
    int n_refine = 5;       // lowest probes taken as quasi-Newton starts
    int max_iters = 200;    // iteration cap per refinement
    double grad_step = 1e-5;  // central-difference step
    double conv_tol = 1e-8;   // gradient-norm stopping threshold

    void validate() const;

    // probe/refine budgets sized per state family
    static InnerMinConfig defaults_for(std::span<const int> dims);
};

struct Refinement {
    double start_value = 0.0;
    double final_value = 0.0;
};

struct InnerMinResult {
    double mu = 0.0;
    states::ProductStateParams argmin;
    int probes_used = 0;
    std::vector<Refinement> refinements;
};

// Fast evaluator of <ψ(angles)| Z |ψ(angles)> over product kets.
// operator() is not thread-safe; give each thread its own copy.
class ProductExpectation {
public:
    ProductExpectation(const qops::Matrix& z, std::span<const int> dims);

    double operator()(std::span<const double> angles);

    int angle_count() const { return n_angles_; }
    std::span<const int> dims() const { return dims_; }

private:
    qops::Matrix z_;
    std::vector<int> dims_;
    int n_angles_ = 0;
    qops::Vector psi_;
    qops::Vector scratch_;
    qops::Vector zpsi_;
};

// min over product pure states of Tr(Z ρ_s): n_probe random starts, the
// n_refine lowest refined by BFGS with central-difference gradients and
// backtracking line search. Ties break toward the lower probe index.
InnerMinResult min_sep_expectation(const witness::TracelessObservable& z,
                                   std::span<const int> dims, const InnerMinConfig& cfg,
                                   std::uint64_t seed);

// Exhaustive minimum over the regular angle grid with `resolution` points per
// angle, endpoints included. Upper-bounds the true minimum and converges to
// it as resolution grows. Throws if the grid exceeds 1e8 evaluations.
double grid_oracle(const witness::TracelessObservable& z, std::span<const int> dims,
                   int resolution);

struct SampledMin {
    double value = 0.0;
    states::ProductStateParams argmin;
};

// min of <ψ|op|ψ> over `budget` random product states, every sample refined by
// the quasi-Newton descent. Sample i draws from a stream keyed by (seed, i),
// so the result is non-increasing in budget for a fixed seed.
SampledMin sampled_refined_minimum(const qops::Matrix& op, std::span<const int> dims,
                                   std::uint64_t budget, std::uint64_t seed, int jobs = 0);

// --------------------------- quasi-Newton core ------------------------------

struct QnOptions {
    int max_iters = 200;
    double grad_step = 1e-5;
    double conv_tol = 1e-8;
};

struct QnResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iters = 0;
    bool converged = false;
};

// BFGS with inverse-Hessian updates and Armijo backtracking; iterates are
// non-increasing in objective value.
QnResult qn_minimize(const std::function<double(std::span<const double>)>& f,
                     Eigen::VectorXd x0, const QnOptions& opts);

}  // namespace few::innermin
