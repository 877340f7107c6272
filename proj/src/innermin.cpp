#include "few/innermin.hpp"

#include "few/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace few::innermin {

namespace {
constexpr double kPi = std::numbers::pi;
}

void InnerMinConfig::validate() const {
    if (n_probe < 1 || n_refine < 1 || max_iters < 1)
        throw std::invalid_argument("InnerMinConfig: counts must be >= 1");
    if (n_refine > n_probe)
        throw std::invalid_argument("InnerMinConfig: n_refine must not exceed n_probe");
    if (!(grad_step > 0.0) || grad_step > 1e-2)
        throw std::invalid_argument("InnerMinConfig: grad_step must lie in (0, 1e-2]");
    if (!(conv_tol > 0.0)) throw std::invalid_argument("InnerMinConfig: conv_tol must be positive");
}

InnerMinConfig InnerMinConfig::defaults_for(std::span<const int> dims) {
    InnerMinConfig cfg;
    const std::vector<int> d(dims.begin(), dims.end());
    if (d == std::vector<int>{2, 2}) {
        cfg.n_probe = 400;
        cfg.n_refine = 5;
    } else if (d == std::vector<int>{2, 2, 2}) {
        cfg.n_probe = 500;
        cfg.n_refine = 8;
    } else if (d == std::vector<int>{3, 3}) {
        cfg.n_probe = 800;
        cfg.n_refine = 10;
    } else {
        const int n = states::total_angle_count(dims);
        cfg.n_probe = 100 * n;
        cfg.n_refine = n;
    }
    return cfg;
}

// --------------------------- evaluator ---------------------------------------

ProductExpectation::ProductExpectation(const qops::Matrix& z, std::span<const int> dims)
    : z_(z), dims_(dims.begin(), dims.end()) {
    long long total = 1;
    for (int d : dims_) total *= d;
    if (z_.rows() != z_.cols() || z_.rows() != total)
        throw std::invalid_argument("ProductExpectation: matrix does not match dims");
    n_angles_ = states::total_angle_count(dims_);
    psi_.resize(total);
    scratch_.resize(total);
    zpsi_.resize(total);
}

double ProductExpectation::operator()(std::span<const double> angles) {
    qops::Complex local[3];
    Eigen::Index len = 1;
    psi_(0) = qops::Complex(1.0, 0.0);
    std::size_t offset = 0;
    for (int d : dims_) {
        states::subsystem_ket(d, angles.data() + offset, local);
        // scratch = psi(0..len) ⊗ local(0..d)
        for (Eigen::Index i = 0; i < len; ++i)
            for (int k = 0; k < d; ++k) scratch_(i * d + k) = psi_(i) * local[k];
        len *= d;
        psi_.head(len) = scratch_.head(len);
        offset += static_cast<std::size_t>(states::angle_count(d));
    }
    zpsi_.noalias() = z_ * psi_;
    return psi_.dot(zpsi_).real();  // Eigen dot conjugates the left argument
}

// --------------------------- quasi-Newton core ------------------------------

QnResult qn_minimize(const std::function<double(std::span<const double>)>& f,
                     Eigen::VectorXd x0, const QnOptions& opts) {
    const int n = static_cast<int>(x0.size());
    QnResult res;
    res.x = std::move(x0);
    res.value = f(std::span<const double>(res.x.data(), static_cast<std::size_t>(n)));

    auto eval = [&](const Eigen::VectorXd& x) {
        return f(std::span<const double>(x.data(), static_cast<std::size_t>(n)));
    };

    Eigen::VectorXd grad(n), grad_next(n), xt(n);
    auto gradient = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        xt = x;
        for (int i = 0; i < n; ++i) {
            const double xi = xt(i);
            xt(i) = xi + opts.grad_step;
            const double fp = eval(xt);
            xt(i) = xi - opts.grad_step;
            const double fm = eval(xt);
            xt(i) = xi;
            g(i) = (fp - fm) / (2.0 * opts.grad_step);
        }
    };

    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    gradient(res.x, grad);

    constexpr double kArmijo = 1e-4;
    for (int it = 0; it < opts.max_iters; ++it) {
        if (grad.norm() <= opts.conv_tol) {
            res.converged = true;
            break;
        }
        Eigen::VectorXd dir = -(h * grad);
        double slope = grad.dot(dir);
        if (slope >= 0.0) {  // curvature estimate went bad; fall back to steepest descent
            h.setIdentity();
            dir = -grad;
            slope = grad.dot(dir);
            if (slope >= 0.0) break;
        }
        double step = 1.0;
        double f_new = res.value;
        Eigen::VectorXd x_new;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = res.x + step * dir;
            f_new = eval(x_new);
            if (f_new <= res.value + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no decrease along the descent direction

        gradient(x_new, grad_next);
        const Eigen::VectorXd s = x_new - res.x;
        const Eigen::VectorXd y = grad_next - grad;
        const double sy = s.dot(y);
        if (sy > 1e-12) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            h = (eye - rho * s * y.transpose()) * h * (eye - rho * y * s.transpose()) +
                rho * s * s.transpose();
        }
        res.x = std::move(x_new);
        res.value = f_new;
        grad = grad_next;
        res.iters = it + 1;
    }
    return res;
}

// --------------------------- multi-start minimization ------------------------

InnerMinResult min_sep_expectation(const witness::TracelessObservable& z,
                                   std::span<const int> dims, const InnerMinConfig& cfg,
                                   std::uint64_t seed) {
    cfg.validate();
    ProductExpectation eval(z.matrix, dims);
    const int n_angles = eval.angle_count();

    InnerMinResult result;
    result.probes_used = cfg.n_probe;

    std::vector<states::ProductStateParams> probes(static_cast<std::size_t>(cfg.n_probe));
    std::vector<double> values(static_cast<std::size_t>(cfg.n_probe));
    for (int i = 0; i < cfg.n_probe; ++i) {
        Rng rng(derive_seed(seed, 0x70726f62ULL, static_cast<std::uint64_t>(i)));  // "prob"
        probes[static_cast<std::size_t>(i)] = states::sample_product_params(dims, rng);
        values[static_cast<std::size_t>(i)] = eval(probes[static_cast<std::size_t>(i)].angles);
    }

    std::vector<int> order(static_cast<std::size_t>(cfg.n_probe));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double va = values[static_cast<std::size_t>(a)];
        const double vb = values[static_cast<std::size_t>(b)];
        return va < vb || (va == vb && a < b);
    });

    int best_idx = order[0];
    double best_value = values[static_cast<std::size_t>(best_idx)];
    states::ProductStateParams best_params = probes[static_cast<std::size_t>(best_idx)];

    QnOptions opts{cfg.max_iters, cfg.grad_step, cfg.conv_tol};
    const int n_refine = std::min(cfg.n_refine, cfg.n_probe);
    result.refinements.reserve(static_cast<std::size_t>(n_refine));
    for (int r = 0; r < n_refine; ++r) {
        const int idx = order[static_cast<std::size_t>(r)];
        const auto& start = probes[static_cast<std::size_t>(idx)];
        Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(start.angles.data(), n_angles);
        QnResult qn = qn_minimize([&](std::span<const double> a) { return eval(a); }, x0, opts);
        result.refinements.push_back({values[static_cast<std::size_t>(idx)], qn.value});
        if (qn.value < best_value) {
            best_value = qn.value;
            best_params.dims.assign(dims.begin(), dims.end());
            best_params.angles.assign(qn.x.data(), qn.x.data() + n_angles);
        }
    }

    states::wrap_angles(best_params);
    result.mu = best_value;
    result.argmin = std::move(best_params);
    return result;
}

// --------------------------- grid oracle -------------------------------------

double grid_oracle(const witness::TracelessObservable& z, std::span<const int> dims,
                   int resolution) {
    if (resolution < 2) throw std::invalid_argument("grid_oracle: resolution must be >= 2");
    ProductExpectation eval(z.matrix, dims);
    const int n_angles = eval.angle_count();

    double guard = 1.0;
    for (int i = 0; i < n_angles; ++i) {
        guard *= resolution;
        if (guard > 1e8) throw std::invalid_argument("grid_oracle: grid exceeds 1e8 evaluations");
    }

    // per-angle upper limits follow the parameter rectangles
    std::vector<double> hi;
    for (int d : dims) {
        if (d == 2) {
            hi.insert(hi.end(), {2.0 * kPi, kPi / 2.0});
        } else {
            hi.insert(hi.end(), {2.0 * kPi, 2.0 * kPi, kPi / 2.0, kPi / 2.0});
        }
    }

    std::vector<int> idx(static_cast<std::size_t>(n_angles), 0);
    std::vector<double> angles(static_cast<std::size_t>(n_angles), 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        for (int i = 0; i < n_angles; ++i)
            angles[static_cast<std::size_t>(i)] =
                hi[static_cast<std::size_t>(i)] * idx[static_cast<std::size_t>(i)] / (resolution - 1);
        best = std::min(best, eval(angles));
        int pos = n_angles - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == resolution) {
            idx[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return best;
}

}  // namespace few::innermin
