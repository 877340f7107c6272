#include "few/states.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace few::states {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = -1e-10;

int checked_total_dim(const Matrix& m, std::span<const int> dims) {
    if (dims.empty()) throw std::invalid_argument("DensityMatrix: no subsystem dimensions");
    long long total = 1;
    for (int d : dims) {
        if (d < 2) throw std::invalid_argument("DensityMatrix: subsystem dimension must be >= 2");
        total *= d;
    }
    if (m.rows() != m.cols() || m.rows() != total)
        throw std::invalid_argument("DensityMatrix: matrix dimension does not equal product of subsystem dims");
    return static_cast<int>(total);
}

Vector basis_ket(int dim, int i) {
    Vector v = Vector::Zero(dim);
    v(i) = 1.0;
    return v;
}

Matrix pure(const Vector& psi) { return psi * psi.adjoint(); }

}  // namespace

DensityMatrix::DensityMatrix(Matrix m, std::vector<int> subsystem_dims)
    : matrix(std::move(m)), dims(std::move(subsystem_dims)) {
    checked_total_dim(matrix, dims);
    if (!qops::is_hermitian(matrix, kHermTol))
        throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    if (std::abs(matrix.trace() - Complex(1.0, 0.0)) > kTraceTol)
        throw std::invalid_argument("DensityMatrix: trace is not 1");
    const Eigen::VectorXd eig = qops::hermitian_eigenvalues(matrix);
    if (eig.minCoeff() < kPsdTol)
        throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
}

int DensityMatrix::dim() const { return static_cast<int>(matrix.rows()); }

// --------------------------- pure product states -----------------------------

int angle_count(int subsystem_dim) {
    switch (subsystem_dim) {
        case 2: return 2;
        case 3: return 4;
        default: throw std::invalid_argument("angle_count: only qubit and qutrit subsystems are parameterized");
    }
}

int total_angle_count(std::span<const int> dims) {
    int n = 0;
    for (int d : dims) n += angle_count(d);
    return n;
}

void subsystem_ket(int dim, const double* a, Complex* out) {
    if (dim == 2) {
        const double alpha = a[0], beta = a[1];
        out[0] = Complex(std::cos(beta), 0.0);
        out[1] = std::polar(std::sin(beta), alpha);
    } else if (dim == 3) {
        const double eta = a[0], xi = a[1], theta = a[2], phi = a[3];
        const double st = std::sin(theta);
        out[0] = std::polar(st * std::sin(phi), eta);
        out[1] = std::polar(st * std::cos(phi), xi);
        out[2] = Complex(std::cos(theta), 0.0);
    } else {
        throw std::invalid_argument("subsystem_ket: only qubit and qutrit subsystems are parameterized");
    }
}

Vector product_ket(std::span<const int> dims, std::span<const double> angles) {
    if (static_cast<int>(angles.size()) != total_angle_count(dims))
        throw std::invalid_argument("product_ket: angle count does not match dims");
    Complex local[3];
    Vector psi = Vector::Ones(1);
    std::size_t offset = 0;
    for (int d : dims) {
        subsystem_ket(d, angles.data() + offset, local);
        Vector factor = Eigen::Map<Vector>(local, d);
        psi = qops::tensor_product(psi, factor);
        offset += static_cast<std::size_t>(angle_count(d));
    }
    return psi;
}

DensityMatrix product_pure_state(const ProductStateParams& params) {
    const Vector psi = product_ket(params.dims, params.angles);
    return DensityMatrix(pure(psi), params.dims);
}

ProductStateParams sample_product_params(std::span<const int> dims, Rng& rng) {
    ProductStateParams p;
    p.dims.assign(dims.begin(), dims.end());
    for (int d : dims) {
        if (d == 2) {
            p.angles.push_back(rng.uniform(0.0, 2.0 * kPi));
            p.angles.push_back(rng.uniform(0.0, kPi / 2.0));
        } else {
            p.angles.push_back(rng.uniform(0.0, 2.0 * kPi));
            p.angles.push_back(rng.uniform(0.0, 2.0 * kPi));
            p.angles.push_back(rng.uniform(0.0, kPi / 2.0));
            p.angles.push_back(rng.uniform(0.0, kPi / 2.0));
        }
    }
    return p;
}

namespace {

double wrap_2pi(double x) {
    x = std::fmod(x, 2.0 * kPi);
    return x < 0.0 ? x + 2.0 * kPi : x;
}

// reduce into [0, π); odd_multiple reports the parity of the removed π-steps
double mod_pi(double x, bool& odd_multiple) {
    long long k = static_cast<long long>(std::floor(x / kPi));
    double r = x - static_cast<double>(k) * kPi;
    if (r < 0.0) {
        r += kPi;
        --k;
    } else if (r >= kPi) {
        r -= kPi;
        ++k;
    }
    odd_multiple = (k % 2) != 0;
    return r;
}

// polar angle into [0, π/2]; returns true if the reflection branch was taken
bool reflect_half(double& x) {
    if (x > kPi / 2.0) {
        x = kPi - x;
        return true;
    }
    return false;
}

}  // namespace

void wrap_angles(ProductStateParams& params) {
    std::size_t o = 0;
    for (int d : params.dims) {
        double* a = params.angles.data() + o;
        bool odd = false;
        if (d == 2) {
            // β + π is a global sign; β reflection shifts α by π
            a[1] = mod_pi(a[1], odd);
            if (reflect_half(a[1])) a[0] += kPi;
            a[0] = wrap_2pi(a[0]);
        } else {
            // θ + π is a global sign; θ reflection shifts both phases
            a[2] = mod_pi(a[2], odd);
            if (reflect_half(a[2])) {
                a[0] += kPi;
                a[1] += kPi;
            }
            // φ + π flips the |0> and |1> amplitudes: shift both phases;
            // φ reflection flips only the |1> amplitude: shift ξ
            a[3] = mod_pi(a[3], odd);
            if (odd) {
                a[0] += kPi;
                a[1] += kPi;
            }
            if (reflect_half(a[3])) a[1] += kPi;
            a[0] = wrap_2pi(a[0]);
            a[1] = wrap_2pi(a[1]);
        }
        o += static_cast<std::size_t>(angle_count(d));
    }
}

// --------------------------- named families ---------------------------------

DensityMatrix bell_state(int i, int j) {
    if ((i != 0 && i != 1) || (j != 0 && j != 1))
        throw std::invalid_argument("bell_state: indices must be bits");
    Vector psi = Vector::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    Matrix sz(2, 2), sx(2, 2);
    sz << 1, 0, 0, -1;
    sx << 0, 1, 1, 0;
    const Matrix u = qops::tensor_product(i ? sz : Matrix(Matrix::Identity(2, 2)),
                                          j ? sx : Matrix(Matrix::Identity(2, 2)));
    psi = u * psi;
    return DensityMatrix(pure(psi), {2, 2});
}

DensityMatrix werner(double fidelity) {
    if (fidelity < 0.0 || fidelity > 1.0)
        throw std::invalid_argument("werner: fidelity must lie in [0, 1]");
    Matrix rho = fidelity * bell_state(0, 0).matrix;
    const double rest = (1.0 - fidelity) / 3.0;
    rho += rest * bell_state(1, 0).matrix;
    rho += rest * bell_state(0, 1).matrix;
    rho += rest * bell_state(1, 1).matrix;
    return DensityMatrix(std::move(rho), {2, 2});
}

DensityMatrix ghz_w_mixture(double q) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("ghz_w_mixture: weight must lie in [0, 1]");
    Vector ghz = Vector::Zero(8);
    ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
    Vector w = Vector::Zero(8);
    w(1) = w(2) = w(4) = 1.0 / std::sqrt(3.0);
    return DensityMatrix(q * pure(ghz) + (1.0 - q) * pure(w), {2, 2, 2});
}

DensityMatrix two_qutrit_alpha(double alpha) {
    if (alpha < 2.0 || alpha > 5.0)
        throw std::invalid_argument("two_qutrit_alpha: alpha must lie in [2, 5]");
    auto ket = [](int i, int j) {
        Vector v = Vector::Zero(9);
        v(i * 3 + j) = 1.0;
        return v;
    };
    Vector phi_plus = (ket(0, 0) + ket(1, 1) + ket(2, 2)) / std::sqrt(3.0);
    const Matrix sigma_plus = (pure(ket(0, 1)) + pure(ket(1, 2)) + pure(ket(2, 0))) / 3.0;
    const Matrix sigma_minus = (pure(ket(1, 0)) + pure(ket(2, 1)) + pure(ket(0, 2))) / 3.0;
    Matrix rho = (2.0 / 7.0) * pure(phi_plus) + (alpha / 7.0) * sigma_plus +
                 ((5.0 - alpha) / 7.0) * sigma_minus;
    return DensityMatrix(std::move(rho), {3, 3});
}

int default_component_count(std::span<const int> dims) {
    int total = 1;
    for (int d : dims) total *= d;
    return total * total;
}

DensityMatrix random_separable(std::span<const int> dims, int k, Rng& rng) {
    if (k < 1) throw std::invalid_argument("random_separable: component count must be >= 1");
    // Dirichlet(1,...,1) weights via normalized exponentials
    std::vector<double> w(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (auto& wi : w) {
        wi = -std::log(1.0 - rng.uniform());
        sum += wi;
    }
    long long total = 1;
    for (int d : dims) total *= d;
    Matrix rho = Matrix::Zero(total, total);
    for (int i = 0; i < k; ++i) {
        const auto params = sample_product_params(dims, rng);
        const Vector psi = product_ket(dims, params.angles);
        rho.noalias() += (w[static_cast<std::size_t>(i)] / sum) * pure(psi);
    }
    return DensityMatrix(std::move(rho), std::vector<int>(dims.begin(), dims.end()));
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, std::span<const Matrix> unitaries) {
    if (unitaries.size() != rho.dims.size())
        throw std::invalid_argument("apply_local_unitary: one unitary per subsystem required");
    Matrix u = Matrix::Identity(1, 1);
    for (std::size_t s = 0; s < unitaries.size(); ++s) {
        const Matrix& f = unitaries[s];
        if (f.rows() != rho.dims[s] || f.cols() != rho.dims[s])
            throw std::invalid_argument("apply_local_unitary: factor dimension mismatch");
        const Matrix residue = f.adjoint() * f - Matrix::Identity(f.rows(), f.cols());
        if (residue.cwiseAbs().maxCoeff() > 1e-10)
            throw std::invalid_argument("apply_local_unitary: factor is not unitary");
        u = qops::tensor_product(u, f);
    }
    return DensityMatrix(u * rho.matrix * u.adjoint(), rho.dims);
}

// --------------------------- serialization ----------------------------------

nlohmann::json density_to_json(const DensityMatrix& rho) {
    nlohmann::json j;
    j["dims"] = rho.dims;
    std::vector<double> re, im;
    re.reserve(static_cast<std::size_t>(rho.matrix.size()));
    im.reserve(static_cast<std::size_t>(rho.matrix.size()));
    for (Eigen::Index i = 0; i < rho.matrix.rows(); ++i)
        for (Eigen::Index c = 0; c < rho.matrix.cols(); ++c) {
            re.push_back(rho.matrix(i, c).real());
            im.push_back(rho.matrix(i, c).imag());
        }
    j["re"] = re;
    j["im"] = im;
    return j;
}

DensityMatrix density_from_json(const nlohmann::json& j) {
    if (!j.contains("dims") || !j.contains("re") || !j.contains("im"))
        throw std::invalid_argument("density matrix json: required keys are dims, re, im");
    const auto dims = j.at("dims").get<std::vector<int>>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    long long total = 1;
    for (int d : dims) total *= d;
    const std::size_t n = static_cast<std::size_t>(total) * static_cast<std::size_t>(total);
    if (re.size() != n || im.size() != n)
        throw std::invalid_argument("density matrix json: entry arrays do not match dims");
    Matrix m(total, total);
    for (Eigen::Index i = 0; i < total; ++i)
        for (Eigen::Index c = 0; c < total; ++c) {
            const std::size_t f = static_cast<std::size_t>(i) * static_cast<std::size_t>(total) +
                                  static_cast<std::size_t>(c);
            m(i, c) = Complex(re[f], im[f]);
        }
    return DensityMatrix(std::move(m), dims);
}

DensityMatrix load_density_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return density_from_json(j);
}

void save_density_matrix(const std::string& path, const DensityMatrix& rho) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << density_to_json(rho).dump(2) << '\n';
}

}  // namespace few::states
