#include "few/witness.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace few::witness {

TracelessObservable make_observable(CoefficientTensor tau, std::span<const int> dims) {
    tau.validate();
    const auto bases = qops::bases_for(dims);
    TracelessObservable z;
    z.matrix = qops::assemble_observable(tau, bases);
    z.tau = std::move(tau);
    z.dims.assign(dims.begin(), dims.end());
    return z;
}

TracelessObservable from_matrix(const Matrix& z, std::span<const int> dims) {
    long long total = 1;
    for (int d : dims) total *= d;
    if (z.rows() != z.cols() || z.rows() != total)
        throw std::invalid_argument("from_matrix: matrix dimension does not match dims");
    if (!qops::is_hermitian(z, 1e-10))
        throw std::invalid_argument("from_matrix: matrix is not Hermitian");
    if (std::abs(z.trace()) > 1e-10)
        throw std::invalid_argument("from_matrix: matrix is not traceless");
    double bound = 1.0;
    CoefficientTensor tau = qops::project_observable(z, dims, bound);
    TracelessObservable out = make_observable(std::move(tau), dims);
    if ((out.matrix - z).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("from_matrix: projection does not reproduce the input");
    return out;
}

TracelessObservable normalize(const TracelessObservable& z) {
    const double norm = qops::hs_norm(z.matrix);
    if (norm < 1e-12) throw std::invalid_argument("normalize: zero operator");
    TracelessObservable out = z;
    const double inv = 1.0 / norm;
    out.matrix *= inv;
    for (auto& v : out.tau.values) v *= inv;
    for (auto& b : out.tau.lo) b *= inv;
    for (auto& b : out.tau.hi) b *= inv;
    out.normalized = true;
    return out;
}

double expectation(const Matrix& op, const states::DensityMatrix& rho) {
    if (op.rows() != rho.matrix.rows() || op.cols() != rho.matrix.cols())
        throw std::invalid_argument("expectation: dimension mismatch");
    qops::Complex tr{0.0, 0.0};
    for (Eigen::Index i = 0; i < op.rows(); ++i)
        tr += (op.row(i) * rho.matrix.col(i))(0, 0);
    if (std::abs(tr.imag()) > 1e-10)
        throw std::runtime_error("expectation: non-negligible imaginary part");
    return tr.real();
}

double expectation(const TracelessObservable& z, const states::DensityMatrix& rho) {
    return expectation(z.matrix, rho);
}

Witness extract_witness(const TracelessObservable& z, double mu) {
    Witness w;
    w.matrix = z.matrix - mu * Matrix::Identity(z.matrix.rows(), z.matrix.cols());
    w.mu = mu;
    w.source = z;
    return w;
}

// verify_witness lives in witness_verify.cpp (it drives the inner minimizer)

// --------------------------- serialization ----------------------------------

nlohmann::json witness_to_json(const Witness& w, const WitnessProvenance& prov) {
    nlohmann::json j;
    j["dims"] = w.source.dims;
    std::vector<double> re, im;
    for (Eigen::Index i = 0; i < w.matrix.rows(); ++i)
        for (Eigen::Index c = 0; c < w.matrix.cols(); ++c) {
            re.push_back(w.matrix(i, c).real());
            im.push_back(w.matrix(i, c).imag());
        }
    j["re"] = re;
    j["im"] = im;
    j["mu"] = w.mu;
    j["provenance"] = {{"seed", prov.seed}, {"generations", prov.generations}, {"fitness", prov.fitness}};
    return j;
}

Witness witness_from_json(const nlohmann::json& j) {
    for (const char* key : {"dims", "re", "im", "mu"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("witness json: missing key ") + key);
    const auto dims = j.at("dims").get<std::vector<int>>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    const double mu = j.at("mu").get<double>();
    long long total = 1;
    for (int d : dims) total *= d;
    const std::size_t n = static_cast<std::size_t>(total) * static_cast<std::size_t>(total);
    if (re.size() != n || im.size() != n)
        throw std::invalid_argument("witness json: entry arrays do not match dims");
    Matrix m(total, total);
    for (Eigen::Index i = 0; i < total; ++i)
        for (Eigen::Index c = 0; c < total; ++c) {
            const std::size_t f = static_cast<std::size_t>(i) * static_cast<std::size_t>(total) +
                                  static_cast<std::size_t>(c);
            m(i, c) = qops::Complex(re[f], im[f]);
        }
    // W = Z - μI with traceless Z, so Z = W + μI must come out traceless.
    const Matrix z = m + mu * Matrix::Identity(total, total);
    TracelessObservable source = from_matrix(z, dims);
    Witness w;
    w.matrix = std::move(m);
    w.mu = mu;
    w.source = std::move(source);
    return w;
}

Witness load_witness(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return witness_from_json(j);
}

}  // namespace few::witness
