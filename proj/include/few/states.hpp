#pragma once

#include "few/qops.hpp"
#include "few/rng.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace few::states {

using qops::Complex;
using qops::Matrix;
using qops::Vector;

// Hermitian, unit-trace, positive-semidefinite operator with declared
// subsystem dimensions. The constructor validates all three invariants.
struct DensityMatrix {
    Matrix matrix;
    std::vector<int> dims;

    DensityMatrix(Matrix m, std::vector<int> subsystem_dims);

    int dim() const;
};

// --------------------------- pure product states -----------------------------

// Angle blocks per subsystem, concatenated:
//   qubit  (α, β):        cos β |0> + e^{iα} sin β |1>
//   qutrit (η, ξ, θ, φ):  e^{iη} sin θ sin φ |0> + e^{iξ} sin θ cos φ |1> + cos θ |2>
// with α, η, ξ ∈ [0, 2π] and β, θ, φ ∈ [0, π/2].
struct ProductStateParams {
    std::vector<int> dims;
    std::vector<double> angles;
};

int angle_count(int subsystem_dim);
int total_angle_count(std::span<const int> dims);

// Writes the `dim` amplitudes of one subsystem ket into out.
void subsystem_ket(int dim, const double* angles, Complex* out);

Vector product_ket(std::span<const int> dims, std::span<const double> angles);

DensityMatrix product_pure_state(const ProductStateParams& params);

// Angles drawn uniformly over their declared rectangles. This is not a
// Haar-uniform draw on the state manifold; samples are starting points for
// local refinement, which removes the sampling bias.
ProductStateParams sample_product_params(std::span<const int> dims, Rng& rng);

// Maps arbitrary real angles back into the declared rectangles without
// changing the realized state: periodic wrap for phases, reflection plus
// phase shift for the polar angles.
void wrap_angles(ProductStateParams& params);

// --------------------------- named families ---------------------------------

// |ψ_ij> = σ_z^i ⊗ σ_x^j (|00>+|11>)/√2
DensityMatrix bell_state(int i, int j);

// F ψ00 + (1-F)/3 (ψ10 + ψ01 + ψ11); F is the overlap with ψ00.
DensityMatrix werner(double fidelity);

// q |GHZ><GHZ| + (1-q) |W><W| on three qubits.
DensityMatrix ghz_w_mixture(double q);

// (2/7)|φ+><φ+| + (α/7)σ+ + ((5-α)/7)σ- on two qutrits, 2 ≤ α ≤ 5.
DensityMatrix two_qutrit_alpha(double alpha);

// Convex mixture of k product pure states with Dirichlet(1,...,1) weights.
DensityMatrix random_separable(std::span<const int> dims, int k, Rng& rng);

// (Π d_i)², enough mixture components to reach the whole separable set.
int default_component_count(std::span<const int> dims);

// (U1 ⊗ ... ⊗ Un) ρ (U1 ⊗ ... ⊗ Un)†; every factor must be unitary.
DensityMatrix apply_local_unitary(const DensityMatrix& rho, std::span<const Matrix> unitaries);

// --------------------------- serialization ----------------------------------

// {"dims": [...], "re": [...], "im": [...]} with row-major entry arrays.
nlohmann::json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);
DensityMatrix load_density_matrix(const std::string& path);
void save_density_matrix(const std::string& path, const DensityMatrix& rho);

}  // namespace few::states
