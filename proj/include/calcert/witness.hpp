#pragma once

// Separable two-qubit models that reproduce a given data matrix. A witness
// is only ever handed out after re-verification: the state must be PPT
// (hence separable for two qubits) and its predicted data must match the
// target within kWitnessTolerance.

#include <array>
#include <optional>

#include "calcert/datamatrix.hpp"
#include "calcert/qmodel.hpp"

namespace calcert {

inline constexpr double kWitnessTolerance = 1e-9;

struct SeparableWitness {
    DensityOperator state;
    MeasurementFamily measurements_a;
    MeasurementFamily measurements_b;
    double reproduction_error;
    double ppt_min_eigenvalue;
    /// Weights on (Phi+, Phi-, Psi+, Psi-) of the Bell-diagonal state before
    /// the local rotations.
    std::array<double, 4> bell_weights;
};

/// Checks a witness against `target`; throws std::runtime_error with the
/// failed property. Returns the recomputed reproduction error.
double verify_witness(const SeparableWitness &w, const DataMatrix &target);

/// Lift of a rotation O in SO(3) to U in SU(2) with
/// U sigma_k U^dagger = sum_i O_ik sigma_i. The sign is fixed so that the
/// first nonzero entry of the quaternion (w, x, y, z), U = w - i(x X + y Y + z Z),
/// is positive. Throws std::invalid_argument for non-orthogonal input or
/// det O = -1.
ComplexMatrix orthogonal_to_unitary(const Eigen::Matrix3d &o);

/// Rotated Bell-diagonal separable state reproducing diag(1, T2) with sharp
/// orthogonal measurements (sigma_x, sigma_z) on both sides. Throws
/// std::domain_error when the singular values of T2 violate
/// l1 + l2 <= 1 (within 1e-12).
SeparableWitness fit_separable_model(const Eigen::Matrix2d &t2);

/// Separable model for a two-setting data matrix with arbitrary marginals
/// using unsharp orthogonal qubit measurements A = sigma/x2 + m. Returns
/// nullopt when the minimally sharpened correlation block is outside the
/// Bell-diagonal separable region or a marginal has magnitude >= 1.
std::optional<SeparableWitness> fit_unsharp_orthogonal_model(const DataMatrix &d);

}  // namespace calcert
