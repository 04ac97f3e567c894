#pragma once

// Operator algebra for finite-dimensional bipartite systems: validated
// Hermitian operators, density operators, two-outcome observables and the
// named example states used throughout the library.
//
// Conventions:
//   * computational basis ordering |00>, |01>, |10>, |11>;
//   * Bell states Phi+- = (|00> +- |11>)/sqrt2, Psi+- = (|01> +- |10>)/sqrt2;
//   * for four-qubit states the factors are ordered A (x) A' (x) B (x) B'
//     and the bipartition is AA'|BB'.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace calcert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

class HermitianOperator {
public:
    /// Throws std::invalid_argument unless `entries` is square and Hermitian
    /// entry-wise within kHermitianTolerance. The stored matrix is the
    /// Hermitian part of the input.
    explicit HermitianOperator(const ComplexMatrix &entries);

    static HermitianOperator identity(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const ComplexMatrix &matrix() const { return m_; }

    /// Ascending eigenvalues.
    RealVector eigenvalues() const;

private:
    ComplexMatrix m_;
};

class DensityOperator {
public:
    /// Hermitian, unit trace, min eigenvalue >= -kPsdTolerance.
    explicit DensityOperator(const ComplexMatrix &entries);

    std::size_t dim() const { return op_.dim(); }
    const ComplexMatrix &matrix() const { return op_.matrix(); }
    const HermitianOperator &as_operator() const { return op_; }

private:
    HermitianOperator op_;
};

/// A = M+ - M-, valid iff every eigenvalue lies in [-1, 1] (with a
/// kPsdTolerance allowance).
class DichotomicObservable {
public:
    explicit DichotomicObservable(HermitianOperator op);

    std::size_t dim() const { return op_.dim(); }
    const HermitianOperator &op() const { return op_; }
    const ComplexMatrix &matrix() const { return op_.matrix(); }

private:
    HermitianOperator op_;
};

class MeasurementFamily {
public:
    /// Nonempty, all members of equal dimension.
    explicit MeasurementFamily(std::vector<DichotomicObservable> observables);

    std::size_t size() const { return obs_.size(); }
    std::size_t dim() const { return obs_.front().dim(); }
    const DichotomicObservable &operator[](std::size_t i) const { return obs_[i]; }
    auto begin() const { return obs_.begin(); }
    auto end() const { return obs_.end(); }

private:
    std::vector<DichotomicObservable> obs_;
};

struct Povm {
    HermitianOperator plus;
    HermitianOperator minus;
};

/// (M+, M-) = ((1 + A)/2, (1 - A)/2).
Povm povm_from_observable(const DichotomicObservable &a);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

/// tr(rho (a (x) b)) without forming the Kronecker product.
/// Throws std::invalid_argument when dim(rho) != dim(a) * dim(b).
double expectation(const DensityOperator &rho, const ComplexMatrix &a, const ComplexMatrix &b);
double expectation(const DensityOperator &rho, const DichotomicObservable &a, const DichotomicObservable &b);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// sigma_0..sigma_3 = 1, x, y, z.
ComplexMatrix by_index(int k);
/// 'x', 'y' or 'z'; throws std::invalid_argument otherwise.
ComplexMatrix by_axis(char axis);
}  // namespace pauli

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

ComplexMatrix bell_projector(BellState s);

/// (1 - p) Psi- + p 1/4. Throws std::invalid_argument for p outside [0, 1].
DensityOperator werner_state(double p);

/// (1 - p) rho_BFP + p 1/16 on A A' B B'. rho_BFP is the uniform mixture of
/// six products of Bell projectors on AB and A'B'; it is PPT across AA'|BB'.
DensityOperator bfp_state(double p);

/// sigma_k (x) sigma_l on A A', (k, l) != (0, 0), in row-major (k, l) order:
/// (0,1), (0,2), (0,3), (1,0), ..., (3,3).
MeasurementFamily product_pauli_family();

/// Sharp qubit observables along the named axes, e.g. "xz" -> (sigma_x, sigma_z).
MeasurementFamily pauli_family(std::string_view axes);

struct ExampleStates {
    DensityOperator separable;
    DensityOperator entangled;
};

/// The separable/entangled pair behind the three-setting counterexample:
/// `separable` = 1/4 [1 + (xx + zz)/2]; `entangled` reproduces the same data
/// with sharp measurements (sigma_x, sigma_z) on both sides.
ExampleStates example_states();

/// Unsharp measurements of the counterexample: A = (sigma_x - x1)/x2 with
/// x1 = 1 + sqrt3, x2 = 1 + x1, and A' = sigma_z.
MeasurementFamily example_unsharp_family();

struct PptResult {
    bool ppt;
    double min_eigenvalue;
};

/// Transposes the second tensor factor of a (dim_a * dim_b)-dimensional operator.
ComplexMatrix partial_transpose(const ComplexMatrix &m, std::size_t dim_a, std::size_t dim_b);

/// Positive-partial-transpose test across A|B. Throws std::invalid_argument
/// when dim_a * dim_b != dim(rho).
PptResult ppt_check(const DensityOperator &rho, std::size_t dim_a, std::size_t dim_b);

}  // namespace calcert
