#pragma once

// Frame changes between measured observables and ideal (sharp, orthogonal)
// ones: the tilt R(theta), the sharpener S(x) and Hilbert-Schmidt
// Gram-Schmidt orthonormalization for n dichotomic measurements in
// dimension d.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "calcert/datamatrix.hpp"
#include "calcert/qmodel.hpp"

namespace calcert {

/// Tilt between two sharp qubit observables A = cos t s_i + sin t s_j,
/// A' = cos t s_i - sin t s_j. Valid for t in the open interval (0, pi/2).
class TiltAngle {
public:
    /// Throws std::domain_error at or outside the endpoints.
    explicit TiltAngle(double theta);
    double radians() const { return theta_; }

private:
    double theta_;
};

/// 3x3 map (1, A, A') -> (1, s_i, s_j): diag(1, R2).
Eigen::Matrix3d rotation_matrix(TiltAngle theta);

/// R2 = [[1/(2cos), 1/(2cos)], [1/(2sin), -1/(2sin)]].
Eigen::Matrix2d rotation_block(TiltAngle theta);

/// R2^{-1} = [[cos, sin], [cos, -sin]].
Eigen::Matrix2d rotation_block_inverse(TiltAngle theta);

/// Parameters of s_i = x1 1 + x2 A, s_j = x3 1 + x4 A'. Physicality of A, A'
/// requires x2 >= 1 + |x1| and x4 >= 1 + |x3|.
class Sharpener {
public:
    /// Throws std::invalid_argument when the constraints fail.
    Sharpener(double x1, double x2, double x3, double x4);

    /// Smallest sharpener turning unsharp observables with marginals
    /// (m1, m2) (|m| < 1) into sharp ones: x2 = 1/(1-|m1|), x1 = -m1 x2.
    static Sharpener minimal_for_marginals(double m1, double m2);

    /// [[1, 0, 0], [x1, x2, 0], [x3, 0, x4]].
    Eigen::Matrix3d matrix() const;
    /// Column vector (x1, x3).
    Eigen::Vector2d offset() const { return {x1_, x3_}; }
    /// diag(x2, x4).
    Eigen::Matrix2d scale() const;

    double x1() const { return x1_; }
    double x2() const { return x2_; }
    double x3() const { return x3_; }
    double x4() const { return x4_; }

private:
    double x1_, x2_, x3_, x4_;
};

class LinearDependenceError : public std::invalid_argument {
public:
    LinearDependenceError(const std::string &what, std::size_t index)
        : std::invalid_argument(what), index_(index) {}
    /// Position in the sequence (1, A_1, ..., A_n); 0 is the identity.
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

inline constexpr double kPivotTolerance = 1e-10;

struct GramSchmidtResult {
    /// K_0 = 1/sqrt(d), K_1, ..., K_n with tr(K_i K_j) = delta_ij.
    std::vector<HermitianOperator> orthonormal_set;
    /// Lower-triangular G with K_i = sum_j G_ij V_j, V = (1, A_1, ..., A_n).
    RealMatrix transform;
    /// N = diag(1/sqrt(tr V_i^2)).
    RealMatrix normalization;
    /// O = G N^{-1}; |det O| >= 1.
    RealMatrix orthogonalization;
};

/// Orthonormalizes {1} u family in input order. A residual whose norm falls
/// below kPivotTolerance relative to the input operator raises
/// LinearDependenceError naming that index.
GramSchmidtResult gram_schmidt(const MeasurementFamily &family);

/// C = G_a D G_b^T, the data expressed in orthonormal operator frames.
RealMatrix orthonormalized_correlation(const DataMatrix &d, const GramSchmidtResult &a, const GramSchmidtResult &b);

/// d^{-(n+1)/2}.
double gram_determinant_bound(std::size_t d, std::size_t n);

/// sqrt(3)/8, the sharper bound for n = 2 settings in dimension 3.
double qutrit_gram_determinant_bound();

}  // namespace calcert
