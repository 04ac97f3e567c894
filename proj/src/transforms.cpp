#include "calcert/transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace calcert {

namespace {

double hs_inner(const ComplexMatrix &a, const ComplexMatrix &b) {
    // tr(a b) for Hermitian a, b equals sum conj(a_ij) b_ij.
    return (a.conjugate().cwiseProduct(b)).sum().real();
}

}  // namespace

TiltAngle::TiltAngle(double theta) : theta_(theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
        throw std::domain_error("tilt angle must lie in the open interval (0, pi/2), got " + std::to_string(theta));
    }
}

Eigen::Matrix3d rotation_matrix(TiltAngle theta) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
    r(0, 0) = 1.0;
    r.bottomRightCorner<2, 2>() = rotation_block(theta);
    return r;
}

Eigen::Matrix2d rotation_block(TiltAngle theta) {
    const double c = std::cos(theta.radians());
    const double s = std::sin(theta.radians());
    Eigen::Matrix2d r;
    r << 1.0 / (2.0 * c), 1.0 / (2.0 * c), 1.0 / (2.0 * s), -1.0 / (2.0 * s);
    return r;
}

Eigen::Matrix2d rotation_block_inverse(TiltAngle theta) {
    const double c = std::cos(theta.radians());
    const double s = std::sin(theta.radians());
    Eigen::Matrix2d r;
    r << c, s, c, -s;
    return r;
}

Sharpener::Sharpener(double x1, double x2, double x3, double x4) : x1_(x1), x2_(x2), x3_(x3), x4_(x4) {
    constexpr double slack = 1e-12;
    if (!(x2 > 0.0 && x4 > 0.0)) {
        throw std::invalid_argument("sharpener scales x2, x4 must be positive");
    }
    if (x2 < 1.0 + std::abs(x1) - slack || x4 < 1.0 + std::abs(x3) - slack) {
        throw std::invalid_argument("sharpener violates x2 >= 1 + |x1| or x4 >= 1 + |x3|");
    }
}

Sharpener Sharpener::minimal_for_marginals(double m1, double m2) {
    if (!(std::abs(m1) < 1.0 && std::abs(m2) < 1.0)) {
        throw std::invalid_argument("marginals of unsharp observables must satisfy |m| < 1");
    }
    const double x2 = 1.0 / (1.0 - std::abs(m1));
    const double x4 = 1.0 / (1.0 - std::abs(m2));
    return Sharpener(-m1 * x2, x2, -m2 * x4, x4);
}

Eigen::Matrix3d Sharpener::matrix() const {
    Eigen::Matrix3d s;
    s << 1.0, 0.0, 0.0, x1_, x2_, 0.0, x3_, 0.0, x4_;
    return s;
}

Eigen::Matrix2d Sharpener::scale() const {
    Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
    s(0, 0) = x2_;
    s(1, 1) = x4_;
    return s;
}

GramSchmidtResult gram_schmidt(const MeasurementFamily &family) {
    const auto d = static_cast<Eigen::Index>(family.dim());
    const auto count = static_cast<Eigen::Index>(family.size()) + 1;

    std::vector<ComplexMatrix> inputs{ComplexMatrix::Identity(d, d)};
    for (const auto &o : family) {
        inputs.push_back(o.matrix());
    }

    GramSchmidtResult out;
    out.transform = RealMatrix::Zero(count, count);
    out.normalization = RealMatrix::Zero(count, count);
    std::vector<ComplexMatrix> basis;
    for (Eigen::Index i = 0; i < count; ++i) {
        const ComplexMatrix &v = inputs[i];
        const double input_norm = std::sqrt(hs_inner(v, v));
        out.normalization(i, i) = 1.0 / input_norm;

        RealVector coeffs = RealVector::Zero(count);
        coeffs(i) = 1.0;
        ComplexMatrix residual = v;
        // Two passes of modified Gram-Schmidt keep K orthonormal to ~1e-15.
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < i; ++j) {
                const double overlap = hs_inner(basis[j], residual);
                residual -= overlap * basis[j];
                coeffs -= overlap * out.transform.row(j).transpose();
            }
        }
        const double norm = std::sqrt(hs_inner(residual, residual));
        if (!(norm > kPivotTolerance * input_norm)) {
            throw LinearDependenceError("measurement " + std::to_string(i) +
                                            " is linearly dependent on the identity and earlier settings",
                                        static_cast<std::size_t>(i));
        }
        basis.push_back(residual / norm);
        out.transform.row(i) = coeffs.transpose() / norm;
    }
    for (auto &k : basis) {
        out.orthonormal_set.emplace_back(k);
    }
    out.orthogonalization = out.transform * out.normalization.diagonal().cwiseInverse().asDiagonal();
    return out;
}

RealMatrix orthonormalized_correlation(const DataMatrix &d, const GramSchmidtResult &a, const GramSchmidtResult &b) {
    if (a.transform.rows() != d.matrix().rows() || b.transform.rows() != d.matrix().rows()) {
        throw std::invalid_argument("Gram-Schmidt transforms do not match the data matrix size");
    }
    return a.transform * d.matrix() * b.transform.transpose();
}

double gram_determinant_bound(std::size_t d, std::size_t n) {
    return std::pow(static_cast<double>(d), -static_cast<double>(n + 1) / 2.0);
}

double qutrit_gram_determinant_bound() { return std::sqrt(3.0) / 8.0; }

}  // namespace calcert
