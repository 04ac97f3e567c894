#include "calcert/witness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "calcert/transforms.hpp"

namespace calcert {

namespace {

constexpr double kRotationTolerance = 1e-9;

// Embeds a 2x2 block acting on the (x, z) Pauli plane into a rotation of
// R^3; the y axis receives det(block) so the result lies in SO(3).
Eigen::Matrix3d embed_xz(const Eigen::Matrix2d &q) {
    Eigen::Matrix3d o = Eigen::Matrix3d::Zero();
    o(0, 0) = q(0, 0);
    o(0, 2) = q(0, 1);
    o(2, 0) = q(1, 0);
    o(2, 2) = q(1, 1);
    o(1, 1) = q.determinant() > 0 ? 1.0 : -1.0;
    return o;
}

ComplexMatrix bell_diagonal(double tx, double ty, double tz) {
    using namespace pauli;
    return (kron(identity(), identity()) + tx * kron(x(), x()) + ty * kron(y(), y()) + tz * kron(z(), z())) / 4.0;
}

SeparableWitness make_witness(const ComplexMatrix &state, MeasurementFamily fa, MeasurementFamily fb,
                              const DataMatrix &target, const std::array<double, 4> &weights) {
    SeparableWitness w{DensityOperator(state), std::move(fa), std::move(fb), 0.0, 0.0, weights};
    w.reproduction_error = verify_witness(w, target);
    w.ppt_min_eigenvalue = ppt_check(w.state, 2, 2).min_eigenvalue;
    return w;
}

}  // namespace

double verify_witness(const SeparableWitness &w, const DataMatrix &target) {
    if (w.state.dim() != 4) {
        throw std::runtime_error("witness state is not a two-qubit state");
    }
    const PptResult ppt = ppt_check(w.state, 2, 2);
    if (!ppt.ppt) {
        throw std::runtime_error("witness state is not PPT (min eigenvalue " + std::to_string(ppt.min_eigenvalue) +
                                 ")");
    }
    const DataMatrix predicted = from_state(w.state, w.measurements_a, w.measurements_b);
    if (predicted.settings() != target.settings()) {
        throw std::runtime_error("witness measurements do not match the number of settings");
    }
    const double err = (predicted.matrix() - target.matrix()).cwiseAbs().maxCoeff();
    if (!(err <= kWitnessTolerance)) {
        throw std::runtime_error("witness reproduces the data only to " + std::to_string(err));
    }
    return err;
}

ComplexMatrix orthogonal_to_unitary(const Eigen::Matrix3d &o) {
    if ((o.transpose() * o - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > kRotationTolerance) {
        throw std::invalid_argument("orthogonal_to_unitary: matrix is not orthogonal");
    }
    if (std::abs(o.determinant() - 1.0) > kRotationTolerance) {
        throw std::invalid_argument("orthogonal_to_unitary: determinant is not +1 (absorb the reflection first)");
    }
    // Shepperd's method: branch on the largest diagonal quantity.
    const double tr = o.trace();
    double w, x, y, z;
    if (tr >= o(0, 0) && tr >= o(1, 1) && tr >= o(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + tr);
        w = s / 4.0;
        x = (o(2, 1) - o(1, 2)) / s;
        y = (o(0, 2) - o(2, 0)) / s;
        z = (o(1, 0) - o(0, 1)) / s;
    } else if (o(0, 0) >= o(1, 1) && o(0, 0) >= o(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + o(0, 0) - o(1, 1) - o(2, 2));
        w = (o(2, 1) - o(1, 2)) / s;
        x = s / 4.0;
        y = (o(0, 1) + o(1, 0)) / s;
        z = (o(0, 2) + o(2, 0)) / s;
    } else if (o(1, 1) >= o(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + o(1, 1) - o(0, 0) - o(2, 2));
        w = (o(0, 2) - o(2, 0)) / s;
        x = (o(0, 1) + o(1, 0)) / s;
        y = s / 4.0;
        z = (o(1, 2) + o(2, 1)) / s;
    } else {
        const double s = 2.0 * std::sqrt(1.0 + o(2, 2) - o(0, 0) - o(1, 1));
        w = (o(1, 0) - o(0, 1)) / s;
        x = (o(0, 2) + o(2, 0)) / s;
        y = (o(1, 2) + o(2, 1)) / s;
        z = s / 4.0;
    }
    const double norm = std::sqrt(w * w + x * x + y * y + z * z);
    w /= norm;
    x /= norm;
    y /= norm;
    z /= norm;
    for (double c : {w, x, y, z}) {
        if (std::abs(c) > 1e-12) {
            if (c < 0) {
                w = -w;
                x = -x;
                y = -y;
                z = -z;
            }
            break;
        }
    }
    const Complex i(0.0, 1.0);
    return w * pauli::identity() - i * (x * pauli::x() + y * pauli::y() + z * pauli::z());
}

SeparableWitness fit_separable_model(const Eigen::Matrix2d &t2) {
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(t2, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double l1 = svd.singularValues()(0);
    const double l2 = svd.singularValues()(1);
    if (l1 + l2 > 1.0 + 1e-12) {
        throw std::domain_error("no Bell-diagonal separable model: singular values sum to " +
                                std::to_string(l1 + l2) + " > 1");
    }
    // Correlations diag(l1, 0, l2) on (x, y, z); weights (1 +- l1 +- l2)/4.
    const std::array<double, 4> weights{
        (1.0 + l1 + l2) / 4.0,  // Phi+
        (1.0 - l1 + l2) / 4.0,  // Phi-
        (1.0 + l1 - l2) / 4.0,  // Psi+
        (1.0 - l1 - l2) / 4.0,  // Psi-
    };
    const ComplexMatrix ua = orthogonal_to_unitary(embed_xz(svd.matrixU()));
    const ComplexMatrix ub = orthogonal_to_unitary(embed_xz(svd.matrixV()));
    const ComplexMatrix u = kron(ua, ub);
    const ComplexMatrix state = u * bell_diagonal(l1, 0.0, l2) * u.adjoint();

    RealMatrix target = RealMatrix::Zero(3, 3);
    target(0, 0) = 1.0;
    target.bottomRightCorner<2, 2>() = t2;
    return make_witness(state, pauli_family("xz"), pauli_family("xz"), DataMatrix(target), weights);
}

std::optional<SeparableWitness> fit_unsharp_orthogonal_model(const DataMatrix &d) {
    if (d.settings() != 2) {
        return std::nullopt;
    }
    const RealMatrix &m = d.matrix();
    for (int i = 1; i <= 2; ++i) {
        if (!(std::abs(m(i, 0)) < 1.0 && std::abs(m(0, i)) < 1.0)) {
            return std::nullopt;
        }
    }
    const Sharpener sa = Sharpener::minimal_for_marginals(m(1, 0), m(2, 0));
    const Sharpener sb = Sharpener::minimal_for_marginals(m(0, 1), m(0, 2));
    const Eigen::Matrix3d sharp = sa.matrix() * Eigen::Matrix3d(m) * sb.matrix().transpose();
    const Eigen::Matrix2d t2 = sharp.bottomRightCorner<2, 2>();
    std::optional<SeparableWitness> sharp_model;
    try {
        sharp_model = fit_separable_model(t2);
    } catch (const std::domain_error &) {
        return std::nullopt;
    }

    auto unsharp = [](const Sharpener &s, double m1, double m2) {
        const ComplexMatrix id = pauli::identity();
        return MeasurementFamily({DichotomicObservable(HermitianOperator(pauli::x() / s.x2() + m1 * id)),
                                  DichotomicObservable(HermitianOperator(pauli::z() / s.x4() + m2 * id))});
    };
    try {
        return make_witness(sharp_model->state.matrix(), unsharp(sa, m(1, 0), m(2, 0)),
                            unsharp(sb, m(0, 1), m(0, 2)), d, sharp_model->bell_weights);
    } catch (const std::runtime_error &) {
        return std::nullopt;
    }
}

}  // namespace calcert
