#include "calcert/qmodel.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace calcert {

namespace {

void require_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + ": noise parameter must lie in [0, 1], got " +
                                    std::to_string(p));
    }
}

ComplexMatrix ket_projector(const std::array<Complex, 4> &amps) {
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) {
        v(i) = amps[i];
    }
    v.normalize();
    return v * v.adjoint();
}

// Reorders a four-qubit operator from factor order (A, B, A', B') to
// (A, A', B, B').
ComplexMatrix regroup_ab_a2b2(const ComplexMatrix &m) {
    auto remap = [](int idx) {
        const int a = (idx >> 3) & 1;
        const int b = (idx >> 2) & 1;
        const int a2 = (idx >> 1) & 1;
        const int b2 = idx & 1;
        return (a << 3) | (a2 << 2) | (b << 1) | b2;
    };
    ComplexMatrix out(16, 16);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
            out(remap(r), remap(c)) = m(r, c);
        }
    }
    return out;
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix &entries) {
    if (entries.rows() == 0 || entries.rows() != entries.cols()) {
        throw std::invalid_argument("operator must be a nonempty square matrix");
    }
    const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTolerance) {
        throw std::invalid_argument("operator is not Hermitian (max |M - M^dagger| = " + std::to_string(asym) +
                                    ")");
    }
    m_ = (entries + entries.adjoint()) / 2.0;
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return HermitianOperator(ComplexMatrix::Identity(d, d));
}

RealVector HermitianOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

DensityOperator::DensityOperator(const ComplexMatrix &entries) : op_(entries) {
    const double tr = op_.matrix().trace().real();
    if (std::abs(tr - 1.0) > kTraceTolerance) {
        throw std::invalid_argument("density operator must have unit trace, got " + std::to_string(tr));
    }
    const double min_eig = op_.eigenvalues()(0);
    if (min_eig < -kPsdTolerance) {
        throw std::invalid_argument("density operator is not positive semidefinite (min eigenvalue " +
                                    std::to_string(min_eig) + ")");
    }
}

DichotomicObservable::DichotomicObservable(HermitianOperator op) : op_(std::move(op)) {
    const RealVector ev = op_.eigenvalues();
    if (ev(0) < -1.0 - kPsdTolerance || ev(ev.size() - 1) > 1.0 + kPsdTolerance) {
        throw std::invalid_argument("dichotomic observable needs spectrum in [-1, 1], got [" +
                                    std::to_string(ev(0)) + ", " + std::to_string(ev(ev.size() - 1)) + "]");
    }
}

MeasurementFamily::MeasurementFamily(std::vector<DichotomicObservable> observables) : obs_(std::move(observables)) {
    if (obs_.empty()) {
        throw std::invalid_argument("measurement family must not be empty");
    }
    for (const auto &o : obs_) {
        if (o.dim() != obs_.front().dim()) {
            throw std::invalid_argument("measurement family members must share one dimension");
        }
    }
}

Povm povm_from_observable(const DichotomicObservable &a) {
    const auto d = static_cast<Eigen::Index>(a.dim());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    return Povm{HermitianOperator((id + a.matrix()) / 2.0), HermitianOperator((id - a.matrix()) / 2.0)};
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double expectation(const DensityOperator &rho, const ComplexMatrix &a, const ComplexMatrix &b) {
    const Eigen::Index da = a.rows();
    const Eigen::Index db = b.rows();
    if (static_cast<Eigen::Index>(rho.dim()) != da * db) {
        throw std::invalid_argument("dimension mismatch: state has dimension " + std::to_string(rho.dim()) +
                                    " but observables act on " + std::to_string(da) + " x " + std::to_string(db));
    }
    // tr(rho (a (x) b)) = sum rho[(i k),(j l)] a[j,i] b[l,k]
    const ComplexMatrix &r = rho.matrix();
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            const Complex aji = a(j, i);
            if (aji == Complex(0.0)) {
                continue;
            }
            Complex inner = 0.0;
            for (Eigen::Index k = 0; k < db; ++k) {
                for (Eigen::Index l = 0; l < db; ++l) {
                    inner += r(i * db + k, j * db + l) * b(l, k);
                }
            }
            acc += aji * inner;
        }
    }
    return acc.real();
}

double expectation(const DensityOperator &rho, const DichotomicObservable &a, const DichotomicObservable &b) {
    return expectation(rho, a.matrix(), b.matrix());
}

namespace pauli {

ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

ComplexMatrix z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

ComplexMatrix by_index(int k) {
    switch (k) {
        case 0: return identity();
        case 1: return x();
        case 2: return y();
        case 3: return z();
        default: throw std::invalid_argument("Pauli index must be 0..3");
    }
}

ComplexMatrix by_axis(char axis) {
    switch (axis) {
        case 'x': return x();
        case 'y': return y();
        case 'z': return z();
        default: throw std::invalid_argument(std::string("unknown Pauli axis '") + axis + "'");
    }
}

}  // namespace pauli

ComplexMatrix bell_projector(BellState s) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (s) {
        case BellState::PhiPlus: return ket_projector({r, 0, 0, r});
        case BellState::PhiMinus: return ket_projector({r, 0, 0, -r});
        case BellState::PsiPlus: return ket_projector({0, r, r, 0});
        case BellState::PsiMinus: return ket_projector({0, r, -r, 0});
    }
    throw std::invalid_argument("unknown Bell state");
}

DensityOperator werner_state(double p) {
    require_probability(p, "werner_state");
    const ComplexMatrix m = (1.0 - p) * bell_projector(BellState::PsiMinus) + p * ComplexMatrix::Identity(4, 4) / 4.0;
    return DensityOperator(m);
}

DensityOperator bfp_state(double p) {
    require_probability(p, "bfp_state");
    using B = BellState;
    static constexpr std::array<std::pair<B, B>, 6> kTerms{{
        {B::PhiPlus, B::PsiMinus},
        {B::PsiPlus, B::PsiPlus},
        {B::PsiMinus, B::PhiMinus},
        {B::PhiMinus, B::PsiPlus},
        {B::PhiMinus, B::PsiMinus},
        {B::PhiMinus, B::PhiMinus},
    }};
    ComplexMatrix bfp = ComplexMatrix::Zero(16, 16);
    for (const auto &[ab, a2b2] : kTerms) {
        bfp += regroup_ab_a2b2(kron(bell_projector(ab), bell_projector(a2b2))) / 6.0;
    }
    return DensityOperator((1.0 - p) * bfp + p * ComplexMatrix::Identity(16, 16) / 16.0);
}

MeasurementFamily product_pauli_family() {
    std::vector<DichotomicObservable> obs;
    obs.reserve(15);
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
            if (k == 0 && l == 0) {
                continue;
            }
            obs.emplace_back(HermitianOperator(kron(pauli::by_index(k), pauli::by_index(l))));
        }
    }
    return MeasurementFamily(std::move(obs));
}

MeasurementFamily pauli_family(std::string_view axes) {
    std::vector<DichotomicObservable> obs;
    for (char c : axes) {
        obs.emplace_back(HermitianOperator(pauli::by_axis(c)));
    }
    return MeasurementFamily(std::move(obs));
}

ExampleStates example_states() {
    using namespace pauli;
    const double s3 = std::sqrt(3.0);
    const ComplexMatrix sep = (kron(identity(), identity()) + 0.5 * (kron(x(), x()) + kron(z(), z()))) / 4.0;

    // Data matrix entries indexed by (1, sigma_x, sigma_z) on each side.
    const double marginal = 1.0 - s3;
    RealMatrix d(3, 3);
    d << 1.0, marginal, 0.0, marginal, (15.0 - 8.0 * s3) / 2.0, 0.0, 0.0, 0.0, 0.5;
    const std::array<ComplexMatrix, 3> basis{identity(), x(), z()};
    const double yy = 4.0 * s3 - 7.0;
    ComplexMatrix ent = yy * kron(y(), y());
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            ent += d(i, j) * kron(basis[i], basis[j]);
        }
    }
    ent /= 4.0;
    return ExampleStates{DensityOperator(sep), DensityOperator(ent)};
}

MeasurementFamily example_unsharp_family() {
    const double x1 = 1.0 + std::sqrt(3.0);
    const double x2 = 1.0 + x1;
    const ComplexMatrix a = (pauli::x() - x1 * pauli::identity()) / x2;
    return MeasurementFamily({DichotomicObservable(HermitianOperator(a)),
                              DichotomicObservable(HermitianOperator(pauli::z()))});
}

ComplexMatrix partial_transpose(const ComplexMatrix &m, std::size_t dim_a, std::size_t dim_b) {
    const auto da = static_cast<Eigen::Index>(dim_a);
    const auto db = static_cast<Eigen::Index>(dim_b);
    if (m.rows() != da * db || m.cols() != da * db) {
        throw std::invalid_argument("partial transpose: subsystem dimensions do not match the operator");
    }
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            out.block(i * db, j * db, db, db) = m.block(i * db, j * db, db, db).transpose();
        }
    }
    return out;
}

PptResult ppt_check(const DensityOperator &rho, std::size_t dim_a, std::size_t dim_b) {
    if (dim_a * dim_b != rho.dim()) {
        throw std::invalid_argument("ppt_check: " + std::to_string(dim_a) + " x " + std::to_string(dim_b) +
                                    " does not match state dimension " + std::to_string(rho.dim()));
    }
    const ComplexMatrix pt = partial_transpose(rho.matrix(), dim_a, dim_b);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pt, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues()(0);
    return PptResult{min_eig >= -kPsdTolerance, min_eig};
}

}  // namespace calcert
