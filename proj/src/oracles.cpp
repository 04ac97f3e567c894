#include "calcert/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace calcert {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct Window {
    double lo;
    double hi;
};

// Halves the window around `center`, keeping it inside [lo, hi].
Window shrink(const Window &w, double center, const Window &bounds) {
    const double half = (w.hi - w.lo) / 4.0;
    double lo = center - half;
    double hi = center + half;
    if (lo < bounds.lo) {
        hi += bounds.lo - lo;
        lo = bounds.lo;
    }
    if (hi > bounds.hi) {
        lo -= hi - bounds.hi;
        hi = bounds.hi;
    }
    return {std::max(lo, bounds.lo), std::min(hi, bounds.hi)};
}

double lemma1_objective(double l1, double l2, double ca, double sa, double cb, double sb) {
    const double a1 = std::sqrt(2.0) * std::max(std::abs(ca), std::abs(sa));
    const double a2 = std::sqrt(2.0) * std::min(std::abs(ca), std::abs(sa));
    const double b1 = std::sqrt(2.0) * std::max(std::abs(cb), std::abs(sb));
    const double b2 = std::sqrt(2.0) * std::min(std::abs(cb), std::abs(sb));
    const double first = (l1 + l2) * (l1 + l2) / (a1 * a1 * b1 * b1 + a2 * a2 * b2 * b2);
    const double cross = l1 * l2 == 0.0 ? 0.0 : 2.0 * l1 * l2 / (a1 * a2 * b1 * b2);
    return first + cross;
}

Eigen::Vector3d random_unit_vector(std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    Eigen::Vector3d v;
    do {
        v = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
    } while (v.norm() < 1e-8);
    return v.normalized();
}

std::vector<Eigen::Vector3d> random_orthonormal_vectors(std::mt19937_64 &rng, std::size_t n) {
    if (n > 3) {
        throw std::invalid_argument("at most three pairwise orthogonal qubit directions exist");
    }
    std::vector<Eigen::Vector3d> out;
    while (out.size() < n) {
        Eigen::Vector3d v = random_unit_vector(rng);
        for (const auto &u : out) {
            v -= u.dot(v) * u;
        }
        if (v.norm() > 1e-6) {
            out.push_back(v.normalized());
        }
    }
    return out;
}

ComplexMatrix bloch(double c, const Eigen::Vector3d &r) {
    return c * pauli::identity() + r.x() * pauli::x() + r.y() * pauli::y() + r.z() * pauli::z();
}

Eigen::VectorXcd random_pure_state(std::mt19937_64 &rng, int d) {
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v.normalized();
}

}  // namespace

void GridSpec::validate() const {
    if (resolution < 64 || refinement_rounds < 2) {
        throw std::invalid_argument("grid needs resolution >= 64 and refinement_rounds >= 2");
    }
}

double lemma1_oracle(double l1, double l2, const GridSpec &grid) {
    grid.validate();
    if (!(l1 >= 0.0 && l2 >= 0.0)) {
        throw std::invalid_argument("lemma1_oracle needs nonnegative singular values");
    }
    const Window bounds{0.0, kHalfPi};
    Window wa = bounds;
    Window wb = bounds;
    double best = std::numeric_limits<double>::infinity();
    double best_a = kHalfPi / 2.0;
    double best_b = kHalfPi / 2.0;
    const int res = grid.resolution;
    std::vector<double> ca(res), sa(res), cb(res), sb(res), ga(res), gb(res);
    for (int round = 0; round <= grid.refinement_rounds; ++round) {
        // Cell midpoints: never on the window edges, hence never at 0 or pi/2.
        for (int i = 0; i < res; ++i) {
            ga[i] = wa.lo + (i + 0.5) * (wa.hi - wa.lo) / res;
            gb[i] = wb.lo + (i + 0.5) * (wb.hi - wb.lo) / res;
            ca[i] = std::cos(ga[i]);
            sa[i] = std::sin(ga[i]);
            cb[i] = std::cos(gb[i]);
            sb[i] = std::sin(gb[i]);
        }
        for (int i = 0; i < res; ++i) {
            for (int j = 0; j < res; ++j) {
                const double f = lemma1_objective(l1, l2, ca[i], sa[i], cb[j], sb[j]);
                if (f < best) {
                    best = f;
                    best_a = ga[i];
                    best_b = gb[j];
                }
            }
        }
        wa = shrink(wa, best_a, bounds);
        wb = shrink(wb, best_b, bounds);
    }
    return best;
}

double lemma1_closed_form(double l1, double l2) {
    const double s = std::sqrt(l1) + std::sqrt(l2);
    return s * s * s * s / 4.0;
}

double lemma2_oracle(double l0, double l1, double l2, const GridSpec &grid) {
    grid.validate();
    if (!(l0 >= l1 && l1 >= l2 && l2 >= 0.0)) {
        throw std::invalid_argument("lemma2_oracle needs l0 >= l1 >= l2 >= 0");
    }
    if (l0 == 0.0) {
        return 0.0;
    }
    constexpr double kTieSplit = 1e-12;
    if (l1 <= l2) {
        l1 = l2 + kTieSplit;
    }
    if (l0 <= l1) {
        l0 = l1 + kTieSplit;
    }
    const double p01 = l0 * l1;
    const double p012 = l0 * l1 * l2;

    // Objective on (mu0, t) with mu1 = lo1 + t (mu0 - lo1) and mu2 at its
    // lower bound; infeasible points score +inf.
    auto objective = [&](double mu0, double t) {
        const double lo1 = std::max(p01 / mu0, std::sqrt(p012 / mu0));
        if (lo1 > mu0) {
            return std::numeric_limits<double>::infinity();
        }
        const double mu1 = lo1 + t * (mu0 - lo1);
        const double mu2 = p012 == 0.0 ? 0.0 : p012 / (mu0 * mu1);
        return mu0 + mu1 + mu2;
    };

    const Window b0{l0, l0 + l1 + l2};
    const Window bt{0.0, 1.0};
    Window w0 = b0;
    Window wt = bt;
    double best = std::numeric_limits<double>::infinity();
    double best0 = l0;
    double bestt = 0.0;
    const int res = grid.resolution;
    for (int round = 0; round <= grid.refinement_rounds; ++round) {
        // Closed grid: the feasible set includes its boundary.
        for (int i = 0; i < res; ++i) {
            const double mu0 = w0.lo + i * (w0.hi - w0.lo) / (res - 1);
            for (int j = 0; j < res; ++j) {
                const double t = wt.lo + j * (wt.hi - wt.lo) / (res - 1);
                const double f = objective(mu0, t);
                if (f < best) {
                    best = f;
                    best0 = mu0;
                    bestt = t;
                }
            }
        }
        w0 = shrink(w0, best0, b0);
        wt = shrink(wt, bestt, bt);
    }

    // Compass search polish.
    double step0 = (b0.hi - b0.lo) / res;
    double stept = 1.0 / res;
    while (step0 > 1e-15 * b0.hi || stept > 1e-15) {
        bool moved = false;
        const std::array<std::pair<double, double>, 4> dirs{{{step0, 0}, {-step0, 0}, {0, stept}, {0, -stept}}};
        for (const auto &[d0, dt] : dirs) {
            const double m0 = std::clamp(best0 + d0, b0.lo, b0.hi);
            const double t = std::clamp(bestt + dt, 0.0, 1.0);
            const double f = objective(m0, t);
            if (f < best) {
                best = f;
                best0 = m0;
                bestt = t;
                moved = true;
            }
        }
        if (!moved) {
            step0 /= 2.0;
            stept /= 2.0;
        }
    }
    return best;
}

DensityOperator random_separable_state(std::uint64_t seed, int d, int k) {
    if (d < 2 || d > 4 || k < 1) {
        throw std::invalid_argument("random_separable_state needs d in {2, 3, 4} and k >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    ComplexMatrix rho = ComplexMatrix::Zero(d * d, d * d);
    double total = 0.0;
    for (int term = 0; term < k; ++term) {
        const Eigen::VectorXcd a = random_pure_state(rng, d);
        const Eigen::VectorXcd b = random_pure_state(rng, d);
        Eigen::VectorXcd ab(d * d);
        for (int i = 0; i < d; ++i) {
            ab.segment(i * d, d) = a(i) * b;
        }
        const double w = uniform(rng) + 1e-3;
        total += w;
        rho += w * ab * ab.adjoint();
    }
    rho /= total;
    return DensityOperator(rho);
}

DensityOperator pauli_twirl(const DensityOperator &rho) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("pauli_twirl acts on two-qubit states");
    }
    ComplexMatrix out = ComplexMatrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) {
        const ComplexMatrix u = kron(pauli::by_index(k), pauli::by_index(k));
        out += u * rho.matrix() * u.adjoint();
    }
    return DensityOperator(out / 4.0);
}

ComplexMatrix random_unitary(std::mt19937_64 &rng, int d) {
    std::normal_distribution<double> normal;
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) {
            q.col(j) *= r(j, j) / mag;
        }
    }
    return q;
}

MeasurementFamily random_measurement_family(std::mt19937_64 &rng, const ScenarioAssumption &scenario, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("measurement family needs at least one setting");
    }
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<DichotomicObservable> obs;
    auto push = [&](const ComplexMatrix &m) { obs.emplace_back(HermitianOperator(m)); };
    switch (scenario.kind()) {
        case MeasurementClass::SharpOrthogonal:
            for (const auto &u : random_orthonormal_vectors(rng, n)) {
                push(bloch(0.0, u));
            }
            break;
        case MeasurementClass::SharpNonOrthogonal:
            for (std::size_t i = 0; i < n; ++i) {
                push(bloch(0.0, random_unit_vector(rng)));
            }
            break;
        case MeasurementClass::UnsharpOrthogonal:
            for (const auto &u : random_orthonormal_vectors(rng, n)) {
                const double eta = 1.0 - uniform(rng);  // (0, 1]
                const double c = (2.0 * uniform(rng) - 1.0) * (1.0 - eta);
                push(bloch(c, eta * u));
            }
            break;
        case MeasurementClass::QubitUncharacterized:
            for (std::size_t i = 0; i < n; ++i) {
                const double r = 1.0 - uniform(rng);
                const double c = (2.0 * uniform(rng) - 1.0) * (1.0 - r);
                push(bloch(c, r * random_unit_vector(rng)));
            }
            break;
        case MeasurementClass::DimensionBounded: {
            const int d = scenario.dimension();
            for (std::size_t i = 0; i < n; ++i) {
                const ComplexMatrix u = random_unitary(rng, d);
                RealVector e(d);
                for (int j = 0; j < d; ++j) {
                    e(j) = 2.0 * uniform(rng) - 1.0;
                }
                push(u * e.cast<Complex>().asDiagonal() * u.adjoint());
            }
            break;
        }
    }
    return MeasurementFamily(std::move(obs));
}

double threshold_bisection(const FamilyBuilder &builder, const CriterionFn &criterion, double lo, double hi) {
    if (!(lo < hi)) {
        throw std::invalid_argument("threshold_bisection needs lo < hi");
    }
    auto detects = [&](double p) { return criterion(builder(p)).status == Status::Entangled; };
    const bool at_lo = detects(lo);
    if (at_lo == detects(hi)) {
        throw std::invalid_argument("threshold_bisection: detection outcome is the same at both endpoints");
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-10; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (detects(mid) == at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace calcert
