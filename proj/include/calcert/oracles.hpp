#pragma once

// Brute-force reference computations used to cross-check the closed-form
// criteria: grid minimizers, random separable states and measurement
// families, and detection-threshold bisection.

#include <cstdint>
#include <functional>
#include <random>

#include "calcert/criteria.hpp"
#include "calcert/datamatrix.hpp"
#include "calcert/qmodel.hpp"

namespace calcert {

struct GridSpec {
    int resolution = 64;
    int refinement_rounds = 30;

    /// Throws std::invalid_argument unless resolution >= 64 and
    /// refinement_rounds >= 2.
    void validate() const;
};

/// Minimum over the angles (alpha, beta) in (0, pi/2)^2 of
///   (l1 + l2)^2 / (a1^2 b1^2 + a2^2 b2^2) + 2 l1 l2 / (a1 a2 b1 b2)
/// with a1 >= a2 the values sqrt2 |cos alpha|, sqrt2 |sin alpha| (same for b).
/// Coarse grid followed by window-halving refinement; grid points never
/// touch the singular endpoints.
double lemma1_oracle(double l1, double l2, const GridSpec &grid = {});

/// Closed form of the same minimum: (sqrt l1 + sqrt l2)^4 / 4.
double lemma1_closed_form(double l1, double l2);

/// Minimum of mu0 + mu1 + mu2 subject to mu0 >= l0, mu0 mu1 >= l0 l1,
/// mu0 mu1 mu2 >= l0 l1 l2 and mu0 >= mu1 >= mu2 >= 0. mu2 is eliminated
/// at its lower bound; (mu0, mu1) is searched on a refined grid followed by
/// a compass search. Ties in the l's are split by 1e-12.
/// Throws std::invalid_argument unless l0 >= l1 >= l2 >= 0.
double lemma2_oracle(double l0, double l1, double l2, const GridSpec &grid = {});

/// Mixture of k random pure product states on C^d (x) C^d with random
/// weights. Bit-identical for equal seeds. Throws std::invalid_argument
/// unless d in {2, 3, 4} and k >= 1.
DensityOperator random_separable_state(std::uint64_t seed, int d, int k);

/// (1/4) sum_k (s_k (x) s_k) rho (s_k (x) s_k) over the Pauli group. Maps
/// two-qubit states to Bell-diagonal ones (zero marginals) and preserves
/// separability.
DensityOperator pauli_twirl(const DensityOperator &rho);

/// Random n-member family valid for the scenario:
///   sharp orthogonal   unit Bloch vectors, pairwise orthogonal (n <= 3)
///   sharp              arbitrary unit Bloch vectors
///   unsharp orthogonal c 1 + eta u.sigma, |c| + eta <= 1, u's orthogonal (n <= 3)
///   qubit              c 1 + r.sigma, |c| + |r| <= 1
///   dimension d        U diag(e) U^dagger, e uniform in [-1, 1]
MeasurementFamily random_measurement_family(std::mt19937_64 &rng, const ScenarioAssumption &scenario, std::size_t n);

/// Random d x d unitary (QR of a complex Ginibre matrix, phase-fixed).
ComplexMatrix random_unitary(std::mt19937_64 &rng, int d);

using FamilyBuilder = std::function<DataMatrix(double)>;
using CriterionFn = std::function<Verdict(const DataMatrix &)>;

/// Parameter at which `criterion` stops (or starts) reporting Entangled
/// along `builder` on [lo, hi], to within 1e-9. Throws std::invalid_argument
/// when both endpoints give the same detection outcome.
double threshold_bisection(const FamilyBuilder &builder, const CriterionFn &criterion, double lo, double hi);

}  // namespace calcert
