#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "unitalcap/random.hpp"
#include "unitalcap/types.hpp"

// Randomized property suites shared by the `verify` CLI command and the
// acceptance tests. Each suite draws its cases from per-case derived
// streams, so any failure is reproducible from the reported seed.

namespace unitalcap {

struct SuiteResult {
  std::string name;
  int checks = 0;      // inequalities evaluated
  int violations = 0;  // checks past their tolerance
  std::optional<uint64_t> first_bad_seed;  // case stream seed of first failure
  // Smallest margin seen across all checks, in the units of each check's
  // tolerance comparison; negative means a violation.
  double worst_slack = std::numeric_limits<double>::infinity();
  bool pass() const { return violations == 0; }
};

// Recovery-fidelity inequality on random (channel, recovery, weight, state)
// tuples at d in {2, 3}: F^2 <= sqrt(term1 * term2) within 1e-8.
SuiteResult run_fidelity_bound_suite(int tuples, const RandomStream& stream);

// Tensor-power norm ceiling on random unitary mixtures, d in {2, 3},
// k in {2, 3, 4}: ascent estimate of the n-fold norm stays at or below
// (1/d + lambda2^2)^n + 1e-8 for n in {1, 2, 3}.
SuiteResult run_tensor_norm_suite(int channels, const RandomStream& stream);

// Transfer-matrix block relations for random unitary mixtures: off-block
// residuals <= 1e-9, restricted excess over lambda2^2 <= 1e-9, fixed-point
// residual <= 1e-10.
SuiteResult run_block_structure_suite(int channels, const RandomStream& stream);

// Pure-state dominance: for random (channel, mixed state) pairs at d <= 4,
// the pure-state ascent value is at least Tr(E(rho)^2) - 1e-9. The state's
// eigenvectors are used as warm starts, which makes the claim exact up to
// roundoff.
SuiteResult run_pure_dominance_suite(int states, const RandomStream& stream);

// Codespace-dimension bound on the reference tuple: depolarizing(2, 0.1),
// n = 3, random two-dimensional code, Petz recovery for the average code
// state, identity weight. `trials` Monte Carlo fidelity samples; pass means
// d_C <= RHS evaluated at eta lowered by three standard errors.
SuiteResult run_codespace_suite(int trials, const RandomStream& stream);

}  // namespace unitalcap
