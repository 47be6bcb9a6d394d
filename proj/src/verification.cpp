#include "unitalcap/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "unitalcap/capacity.hpp"
#include "unitalcap/expander.hpp"
#include "unitalcap/recovery.hpp"

namespace unitalcap {

namespace {

void record(SuiteResult& res, double slack, uint64_t seed) {
  ++res.checks;
  res.worst_slack = std::min(res.worst_slack, slack);
  if (slack < 0.0) {
    ++res.violations;
    if (!res.first_bad_seed) res.first_bad_seed = seed;
  }
}

// Random full-rank PSD weight: Wishart plus a ridge so the support covers
// every channel output comfortably.
WeightOperator random_weight(Index d, RandomStream& rng) {
  Matrix g(d, d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      g(r, c) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Matrix w = g * g.adjoint();
  w += (0.05 * w.trace().real() / static_cast<double>(d)) *
       Matrix::Identity(d, d);
  return WeightOperator(std::move(w));
}

// Random mixture weights: normalized exponentials, all strictly positive.
std::vector<double> random_probs(int k, RandomStream& rng) {
  std::vector<double> p(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (double& x : p) {
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

KrausChannel random_unitary_mixture(Index d, int k, RandomStream& rng) {
  std::vector<Matrix> us;
  us.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) us.push_back(haar_unitary(d, rng));
  return unitary_mixture(us, random_probs(k, rng));
}

// Random full-rank mixed state from a square Gaussian matrix.
DensityMatrix random_mixed_state(Index d, RandomStream& rng) {
  Matrix g(d, d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      g(r, c) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix::unchecked(std::move(w));
}

}  // namespace

SuiteResult run_fidelity_bound_suite(int tuples, const RandomStream& stream) {
  SuiteResult res;
  res.name = "fidelity-bound";
  for (int t = 0; t < tuples; ++t) {
    const RandomStream cs = stream.derive(static_cast<uint64_t>(t) + 1);
    const Index d = 2 + (t % 2);
    RandomStream cfg = cs.derive(5);
    const Index k_ch = 2 + static_cast<Index>(cfg.next_u64() % 3);
    const Index k_rec = 2 + static_cast<Index>(cfg.next_u64() % 3);
    RandomStream s_ch = cs.derive(1);
    RandomStream s_rec = cs.derive(2);
    RandomStream s_pi = cs.derive(3);
    RandomStream s_psi = cs.derive(4);
    const KrausChannel ch = random_kraus_channel(d, k_ch, s_ch);
    const KrausChannel rec = random_kraus_channel(d, k_rec, s_rec);
    const WeightOperator pi = random_weight(d, s_pi);
    const PureState psi = haar_state(d, s_psi);
    const FidelityBoundCheck chk = fidelity_bound_check(ch, rec, pi, psi);
    record(res, chk.rhs - chk.lhs + 1e-8, cs.seed());
  }
  return res;
}

SuiteResult run_tensor_norm_suite(int channels, const RandomStream& stream) {
  SuiteResult res;
  res.name = "tensor-norm";
  for (int i = 0; i < channels; ++i) {
    const RandomStream cs = stream.derive(static_cast<uint64_t>(i) + 1);
    const Index d = 2 + (i % 2);
    const int k = 2 + (i % 3);
    RandomStream s_ch = cs.derive(1);
    const KrausChannel ch = random_unitary_mixture(d, k, s_ch);
    const double lambda2 = second_singular_value(ch).lambda2;
    for (int n = 1; n <= 3; ++n) {
      AscentOptions opts;
      opts.restarts = 8;
      opts.max_iter = 200;
      opts.stream = cs.derive(static_cast<uint64_t>(10 + n));
      const NormEstimate est = output_2norm_tensor(ch, n, opts, lambda2);
      const double bound = spectral_2norm_bound(d, lambda2, n);
      record(res, bound + 1e-8 - est.value, cs.seed());
    }
  }
  return res;
}

SuiteResult run_block_structure_suite(int channels,
                                      const RandomStream& stream) {
  SuiteResult res;
  res.name = "blocks";
  for (int i = 0; i < channels; ++i) {
    const RandomStream cs = stream.derive(static_cast<uint64_t>(i) + 1);
    const Index d = 2 + (i % 3);
    RandomStream cfg = cs.derive(2);
    const int k = 2 + static_cast<int>(cfg.next_u64() % 3);
    RandomStream s_ch = cs.derive(1);
    const KrausChannel ch = random_unitary_mixture(d, k, s_ch);
    const BlockResiduals br = check_block_structure(ch);
    const double slack =
        std::min({1e-9 - br.cross_residual, 1e-9 - br.fixed_sector_residual,
                  1e-9 - br.excess_over_lambda2_sq,
                  1e-10 - br.fixed_point_residual});
    record(res, slack, cs.seed());
  }
  return res;
}

SuiteResult run_pure_dominance_suite(int states, const RandomStream& stream) {
  SuiteResult res;
  res.name = "pure-dominance";
  for (int i = 0; i < states; ++i) {
    const RandomStream cs = stream.derive(static_cast<uint64_t>(i) + 1);
    const Index d = 2 + (i % 3);
    RandomStream cfg = cs.derive(3);
    const Index k = 2 + static_cast<Index>(cfg.next_u64() % 3);
    RandomStream s_ch = cs.derive(1);
    RandomStream s_rho = cs.derive(2);
    const KrausChannel ch = random_kraus_channel(d, k, s_ch);
    const DensityMatrix rho = random_mixed_state(d, s_rho);

    const DensityMatrix out = apply(ch, rho);
    const double mixed_purity = purity(out);

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat());
    std::vector<Vector> warm;
    warm.reserve(static_cast<std::size_t>(d));
    for (Index j = 0; j < d; ++j) warm.push_back(es.eigenvectors().col(j));

    AscentOptions opts;
    opts.restarts = 8;
    opts.max_iter = 200;
    opts.stream = cs.derive(4);
    const NormEstimate est = output_2norm(ch, opts, warm);
    record(res, est.value - mixed_purity + 1e-9, cs.seed());
  }
  return res;
}

SuiteResult run_codespace_suite(int trials, const RandomStream& stream) {
  SuiteResult res;
  res.name = "code-bound";
  const KrausChannel ch = depolarizing_channel(2, 0.1);
  RandomStream code_rng = stream.derive(1);
  const CodeSpec code = random_code(3, 2, 1, 2, code_rng);

  const KrausChannel ch_total = total_channel(ch, code.n, code.d_T);
  const Matrix avg =
      code.encoder * code.encoder.adjoint() / static_cast<double>(code.d_C);
  const KrausChannel rec =
      petz_recovery(ch_total, DensityMatrix::unchecked(avg));

  const Index phys = code.encoder.rows();
  const WeightOperator pi(Matrix::Identity(phys, phys));
  const CodespaceVerdict v = codespace_bound_check(ch, code, rec, pi, trials,
                                                   stream.derive(2));
  record(res, v.rhs_slack - static_cast<double>(v.d_C), stream.seed());
  return res;
}

}  // namespace unitalcap
