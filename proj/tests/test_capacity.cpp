#include <cmath>

#include "doctest.h"
#include "unitalcap/capacity.hpp"

using namespace unitalcap;

namespace {

KrausChannel amplitude_damping(double gamma) {
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel({k0, k1});
}

}  // namespace

TEST_CASE("q_upper_unital on pinned spectra") {
  CHECK(q_upper_unital(2, 1.0) ==
        doctest::Approx(1.584962500721156).epsilon(1e-13));
  CHECK(q_upper_unital(2, 0.0) == 0.0);
  CHECK(q_upper_unital(depolarizing_channel(2, 0.2)) ==
        doctest::Approx(1.189033824390017).epsilon(1e-10));
  CHECK_THROWS_AS(q_upper_unital(2, -0.1), ParameterError);
  CHECK_THROWS_AS(q_upper_unital(amplitude_damping(0.4)), PreconditionError);
}

TEST_CASE("the tensor route telescopes to the single-copy bound") {
  for (double l2 : {0.0, 0.3, 0.8, 1.0}) {
    for (int n : {1, 2, 5}) {
      CHECK(q_upper_2norm(3, l2, n) ==
            doctest::Approx(q_upper_unital(3, l2)).epsilon(1e-12));
    }
  }
  const KrausChannel ch = depolarizing_channel(2, 0.2);
  CHECK(q_upper_2norm(ch, 3) ==
        doctest::Approx(q_upper_unital(ch)).epsilon(1e-10));
  CHECK_THROWS_AS(q_upper_2norm(2, 0.5, 0), ParameterError);
}

TEST_CASE("coherent_information on closed-form instances") {
  const DensityMatrix mixed2(0.5 * Matrix::Identity(2, 2));
  CHECK(coherent_information(identity_channel(2), mixed2) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Depolarizing at p = 0.2: joint spectrum (0.85, 0.05, 0.05, 0.05).
  CHECK(coherent_information(depolarizing_channel(2, 0.2), mixed2) ==
        doctest::Approx(0.15241532017542603).epsilon(1e-11));
  // Full depolarizing destroys all correlation.
  CHECK(coherent_information(depolarizing_channel(2, 1.0), mixed2) ==
        doctest::Approx(-1.0).epsilon(1e-11));
  CHECK_THROWS_AS(
      coherent_information(identity_channel(2),
                           DensityMatrix(Matrix::Identity(3, 3) / 3.0)),
      ShapeError);
}

TEST_CASE("q_lower_lsd clamps at zero and replays deterministically") {
  const KrausChannel depol = depolarizing_channel(2, 1.0);
  CHECK(q_lower_lsd(depol, 4, RandomStream(1)) == 0.0);
  CHECK(q_lower_lsd(identity_channel(2), 0, RandomStream(1)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const KrausChannel ch = depolarizing_channel(2, 0.2);
  const double a = q_lower_lsd(ch, 6, RandomStream(9));
  CHECK(a == q_lower_lsd(ch, 6, RandomStream(9)));
  // The maximally mixed input is always in the candidate set.
  CHECK(a >= 0.15241532017542603 - 1e-11);
}

TEST_CASE("capacity_report sandwiches the depolarizing channel") {
  CapacityOptions opts;
  opts.lsd_trials = 4;
  opts.tensor_n = 2;
  opts.stream = RandomStream(12);
  const CapacityReport rep = capacity_report(depolarizing_channel(2, 0.2), opts);
  CHECK(rep.lambda2 == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(rep.upper_bits == doctest::Approx(1.189033824390017).epsilon(1e-10));
  CHECK(rep.upper_method == "unital-lambda2");
  CHECK(rep.lower_method == "lsd-coherent-information");
  CHECK(rep.lower_bits >= 0.15241532017542603 - 1e-11);
  CHECK(rep.lower_bits <= rep.upper_bits);
  CHECK(rep.gap_bits == doctest::Approx(rep.upper_bits - rep.lower_bits));

  const CapacityReport flat = capacity_report(depolarizing_channel(2, 1.0), opts);
  CHECK(flat.upper_bits == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat.lower_bits == 0.0);

  CHECK_THROWS_AS(capacity_report(amplitude_damping(0.2), opts),
                  PreconditionError);
}

TEST_CASE("capacity_report falls back to the matrix-free lambda2 path") {
  CapacityOptions opts;
  opts.lsd_trials = 0;
  opts.lambda2_max_dim = 4;  // forces power iteration at d = 8
  const CapacityReport rep = capacity_report(depolarizing_channel(8, 0.3), opts);
  CHECK(rep.lambda2 == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(rep.upper_bits ==
        doctest::Approx(std::log2(1.0 + 8.0 * rep.lambda2 * rep.lambda2)));
}

TEST_CASE("fidelity_decay follows (1 + beta)^(-n/4)") {
  const FidelityDecay d = fidelity_decay(1.0, 10);
  CHECK(d.beta == 1.0);
  CHECK(d.n == 10);
  CHECK(d.eta_bound == doctest::Approx(0.1767766952966369).epsilon(1e-13));
  CHECK(fidelity_decay(3.0, 4).eta_bound == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(fidelity_decay(1e-12, 5).eta_bound == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(fidelity_decay(0.5, 3).eta_bound < fidelity_decay(0.5, 2).eta_bound);
  CHECK_THROWS_AS(fidelity_decay(0.0, 2), ParameterError);
  CHECK_THROWS_AS(fidelity_decay(0.5, 0), ParameterError);
}

TEST_CASE("codespace_bound_rhs arithmetic and channel routes agree") {
  CHECK(codespace_bound_rhs(0.5, 0.25, 4.0) ==
        doctest::Approx(16.0).epsilon(1e-13));
  CHECK_THROWS_AS(codespace_bound_rhs(0.0, 0.25, 4.0), ParameterError);
  CHECK_THROWS_AS(codespace_bound_rhs(1.5, 0.25, 4.0), ParameterError);

  // Identity channel, identity weight: the two-norm bound is exactly 1, so
  // the bound reads Tr(Pi^2) / eta^4 = d / eta^4.
  const WeightOperator pi(Matrix::Identity(2, 2));
  AscentOptions aopts;
  aopts.restarts = 2;
  aopts.max_iter = 100;
  CHECK(codespace_bound_rhs(identity_channel(2), 1, pi, 1.0, aopts) ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("zero_error_upper certifies unital identity-weight instances") {
  const WeightOperator pi2(Matrix::Identity(2, 2));
  AscentOptions aopts;
  aopts.restarts = 2;
  aopts.max_iter = 100;
  const ZeroErrorBound id1 = zero_error_upper(identity_channel(2), 1, pi2, aopts);
  CHECK(id1.bits == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(id1.g_norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id1.certified);

  const WeightOperator pi4(Matrix::Identity(4, 4));
  const ZeroErrorBound id2 = zero_error_upper(identity_channel(2), 2, pi4, aopts);
  CHECK(id2.bits == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(id2.certified);

  // Fully depolarizing: certified norm 1/d, so the bound is log2 d.
  const ZeroErrorBound flat =
      zero_error_upper(depolarizing_channel(2, 1.0), 1, pi2, aopts);
  CHECK(flat.bits == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(flat.certified);

  // Non-unital route falls back to the ascent estimate, uncertified.
  const ZeroErrorBound ad = zero_error_upper(amplitude_damping(0.3), 1, pi2, aopts);
  CHECK_FALSE(ad.certified);
  CHECK(ad.bits > 0.0);
}
