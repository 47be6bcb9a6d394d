#include "unitalcap/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace unitalcap {

namespace {

using RowMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Operator-set abstraction the ascent runs over: `count` linear maps
// C^{dim_in} -> C^{dim_out} whose absolute squares sum to a channel.
class DenseKrausOps {
 public:
  explicit DenseKrausOps(const KrausChannel& ch) : ch_(&ch) {}
  Index dim_in() const { return ch_->input_dim(); }
  Index dim_out() const { return ch_->output_dim(); }
  Index count() const { return ch_->kraus_count(); }
  void apply(Index i, const Vector& in, Vector& out) const {
    out.noalias() = ch_->kraus()[static_cast<std::size_t>(i)] * in;
  }
  void apply_adjoint(Index i, const Vector& in, Vector& out) const {
    out.noalias() = ch_->kraus()[static_cast<std::size_t>(i)].adjoint() * in;
  }

 private:
  const KrausChannel* ch_;
};

// Kraus action of E^(kron n) without materializing operator products: the
// operator with base-k digits (i_0 .. i_{n-1}) (i_0 most significant, acting
// on the leftmost factor) is applied one tensor factor at a time.
class TensorPowerOps {
 public:
  TensorPowerOps(const KrausChannel& ch, int n, Index dim_guard) : ch_(&ch), n_(n) {
    if (ch.input_dim() != ch.output_dim()) {
      throw PreconditionError(
          "tensor-power ascent: factor channel must be square");
    }
    if (n < 1 || n > 12) {
      throw DimensionLimitError("tensor-power ascent: n outside [1, 12]");
    }
    d_ = ch.input_dim();
    dim_ = 1;
    count_ = 1;
    for (int i = 0; i < n; ++i) {
      dim_ *= d_;
      count_ *= ch.kraus_count();
      if (dim_ > dim_guard) {
        throw DimensionLimitError(
            "tensor-power ascent: d^n exceeds dimension guard " +
            std::to_string(dim_guard));
      }
      if (count_ > kDefaultKrausCap) {
        throw DimensionLimitError(
            "tensor-power ascent: k^n exceeds operator cap");
      }
    }
  }

  Index dim_in() const { return dim_; }
  Index dim_out() const { return dim_; }
  Index count() const { return count_; }

  void apply(Index flat, const Vector& in, Vector& out) const {
    apply_impl(flat, in, out, false);
  }
  void apply_adjoint(Index flat, const Vector& in, Vector& out) const {
    apply_impl(flat, in, out, true);
  }

 private:
  void apply_impl(Index flat, const Vector& in, Vector& out, bool adj) const {
    const Index k = ch_->kraus_count();
    // Base-k digits, most significant first.
    std::array<Index, 12> digit{};
    for (int m = n_ - 1; m >= 0; --m) {
      digit[static_cast<std::size_t>(m)] = flat % k;
      flat /= k;
    }
    // Ping-pong buffers: consecutive modes must not read and write the same
    // storage, since each d x R block is transformed in place otherwise.
    Vector ping, pong;
    const Vector* src = &in;
    out.resize(dim_);
    for (int m = 0; m < n_; ++m) {
      Vector* dst = (m == n_ - 1) ? &out : ((m % 2 == 0) ? &ping : &pong);
      if (dst != &out && dst->size() != dim_) dst->resize(dim_);
      mode_multiply(digit[static_cast<std::size_t>(m)], m, *src, *dst, adj);
      src = dst;
    }
  }

  // Multiply mode m (0 = leftmost factor) by Kraus operator `op` or its
  // adjoint. In row-major multi-index order the vector splits into L blocks
  // of d x R row-major matrices, L = d^m, R = d^{n-1-m}.
  void mode_multiply(Index op, int m, const Vector& in, Vector& out,
                     bool adj) const {
    const Matrix& e = ch_->kraus()[static_cast<std::size_t>(op)];
    Index l = 1, r = 1;
    for (int i = 0; i < m; ++i) l *= d_;
    for (int i = m + 1; i < n_; ++i) r *= d_;
    for (Index a = 0; a < l; ++a) {
      Eigen::Map<const RowMatrix> bin(in.data() + a * d_ * r, d_, r);
      Eigen::Map<RowMatrix> bout(out.data() + a * d_ * r, d_, r);
      if (adj) {
        bout.noalias() = e.adjoint() * bin;
      } else {
        bout.noalias() = e * bin;
      }
    }
  }

  const KrausChannel* ch_;
  int n_;
  Index d_ = 0;
  Index dim_ = 0;
  Index count_ = 0;
};

// Left-composition with a Hermitian matrix s: operators s * K_i. Used for
// G_{E,Pi} with s = Pi^{-1/2}.
template <typename Ops>
class ScaledOps {
 public:
  ScaledOps(const Ops& base, const Matrix& s) : base_(&base), s_(&s) {}
  Index dim_in() const { return base_->dim_in(); }
  Index dim_out() const { return base_->dim_out(); }
  Index count() const { return base_->count(); }
  void apply(Index i, const Vector& in, Vector& out) const {
    base_->apply(i, in, tmp_);
    out.noalias() = (*s_) * tmp_;
  }
  void apply_adjoint(Index i, const Vector& in, Vector& out) const {
    tmp_.noalias() = (*s_) * in;
    base_->apply_adjoint(i, tmp_, out);
  }

 private:
  const Ops* base_;
  const Matrix* s_;
  mutable Vector tmp_;
};

struct RestartOutcome {
  double value = -1.0;
  Vector state;
  bool converged = false;
};

// One ascent run from a fixed starting state.
template <typename Ops>
RestartOutcome run_restart(const Ops& ops, Vector psi, int max_iter,
                           double tol) {
  const Index k = ops.count();
  Matrix v(ops.dim_out(), k);
  Vector col(ops.dim_out());
  Vector w(ops.dim_in());
  Vector tmp(ops.dim_in());

  RestartOutcome out;
  double prev = -1.0;
  for (int it = 0; it <= max_iter; ++it) {
    for (Index i = 0; i < k; ++i) {
      ops.apply(i, psi, col);
      v.col(i) = col;
    }
    const Matrix g = v.adjoint() * v;
    const double f = g.squaredNorm();  // Tr(E(psi psi+)^2)
    if (f > out.value) {
      out.value = f;
      out.state = psi;
    }
    if (prev >= 0.0 && std::abs(f - prev) <= tol) {
      out.converged = true;
      break;
    }
    prev = f;
    if (it == max_iter) break;

    // psi <- normalize( sum_i K_i^dagger M K_i psi ), M = E(psi psi^dagger).
    const Matrix y = v * g;  // column j = M K_j psi
    w.setZero();
    for (Index j = 0; j < k; ++j) {
      col = y.col(j);
      ops.apply_adjoint(j, col, tmp);
      w += tmp;
    }
    const double nw = w.norm();
    if (!(nw > 0.0)) break;  // unreachable for trace-preserving sets
    psi = w / nw;
  }
  return out;
}

template <typename Ops>
NormEstimate ascend(const Ops& ops, const AscentOptions& opts,
                    const RandomStream& stream,
                    const std::vector<Vector>& warm_starts) {
  if (opts.restarts < 1) throw ParameterError("ascent: restarts must be >= 1");
  if (opts.max_iter < 1) throw ParameterError("ascent: max_iter must be >= 1");
  const int total =
      std::max<int>(opts.restarts, static_cast<int>(warm_starts.size()));

  RestartOutcome best;
  for (int r = 0; r < total; ++r) {
    Vector start;
    if (r < static_cast<int>(warm_starts.size())) {
      start = warm_starts[static_cast<std::size_t>(r)];
      start /= start.norm();
    } else {
      RandomStream rng = stream.derive(static_cast<std::uint64_t>(r));
      start = haar_state(ops.dim_in(), rng).vec();
    }
    RestartOutcome cur = run_restart(ops, std::move(start), opts.max_iter,
                                     opts.tol);
    if (cur.value > best.value) best = std::move(cur);
  }
  return NormEstimate{best.value,
                      PureState::normalized(best.state),
                      total,
                      opts.max_iter,
                      best.converged,
                      std::nullopt};
}

std::optional<double> certified_tensor_upper(const KrausChannel& ch, int n,
                                             std::optional<double> l2_hint) {
  if (!is_unital(ch, 1e-9)) return std::nullopt;
  double l2;
  if (l2_hint) {
    l2 = *l2_hint;
  } else {
    try {
      l2 = second_singular_value(ch).lambda2;
    } catch (const DimensionLimitError&) {
      return std::nullopt;
    }
  }
  return std::min(1.0, spectral_2norm_bound(ch.input_dim(), l2, n));
}

Vector kron_power(const Vector& v, int n, Index dim_guard) {
  Vector out = v;
  for (int i = 1; i < n; ++i) {
    out = tensor_product(out, v, dim_guard);
  }
  return out;
}

NormEstimate tensor_ascent(const KrausChannel& ch, int n,
                           const AscentOptions& opts,
                           std::optional<double> lambda2_hint,
                           const NormEstimate* single) {
  if (n < 1) throw ParameterError("output_2norm_tensor: n must be >= 1");
  std::vector<Vector> warm;
  NormEstimate est = [&] {
    if (ch.input_dim() == ch.output_dim()) {
      TensorPowerOps ops(ch, n, opts.dim_guard);
      if (single != nullptr) {
        warm.push_back(kron_power(single->maximizer.vec(), n, opts.dim_guard));
      }
      return ascend(ops, opts, opts.stream.derive(1), warm);
    }
    // Rectangular factors: fall back to materialized operator products.
    const KrausChannel big = tensor_power(ch, n, opts.dim_guard);
    return ascend(DenseKrausOps(big), opts, opts.stream.derive(1), warm);
  }();
  est.certified_upper = certified_tensor_upper(ch, n, lambda2_hint);
  return est;
}

}  // namespace

NormEstimate output_2norm(const KrausChannel& ch, const AscentOptions& opts) {
  return ascend(DenseKrausOps(ch), opts, opts.stream.derive(1), {});
}

NormEstimate output_2norm(const KrausChannel& ch, const AscentOptions& opts,
                          const std::vector<Vector>& warm_starts) {
  return ascend(DenseKrausOps(ch), opts, opts.stream.derive(1), warm_starts);
}

NormEstimate output_2norm_tensor(const KrausChannel& ch, int n,
                                 const AscentOptions& opts) {
  return output_2norm_tensor(ch, n, opts, std::nullopt);
}

NormEstimate output_2norm_tensor(const KrausChannel& ch, int n,
                                 const AscentOptions& opts,
                                 std::optional<double> lambda2_hint) {
  AscentOptions sopts = opts;
  sopts.stream = opts.stream.derive(2);
  const NormEstimate single = output_2norm(ch, sopts);
  return tensor_ascent(ch, n, opts, lambda2_hint, &single);
}

double spectral_2norm_bound(Index d, double lambda2, int n) {
  if (n < 1) throw ParameterError("spectral_2norm_bound: n must be >= 1");
  return std::pow(1.0 / static_cast<double>(d) + lambda2 * lambda2, n);
}

double spectral_2norm_bound(const KrausChannel& ch, int n) {
  if (!is_unital(ch, 1e-9)) {
    throw PreconditionError("spectral_2norm_bound: channel is not unital");
  }
  return spectral_2norm_bound(ch.input_dim(),
                           second_singular_value(ch).lambda2, n);
}

NormEstimate g_map_2norm(const KrausChannel& ch, int n,
                         const WeightOperator& pi, const AscentOptions& opts) {
  if (n < 1) throw ParameterError("g_map_2norm: n must be >= 1");
  Index dout_n = 1;
  for (int i = 0; i < n; ++i) dout_n *= ch.output_dim();
  if (pi.dim() != dout_n) {
    throw ShapeError("g_map_2norm: weight dimension " +
                     std::to_string(pi.dim()) + " does not match d_out^n");
  }
  if (pi.is_identity()) {
    return output_2norm_tensor(ch, n, opts);
  }
  const Matrix& s = pi.pinv_sqrt();
  if (n == 1) {
    DenseKrausOps base(ch);
    return ascend(ScaledOps(base, s), opts, opts.stream.derive(1), {});
  }
  TensorPowerOps base(ch, n, opts.dim_guard);
  return ascend(ScaledOps(base, s), opts, opts.stream.derive(1), {});
}

MultiplicativityReport multiplicativity_report(const KrausChannel& ch, int n,
                                               const AscentOptions& opts) {
  return multiplicativity_report(ch, n, opts, std::nullopt);
}

MultiplicativityReport multiplicativity_report(
    const KrausChannel& ch, int n, const AscentOptions& opts,
    std::optional<double> lambda2_hint) {
  if (n < 1) throw ParameterError("multiplicativity_report: n must be >= 1");
  AscentOptions sopts = opts;
  sopts.stream = opts.stream.derive(2);
  NormEstimate single = output_2norm(ch, sopts);
  if (!(single.value < 1.0 - 1e-9)) {
    throw ExponentUndefinedError(
        "multiplicativity_report: single-copy norm is 1 within 1e-9, "
        "log(norm1) vanishes");
  }
  NormEstimate tensor = tensor_ascent(ch, n, opts, lambda2_hint, &single);

  const double denom = static_cast<double>(n) * std::log(single.value);
  const double alpha = std::log(tensor.value) / denom;
  std::optional<double> alpha_cert;
  if (tensor.certified_upper && *tensor.certified_upper < 1.0) {
    alpha_cert = std::log(*tensor.certified_upper) / denom;
  }
  return MultiplicativityReport{n, std::move(single), std::move(tensor), alpha,
                                alpha_cert};
}

}  // namespace unitalcap
