#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgfl {

/// Dense row-major matrix of doubles with an optional gradient buffer.
/// Copies share storage (handle semantics); use clone() for a deep copy.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, bool requires_grad = false);

  static Tensor zeros(std::size_t rows, std::size_t cols);
  static Tensor full(std::size_t rows, std::size_t cols, double value);
  static Tensor identity(std::size_t n);
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor from_data(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Tensor randn(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                      double stddev = 1.0);
  static Tensor rand_uniform(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                             double lo, double hi);

  bool defined() const { return impl_ != nullptr; }
  std::size_t rows() const { return impl_->rows; }
  std::size_t cols() const { return impl_->cols; }
  std::size_t size() const { return impl_->data.size(); }

  double& operator()(std::size_t i, std::size_t j) { return impl_->data[i * impl_->cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return impl_->data[i * impl_->cols + j]; }

  std::vector<double>& data() { return impl_->data; }
  const std::vector<double>& data() const { return impl_->data; }

  bool requires_grad() const { return impl_->requires_grad; }
  void set_requires_grad(bool value);

  bool has_grad() const { return !impl_->grad.empty(); }
  /// Gradient buffer, allocated zero-filled on first access.
  std::vector<double>& grad();
  const std::vector<double>& grad() const;
  void zero_grad();

  /// Value of a 1x1 tensor.
  double item() const;

  Tensor clone() const;
  bool same_storage(const Tensor& other) const { return impl_ == other.impl_; }

 private:
  struct Impl {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;
    std::vector<double> grad;  // empty until requested
    bool requires_grad = false;
  };
  std::shared_ptr<Impl> impl_;
};

/// Throws if any entry is NaN or infinite.
void ensure_finite(const Tensor& t, const char* what);

/// Reverse-mode tape: records one backward closure per primitive op,
/// in forward (topological) order.
class Tape {
 public:
  void record(std::function<void()> backward_fn) { ops_.push_back(std::move(backward_fn)); }

  /// Seeds d(loss)/d(loss) = 1 and replays the tape in reverse.
  /// `loss` must be 1x1.
  void backward(Tensor& loss);

  std::size_t num_ops() const { return ops_.size(); }
  void clear() { ops_.clear(); }

 private:
  std::vector<std::function<void()>> ops_;
};

// ---- primitive ops -------------------------------------------------------
// Each returns a fresh tensor whose requires_grad is the OR of its inputs',
// and records a backward closure on the tape when gradients are needed.

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);
Tensor add(Tape& tape, const Tensor& a, const Tensor& b);
Tensor sub(Tape& tape, const Tensor& a, const Tensor& b);
Tensor mul(Tape& tape, const Tensor& a, const Tensor& b);
Tensor relu(Tape& tape, const Tensor& a);
/// Row-wise L2 normalization. Throws on a zero-norm row.
Tensor l2norm_rows(Tape& tape, const Tensor& a);
/// Column means: (n x d) -> (1 x d).
Tensor mean_rows(Tape& tape, const Tensor& a);
Tensor scale(Tape& tape, const Tensor& a, double alpha);
/// alpha * a + beta, elementwise.
Tensor affine(Tape& tape, const Tensor& a, double alpha, double beta);
Tensor exp_op(Tape& tape, const Tensor& a);
/// Natural log; requires strictly positive entries.
Tensor log_op(Tape& tape, const Tensor& a);
/// min(a, cap) elementwise; gradient is masked where the cap is active.
Tensor clamp_max(Tape& tape, const Tensor& a, double cap);
/// Scales row i of a (n x d) by s(i, 0); s must be n x 1.
Tensor row_scale(Tape& tape, const Tensor& a, const Tensor& s);
/// Broadcast-adds a 1 x d bias row to every row of a (n x d).
Tensor add_row(Tape& tape, const Tensor& a, const Tensor& bias);
/// Sum of all entries: (n x d) -> (1 x 1).
Tensor sum_all(Tape& tape, const Tensor& a);
/// Selects rows by index (duplicates allowed); backward scatter-adds.
Tensor gather_rows(Tape& tape, const Tensor& a, const std::vector<std::size_t>& idx);
/// Stacks tensors with equal column counts, top to bottom.
Tensor concat_rows(Tape& tape, const std::vector<Tensor>& parts);
/// d(i, j) = || a_i - b_j ||^2 for a: n x d, b: m x d -> n x m.
Tensor pairwise_sqdist(Tape& tape, const Tensor& a, const Tensor& b);
/// Mean cross-entropy of row-wise softmax(logits) against integer labels.
Tensor softmax_cross_entropy(Tape& tape, const Tensor& logits, const std::vector<int>& labels);

/// Index of the largest entry per row (no gradient).
std::vector<int> argmax_rows(const Tensor& t);

// ---- Adam ----------------------------------------------------------------

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step_count = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

/// One bias-corrected Adam update over `params`; every param must carry a
/// gradient. Gradients are zeroed afterwards. Moment buffers are allocated
/// on the first call and shape-checked on subsequent calls.
void adam_step(std::vector<Tensor>& params, AdamState& state, double lr);

/// Plain gradient-descent step p -= lr * grad; grads zeroed afterwards.
void sgd_step(std::vector<Tensor>& params, double lr);

/// target <- tau * target + (1 - tau) * online, elementwise over the lists.
void ema_update(std::vector<Tensor>& target, const std::vector<Tensor>& online, double tau);

/// FNV-1a hash over the raw bytes of all parameter values, for
/// frozen-parameter checks.
std::uint64_t content_hash(const std::vector<Tensor>& params);

}  // namespace cgfl
