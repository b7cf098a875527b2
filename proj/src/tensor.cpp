#include "cgfl/tensor.hpp"

#include <algorithm>
#include <cblas.h>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>

namespace cgfl {

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
}

Tensor make_result(std::size_t rows, std::size_t cols, bool requires_grad) {
  Tensor t(rows, cols, requires_grad);
  return t;
}

}  // namespace

Tensor::Tensor(std::size_t rows, std::size_t cols, bool requires_grad)
    : impl_(std::make_shared<Impl>()) {
  impl_->rows = rows;
  impl_->cols = cols;
  impl_->data.assign(rows * cols, 0.0);
  impl_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(std::size_t rows, std::size_t cols) { return Tensor(rows, cols); }

Tensor Tensor::full(std::size_t rows, std::size_t cols, double value) {
  Tensor t(rows, cols);
  std::fill(t.data().begin(), t.data().end(), value);
  return t;
}

Tensor Tensor::identity(std::size_t n) {
  Tensor t(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Tensor t(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("from_rows: ragged rows");
    std::size_t j = 0;
    for (double v : row) t(i, j++) = v;
    ++i;
  }
  return t;
}

Tensor Tensor::from_data(std::size_t rows, std::size_t cols, std::vector<double> data) {
  if (data.size() != rows * cols) throw std::invalid_argument("from_data: size mismatch");
  Tensor t(rows, cols);
  t.data() = std::move(data);
  return t;
}

Tensor Tensor::randn(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double stddev) {
  Tensor t(rows, cols);
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

Tensor Tensor::rand_uniform(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                            double lo, double hi) {
  Tensor t(rows, cols);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

void Tensor::set_requires_grad(bool value) {
  impl_->requires_grad = value;
  if (!value) impl_->grad.clear();
}

std::vector<double>& Tensor::grad() {
  if (impl_->grad.empty()) impl_->grad.assign(impl_->data.size(), 0.0);
  return impl_->grad;
}

const std::vector<double>& Tensor::grad() const {
  if (impl_->grad.empty()) impl_->grad.assign(impl_->data.size(), 0.0);
  return impl_->grad;
}

void Tensor::zero_grad() {
  std::fill(impl_->grad.begin(), impl_->grad.end(), 0.0);
}

double Tensor::item() const {
  if (rows() != 1 || cols() != 1) {
    throw std::invalid_argument("item: tensor is not 1x1");
  }
  return impl_->data[0];
}

Tensor Tensor::clone() const {
  Tensor t(rows(), cols(), requires_grad());
  t.data() = data();
  return t;
}

void ensure_finite(const Tensor& t, const char* what) {
  for (double v : t.data()) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(std::string(what) + ": non-finite value detected");
    }
  }
}

void Tape::backward(Tensor& loss) {
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw std::invalid_argument("backward: loss must be scalar (1x1)");
  }
  loss.grad()[0] = 1.0;
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) (*it)();
}

// ---- primitive ops -------------------------------------------------------

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions differ (" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                ")");
  }
  const int m = static_cast<int>(a.rows());
  const int k = static_cast<int>(a.cols());
  const int n = static_cast<int>(b.cols());
  Tensor out = make_result(a.rows(), b.cols(), a.requires_grad() || b.requires_grad());
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, m, n, k, 1.0, a.data().data(), k,
              b.data().data(), n, 0.0, out.data().data(), n);
  ensure_finite(out, "matmul");
  if (out.requires_grad()) {
    Tensor ac = a, bc = b, oc = out;
    tape.record([ac, bc, oc, m, n, k]() mutable {
      if (ac.requires_grad()) {
        // dA += dC * B^T
        cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, m, k, n, 1.0,
                    oc.grad().data(), n, bc.data().data(), n, 1.0, ac.grad().data(), k);
      }
      if (bc.requires_grad()) {
        // dB += A^T * dC
        cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, k, n, m, 1.0,
                    ac.data().data(), k, oc.grad().data(), n, 1.0, bc.grad().data(), n);
      }
    });
  }
  return out;
}

namespace {

template <class Fwd, class Bwd>
Tensor binary_pointwise(Tape& tape, const Tensor& a, const Tensor& b, const char* name,
                        Fwd fwd, Bwd bwd) {
  check_same_shape(a, b, name);
  Tensor out = make_result(a.rows(), a.cols(), a.requires_grad() || b.requires_grad());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = fwd(a.data()[i], b.data()[i]);
  ensure_finite(out, name);
  if (out.requires_grad()) {
    Tensor ac = a, bc = b, oc = out;
    tape.record([ac, bc, oc, bwd]() mutable {
      for (std::size_t i = 0; i < oc.size(); ++i) {
        const double g = oc.grad()[i];
        double da = 0.0, db = 0.0;
        bwd(ac.data()[i], bc.data()[i], g, da, db);
        if (ac.requires_grad()) ac.grad()[i] += da;
        if (bc.requires_grad()) bc.grad()[i] += db;
      }
    });
  }
  return out;
}

}  // namespace

Tensor add(Tape& tape, const Tensor& a, const Tensor& b) {
  return binary_pointwise(tape, a, b, "add",
                          [](double x, double y) { return x + y; },
                          [](double, double, double g, double& da, double& db) {
                            da = g;
                            db = g;
                          });
}

Tensor sub(Tape& tape, const Tensor& a, const Tensor& b) {
  return binary_pointwise(tape, a, b, "sub",
                          [](double x, double y) { return x - y; },
                          [](double, double, double g, double& da, double& db) {
                            da = g;
                            db = -g;
                          });
}

Tensor mul(Tape& tape, const Tensor& a, const Tensor& b) {
  return binary_pointwise(tape, a, b, "mul",
                          [](double x, double y) { return x * y; },
                          [](double x, double y, double g, double& da, double& db) {
                            da = g * y;
                            db = g * x;
                          });
}

Tensor relu(Tape& tape, const Tensor& a) {
  Tensor out = make_result(a.rows(), a.cols(), a.requires_grad());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = std::max(0.0, a.data()[i]);
  if (out.requires_grad()) {
    Tensor ac = a, oc = out;
    tape.record([ac, oc]() mutable {
      for (std::size_t i = 0; i < ac.size(); ++i) {
        if (ac.data()[i] > 0.0) ac.grad()[i] += oc.grad()[i];
      }
    });
  }
  return out;
}

Tensor l2norm_rows(Tape& tape, const Tensor& a) {
  const std::size_t n = a.rows(), d = a.cols();
  Tensor out = make_result(n, d, a.requires_grad());
  std::vector<double> norms(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += a(i, j) * a(i, j);
    const double nrm = std::sqrt(s);
    if (nrm == 0.0) {
      throw std::runtime_error("l2norm_rows: zero-norm row " + std::to_string(i));
    }
    norms[i] = nrm;
    for (std::size_t j = 0; j < d; ++j) out(i, j) = a(i, j) / nrm;
  }
  ensure_finite(out, "l2norm_rows");
  if (out.requires_grad()) {
    Tensor ac = a, oc = out;
    tape.record([ac, oc, norms]() mutable {
      const std::size_t n = ac.rows(), d = ac.cols();
      for (std::size_t i = 0; i < n; ++i) {
        double dot = 0.0;  // x_i . dy_i
        for (std::size_t j = 0; j < d; ++j) dot += ac(i, j) * oc.grad()[i * d + j];
        const double nrm = norms[i];
        const double n3 = nrm * nrm * nrm;
        for (std::size_t j = 0; j < d; ++j) {
          ac.grad()[i * d + j] += oc.grad()[i * d + j] / nrm - ac(i, j) * dot / n3;
        }
      }
    });
  }
  return out;
}

Tensor mean_rows(Tape& tape, const Tensor& a) {
  const std::size_t n = a.rows(), d = a.cols();
  if (n == 0) throw std::runtime_error("mean_rows: empty input");
  Tensor out = make_result(1, d, a.requires_grad());
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a(i, j);
    out(0, j) = s / static_cast<double>(n);
  }
  if (out.requires_grad()) {
    Tensor ac = a, oc = out;
    tape.record([ac, oc]() mutable {
      const std::size_t n = ac.rows(), d = ac.cols();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
          ac.grad()[i * d + j] += oc.grad()[j] / static_cast<double>(n);
    });
  }
  return out;
}

Tensor scale(Tape& tape, const Tensor& a, double alpha) { return affine(tape, a, alpha, 0.0); }

Tensor affine(Tape& tape, const Tensor& a, double alpha, double beta) {
  Tensor out = make_result(a.rows(), a.cols(), a.requires_grad());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = alpha * a.data()[i] + beta;
  ensure_finite(out, "affine");
  if (out.requires_grad()) {
    Tensor ac = a, oc = out;
    tape.record([ac, oc, alpha]() mutable {
      for (std::size_t i = 0; i < ac.size(); ++i) ac.grad()[i] += alpha * oc.grad()[i];
    });
  }
  return out;
}

Tensor exp_op(Tape& tape, const Tensor& a) {
  Tensor out = make_result(a.rows(), a.cols(), a.requires_grad());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = std::exp(a.data()[i]);
  ensure_finite(out, "exp");
  if (out.requires_grad()) {
    Tensor ac = a, oc = out;
    tape.record([ac, oc]() mutable {
      for (std::size_t i = 0; i < ac.size(); ++i) ac.grad()[i] += oc.data()[i] * oc.grad()[i];
    });
  }
  return out;
}

Tensor log_op(Tape& tape, const Tensor& a) {
  Tensor out = make_result(a.rows(), a.cols(), a.requires_grad());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.data()[i] <= 0.0) throw std::runtime_error("log: non-positive entry");
    out.data()[i] = std::log(a.data()[i]);
  }
  if (out.requires_grad()) {
    Tensor ac = a, oc = out;
    tape.record([ac, oc]() mutable {
      for (std::size_t i = 0; i < ac.size(); ++i) ac.grad()[i] += oc.grad()[i] / ac.data()[i];
    });
  }
  return out;
}

Tensor clamp_max(Tape& tape, const Tensor& a, double cap) {
  Tensor out = make_result(a.rows(), a.cols(), a.requires_grad());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = std::min(a.data()[i], cap);
  if (out.requires_grad()) {
    Tensor ac = a, oc = out;
    tape.record([ac, oc, cap]() mutable {
      for (std::size_t i = 0; i < ac.size(); ++i) {
        if (ac.data()[i] < cap) ac.grad()[i] += oc.grad()[i];
      }
    });
  }
  return out;
}

Tensor row_scale(Tape& tape, const Tensor& a, const Tensor& s) {
  if (s.rows() != a.rows() || s.cols() != 1) {
    throw std::invalid_argument("row_scale: scale must be rows x 1");
  }
  const std::size_t n = a.rows(), d = a.cols();
  Tensor out = make_result(n, d, a.requires_grad() || s.requires_grad());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = a(i, j) * s(i, 0);
  ensure_finite(out, "row_scale");
  if (out.requires_grad()) {
    Tensor ac = a, sc = s, oc = out;
    tape.record([ac, sc, oc]() mutable {
      const std::size_t n = ac.rows(), d = ac.cols();
      for (std::size_t i = 0; i < n; ++i) {
        double ds = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double g = oc.grad()[i * d + j];
          if (ac.requires_grad()) ac.grad()[i * d + j] += g * sc(i, 0);
          ds += g * ac(i, j);
        }
        if (sc.requires_grad()) sc.grad()[i] += ds;
      }
    });
  }
  return out;
}

Tensor add_row(Tape& tape, const Tensor& a, const Tensor& bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols()) {
    throw std::invalid_argument("add_row: bias must be 1 x cols");
  }
  const std::size_t n = a.rows(), d = a.cols();
  Tensor out = make_result(n, d, a.requires_grad() || bias.requires_grad());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = a(i, j) + bias(0, j);
  ensure_finite(out, "add_row");
  if (out.requires_grad()) {
    Tensor ac = a, bc = bias, oc = out;
    tape.record([ac, bc, oc]() mutable {
      const std::size_t n = ac.rows(), d = ac.cols();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          const double g = oc.grad()[i * d + j];
          if (ac.requires_grad()) ac.grad()[i * d + j] += g;
          if (bc.requires_grad()) bc.grad()[j] += g;
        }
    });
  }
  return out;
}

Tensor sum_all(Tape& tape, const Tensor& a) {
  Tensor out = make_result(1, 1, a.requires_grad());
  out(0, 0) = std::accumulate(a.data().begin(), a.data().end(), 0.0);
  ensure_finite(out, "sum_all");
  if (out.requires_grad()) {
    Tensor ac = a, oc = out;
    tape.record([ac, oc]() mutable {
      const double g = oc.grad()[0];
      for (std::size_t i = 0; i < ac.size(); ++i) ac.grad()[i] += g;
    });
  }
  return out;
}

Tensor gather_rows(Tape& tape, const Tensor& a, const std::vector<std::size_t>& idx) {
  const std::size_t d = a.cols();
  for (std::size_t i : idx) {
    if (i >= a.rows()) throw std::invalid_argument("gather_rows: index out of range");
  }
  Tensor out = make_result(idx.size(), d, a.requires_grad());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t j = 0; j < d; ++j) out(r, j) = a(idx[r], j);
  if (out.requires_grad()) {
    Tensor ac = a, oc = out;
    tape.record([ac, oc, idx]() mutable {
      const std::size_t d = ac.cols();
      for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t j = 0; j < d; ++j) ac.grad()[idx[r] * d + j] += oc.grad()[r * d + j];
    });
  }
  return out;
}

Tensor concat_rows(Tape& tape, const std::vector<Tensor>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no parts");
  const std::size_t d = parts.front().cols();
  std::size_t total = 0;
  bool needs_grad = false;
  for (const Tensor& p : parts) {
    if (p.cols() != d) throw std::invalid_argument("concat_rows: column mismatch");
    total += p.rows();
    needs_grad = needs_grad || p.requires_grad();
  }
  Tensor out = make_result(total, d, needs_grad);
  std::size_t row = 0;
  for (const Tensor& p : parts) {
    std::copy(p.data().begin(), p.data().end(), out.data().begin() + row * d);
    row += p.rows();
  }
  if (out.requires_grad()) {
    std::vector<Tensor> pc = parts;
    Tensor oc = out;
    tape.record([pc, oc]() mutable {
      const std::size_t d = oc.cols();
      std::size_t row = 0;
      for (Tensor& p : pc) {
        if (p.requires_grad()) {
          for (std::size_t i = 0; i < p.size(); ++i) p.grad()[i] += oc.grad()[row * d + i];
        }
        row += p.rows();
      }
    });
  }
  return out;
}

Tensor pairwise_sqdist(Tape& tape, const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("pairwise_sqdist: dim mismatch");
  const std::size_t n = a.rows(), m = b.rows(), d = a.cols();
  Tensor out = make_result(n, m, a.requires_grad() || b.requires_grad());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = a(i, k) - b(j, k);
        s += diff * diff;
      }
      out(i, j) = s;
    }
  ensure_finite(out, "pairwise_sqdist");
  if (out.requires_grad()) {
    Tensor ac = a, bc = b, oc = out;
    tape.record([ac, bc, oc]() mutable {
      const std::size_t n = ac.rows(), m = bc.rows(), d = ac.cols();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          const double g = 2.0 * oc.grad()[i * m + j];
          if (g == 0.0) continue;
          for (std::size_t k = 0; k < d; ++k) {
            const double diff = ac(i, k) - bc(j, k);
            if (ac.requires_grad()) ac.grad()[i * d + k] += g * diff;
            if (bc.requires_grad()) bc.grad()[j * d + k] -= g * diff;
          }
        }
    });
  }
  return out;
}

Tensor softmax_cross_entropy(Tape& tape, const Tensor& logits, const std::vector<int>& labels) {
  const std::size_t n = logits.rows(), c = logits.cols();
  if (labels.size() != n) throw std::invalid_argument("softmax_cross_entropy: label count");
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= c) {
      throw std::invalid_argument("softmax_cross_entropy: label out of range");
    }
  }
  // Stable log-softmax; keep the probabilities for backward.
  std::vector<double> probs(n * c);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mx = logits(i, 0);
    for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, logits(i, j));
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += std::exp(logits(i, j) - mx);
    const double logz = std::log(z) + mx;
    for (std::size_t j = 0; j < c; ++j) probs[i * c + j] = std::exp(logits(i, j) - logz);
    loss -= logits(i, static_cast<std::size_t>(labels[i])) - logz;
  }
  Tensor out = make_result(1, 1, logits.requires_grad());
  out(0, 0) = loss / static_cast<double>(n);
  ensure_finite(out, "softmax_cross_entropy");
  if (out.requires_grad()) {
    Tensor lc = logits, oc = out;
    tape.record([lc, oc, probs, labels]() mutable {
      const std::size_t n = lc.rows(), c = lc.cols();
      const double g = oc.grad()[0] / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) {
          const double onehot = (static_cast<std::size_t>(labels[i]) == j) ? 1.0 : 0.0;
          lc.grad()[i * c + j] += g * (probs[i * c + j] - onehot);
        }
    });
  }
  return out;
}

std::vector<int> argmax_rows(const Tensor& t) {
  std::vector<int> out(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < t.cols(); ++j) {
      if (t(i, j) > t(i, best)) best = j;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

// ---- optimizers ----------------------------------------------------------

void adam_step(std::vector<Tensor>& params, AdamState& state, double lr) {
  if (state.first_moment.empty()) {
    for (const Tensor& p : params) {
      state.first_moment.emplace_back(p.size(), 0.0);
      state.second_moment.emplace_back(p.size(), 0.0);
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw std::invalid_argument("adam_step: state/params count mismatch");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!params[k].requires_grad() || !params[k].has_grad()) {
      throw std::invalid_argument("adam_step: parameter " + std::to_string(k) +
                                  " has no gradient");
    }
    if (state.first_moment[k].size() != params[k].size()) {
      throw std::invalid_argument("adam_step: moment shape mismatch");
    }
  }
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& p = params[k];
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = p.grad()[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p.data()[i] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
    }
    p.zero_grad();
  }
}

void sgd_step(std::vector<Tensor>& params, double lr) {
  for (Tensor& p : params) {
    if (!p.requires_grad() || !p.has_grad()) {
      throw std::invalid_argument("sgd_step: parameter has no gradient");
    }
    for (std::size_t i = 0; i < p.size(); ++i) p.data()[i] -= lr * p.grad()[i];
    p.zero_grad();
  }
}

void ema_update(std::vector<Tensor>& target, const std::vector<Tensor>& online, double tau) {
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("ema_update: tau outside [0, 1]");
  if (target.size() != online.size()) throw std::invalid_argument("ema_update: list size");
  if (tau == 1.0) return;  // exact no-op, bit-identical target
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (target[k].size() != online[k].size()) {
      throw std::invalid_argument("ema_update: shape mismatch");
    }
    for (std::size_t i = 0; i < target[k].size(); ++i) {
      target[k].data()[i] = tau * target[k].data()[i] + (1.0 - tau) * online[k].data()[i];
    }
  }
}

std::uint64_t content_hash(const std::vector<Tensor>& params) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* bytes, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const Tensor& t : params) {
    const std::uint64_t dims[2] = {t.rows(), t.cols()};
    mix(dims, sizeof(dims));
    mix(t.data().data(), t.data().size() * sizeof(double));
  }
  return h;
}

}  // namespace cgfl
