// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "crslearn/digest.hpp"
#include "crslearn/error.hpp"
#include "crslearn/kernels.hpp"
#include "crslearn/learn.hpp"

namespace crslearn::learn {

namespace {

// log(1 + exp(-m)) without overflow
inline double logistic_loss(double m) {
  if (m > 0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

// d/ds loss(y, s) as a function of the margin m = y*s, times y
inline double loss_grad_factor(Loss loss, double m, double y) {
  switch (loss) {
    case Loss::logistic:
      return -y / (1.0 + std::exp(m));
    case Loss::squared_hinge:
      return m < 1.0 ? -2.0 * y * (1.0 - m) : 0.0;
    case Loss::hinge:
      return m < 1.0 ? -y : 0.0;  // subgradient
  }
  return 0.0;
}

inline double loss_value(Loss loss, double m) {
  switch (loss) {
    case Loss::logistic:
      return logistic_loss(m);
    case Loss::squared_hinge: {
      double h = std::max(0.0, 1.0 - m);
      return h * h;
    }
    case Loss::hinge:
      return std::max(0.0, 1.0 - m);
  }
  return 0.0;
}

// Rows collapsed to unique bit patterns with multiplicities; with d <= 64
// rule bits the working set shrinks by orders of magnitude and the loss sum
// is unchanged up to float association.
struct Compact {
  std::size_t d = 0;
  std::vector<std::uint8_t> rows;     // unique rows, row-major
  std::vector<double> count_pos;      // multiplicity with y = +1
  std::vector<double> count_neg;      // multiplicity with y = -1
  std::size_t n_unique = 0;
  double n_total = 0;
};

Compact compact_rows(const features::FeatureMatrix& X, std::span<const int> y) {
  Compact c;
  c.d = X.cols;
  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(X.rows / 4 + 16);
  for (std::size_t i = 0; i < X.rows; ++i) {
    std::string key(reinterpret_cast<const char*>(X.row(i)), X.cols);
    auto [it, inserted] = seen.emplace(std::move(key), c.n_unique);
    if (inserted) {
      c.rows.insert(c.rows.end(), X.row(i), X.row(i) + X.cols);
      c.count_pos.push_back(0);
      c.count_neg.push_back(0);
      ++c.n_unique;
    }
    if (y[i] > 0) {
      c.count_pos[it->second] += 1;
    } else {
      c.count_neg[it->second] += 1;
    }
  }
  c.n_total = static_cast<double>(X.rows);
  return c;
}

struct SmoothEval {
  double value = 0.0;                // C * sum loss (+ l2 term)
  std::vector<double> grad_w;
  double grad_b = 0.0;
};

// f(w, b) and its gradient over the compacted rows.
void eval_smooth(const Compact& c, Loss loss, Penalty penalty, double C,
                 std::span<const double> w, double b, SmoothEval& out,
                 bool with_grad) {
  const std::size_t d = c.d;
  out.value = 0.0;
  out.grad_b = 0.0;
  if (with_grad) {
    out.grad_w.assign(d, 0.0);
  }
  for (std::size_t u = 0; u < c.n_unique; ++u) {
    const std::uint8_t* row = c.rows.data() + u * d;
    double s = kernels::dot_bits(row, w.data(), d) + b;
    for (int sign = 0; sign < 2; ++sign) {
      double cnt = sign == 0 ? c.count_pos[u] : c.count_neg[u];
      if (cnt == 0) continue;
      double yv = sign == 0 ? 1.0 : -1.0;
      double m = yv * s;
      out.value += cnt * loss_value(loss, m);
      if (with_grad) {
        double g = cnt * loss_grad_factor(loss, m, yv);
        if (g != 0.0) {
          kernels::add_bits(g, row, out.grad_w.data(), d);
          out.grad_b += g;
        }
      }
    }
  }
  out.value *= C;
  if (with_grad) {
    for (auto& g : out.grad_w) g *= C;
    out.grad_b *= C;
  }
  if (penalty == Penalty::l2) {
    out.value += 0.5 * kernels::norm2sq(w.data(), d);
    if (with_grad) kernels::axpy(1.0, w.data(), out.grad_w.data(), d);
  }
}

double full_objective(const Compact& c, Loss loss, Penalty penalty, double C,
                      std::span<const double> w, double b) {
  SmoothEval ev;
  eval_smooth(c, loss, penalty, C, w, b, ev, false);
  double obj = ev.value;
  if (penalty == Penalty::l1) obj += kernels::norm1(w.data(), c.d);
  return obj;
}

LinearModel fista(const Compact& c, const TrainConfig& cfg) {
  const std::size_t d = c.d;
  std::vector<double> w(d, 0.0), w_prev(d, 0.0), z(d, 0.0), w_next(d, 0.0);
  double b = 0.0, b_prev = 0.0, zb = 0.0, b_next = 0.0;
  double t = 1.0;
  double L = 1.0;
  const bool l1 = cfg.penalty == Penalty::l1;

  SmoothEval ev;
  double obj = full_objective(c, cfg.loss, cfg.penalty, cfg.C, w, b);
  double best_obj = obj;
  std::vector<double> best_w = w;
  double best_b = b;

  LinearModel model;
  model.loss = cfg.loss;
  model.penalty = cfg.penalty;
  model.C = cfg.C;
  model.seed = cfg.seed;
  model.converged = false;

  std::vector<double> step(d, 0.0);
  int iter = 0;
  int stable = 0;
  for (; iter < cfg.max_iters; ++iter) {
    eval_smooth(c, cfg.loss, cfg.penalty, cfg.C, z, zb, ev, true);

    // backtracking on the smooth majorizer
    for (;;) {
      double inv = 1.0 / L;
      for (std::size_t j = 0; j < d; ++j) step[j] = z[j] - inv * ev.grad_w[j];
      if (l1) {
        kernels::soft_threshold(step.data(), inv, w_next.data(), d);
      } else {
        std::memcpy(w_next.data(), step.data(), d * sizeof(double));
      }
      b_next = zb - inv * ev.grad_b;

      SmoothEval probe;
      eval_smooth(c, cfg.loss, cfg.penalty, cfg.C, w_next, b_next, probe, false);
      double quad = 0.0, dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double diff = w_next[j] - z[j];
        quad += diff * diff;
        dot += diff * ev.grad_w[j];
      }
      double diff_b = b_next - zb;
      quad += diff_b * diff_b;
      dot += diff_b * ev.grad_b;
      if (probe.value <= ev.value + dot + 0.5 * L * quad + 1e-12 * std::fabs(ev.value)) {
        break;
      }
      L *= 2.0;
      if (L > 1e18) break;
    }

    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    double momentum = (t - 1.0) / t_next;
    w_prev = w;
    b_prev = b;
    w = w_next;
    b = b_next;
    for (std::size_t j = 0; j < d; ++j) {
      z[j] = w[j] + momentum * (w[j] - w_prev[j]);
    }
    zb = b + momentum * (b - b_prev);
    t = t_next;

    double new_obj = full_objective(c, cfg.loss, cfg.penalty, cfg.C, w, b);
    if (new_obj < best_obj) {
      best_obj = new_obj;
      best_w = w;
      best_b = b;
    }
    // FISTA is not monotone; restart momentum when the objective moves up
    if (new_obj > obj) {
      t = 1.0;
      z = w;
      zb = b;
    }
    double delta = std::fabs(new_obj - obj);
    if (delta <= cfg.tol * std::max(1.0, std::fabs(new_obj))) {
      if (++stable >= 3) {
        obj = new_obj;
        model.converged = true;
        ++iter;
        break;
      }
    } else {
      stable = 0;
    }
    obj = new_obj;
    L = std::max(L * 0.9, 1e-12);
  }

  model.weights = std::move(best_w);
  model.bias = best_b;
  model.objective = best_obj;
  model.iterations = iter;
  return model;
}

// Plain hinge is nonsmooth in the loss itself: decaying-step projected
// subgradient with best-iterate tracking. Slower but only used when the
// caller explicitly asks for loss=hinge.
LinearModel subgradient_hinge(const Compact& c, const TrainConfig& cfg) {
  const std::size_t d = c.d;
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  double best_obj = full_objective(c, Loss::hinge, cfg.penalty, cfg.C, w, b);
  std::vector<double> best_w = w;
  double best_b = b;

  SmoothEval ev;
  const double scale = std::max(1.0, cfg.C * c.n_total);
  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    eval_smooth(c, Loss::hinge, cfg.penalty, cfg.C, w, b, ev, true);
    double step = 1.0 / (scale * std::sqrt(iter + 1.0));
    if (cfg.penalty == Penalty::l1) {
      for (std::size_t j = 0; j < d; ++j) w[j] -= step * ev.grad_w[j];
      kernels::soft_threshold(w.data(), step, w.data(), d);
    } else {
      kernels::axpy(-step, ev.grad_w.data(), w.data(), d);
    }
    b -= step * ev.grad_b;
    double obj = full_objective(c, Loss::hinge, cfg.penalty, cfg.C, w, b);
    if (obj < best_obj) {
      best_obj = obj;
      best_w = w;
      best_b = b;
    }
  }

  LinearModel model;
  model.loss = Loss::hinge;
  model.penalty = cfg.penalty;
  model.C = cfg.C;
  model.seed = cfg.seed;
  model.weights = std::move(best_w);
  model.bias = best_b;
  model.objective = best_obj;
  model.iterations = iter;
  model.converged = true;
  return model;
}

}  // namespace

const char* loss_name(Loss loss) {
  switch (loss) {
    case Loss::logistic: return "logistic";
    case Loss::hinge: return "hinge";
    case Loss::squared_hinge: return "squared_hinge";
  }
  return "logistic";
}

const char* penalty_name(Penalty penalty) {
  return penalty == Penalty::l1 ? "l1" : "l2";
}

std::optional<Loss> loss_from_name(std::string_view name) {
  if (name == "logistic") return Loss::logistic;
  if (name == "hinge") return Loss::hinge;
  if (name == "squared_hinge") return Loss::squared_hinge;
  return std::nullopt;
}

std::optional<Penalty> penalty_from_name(std::string_view name) {
  if (name == "l1") return Penalty::l1;
  if (name == "l2") return Penalty::l2;
  return std::nullopt;
}

double loss_sum(const features::FeatureMatrix& X, std::span<const int> y, Loss loss,
                double C, std::span<const double> w, double b) {
  double value = 0.0;
  for (std::size_t i = 0; i < X.rows; ++i) {
    double s = kernels::dot_bits(X.row(i), w.data(), X.cols) + b;
    double yv = y[i] > 0 ? 1.0 : -1.0;
    value += loss_value(loss, yv * s);
  }
  return C * value;
}

void loss_gradient(const features::FeatureMatrix& X, std::span<const int> y, Loss loss,
                   double C, std::span<const double> w, double b,
                   std::vector<double>* grad_w, double* grad_b) {
  grad_w->assign(X.cols, 0.0);
  *grad_b = 0.0;
  for (std::size_t i = 0; i < X.rows; ++i) {
    double s = kernels::dot_bits(X.row(i), w.data(), X.cols) + b;
    double yv = y[i] > 0 ? 1.0 : -1.0;
    double g = loss_grad_factor(loss, yv * s, yv);
    if (g != 0.0) {
      kernels::add_bits(g, X.row(i), grad_w->data(), X.cols);
      *grad_b += g;
    }
  }
  for (auto& g : *grad_w) g *= C;
  *grad_b *= C;
}

double objective_value(const features::FeatureMatrix& X, std::span<const int> y,
                       Loss loss, Penalty penalty, double C,
                       std::span<const double> w, double b) {
  double value = 0.0;
  for (std::size_t i = 0; i < X.rows; ++i) {
    double s = kernels::dot_bits(X.row(i), w.data(), X.cols) + b;
    double yv = y[i] > 0 ? 1.0 : -1.0;
    value += loss_value(loss, yv * s);
  }
  value *= C;
  if (penalty == Penalty::l2) {
    value += 0.5 * kernels::norm2sq(w.data(), X.cols);
  } else {
    value += kernels::norm1(w.data(), X.cols);
  }
  return value;
}

LinearModel train_linear(const features::FeatureMatrix& X, std::span<const int> y,
                         const TrainConfig& cfg) {
  if (X.rows == 0 || X.rows != y.size()) {
    throw Error(ErrorCode::invalid_argument, "feature matrix / label size mismatch");
  }
  if (!(cfg.C > 0)) throw Error(ErrorCode::invalid_argument, "C must be positive");
  bool has_pos = false, has_neg = false;
  for (int v : y) (v > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::degenerate_labels, "training labels contain a single class");
  }

  Compact c = compact_rows(X, y);
  LinearModel model = cfg.loss == Loss::hinge ? subgradient_hinge(c, cfg) : fista(c, cfg);
  model.space_digest = X.space_digest;

  std::string blob(reinterpret_cast<const char*>(X.data.data()), X.data.size());
  for (int v : y) blob.push_back(v > 0 ? '+' : '-');
  model.train_digest = digest_hex(blob);
  return model;
}

double decision_score(const LinearModel& model, const features::FeatureVector& x) {
  if (!model.space_digest.empty() && !x.space_digest.empty() &&
      model.space_digest != x.space_digest) {
    throw Error(ErrorCode::inconsistent_space, "vector bound to a different space");
  }
  if (x.bits.size() != model.weights.size()) {
    throw Error(ErrorCode::inconsistent_space, "vector/model dimension mismatch");
  }
  return kernels::dot_bits(x.bits.data(), model.weights.data(), x.bits.size()) +
         model.bias;
}

std::vector<double> decision_scores(const LinearModel& model,
                                    const features::FeatureMatrix& X) {
  if (!model.space_digest.empty() && !X.space_digest.empty() &&
      model.space_digest != X.space_digest) {
    throw Error(ErrorCode::inconsistent_space, "matrix bound to a different space");
  }
  if (X.cols != model.weights.size()) {
    throw Error(ErrorCode::inconsistent_space, "matrix/model dimension mismatch");
  }
  std::vector<double> scores(X.rows);
  for (std::size_t i = 0; i < X.rows; ++i) {
    scores[i] = kernels::dot_bits(X.row(i), model.weights.data(), X.cols) + model.bias;
  }
  return scores;
}

int zero_weight_count(const LinearModel& model, double eps) {
  int count = 0;
  for (double w : model.weights) {
    if (std::fabs(w) <= eps) ++count;
  }
  return count;
}

}  // namespace crslearn::learn
