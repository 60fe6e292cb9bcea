#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "ivf/errors.hpp"
#include "ivf/rng.hpp"
#include "ivf/vector_field.hpp"

namespace ivf {

// Gradient of the quadratic field loss: estimate minus truth at masked
// pixels, (0,0) elsewhere.
inline InnovationField exact_gradient(const VectorFieldState& estimate,
                                      const VectorFieldState& truth,
                                      const SegmentationMask& mask) {
  require_same_shape(estimate, truth);
  require_grid_match(estimate, mask);
  InnovationField grad(estimate.grid(), estimate.keypoint_count());
  for (int k = 0; k < estimate.keypoint_count(); ++k)
    for (int i = 0; i < estimate.grid().height; ++i)
      for (int j = 0; j < estimate.grid().width; ++j)
        if (mask.at(i, j)) grad.at(k, i, j) = estimate.at(k, i, j) - truth.at(k, i, j);
  return grad;
}

// Provider of gradient-field estimates. Realizations range from the exact
// analytic gradient to seeded simulators of an imperfect learned estimator.
class InnovationOracle {
 public:
  virtual ~InnovationOracle() = default;
  virtual InnovationField evaluate(const VectorFieldState& state) = 0;
};

class PerfectOracle final : public InnovationOracle {
 public:
  PerfectOracle(VectorFieldState truth, SegmentationMask mask)
      : truth_(std::move(truth)), mask_(std::move(mask)) {
    require_grid_match(truth_, mask_);
  }

  InnovationField evaluate(const VectorFieldState& state) override {
    return exact_gradient(state, truth_, mask_);
  }

 private:
  VectorFieldState truth_;
  SegmentationMask mask_;
};

// Noise model emulating an imperfect trained estimator: additive Gaussian
// noise per component, a constant bias field, and per-entry dropout. Each
// term is independently switchable.
struct NoiseSpec {
  double sigma = 0.0;
  Vec2 bias = Vec2::Zero();
  double dropout_p = 0.0;
  std::uint64_t seed = 0;
};

inline void validate_noise_spec(const NoiseSpec& spec) {
  if (!std::isfinite(spec.sigma) || spec.sigma < 0.0) {
    throw InvalidNoiseSpec("sigma must be finite and >= 0");
  }
  if (!spec.bias.allFinite()) throw InvalidNoiseSpec("bias must be finite");
  if (!std::isfinite(spec.dropout_p) || spec.dropout_p < 0.0 || spec.dropout_p > 1.0) {
    throw InvalidNoiseSpec("dropout probability must lie in [0, 1]");
  }
}

// Wraps a base oracle and corrupts its output at masked pixels. Output stays
// (0,0) outside the mask, mirroring the masked losses. Call t derives its RNG
// from (seed, t), so a freshly constructed oracle with the same seed replays
// the identical noise sequence.
class NoisyOracle final : public InnovationOracle {
 public:
  NoisyOracle(std::shared_ptr<InnovationOracle> base, SegmentationMask mask, NoiseSpec spec)
      : base_(std::move(base)), mask_(std::move(mask)), spec_(spec) {
    validate_noise_spec(spec_);
  }

  InnovationField evaluate(const VectorFieldState& state) override {
    InnovationField grad = base_->evaluate(state);
    require_grid_match(grad, mask_);
    const std::uint64_t call = call_count_++;
    const bool gaussian_on = spec_.sigma > 0.0;
    const bool bias_on = spec_.bias.squaredNorm() > 0.0;
    const bool dropout_on = spec_.dropout_p > 0.0;
    if (!gaussian_on && !bias_on && !dropout_on) return grad;

    Rng rng(derive_seed(spec_.seed, 0x6F'72'61'63ull, call));
    for (int k = 0; k < grad.keypoint_count(); ++k) {
      for (int i = 0; i < grad.grid().height; ++i) {
        for (int j = 0; j < grad.grid().width; ++j) {
          if (!mask_.at(i, j)) continue;
          Vec2& g = grad.at(k, i, j);
          if (gaussian_on) {
            g.x() += spec_.sigma * rng.gaussian();
            g.y() += spec_.sigma * rng.gaussian();
          }
          if (bias_on) g += spec_.bias;
          if (dropout_on && rng.uniform() < spec_.dropout_p) g.setZero();
        }
      }
    }
    return grad;
  }

 private:
  std::shared_ptr<InnovationOracle> base_;
  SegmentationMask mask_;
  NoiseSpec spec_;
  std::uint64_t call_count_ = 0;
};

inline std::unique_ptr<InnovationOracle> noisy_oracle(std::shared_ptr<InnovationOracle> base,
                                                      SegmentationMask mask,
                                                      const NoiseSpec& spec) {
  return std::make_unique<NoisyOracle>(std::move(base), std::move(mask), spec);
}

// Piecewise loss from Fast R-CNN: quadratic inside |x| < 1, linear outside.
inline double smooth_l1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

inline double smooth_l1(const Vec2& v) { return smooth_l1(v.x()) + smooth_l1(v.y()); }

// Reconstruction loss over the mask, summed across keypoints and components.
inline double loss_state(const VectorFieldState& estimate,
                         const VectorFieldState& reconstruction,
                         const SegmentationMask& mask) {
  require_same_shape(estimate, reconstruction);
  require_grid_match(estimate, mask);
  if (mask.count() == 0) throw EmptyMask("state loss over an empty mask");
  double sum = 0.0;
  for (int k = 0; k < estimate.keypoint_count(); ++k)
    for (int i = 0; i < estimate.grid().height; ++i)
      for (int j = 0; j < estimate.grid().width; ++j)
        if (mask.at(i, j)) sum += smooth_l1(estimate.at(k, i, j) - reconstruction.at(k, i, j));
  return sum;
}

// Gradient-prediction loss: penalizes deviation from the exact gradient
// (estimate - truth) over the mask.
inline double loss_innov(const InnovationField& predicted, const VectorFieldState& estimate,
                         const VectorFieldState& truth, const SegmentationMask& mask) {
  require_same_shape(predicted, estimate);
  require_same_shape(estimate, truth);
  require_grid_match(predicted, mask);
  if (mask.count() == 0) throw EmptyMask("innovation loss over an empty mask");
  double sum = 0.0;
  for (int k = 0; k < predicted.keypoint_count(); ++k)
    for (int i = 0; i < predicted.grid().height; ++i)
      for (int j = 0; j < predicted.grid().width; ++j)
        if (mask.at(i, j))
          sum += smooth_l1(predicted.at(k, i, j) -
                           (estimate.at(k, i, j) - truth.at(k, i, j)));
  return sum;
}

inline double loss_total(double innov, double state, double gamma) {
  if (!std::isfinite(innov) || !std::isfinite(state) || !std::isfinite(gamma) || gamma < 0.0) {
    throw InvalidSpec("loss terms must be finite and gamma >= 0");
  }
  return innov + gamma * state;
}

// Step-size sequence for the gradient descent. Every value must lie in the
// open interval (0, 1). Tabulated schedules clamp to their last entry past
// the end of the table.
class StepSchedule {
 public:
  static StepSchedule constant(double alpha) {
    check(alpha);
    StepSchedule s;
    s.alpha_ = alpha;
    return s;
  }

  static StepSchedule table(std::vector<double> values) {
    if (values.empty()) throw StepSizeOutOfRange("step table must not be empty");
    for (double a : values) check(a);
    StepSchedule s;
    s.table_ = std::move(values);
    return s;
  }

  bool is_constant() const { return table_.empty(); }

  double at(std::size_t t) const {
    if (table_.empty()) return alpha_;
    return table_[std::min(t, table_.size() - 1)];
  }

 private:
  static void check(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
      throw StepSizeOutOfRange("step size must lie in (0, 1), got " + std::to_string(alpha));
    }
  }

  double alpha_ = 0.0;
  std::vector<double> table_;
};

}  // namespace ivf
