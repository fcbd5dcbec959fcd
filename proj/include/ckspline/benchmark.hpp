#ifndef CKSPLINE_BENCHMARK_HPP
#define CKSPLINE_BENCHMARK_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "ckspline/spline.hpp"
#include "ckspline/train.hpp"

namespace ckspline {

/// y = sin(2 pi x / 16) + 0.5 sin(4 pi x / 16) at `count` uniform points on [0, 16].
inline SampleSet benchmark_samples(std::size_t count = 128) {
  std::vector<double> xs(count), ys(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = 16.0 * static_cast<double>(i) / static_cast<double>(count - 1);
    xs[i] = x;
    ys[i] = std::sin(2.0 * std::numbers::pi * x / 16.0) +
            0.5 * std::sin(4.0 * std::numbers::pi * x / 16.0);
  }
  return SampleSet(std::move(xs), std::move(ys));
}

/// Eight unit segments, degree 5, C^2 target, zero init.
inline TrainConfig benchmark_config() {
  TrainConfig c;
  c.segments = 8;
  c.degree = 5;
  c.epochs = 10000;
  c.loss.k = 2;
  c.loss.lambda = 0.5;
  c.scaling = Scaling::unit_segments;
  c.init = Init::zeros;
  return c;
}

}  // namespace ckspline

#endif  // CKSPLINE_BENCHMARK_HPP
