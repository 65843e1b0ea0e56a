#pragma once

// Sampled and parametrized immersions shared by lift and verify.

#include "hmin/ambient.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hmin {

struct CloudSample {
  RVector params;
  AmbientPoint point;
  std::vector<CVector> frame;  // tangent vectors; Hopf-horizontal on CP^n
};

struct CloudMeta {
  std::string source;
  std::vector<int> resolutions;
};

struct ImmersionCloud {
  ImmersionCloud(ActionCase c, SpaceKind t) : ac(std::move(c)), target(t) {}

  ActionCase ac;
  SpaceKind target;
  std::vector<CloudSample> samples;
  CloudMeta meta;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  // Frame dimension (0 when empty).
  int dim() const { return samples.empty() ? 0 : static_cast<int>(samples.front().frame.size()); }
};

using ImmersionMap = std::function<CVector(const RVector&)>;
using FrameMap = std::function<std::vector<CVector>(const RVector&)>;

// A smooth parametrized immersion u -> F(u) over a parameter box. For
// projective targets F(u) is a unit representative and `frame` returns the
// horizontal parts of the coordinate derivatives.
struct Immersion {
  SpaceKind target = SpaceKind::FlatComplex;
  int dim = 0;
  ImmersionMap map;
  FrameMap frame;
  RVector lo, hi;
  std::vector<bool> periodic;
};

// Gram determinant of a real frame in C^m = R^{2m}.
double gram_determinant(const std::vector<CVector>& frame);

// Throws InvalidInput when a frame is degenerate (Gram determinant <= 1e-10)
// or, on CP^n, not horizontal.
void validate_cloud(const ImmersionCloud& cloud);

}  // namespace hmin
