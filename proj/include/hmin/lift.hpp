#pragma once

// Reconstruction of the G-invariant submanifold from a quotient curve:
// orbit sweeps, Hopf lifts, the explicit constant solutions, point clouds
// and their CSV/OBJ/PLY export.
//
// Parameters of a swept immersion are (s, orbit angles...):
//   SO(m) orbits S^{m-1}: hyperspherical angles psi_1..psi_{m-1},
//     xi = (cos psi_1, sin psi_1 cos psi_2, ..., sin psi_1...sin psi_{m-1}),
//     psi_k in (0, pi) for k < m-1 and psi_{m-1} in [0, 2 pi);
//     m = n for CPnSO, n + 1 for CnSO.
//   torus orbits: angles alpha_j in [0, 2 pi), one per torus factor.
// hopf_lift appends the fiber angle t in [0, 2 pi).

#include "hmin/immersion.hpp"
#include "hmin/reduction.hpp"
#include "hmin/solver.hpp"

#include <string>
#include <string_view>

namespace hmin {

// A quotient curve s -> (x, theta) with its velocity.
struct CurvePoint {
  double x, theta, dx, dtheta;
};
using CurveMap = std::function<CurvePoint(double)>;

// theta -> (x(theta), theta) along a trajectory.
CurveMap trajectory_curve(const Trajectory& traj);

// Orbit sweep of a quotient curve over s in [s_lo, s_hi]. Points outside
// the collar raise DomainError when evaluated.
Immersion orbit_immersion(const MetricProfile& profile, CurveMap curve, double s_lo, double s_hi);
// Same for trajectories (s = theta over the integrated range).
Immersion orbit_immersion(const Trajectory& traj);

// u -> e^{it} F(u) with t appended; frames gain the vertical i z.
Immersion hopf_lift(const Immersion& base);

// Samples an immersion on a grid: curve_resolution points on [lo, hi] of
// the first parameter (endpoints included) and orbit_resolution per orbit
// angle (cell centred on (0, pi), uniform on [0, 2 pi)).
ImmersionCloud sample_immersion(const ActionCase& ac, const Immersion& imm, int curve_resolution,
                                int orbit_resolution, unsigned jobs = 1);

// Orbit sweep of an integrated trajectory. DomainError when the trajectory
// enters the boundary collar; InvalidInput for resolutions < 4.
ImmersionCloud sweep_orbit(const Trajectory& traj, int orbit_resolution, int curve_resolution, unsigned jobs = 1);

// Phase copies e^{it} z, t = 2 pi k / fiber_resolution, with frames
// extended by i z. InvalidInput for non-projective or non-horizontal input.
ImmersionCloud hopf_lift_cloud(const ImmersionCloud& cloud, int fiber_resolution);

// The constant solution x = x* swept over theta in [0, 2 pi]. For CnSO
// x* = (K/(n+1))^{1/(n-1)} and K <= 0 raises PreconditionError; other cases
// use constant_solutions()[index] (PreconditionError when absent).
double constant_height(const ActionCase& ac, double K, std::size_t index = 0);
Immersion constant_immersion_map(const ActionCase& ac, double K, std::size_t index = 0);
ImmersionCloud constant_immersion(const ActionCase& ac, double K, int orbit_resolution, int curve_resolution,
                                  std::size_t index = 0);

// Volume of an immersion over its parameter box from the Gram determinant
// of its (analytic) frames. Gauss-Legendre in the non-periodic directions,
// trapezoid in the periodic ones. The first parameter is split in `panels`.
double immersion_volume(const Immersion& imm, int panels = 64);

// Length of the curve in the HL metric and the integral of V * (g~ speed);
// on a trajectory both equal the swept volume divided by volume_scale().
double hl_length(const MetricProfile& profile, const CurveMap& curve, double s_lo, double s_hi, int panels = 64);
double orbit_speed_integral(const MetricProfile& profile, const CurveMap& curve, double s_lo, double s_hi,
                            int panels = 64);

enum class CloudFormat { Csv, Obj, Ply };
CloudFormat parse_cloud_format(std::string_view name);

// CSV: param_0..,re_0,im_0,..,frame_0_re_0,frame_0_im_0,.. with %.17g.
// OBJ/PLY: the point (Re z_0, Im z_0, Re z_1) of each sample.
void export_cloud(const ImmersionCloud& cloud, CloudFormat format, const std::string& path);
std::string cloud_csv_header(const ImmersionCloud& cloud);
ImmersionCloud import_cloud_csv(const std::string& path, const ActionCase& ac, SpaceKind target);

}  // namespace hmin
