#include "hmin/lift.hpp"

#include "hmin/errors.hpp"
#include "hmin/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

namespace hmin {

using std::numbers::pi;

double gram_determinant(const std::vector<CVector>& frame) {
  const auto k = static_cast<Eigen::Index>(frame.size());
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) g(i, j) = real_dot(frame[i], frame[j]);
  return k == 0 ? 0.0 : g.determinant();
}

void validate_cloud(const ImmersionCloud& cloud) {
  for (const CloudSample& s : cloud.samples) {
    if (!(gram_determinant(s.frame) > 1e-10)) throw InvalidInput("degenerate tangent frame in cloud");
    if (cloud.target == SpaceKind::ProjectiveHomogeneous)
      for (const CVector& v : s.frame)
        if (!is_horizontal(s.point.z, v)) throw InvalidInput("cloud frame is not Hopf-horizontal");
  }
}

namespace {

// Orbit point of the quotient at (x, theta) and its x- and theta-derivatives.
struct BaseJet {
  CVector z, dx, dth;
};

BaseJet base_jet(const MetricProfile& prof, double x, double theta) {
  const ActionCase& ac = prof.action_case();
  const int n = ac.n();
  const Complex e = std::polar(1.0, theta), ie = Complex(0.0, 1.0) * e;
  BaseJet b{CVector::Zero(n + 1), CVector::Zero(n + 1), CVector::Zero(n + 1)};
  const double s = std::sin(x), c = std::cos(x);
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      b.z(0) = c;
      b.z(1) = s * e;
      b.dx(0) = -s;
      b.dx(1) = c * e;
      b.dth(1) = s * ie;
      break;
    case CaseVariant::CPnTorus: {
      const double sd = std::sqrt(ac.delta());
      b.z(0) = sd * c;
      for (int j = 1; j < n; ++j) b.z(j) = std::sqrt(ac.c()[j - 1]);
      b.z(n) = sd * s * e;
      b.dx(0) = -sd * s;
      b.dx(n) = sd * c * e;
      b.dth(n) = sd * s * ie;
      break;
    }
    case CaseVariant::CnSO:
      b.z(0) = x * e;
      b.dx(0) = e;
      b.dth(0) = x * ie;
      break;
    case CaseVariant::CnTorus:
      for (int j = 0; j < n; ++j) {
        const double w = std::sqrt(x * x + ac.c()[j]);
        b.z(j) = w;
        b.dx(j) = x / w;
      }
      b.z(n) = x * e;
      b.dx(n) = e;
      b.dth(n) = x * ie;
      break;
  }
  return b;
}

// Number of orbit angles and the dimension m of the sphere factor (SO cases).
int sphere_dim(const ActionCase& ac) {
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      return ac.n();
    case CaseVariant::CnSO:
      return ac.n() + 1;
    default:
      return 0;
  }
}

int orbit_angles(const ActionCase& ac) {
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      return ac.n() - 1;
    case CaseVariant::CnSO:
      return ac.n();
    case CaseVariant::CPnTorus:
      return ac.n() - 1;
    case CaseVariant::CnTorus:
      return ac.n();
  }
  return 0;
}

// xi(psi) on S^{m-1} and its partial derivatives.
void hyperspherical(const double* psi, int m, RVector& xi, std::vector<RVector>& dxi) {
  xi.resize(m);
  dxi.assign(m - 1, RVector::Zero(m));
  std::vector<double> sn(m - 1), cs(m - 1);
  for (int k = 0; k < m - 1; ++k) {
    sn[k] = std::sin(psi[k]);
    cs[k] = std::cos(psi[k]);
  }
  for (int i = 0; i < m; ++i) {
    // xi_i = prod_{l<i} sin psi_l * (cos psi_i if i < m-1)
    auto factor = [&](int l, int diff) {
      // value of the l-th factor of xi_i, differentiated when diff
      if (l < i) return diff ? cs[l] : sn[l];
      return diff ? -sn[l] : cs[l];  // l == i < m-1
    };
    const int last = (i < m - 1) ? i : m - 2;
    double v = 1.0;
    for (int l = 0; l <= last; ++l) v *= factor(l, 0);
    xi(i) = v;
    for (int k = 0; k <= last; ++k) {
      double d = 1.0;
      for (int l = 0; l <= last; ++l) d *= factor(l, l == k);
      dxi[k](i) = d;
    }
  }
}

struct Evaluated {
  CVector z;
  std::vector<CVector> frame;
};

// Point and coordinate derivatives of the swept immersion at u = (s, angles).
Evaluated evaluate_sweep(const MetricProfile& prof, const CurveMap& curve, const RVector& u) {
  const ActionCase& ac = prof.action_case();
  const int n = ac.n();
  const CurvePoint cp = curve(u(0));
  prof.check(cp.x);
  const BaseJet b = base_jet(prof, cp.x, cp.theta);
  const CVector ds = b.dx * cp.dx + b.dth * cp.dtheta;
  const int na = orbit_angles(ac);
  Evaluated out;
  out.frame.reserve(1 + na);
  const Complex I(0.0, 1.0);
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
    case CaseVariant::CnSO: {
      const int m = sphere_dim(ac);
      const int off = ac.variant() == CaseVariant::CPnSO ? 1 : 0;
      RVector xi;
      std::vector<RVector> dxi;
      hyperspherical(u.data() + 1, m, xi, dxi);
      // The sphere factor multiplies the coordinate `off`.
      const Complex w = b.z(off), wd = ds(off);
      out.z = CVector::Zero(n + 1);
      CVector t = CVector::Zero(n + 1);
      if (off == 1) {
        out.z(0) = b.z(0);
        t(0) = ds(0);
      }
      out.z.segment(off, m) = w * xi.cast<Complex>();
      t.segment(off, m) = wd * xi.cast<Complex>();
      out.frame.push_back(t);
      for (int k = 0; k < m - 1; ++k) {
        CVector v = CVector::Zero(n + 1);
        v.segment(off, m) = w * dxi[k].cast<Complex>();
        out.frame.push_back(v);
      }
      break;
    }
    case CaseVariant::CPnTorus: {
      CVector ph = CVector::Ones(n + 1);
      for (int j = 1; j < n; ++j) ph(j) = std::polar(1.0, u(j));
      out.z = b.z.cwiseProduct(ph);
      out.frame.push_back(ds.cwiseProduct(ph));
      for (int j = 1; j < n; ++j) {
        CVector v = CVector::Zero(n + 1);
        v(j) = I * out.z(j);
        out.frame.push_back(v);
      }
      break;
    }
    case CaseVariant::CnTorus: {
      CVector ph = CVector::Ones(n + 1);
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        ph(j) = std::polar(1.0, u(1 + j));
        sum += u(1 + j);
      }
      ph(n) = std::polar(1.0, -sum);
      out.z = b.z.cwiseProduct(ph);
      out.frame.push_back(ds.cwiseProduct(ph));
      for (int j = 0; j < n; ++j) {
        CVector v = CVector::Zero(n + 1);
        v(j) = I * out.z(j);
        v(n) = -I * out.z(n);
        out.frame.push_back(v);
      }
      break;
    }
  }
  if (ac.projective())
    for (CVector& v : out.frame) v = horizontal_part(out.z, v);
  return out;
}

void require_resolution(int r, const char* what) {
  if (r < 4) throw InvalidInput(std::string(what) + " must be >= 4");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Composite Gauss-Legendre over [lo, hi].
template <class F>
double composite_gauss(F&& f, double lo, double hi, int panels) {
  double sum = 0.0;
  const double w = (hi - lo) / panels;
  for (int k = 0; k < panels; ++k)
    sum += boost::math::quadrature::gauss<double, 10>::integrate(f, lo + k * w, lo + (k + 1) * w);
  return sum;
}

}  // namespace

CurveMap trajectory_curve(const Trajectory& traj) {
  CurveSampler sampler = traj.sampler;
  return [sampler](double s) {
    const State st = sampler(s);
    return CurvePoint{st[0], s, st[1], 1.0};
  };
}

Immersion orbit_immersion(const MetricProfile& profile, CurveMap curve, double s_lo, double s_hi) {
  if (!(s_lo < s_hi)) throw InvalidInput("curve range must satisfy s_lo < s_hi");
  const ActionCase& ac = profile.action_case();
  auto prof = std::make_shared<const MetricProfile>(profile);
  auto cv = std::make_shared<const CurveMap>(std::move(curve));
  const int na = orbit_angles(ac);
  Immersion imm;
  imm.target = ac.projective() ? SpaceKind::ProjectiveHomogeneous : SpaceKind::FlatComplex;
  imm.dim = 1 + na;
  imm.lo = RVector::Zero(imm.dim);
  imm.hi = RVector::Constant(imm.dim, 2.0 * pi);
  imm.periodic.assign(imm.dim, true);
  imm.lo(0) = s_lo;
  imm.hi(0) = s_hi;
  imm.periodic[0] = false;
  if (sphere_dim(ac) > 0)
    for (int k = 1; k < na; ++k) {
      imm.hi(k) = pi;
      imm.periodic[k] = false;
    }
  imm.map = [prof, cv](const RVector& u) { return evaluate_sweep(*prof, *cv, u).z; };
  imm.frame = [prof, cv](const RVector& u) { return evaluate_sweep(*prof, *cv, u).frame; };
  return imm;
}

Immersion orbit_immersion(const Trajectory& traj) {
  return orbit_immersion(traj.problem.profile(), trajectory_curve(traj), traj.theta_begin(), traj.theta_end());
}

Immersion hopf_lift(const Immersion& base) {
  if (base.target != SpaceKind::ProjectiveHomogeneous) throw InvalidInput("Hopf lift needs a CP^n immersion");
  Immersion imm;
  imm.target = SpaceKind::FlatComplex;
  imm.dim = base.dim + 1;
  imm.lo = RVector::Zero(imm.dim);
  imm.hi = RVector::Zero(imm.dim);
  imm.lo.head(base.dim) = base.lo;
  imm.hi.head(base.dim) = base.hi;
  imm.hi(base.dim) = 2.0 * pi;
  imm.periodic = base.periodic;
  imm.periodic.push_back(true);
  const int d = base.dim;
  ImmersionMap bm = base.map;
  FrameMap bf = base.frame;
  imm.map = [bm, d](const RVector& u) -> CVector { return std::polar(1.0, u(d)) * bm(u.head(d)); };
  imm.frame = [bm, bf, d](const RVector& u) {
    const Complex ph = std::polar(1.0, u(d));
    const CVector z = ph * bm(u.head(d));
    std::vector<CVector> fr = bf(u.head(d));
    for (CVector& v : fr) v *= ph;
    return hopf_lift_frame(AmbientPoint::projective(z), fr);
  };
  return imm;
}

ImmersionCloud sample_immersion(const ActionCase& ac, const Immersion& imm, int curve_resolution,
                                int orbit_resolution, unsigned jobs) {
  require_resolution(curve_resolution, "curve resolution");
  require_resolution(orbit_resolution, "orbit resolution");
  const int d = imm.dim;
  auto node = [&](int axis, int k, int count) {
    const double lo = imm.lo(axis), hi = imm.hi(axis);
    if (imm.periodic[axis]) return lo + (hi - lo) * k / count;
    if (axis == 0) return lo + (hi - lo) * k / (count - 1);
    return lo + (hi - lo) * (k + 0.5) / count;
  };
  std::size_t per_curve = 1;
  for (int a = 1; a < d; ++a) per_curve *= static_cast<std::size_t>(orbit_resolution);
  ImmersionCloud cloud(ac, imm.target);
  cloud.samples.resize(per_curve * static_cast<std::size_t>(curve_resolution));
  parallel_for(static_cast<std::size_t>(curve_resolution), jobs, [&](std::size_t i) {
    RVector u(d);
    u(0) = node(0, static_cast<int>(i), curve_resolution);
    for (std::size_t k = 0; k < per_curve; ++k) {
      std::size_t rest = k;
      for (int a = d - 1; a >= 1; --a) {
        u(a) = node(a, static_cast<int>(rest % orbit_resolution), orbit_resolution);
        rest /= orbit_resolution;
      }
      CloudSample& s = cloud.samples[i * per_curve + k];
      s.params = u;
      const CVector z = imm.map(u);
      s.point = imm.target == SpaceKind::ProjectiveHomogeneous ? AmbientPoint::projective(z) : AmbientPoint::flat(z);
      s.frame = imm.frame(u);
    }
  });
  cloud.meta.resolutions = {curve_resolution, orbit_resolution};
  return cloud;
}

ImmersionCloud sweep_orbit(const Trajectory& traj, int orbit_resolution, int curve_resolution, unsigned jobs) {
  require_resolution(orbit_resolution, "orbit resolution");
  require_resolution(curve_resolution, "curve resolution");
  const MetricProfile& prof = traj.problem.profile();
  for (double x : traj.x)
    if (!prof.in_domain(x)) throw DomainError("trajectory enters the boundary collar");
  ImmersionCloud cloud =
      sample_immersion(prof.action_case(), orbit_immersion(traj), curve_resolution, orbit_resolution, jobs);
  cloud.meta.source = "trajectory a=" + fmt17(traj.ic.a) + " b=" + fmt17(traj.ic.b) + " K=" + fmt17(traj.problem.K());
  return cloud;
}

ImmersionCloud hopf_lift_cloud(const ImmersionCloud& cloud, int fiber_resolution) {
  if (cloud.target != SpaceKind::ProjectiveHomogeneous) throw InvalidInput("Hopf lift needs a CP^n cloud");
  require_resolution(fiber_resolution, "fiber resolution");
  ImmersionCloud out(cloud.ac, SpaceKind::FlatComplex);
  out.samples.reserve(cloud.samples.size() * static_cast<std::size_t>(fiber_resolution));
  for (const CloudSample& s : cloud.samples) {
    for (int k = 0; k < fiber_resolution; ++k) {
      const double t = 2.0 * pi * k / fiber_resolution;
      const Complex ph = std::polar(1.0, t);
      const CVector z = ph * s.point.z;
      std::vector<CVector> fr = s.frame;
      for (CVector& v : fr) v *= ph;
      CloudSample o;
      o.params.resize(s.params.size() + 1);
      o.params.head(s.params.size()) = s.params;
      o.params(s.params.size()) = t;
      o.frame = hopf_lift_frame(AmbientPoint::projective(z), fr);
      o.point = AmbientPoint::flat(z);
      out.samples.push_back(std::move(o));
    }
  }
  out.meta = cloud.meta;
  out.meta.source += " hopf";
  out.meta.resolutions.push_back(fiber_resolution);
  return out;
}

double constant_height(const ActionCase& ac, double K, std::size_t index) {
  if (ac.variant() == CaseVariant::CnSO) {
    if (!(K > 0.0)) throw PreconditionError("constant solutions of the SO(n+1) case need K > 0");
    const int n = ac.n();
    return std::pow(K / (n + 1), 1.0 / (n - 1));
  }
  const std::vector<double> roots = ReducedProblem(ac, K).constant_solutions();
  if (index >= roots.size()) throw PreconditionError("no constant solution with this index");
  return roots[index];
}

Immersion constant_immersion_map(const ActionCase& ac, double K, std::size_t index) {
  const double xs = constant_height(ac, K, index);
  Immersion imm = orbit_immersion(MetricProfile(ac), [xs](double s) { return CurvePoint{xs, s, 0.0, 1.0}; }, 0.0,
                                  2.0 * pi);
  imm.periodic[0] = true;
  return imm;
}

ImmersionCloud constant_immersion(const ActionCase& ac, double K, int orbit_resolution, int curve_resolution,
                                  std::size_t index) {
  ImmersionCloud cloud =
      sample_immersion(ac, constant_immersion_map(ac, K, index), curve_resolution, orbit_resolution);
  cloud.meta.source = "constant K=" + fmt17(K) + " x=" + fmt17(constant_height(ac, K, index));
  return cloud;
}

double immersion_volume(const Immersion& imm, int panels) {
  if (panels < 1) throw InvalidInput("panels must be >= 1");
  constexpr int kPeriodic = 8;
  const int d = imm.dim;
  // Quadrature nodes and weights per axis.
  std::vector<std::vector<std::pair<double, double>>> rule(d);
  auto push_gauss = [&](auto tag, int a, double lo, double hi, int np) {
    using GL = decltype(tag);
    const double w = (hi - lo) / np;
    for (int p = 0; p < np; ++p) {
      const double mid = lo + (p + 0.5) * w, half = 0.5 * w;
      const auto& ab = GL::abscissa();
      const auto& wt = GL::weights();
      for (std::size_t k = 0; k < ab.size(); ++k) {
        if (ab[k] == 0.0) {
          rule[a].push_back({mid, half * wt[k]});
          continue;
        }
        rule[a].push_back({mid - half * ab[k], half * wt[k]});
        rule[a].push_back({mid + half * ab[k], half * wt[k]});
      }
    }
  };
  for (int a = 0; a < d; ++a) {
    const double lo = imm.lo(a), hi = imm.hi(a);
    if (a == 0)
      push_gauss(boost::math::quadrature::gauss<double, 16>{}, a, lo, hi, panels);
    else if (imm.periodic[a])
      for (int k = 0; k < kPeriodic; ++k) rule[a].push_back({lo + (hi - lo) * k / kPeriodic, (hi - lo) / kPeriodic});
    else
      push_gauss(boost::math::quadrature::gauss<double, 10>{}, a, lo, hi, 1);
  }
  std::size_t total = 1;
  for (const auto& r : rule) total *= r.size();
  double sum = 0.0;
  RVector u(d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double w = 1.0;
    for (int a = d - 1; a >= 0; --a) {
      const auto& node = rule[a][rest % rule[a].size()];
      rest /= rule[a].size();
      u(a) = node.first;
      w *= node.second;
    }
    sum += w * std::sqrt(std::max(0.0, gram_determinant(imm.frame(u))));
  }
  return sum;
}

double hl_length(const MetricProfile& profile, const CurveMap& curve, double s_lo, double s_hi, int panels) {
  return composite_gauss(
      [&](double s) {
        const CurvePoint c = curve(s);
        const auto [E, G] = profile.hsiang_lawson(c.x);
        return std::sqrt(E * c.dx * c.dx + G * c.dtheta * c.dtheta);
      },
      s_lo, s_hi, panels);
}

double orbit_speed_integral(const MetricProfile& profile, const CurveMap& curve, double s_lo, double s_hi,
                            int panels) {
  return composite_gauss(
      [&](double s) {
        const CurvePoint c = curve(s);
        const auto [gxx, gtt] = profile.induced(c.x);
        return profile.volume(c.x) * std::sqrt(gxx * c.dx * c.dx + gtt * c.dtheta * c.dtheta);
      },
      s_lo, s_hi, panels);
}

CloudFormat parse_cloud_format(std::string_view name) {
  if (name == "csv") return CloudFormat::Csv;
  if (name == "obj") return CloudFormat::Obj;
  if (name == "ply") return CloudFormat::Ply;
  throw InvalidInput("unknown cloud format '" + std::string(name) + "' (csv, obj, ply)");
}

std::string cloud_csv_header(const ImmersionCloud& cloud) {
  if (cloud.empty()) throw InvalidInput("empty cloud");
  const CloudSample& s0 = cloud.samples.front();
  std::string h;
  auto add = [&](const std::string& name) {
    if (!h.empty()) h += ',';
    h += name;
  };
  for (Eigen::Index i = 0; i < s0.params.size(); ++i) add("param_" + std::to_string(i));
  for (Eigen::Index j = 0; j < s0.point.z.size(); ++j) {
    add("re_" + std::to_string(j));
    add("im_" + std::to_string(j));
  }
  for (std::size_t f = 0; f < s0.frame.size(); ++f)
    for (Eigen::Index j = 0; j < s0.point.z.size(); ++j) {
      add("frame_" + std::to_string(f) + "_re_" + std::to_string(j));
      add("frame_" + std::to_string(f) + "_im_" + std::to_string(j));
    }
  return h;
}

void export_cloud(const ImmersionCloud& cloud, CloudFormat format, const std::string& path) {
  if (cloud.empty()) throw InvalidInput("cannot export an empty cloud");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  auto xyz = [](const CloudSample& s) {
    const CVector& z = s.point.z;
    const double third = z.size() > 1 ? z(1).real() : 0.0;
    return fmt17(z(0).real()) + " " + fmt17(z(0).imag()) + " " + fmt17(third);
  };
  switch (format) {
    case CloudFormat::Csv: {
      out << cloud_csv_header(cloud) << '\n';
      for (const CloudSample& s : cloud.samples) {
        std::string row;
        auto add = [&](double v) {
          if (!row.empty()) row += ',';
          row += fmt17(v);
        };
        for (Eigen::Index i = 0; i < s.params.size(); ++i) add(s.params(i));
        for (Eigen::Index j = 0; j < s.point.z.size(); ++j) {
          add(s.point.z(j).real());
          add(s.point.z(j).imag());
        }
        for (const CVector& v : s.frame)
          for (Eigen::Index j = 0; j < v.size(); ++j) {
            add(v(j).real());
            add(v(j).imag());
          }
        out << row << '\n';
      }
      break;
    }
    case CloudFormat::Obj:
      for (const CloudSample& s : cloud.samples) out << "v " << xyz(s) << '\n';
      break;
    case CloudFormat::Ply:
      out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
          << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
      for (const CloudSample& s : cloud.samples) out << xyz(s) << '\n';
      break;
  }
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

ImmersionCloud import_cloud_csv(const std::string& path, const ActionCase& ac, SpaceKind target) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("'" + path + "' has no header");
  int np = 0, nz = 0, nf = 0;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) {
      if (col.rfind("param_", 0) == 0) ++np;
      else if (col.rfind("re_", 0) == 0) ++nz;
      else if (col.rfind("frame_", 0) == 0 && col.find("_re_") != std::string::npos) ++nf;
      else if (col.rfind("im_", 0) != 0 && col.rfind("frame_", 0) != 0)
        throw InvalidInput("unexpected CSV column '" + col + "'");
    }
  }
  if (nz == 0 || nf % nz != 0) throw InvalidInput("malformed cloud header");
  nf /= nz;
  const std::size_t expect = static_cast<std::size_t>(np + 2 * nz + 2 * nz * nf);
  ImmersionCloud cloud(ac, target);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> vals;
    vals.reserve(expect);
    const char* p = line.c_str();
    while (*p) {
      char* end = nullptr;
      vals.push_back(std::strtod(p, &end));
      if (end == p) throw InvalidInput("bad number on line " + std::to_string(lineno));
      p = end;
      if (*p == ',') ++p;
    }
    if (vals.size() != expect) throw InvalidInput("wrong column count on line " + std::to_string(lineno));
    CloudSample s;
    std::size_t k = 0;
    s.params.resize(np);
    for (int i = 0; i < np; ++i) s.params(i) = vals[k++];
    CVector z(nz);
    for (int j = 0; j < nz; ++j, k += 2) z(j) = Complex(vals[k], vals[k + 1]);
    s.point = target == SpaceKind::ProjectiveHomogeneous ? AmbientPoint::projective(z) : AmbientPoint::flat(z);
    for (int f = 0; f < nf; ++f) {
      CVector v(nz);
      for (int j = 0; j < nz; ++j, k += 2) v(j) = Complex(vals[k], vals[k + 1]);
      s.frame.push_back(v);
    }
    cloud.samples.push_back(std::move(s));
  }
  return cloud;
}

}  // namespace hmin
