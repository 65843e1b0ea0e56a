#include "hmin/ambient.hpp"

#include "hmin/errors.hpp"

#include <cmath>
#include <numeric>

namespace hmin {

namespace {

constexpr double kUnitTol = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

// Lexicographic Im(z_i conj z_j) over the index range [first, last).
RVector antisymmetric_moment(const CVector& z, int first, int last) {
  const int k = last - first;
  RVector out(k * (k - 1) / 2);
  int idx = 0;
  for (int i = first; i < last; ++i)
    for (int j = i + 1; j < last; ++j) out(idx++) = std::imag(z(i) * std::conj(z(j)));
  return out;
}

}  // namespace

std::string_view to_string(CaseVariant v) {
  switch (v) {
    case CaseVariant::CPnSO:
      return "cpn-so";
    case CaseVariant::CPnTorus:
      return "cpn-torus";
    case CaseVariant::CnSO:
      return "cn-so";
    case CaseVariant::CnTorus:
      return "cn-torus";
  }
  return "?";
}

CaseVariant parse_case_variant(std::string_view name) {
  if (name == "cpn-so") return CaseVariant::CPnSO;
  if (name == "cpn-torus") return CaseVariant::CPnTorus;
  if (name == "cn-so") return CaseVariant::CnSO;
  if (name == "cn-torus") return CaseVariant::CnTorus;
  throw InvalidInput("unknown case '" + std::string(name) + "'");
}

ActionCase ActionCase::cpn_so(int n) {
  require(n >= 2, "cpn-so needs n >= 2");
  return ActionCase(CaseVariant::CPnSO, n, {});
}

ActionCase ActionCase::cpn_torus(int n, std::vector<double> c) {
  require(n >= 2, "cpn-torus needs n >= 2");
  require(static_cast<int>(c.size()) == n - 1, "cpn-torus needs n-1 level constants");
  double sum = 0.0;
  for (double cj : c) {
    require(std::isfinite(cj) && cj > 0.0, "cpn-torus level constants must be positive");
    sum += cj;
  }
  require(sum < 1.0, "cpn-torus needs sum(c) < 1");
  return ActionCase(CaseVariant::CPnTorus, n, std::move(c));
}

ActionCase ActionCase::cn_so(int n) {
  require(n >= 2, "cn-so needs n >= 2");
  return ActionCase(CaseVariant::CnSO, n, {});
}

ActionCase ActionCase::cn_torus(int n, std::vector<double> c) {
  require(n >= 2, "cn-torus needs n >= 2");
  require(static_cast<int>(c.size()) == n, "cn-torus needs n level constants");
  for (double cj : c) require(std::isfinite(cj) && cj != 0.0, "cn-torus needs c_1...c_n != 0");
  return ActionCase(CaseVariant::CnTorus, n, std::move(c));
}

ActionCase ActionCase::make(CaseVariant v, int n, std::vector<double> c) {
  switch (v) {
    case CaseVariant::CPnSO:
      require(c.empty(), "cpn-so takes no level constants");
      return cpn_so(n);
    case CaseVariant::CPnTorus:
      return cpn_torus(n, std::move(c));
    case CaseVariant::CnSO:
      require(c.empty(), "cn-so takes no level constants");
      return cn_so(n);
    case CaseVariant::CnTorus:
      return cn_torus(n, std::move(c));
  }
  throw InvalidInput("bad case variant");
}

int ActionCase::orbit_dim() const {
  switch (variant_) {
    case CaseVariant::CPnSO:
      return n_ - 1;
    case CaseVariant::CPnTorus:
      return n_ - 1;
    case CaseVariant::CnSO:
      return n_;
    case CaseVariant::CnTorus:
      return n_;
  }
  return 0;
}

double ActionCase::delta() const {
  if (variant_ != CaseVariant::CPnTorus) throw StateError("delta is defined for cpn-torus only");
  return 1.0 - std::accumulate(c_.begin(), c_.end(), 0.0);
}

double ActionCase::sigma() const {
  if (variant_ != CaseVariant::CnTorus) throw StateError("sigma is defined for cn-torus only");
  double s = 0.0;
  for (double cj : c_) s = std::max(s, -cj);
  return s;
}

AmbientPoint AmbientPoint::flat(CVector z) { return {SpaceKind::FlatComplex, std::move(z)}; }

AmbientPoint AmbientPoint::projective(CVector z) {
  require(std::abs(z.norm() - 1.0) <= kUnitTol, "projective representative must have unit norm");
  return {SpaceKind::ProjectiveHomogeneous, std::move(z)};
}

double real_dot(const CVector& u, const CVector& v) { return std::real(u.dot(v)); }

RVector moment_map(const ActionCase& ac, const AmbientPoint& p) {
  const CVector& z = p.z;
  require(z.size() == ac.ambient_dim(), "point dimension does not match the case");
  require((p.kind == SpaceKind::ProjectiveHomogeneous) == ac.projective(),
          "point lives in the wrong ambient space for the case");
  const int n = ac.n();
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      return antisymmetric_moment(z, 1, n + 1) / z.squaredNorm();
    case CaseVariant::CPnTorus: {
      RVector out(n - 1);
      for (int j = 1; j < n; ++j) out(j - 1) = std::norm(z(j));
      return out / z.squaredNorm();
    }
    case CaseVariant::CnSO:
      return antisymmetric_moment(z, 0, n + 1);
    case CaseVariant::CnTorus: {
      RVector out(n);
      const double last = std::norm(z(n));
      for (int j = 0; j < n; ++j) out(j) = std::norm(z(j)) - last;
      return out;
    }
  }
  return {};
}

double kaehler_form(const AmbientPoint& p, const CVector& u, const CVector& v) {
  require(u.size() == p.z.size() && v.size() == p.z.size(), "tangent vector dimension mismatch");
  if (p.kind == SpaceKind::ProjectiveHomogeneous) {
    require(is_horizontal(p.z, u) && is_horizontal(p.z, v),
            "tangent vectors at a projective point must be Hopf-horizontal");
  }
  // <iu, v> = Im(u^H v)
  return std::imag(u.dot(v));
}

AmbientPoint hopf_project(const CVector& z) { return AmbientPoint::projective(z); }

CVector hopf_vertical(const CVector& z) {
  require(std::abs(z.norm() - 1.0) <= kUnitTol, "Hopf vertical needs a unit vector");
  return Complex(0.0, 1.0) * z;
}

CVector horizontal_part(const CVector& z, const CVector& v) {
  // The complex projection removes both the z and the iz components.
  return v - z * (z.dot(v) / z.squaredNorm());
}

bool is_horizontal(const CVector& z, const CVector& v, double tol) {
  return std::abs(z.dot(v)) <= tol * std::max(1.0, v.norm()) * z.norm();
}

std::vector<CVector> hopf_lift_frame(const AmbientPoint& p, const std::vector<CVector>& frame) {
  require(p.kind == SpaceKind::ProjectiveHomogeneous, "Hopf lift needs a projective point");
  std::vector<CVector> out;
  out.reserve(frame.size() + 1);
  for (const CVector& u : frame) {
    require(u.size() == p.z.size(), "frame vector dimension mismatch");
    require(is_horizontal(p.z, u), "frame vector is not Hopf-horizontal");
    out.push_back(u);
  }
  out.push_back(hopf_vertical(p.z));
  return out;
}

GroupElement random_group_element(const ActionCase& ac, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  GroupElement g;
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
    case CaseVariant::CnSO: {
      const int k = ac.variant() == CaseVariant::CPnSO ? ac.n() : ac.n() + 1;
      Eigen::MatrixXd m(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = normal(rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
      Eigen::MatrixXd q = qr.householderQ();
      if (q.determinant() < 0) q.col(0) *= -1.0;
      g.rotation = q;
      break;
    }
    case CaseVariant::CPnTorus:
      g.angles.resize(ac.n() - 1);
      for (int j = 0; j < ac.n() - 1; ++j) g.angles(j) = angle(rng);
      break;
    case CaseVariant::CnTorus:
      g.angles.resize(ac.n());
      for (int j = 0; j < ac.n(); ++j) g.angles(j) = angle(rng);
      break;
  }
  return g;
}

CVector apply_group(const ActionCase& ac, const GroupElement& g, const CVector& z) {
  require(z.size() == ac.ambient_dim(), "point dimension does not match the case");
  const int n = ac.n();
  CVector out = z;
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      out.segment(1, n) = g.rotation.cast<Complex>() * z.segment(1, n);
      break;
    case CaseVariant::CnSO:
      out = g.rotation.cast<Complex>() * z;
      break;
    case CaseVariant::CPnTorus:
      for (int j = 1; j < n; ++j) out(j) = std::polar(1.0, g.angles(j - 1)) * z(j);
      break;
    case CaseVariant::CnTorus: {
      // Diagonal of SU(n+1): the last phase is minus the sum of the others.
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        out(j) = std::polar(1.0, g.angles(j)) * z(j);
        sum += g.angles(j);
      }
      out(n) = std::polar(1.0, -sum) * z(n);
      break;
    }
  }
  return out;
}

}  // namespace hmin
