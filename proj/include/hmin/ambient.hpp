#pragma once

// Ambient spaces of the four group-action case studies: flat C^m and CP^n
// modelled by unit representatives on S^{2n+1} in C^{n+1}. All Fubini-Study
// computations work on Hopf-horizontal vectors at the representative.

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace hmin {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

enum class CaseVariant {
  CPnSO,     // SO(n) on CP^n, level 0
  CPnTorus,  // T^{n-1} on CP^n, level (c_1..c_{n-1})
  CnSO,      // SO(n+1) on C^{n+1}, level 0
  CnTorus,   // T^n (diagonal SU(n+1)) on C^{n+1}, level (c_1..c_n)
};

std::string_view to_string(CaseVariant v);
// Accepts "cpn-so", "cpn-torus", "cn-so", "cn-torus". Throws InvalidInput.
CaseVariant parse_case_variant(std::string_view name);

// A validated case: variant, n, and the moment level constants.
class ActionCase {
 public:
  static ActionCase cpn_so(int n);
  static ActionCase cpn_torus(int n, std::vector<double> c);
  static ActionCase cn_so(int n);
  static ActionCase cn_torus(int n, std::vector<double> c);
  static ActionCase make(CaseVariant v, int n, std::vector<double> c = {});

  CaseVariant variant() const { return variant_; }
  int n() const { return n_; }
  const std::vector<double>& c() const { return c_; }

  bool projective() const {
    return variant_ == CaseVariant::CPnSO || variant_ == CaseVariant::CPnTorus;
  }
  // Complex dimension of the flat space holding the coordinates (n+1 in all cases).
  int ambient_dim() const { return n_ + 1; }
  // Real dimension of the group orbits of principal type.
  int orbit_dim() const;
  // 1 - sum c_j (CPnTorus only).
  double delta() const;
  // max(-c_i, 0) (CnTorus only).
  double sigma() const;

 private:
  ActionCase(CaseVariant v, int n, std::vector<double> c)
      : variant_(v), n_(n), c_(std::move(c)) {}

  CaseVariant variant_;
  int n_;
  std::vector<double> c_;
};

enum class SpaceKind { FlatComplex, ProjectiveHomogeneous };

// A point of C^m, or a unit representative of a point of CP^n.
struct AmbientPoint {
  SpaceKind kind = SpaceKind::FlatComplex;
  CVector z;

  static AmbientPoint flat(CVector z);
  // Throws InvalidInput unless |z| = 1 to 1e-12.
  static AmbientPoint projective(CVector z);
};

// Real Euclidean inner product on C^m = R^{2m}.
double real_dot(const CVector& u, const CVector& v);

// Moment value with the -i/2 and 1/|z|^2 factors stripped:
//   CPnSO   : Im(z_i conj z_j)/|z|^2 for 1 <= i < j <= n, lexicographic
//   CPnTorus: (|z_1|^2, ..., |z_{n-1}|^2)/|z|^2
//   CnSO    : Im(z_i conj z_j) for 1 <= i < j <= n+1, lexicographic
//   CnTorus : (|z_1|^2 - |z_{n+1}|^2, ..., |z_n|^2 - |z_{n+1}|^2)
// Indices above are 1-based labels; for CPn cases z_0 is the first
// coordinate of the representative.
RVector moment_map(const ActionCase& ac, const AmbientPoint& p);

// omega(u, v) = <J u, v> with J = multiplication by i. At projective points
// u and v must be Hopf-horizontal (orthogonal to z and iz); InvalidInput otherwise.
double kaehler_form(const AmbientPoint& p, const CVector& u, const CVector& v);

AmbientPoint hopf_project(const CVector& z);
// Unit vertical vector i z of the Hopf fibration at a unit z.
CVector hopf_vertical(const CVector& z);
// Removes the components along z and i z.
CVector horizontal_part(const CVector& z, const CVector& v);
bool is_horizontal(const CVector& z, const CVector& v, double tol = 1e-10);

// Horizontal frame at a unit representative -> frame of the Hopf preimage,
// i.e. the input vectors followed by i z. Throws InvalidInput when a vector
// is not horizontal.
std::vector<CVector> hopf_lift_frame(const AmbientPoint& p, const std::vector<CVector>& frame);

// Group elements of the four actions. For SO cases `rotation` is the real
// orthogonal matrix, for torus cases `angles` holds the free torus angles.
struct GroupElement {
  Eigen::MatrixXd rotation;
  RVector angles;
};

GroupElement random_group_element(const ActionCase& ac, std::mt19937_64& rng);
CVector apply_group(const ActionCase& ac, const GroupElement& g, const CVector& z);

}  // namespace hmin
