#pragma once

#include <array>
#include <string>
#include <vector>

#include "fhs/mathdsl.hpp"
#include "fhs/report.hpp"
#include "fhs/wedge.hpp"

namespace fhs {

/// input - remainder = D_x W_x + D_xt W_xt + D_zt W_zt.
struct DivergenceCertificate {
  WedgeExpr W_x, W_xt, W_zt;

  WedgeExpr divergence() const;
  bool verifies(const WedgeExpr& input, const WedgeExpr& remainder) const;
  bool is_zero() const { return W_x.is_zero() && W_xt.is_zero() && W_zt.is_zero(); }
};

struct Canonical {
  WedgeExpr remainder;
  DivergenceCertificate certificate;
};

/// The operator applied to the uni-vectors: (J omega)_i = sum_j J_ij omega^j.
/// Inverse letters must act directly on omega with constant coefficients.
std::array<WedgeExpr, 2> apply_to_univectors(const MatrixOp& J);

/// 1/2 sum_i omega^i ^ (J omega)_i.
WedgeExpr build_theta(const MatrixOp& J);

/// pr v_{J omega}(target). Nonlocal factors that do not cancel are kept; the
/// caller decides whether that is acceptable.
WedgeExpr prolong(const MatrixOp& J, const DiffExpr& target);

/// Prolongation with the characteristic components precomputed; also caches
/// their total derivatives.
class Prolongation {
 public:
  explicit Prolongation(const MatrixOp& J) : omega_(apply_to_univectors(J)) {}
  WedgeExpr operator()(const DiffExpr& target);
  /// pr v applied to the coefficients of a multi-vector; inserted after the
  /// first factor. Terms with nonlocal factors must have constant
  /// coefficients and contribute zero.
  WedgeExpr on_multivector(const WedgeExpr& w);

 private:
  const WedgeExpr& jet_image(Symbol jet);
  std::array<WedgeExpr, 2> omega_;
  std::map<Symbol, WedgeExpr> cache_;
};

/// Odd Euler operator sum_J (-D)^J dP/d(c_J), with left derivatives.
WedgeExpr odd_euler(const WedgeExpr& w, Comp c);
/// Euler operator with respect to u or v acting on the coefficients.
WedgeExpr even_euler(const WedgeExpr& w, Dep d);

/// Canonical representative modulo total divergence: each group of terms with
/// the same component counts becomes (1/m) c ^ E_c(group) for its smallest
/// component c of multiplicity m. The remainder is zero iff the input is a
/// total divergence. The certificate is verified before returning.
Canonical ibp_canonicalize(const WedgeExpr& w);

/// Exterior vertical derivative: jets u_J, v_J in coefficients become du_J, dv_J.
WedgeExpr vertical_differential(const WedgeExpr& w);

/// The 2-form density of K.
WedgeExpr omega_form();

struct JacobiResult {
  VerificationReport report;
  WedgeExpr theta;
  WedgeExpr prv_theta;
  Canonical canonical;
  /// Terms of pr v(Theta) whose nonlocal factors did not cancel.
  WedgeExpr nonlocal_part;
};

/// pr v_{J omega}(Theta) modulo divergence; passes iff the remainder is zero.
JacobiResult jacobi_criterion(const MatrixOp& J, const std::string& name = "jacobi");

/// A single-sign mutation of one of J0, J1, J2.
struct Mutant {
  std::string label;
  MatrixOp J;
};
std::vector<Mutant> jacobi_mutants(const Definitions& d);

VerificationReport check_omega_closed(const Definitions& d);
VerificationReport check_jacobi_pencil(const Definitions& d);
VerificationReport check_jacobi_mutants(const Definitions& d);

}  // namespace fhs
