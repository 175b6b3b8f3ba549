#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "fhs/expr.hpp"

namespace fhs {

/// Evolutionary expressions carry no t-derivatives of u, v (they are
/// eliminated by the flow); full-jet expressions allow any multi-index.
enum class Mode { evolutionary, full_jet };

struct ModeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotExact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pair (phi, psi) giving the flow u_tau = phi, v_tau = psi.
struct Characteristic {
  DiffExpr phi;
  DiffExpr psi;

  friend bool operator==(const Characteristic&, const Characteristic&) = default;
  Characteristic operator+(const Characteristic& o) const { return {phi + o.phi, psi + o.psi}; }
  Characteristic operator-(const Characteristic& o) const { return {phi - o.phi, psi - o.psi}; }
  Characteristic scaled(const Rational& c) const { return {phi.scaled(c), psi.scaled(c)}; }
  bool is_zero() const { return phi.is_zero() && psi.is_zero(); }
};

// Frequently used differential functions.
DiffExpr A_expr();    // u_{xt zt}
DiffExpr mu_expr();   // v_zt + u_{x zt}
DiffExpr nu_expr();   // v_xt - u_{x xt}
DiffExpr Q_expr();    // right side of v_t
DiffExpr Qt_expr();   // Q - u_xx

/// Total derivative D_v. In evolutionary mode v = t is rejected.
DiffExpr total_derivative(const DiffExpr& e, BaseVar v, Mode mode = Mode::evolutionary);
/// D_J for a multi-index; repeated total_derivative.
DiffExpr total_derivative(const DiffExpr& e, const MultiIndex& mi, Mode mode = Mode::evolutionary);

/// D_t along the flow u_t = v, v_t = Q.
DiffExpr flow_derivative(const DiffExpr& e);

/// D_J Q, cached.
const DiffExpr& Q_derivative(const MultiIndex& mi);

/// Jets of `dep` occurring in e.
std::vector<Symbol> jets_of(const DiffExpr& e, Dep dep);
std::vector<Symbol> jets_of(const DiffExpr& e);

/// Variational derivative sum_J (-D)_J de/d(dep_J).
DiffExpr euler_operator(const DiffExpr& e, Dep dep, Mode mode = Mode::evolutionary);

/// Linearization of e along (phi, psi) for u, v.
DiffExpr frechet_derivative(const DiffExpr& e, const Characteristic& c, Mode mode = Mode::evolutionary);
/// Linearization along an arbitrary map dep -> direction.
DiffExpr frechet_derivative(const DiffExpr& e, const std::map<Dep, DiffExpr>& dirs,
                            Mode mode = Mode::evolutionary);

/// Left side of the transformed equation minus 1 (full-jet):
/// (u_tt - u_xx) A - (u_{t zt} + u_{x zt})(u_{t xt} - u_{x xt}) - 1.
DiffExpr equation_residual();
/// u_tt solved from the transformed equation.
DiffExpr u_tt_rule();

/// Replaces every jet of a ruled dependent variable with t-count >= 2 by
/// the prolonged rule. Rules give dep_tt and may involve t-count <= 1 only
/// for ruled variables.
DiffExpr reduce_with(const DiffExpr& e, const std::map<Dep, DiffExpr>& rules);
/// reduce_with for u_tt = u_tt_rule().
DiffExpr reduce_mod_equation(const DiffExpr& e);

/// True iff the Euler operators in every dependent variable annihilate d1 - d2.
bool equals_mod_divergence(const DiffExpr& d1, const DiffExpr& d2);
bool is_divergence(const DiffExpr& d);

/// Density h with delta_u h = Fu, delta_v h = Fv; throws NotExact.
DiffExpr homotopy_integrate(const DiffExpr& Fu, const DiffExpr& Fv);

}  // namespace fhs
