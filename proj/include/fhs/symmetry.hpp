#pragma once

#include <utility>

#include "fhs/mathdsl.hpp"
#include "fhs/report.hpp"

namespace fhs {

/// phi = eta_u - v xi_t - u_x xi_x - u_xt xi_xt - u_zt xi_zt and the same
/// for psi with v_t = Q. Throws std::invalid_argument for non-point input.
Characteristic characteristic_from_generator(const PointGenerator& g);

/// (D_t phi - psi, D_t psi - Q'[phi, psi]) along the flow.
std::pair<DiffExpr, DiffExpr> check_symmetry(const Characteristic& c);
bool is_symmetry(const Characteristic& c);

/// pr v_{c1}(c2) - pr v_{c2}(c1), componentwise.
Characteristic lie_bracket(const Characteristic& c1, const Characteristic& c2);

/// Replaces the arbitrary function F by `image`; derivatives of F become
/// total derivatives of the image in F's arguments.
DiffExpr substitute_function(const DiffExpr& e, Func F, const DiffExpr& image);
PointGenerator substitute_function(const PointGenerator& g, Func F, const DiffExpr& image);
Characteristic substitute_function(const Characteristic& c, Func F, const DiffExpr& image);

PointGenerator operator+(const PointGenerator& a, const PointGenerator& b);
PointGenerator scaled(const PointGenerator& g, const Rational& c);

/// Names of the eight tabulated families, in table order.
const std::vector<std::string>& family_names();

/// Family characteristics and tabulated closed forms agree and are symmetries.
VerificationReport verify_symmetries(const Definitions& d);
/// All 64 entries of the commutator table under one calibrated sign.
VerificationReport verify_commutator_table(const Definitions& d);
/// Lax pair identities; `reduce` = false skips reduction modulo the equation
/// in the commutator check.
VerificationReport lax_identities(const Definitions& d, bool reduce = true);

/// Left side of the linearized transformed equation for phi = w1.
DiffExpr linearized_equation(Dep phi = Dep::w1);

}  // namespace fhs
