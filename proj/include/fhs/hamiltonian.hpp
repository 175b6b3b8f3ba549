#pragma once

#include <stdexcept>
#include <string>

#include "fhs/mathdsl.hpp"
#include "fhs/report.hpp"

namespace fhs {

/// Constraints Pi_u - W1, Pi_v - W2.
struct ConstraintPair {
  DiffExpr W1;
  DiffExpr W2;
};

struct HamiltonianTriple {
  std::string label;
  MatrixOp J;
  DiffExpr H;
};

struct NonVariational : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// (dL/du_t, dL/dv_t) with u_t = v, v_t = Q substituted afterwards.
/// Throws ModeError if L has other t-derivatives.
ConstraintPair legendre_momenta(const DiffExpr& L);
/// K_ij = F(j)_i^+ - F(i)_j with F(i)_j the Frechet derivative of W_i in dep j.
MatrixOp constraint_bracket(const ConstraintPair& c);
/// W1 u_t + W2 v_t - L on the flow; throws ModeError if t-derivatives remain.
DiffExpr legendre_hamiltonian(const DiffExpr& L, const ConstraintPair& c);

/// J (delta_u H, delta_v H) = (v, Q).
VerificationReport verify_flow(const HamiltonianTriple& triple);

/// Density H with (delta_u H, delta_v H) = K (phi, psi); unique mod divergence.
DiffExpr inverse_noether(const Characteristic& c, const MatrixOp& K);

struct SecondStructures {
  MatrixOp J1, J2, Jplus, Jminus;
};
/// R1 J0, R2 J0 and Reps J0 at eps = +1, -1.
SecondStructures build_second_structures(const Definitions& d);

/// Substitutes a numeric value for the parameter $name.
MatrixOp at_param(const MatrixOp& m, std::string_view name, const Rational& value);
DiffExpr at_param(const DiffExpr& e, std::string_view name, const Rational& value);

VerificationReport check_k_from_lagrangian(const Definitions& d);
VerificationReport check_k_inverse(const Definitions& d);
VerificationReport check_skew_all(const Definitions& d);
/// which: "j0", "jplus" or "jminus".
VerificationReport check_flow(const Definitions& d, std::string_view which);
VerificationReport check_noether_all(const Definitions& d);
VerificationReport check_noether_x5(const Definitions& d);
VerificationReport check_conservation(const Definitions& d);
VerificationReport check_recursion_compose(const Definitions& d);
VerificationReport check_reps_sum(const Definitions& d);
VerificationReport check_discrete_maps(const Definitions& d);

}  // namespace fhs
