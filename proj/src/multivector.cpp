#include "fhs/multivector.hpp"

#include <algorithm>
#include <stdexcept>

namespace fhs {

namespace {

using Mono = WedgeExpr::Mono;

constexpr auto kX = BaseVar::x;
constexpr auto kXt = BaseVar::xt;
constexpr auto kZt = BaseVar::zt;

MultiIndex word_index(const Word& w) {
  MultiIndex mi;
  if (w[static_cast<int>(BaseVar::t)] != 0) throw std::invalid_argument("multi-vectors carry no D_t letters");
  for (auto v : kSpaceVars) {
    int e = w[static_cast<int>(v)];
    if (e < 0) throw std::invalid_argument("unexpected inverse letter in a local word");
    mi[v] = static_cast<std::uint8_t>(e);
  }
  return mi;
}

WedgeFactor::Tag inverse_tag(const Word& w) {
  WedgeFactor::Tag tag = WedgeFactor::Tag::none;
  int letters = 0;
  for (int i = 0; i < 4; ++i) {
    if (w[static_cast<std::size_t>(i)] == 0) continue;
    ++letters;
    if (w[static_cast<std::size_t>(i)] != -1) throw std::invalid_argument("only single inverse letters are supported");
    auto v = static_cast<BaseVar>(i);
    if (v == kXt) {
      tag = WedgeFactor::Tag::xt;
    } else if (v == kZt) {
      tag = WedgeFactor::Tag::zt;
    } else {
      throw std::invalid_argument("only D_xt^-1 and D_zt^-1 are supported");
    }
  }
  if (letters != 1) throw std::invalid_argument("only single inverse letters are supported");
  return tag;
}

// P applied to the form component c.
WedgeExpr apply_to_component(const PseudoDiffOp& P, Comp c) {
  WedgeExpr r;
  for (const auto& [comp, coef] : P.terms()) {
    DiffExpr m(comp.ms[0], coef);
    if (comp.depth() == 0) {
      r.add(Mono{WedgeFactor(c, word_index(comp.local))}, m);
      continue;
    }
    if (comp.depth() > 1 || !comp.ms[1].is_one()) {
      throw std::invalid_argument("inverse letters must act directly on the uni-vector: " + P.str());
    }
    r.add(Mono{WedgeFactor(c, word_index(comp.local), inverse_tag(comp.ns[0]))}, m);
  }
  return r;
}

std::array<WedgeExpr, 2> apply_to_forms(const MatrixOp& J, Comp c0, Comp c1) {
  std::array<WedgeExpr, 2> out;
  for (int i = 0; i < 2; ++i) out[i] = apply_to_component(J.at(i, 0), c0) + apply_to_component(J.at(i, 1), c1);
  return out;
}

bool has_jets(const DiffExpr& e) {
  return std::any_of(e.terms().begin(), e.terms().end(), [](const Term& t) {
    return std::any_of(t.mono.factors().begin(), t.mono.factors().end(),
                       [](const Factor& f) { return f.sym.is_jet(); });
  });
}

Comp field_comp(Dep d) {
  if (d == Dep::u) return Comp::du;
  if (d == Dep::v) return Comp::dv;
  throw std::invalid_argument("vertical forms exist only for u and v");
}

// Highest total order first, so lowering a multi-index moves forward.
struct ByOrderDesc {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    if (a.order() != b.order()) return a.order() > b.order();
    return a < b;
  }
};
using Stack = std::map<MultiIndex, WedgeExpr, ByOrderDesc>;

// Sum over J of (-D)^J R_J. With a certificate, every step
// c_J ^ R = D_xi(c_K ^ R) - c_K ^ D_xi R is recorded.
WedgeExpr horner(Stack st, Comp c, DivergenceCertificate* cert) {
  WedgeExpr base;
  while (!st.empty()) {
    auto it = st.begin();
    MultiIndex J = it->first;
    WedgeExpr R = std::move(it->second);
    st.erase(it);
    if (R.is_zero()) continue;
    if (J.order() == 0) {
      base += R;
      continue;
    }
    BaseVar xi = kX;
    for (auto v : kSpaceVars) {
      if (J[v] > 0) {
        xi = v;
        break;
      }
    }
    MultiIndex K = J.raised(xi, -1);
    if (cert != nullptr) {
      WedgeExpr piece = wedge(WedgeExpr::factor(WedgeFactor(c, K)), R);
      (xi == kX ? cert->W_x : xi == kXt ? cert->W_xt : cert->W_zt) += piece;
    }
    st[K] -= total_derivative(R, xi);
  }
  return base;
}

// Left derivatives with respect to each factor of component c, grouped by
// multi-index and scaled by s.
void collect_left(const Mono& m, const DiffExpr& coef, Comp c, const Rational& s, Stack& st) {
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p].comp() != c) continue;
    if (!m[p].is_local()) throw std::invalid_argument("Euler operators need local multi-vectors");
    Mono rest;
    for (std::size_t q = 0; q < m.size(); ++q) {
      if (q != p) rest.push_back(m[q]);
    }
    Rational sign = p % 2 == 0 ? s : -s;
    st[m[p].multi_index()].add(std::move(rest), coef.scaled(sign));
  }
}

using Signature = std::array<int, 4>;

Signature signature(const Mono& m) {
  Signature s{};
  for (auto f : m) ++s[static_cast<std::size_t>(f.comp())];
  return s;
}

WedgeExpr jets_to_factors(const DiffExpr& coef, const Mono& m) {
  WedgeExpr r;
  for (Symbol s : coef.symbols()) {
    if (!s.is_jet()) continue;
    Mono n{WedgeFactor(field_comp(s.dep()), s.multi_index())};
    n.insert(n.end(), m.begin(), m.end());
    r.add(std::move(n), coef.partial(s));
  }
  return r;
}

std::string summary(const WedgeExpr& w, std::size_t limit = 6) {
  if (w.size() <= limit) return w.str();
  WedgeExpr head;
  std::size_t i = 0;
  for (const auto& [m, c] : w.terms()) {
    if (i++ == limit) break;
    head.add(m, c);
  }
  return head.str() + " + ... (" + std::to_string(w.size()) + " terms)";
}

std::string cert_sizes(const DivergenceCertificate& c) {
  return "W_x " + std::to_string(c.W_x.size()) + " terms, W_xt " + std::to_string(c.W_xt.size()) + " terms, W_zt " +
         std::to_string(c.W_zt.size()) + " terms";
}

}  // namespace

WedgeExpr DivergenceCertificate::divergence() const {
  return total_derivative(W_x, kX) + total_derivative(W_xt, kXt) + total_derivative(W_zt, kZt);
}

bool DivergenceCertificate::verifies(const WedgeExpr& input, const WedgeExpr& remainder) const {
  return input - remainder == divergence();
}

std::array<WedgeExpr, 2> apply_to_univectors(const MatrixOp& J) { return apply_to_forms(J, Comp::eta, Comp::theta); }

WedgeExpr build_theta(const MatrixOp& J) {
  auto jw = apply_to_univectors(J);
  WedgeExpr t = wedge(WedgeExpr::factor(WedgeFactor::of(Comp::eta)), jw[0]) +
                wedge(WedgeExpr::factor(WedgeFactor::of(Comp::theta)), jw[1]);
  return t.scaled(Rational(1, 2));
}

const WedgeExpr& Prolongation::jet_image(Symbol jet) {
  auto it = cache_.find(jet);
  if (it != cache_.end()) return it->second;
  if (jet.dep() != Dep::u && jet.dep() != Dep::v) throw std::invalid_argument("pr v acts on u and v only");
  MultiIndex mi = jet.multi_index();
  if (mi[BaseVar::t] != 0) throw std::invalid_argument("pr v: t-derivatives are not evolutionary coordinates");
  WedgeExpr img;
  if (mi.order() == 0) {
    img = omega_[static_cast<std::size_t>(jet.dep())];
  } else {
    BaseVar xi = kX;
    for (auto v : kSpaceVars) {
      if (mi[v] > 0) {
        xi = v;
        break;
      }
    }
    img = total_derivative(jet_image(Symbol::jet(jet.dep(), mi.raised(xi, -1))), xi);
  }
  return cache_.emplace(jet, std::move(img)).first->second;
}

WedgeExpr Prolongation::operator()(const DiffExpr& target) {
  WedgeExpr r;
  for (Symbol s : target.symbols()) {
    if (!s.is_jet()) continue;
    r += jet_image(s).times(target.partial(s));
  }
  return r;
}

WedgeExpr Prolongation::on_multivector(const WedgeExpr& w) {
  WedgeExpr r;
  for (const auto& [m, c] : w.terms()) {
    bool local = std::all_of(m.begin(), m.end(), [](WedgeFactor f) { return f.is_local(); });
    if (!local) {
      // pr v annihilates uni-vectors and commutes with D, so only the
      // coefficient could contribute.
      if (has_jets(c)) throw NonlocalResult("nonlocal factor with a field-dependent coefficient: " + c.str());
      continue;
    }
    WedgeExpr p = (*this)(c);
    for (const auto& [pm, pc] : p.terms()) {
      Mono n;
      if (!m.empty()) n.push_back(m[0]);
      n.insert(n.end(), pm.begin(), pm.end());
      for (std::size_t i = 1; i < m.size(); ++i) n.push_back(m[i]);
      r.add(std::move(n), pc);
    }
  }
  return r;
}

WedgeExpr prolong(const MatrixOp& J, const DiffExpr& target) { return Prolongation(J)(target); }

WedgeExpr odd_euler(const WedgeExpr& w, Comp c) {
  Stack st;
  for (const auto& [m, coef] : w.terms()) collect_left(m, coef, c, Rational(1), st);
  return horner(std::move(st), c, nullptr);
}

WedgeExpr even_euler(const WedgeExpr& w, Dep d) {
  Stack st;
  for (const auto& [m, coef] : w.terms()) {
    for (Symbol s : coef.symbols()) {
      if (s.is_jet() && s.dep() == d) st[s.multi_index()].add(m, coef.partial(s));
    }
  }
  return horner(std::move(st), Comp::eta, nullptr);
}

Canonical ibp_canonicalize(const WedgeExpr& w) {
  std::map<Signature, WedgeExpr> groups;
  for (const auto& [m, c] : w.terms()) {
    if (m.empty()) throw std::invalid_argument("ibp_canonicalize: scalar term " + c.str());
    for (auto f : m) {
      if (!f.is_local()) throw std::invalid_argument("ibp_canonicalize: nonlocal factor " + f.str());
    }
    groups[signature(m)].add(m, c);
  }
  Canonical out;
  for (const auto& [sig, g] : groups) {
    std::size_t k = 0;
    while (sig[k] == 0) ++k;
    auto c = static_cast<Comp>(k);
    Stack st;
    Rational s(1, sig[k]);
    for (const auto& [m, coef] : g.terms()) collect_left(m, coef, c, s, st);
    WedgeExpr E = horner(std::move(st), c, &out.certificate);
    out.remainder += wedge(WedgeExpr::factor(WedgeFactor::of(c)), E);
  }
  if (!out.certificate.verifies(w, out.remainder)) {
    throw std::logic_error("ibp_canonicalize: certificate does not re-expand to the input");
  }
  return out;
}

WedgeExpr vertical_differential(const WedgeExpr& w) {
  WedgeExpr r;
  for (const auto& [m, c] : w.terms()) {
    for (auto f : m) {
      if (f.comp() != Comp::du && f.comp() != Comp::dv) {
        throw std::invalid_argument("vertical_differential: expected du and dv factors");
      }
    }
    r += jets_to_factors(c, m);
  }
  return r;
}

WedgeExpr omega_form() {
  auto du = [](std::initializer_list<BaseVar> v) { return WedgeExpr::factor(WedgeFactor::of(Comp::du, v)); };
  WedgeExpr dv = WedgeExpr::factor(WedgeFactor::of(Comp::dv));
  WedgeExpr w = wedge(du({}), du({kXt})).times(mu_expr()) + wedge(du({}), du({kZt})).times(nu_expr());
  return w.scaled(Rational(1, 2)) + wedge(dv, du({})).times(A_expr());
}

JacobiResult jacobi_criterion(const MatrixOp& J, const std::string& name) {
  JacobiResult res;
  VerificationReport& rep = res.report;
  rep.name = name;
  res.theta = build_theta(J);
  Prolongation pr(J);
  try {
    res.prv_theta = pr.on_multivector(res.theta);
  } catch (const NonlocalResult& e) {
    rep.nonlocal("pr v(Theta)", e.what());
    return res;
  }
  if (!res.prv_theta.is_local()) {
    for (const auto& [m, c] : res.prv_theta.terms()) {
      if (!std::all_of(m.begin(), m.end(), [](WedgeFactor f) { return f.is_local(); })) res.nonlocal_part.add(m, c);
    }
    rep.nonlocal("pr v(Theta)", summary(res.nonlocal_part));
    return res;
  }
  res.canonical = ibp_canonicalize(res.prv_theta);
  const WedgeExpr& rem = res.canonical.remainder;
  rep.check("remainder mod DIV", rem.is_zero(), summary(rem));
  rep.check("certificate re-expands", res.canonical.certificate.verifies(res.prv_theta, rem));
  bool euler_zero = odd_euler(res.prv_theta, Comp::eta).is_zero() && odd_euler(res.prv_theta, Comp::theta).is_zero() &&
                    even_euler(res.prv_theta, Dep::u).is_zero() && even_euler(res.prv_theta, Dep::v).is_zero();
  rep.check("Euler operators agree with the remainder", euler_zero == rem.is_zero());
  rep.wedge_claims.push_back(
      {"pr v(Theta) = remainder + div W", res.prv_theta, rem + res.canonical.certificate.divergence()});
  rep.certificate = cert_sizes(res.canonical.certificate);
  return res;
}

std::vector<Mutant> jacobi_mutants(const Definitions& d) {
  std::vector<Mutant> out;
  auto flip = [&](const std::string& base, int i, int j) {
    MatrixOp m = d.matrix(base);
    m.at(i, j) = -m.at(i, j);
    out.push_back({base + " entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") negated", m});
  };
  // Negates one term `term` of entry (i, j) by adding -2 term.
  auto flip_term = [&](const std::string& base, int i, int j, const std::string& term) {
    MatrixOp m = d.matrix(base);
    m.at(i, j) -= parse_operator(term, d).scaled(Rational(2));
    out.push_back({base + " term " + term + " of entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                       ") negated",
                   m});
  };
  flip("J0", 0, 1);
  flip("J0", 1, 1);
  flip("J1", 0, 1);
  flip_term("J1", 0, 1, "mu/A");
  flip_term("J1", 1, 1, "mu/A . Dxt . mu/A");
  flip_term("J1", 1, 1, "-mu . Dx . 1/A");
  flip_term("J2", 1, 0, "nu/A");
  flip_term("J2", 1, 1, "-nu/A . Dzt . nu/A");
  return out;
}

VerificationReport check_omega_closed(const Definitions& d) {
  VerificationReport rep;
  rep.name = "omega-closed";
  WedgeExpr omega = omega_form();
  auto kw = apply_to_forms(d.matrix("K"), Comp::du, Comp::dv);
  WedgeExpr from_k = (wedge(WedgeExpr::factor(WedgeFactor::of(Comp::du)), kw[0]) +
                      wedge(WedgeExpr::factor(WedgeFactor::of(Comp::dv)), kw[1]))
                         .scaled(Rational(1, 2));
  rep.expect_equal("omega = 1/2 du^T ^ K du", omega, from_k);
  WedgeExpr d_omega = vertical_differential(omega);
  rep.check("d d omega = 0", vertical_differential(d_omega).is_zero());
  WedgeExpr target = wedge(wedge(WedgeExpr::factor(WedgeFactor::of(Comp::du, {kX})),
                                 WedgeExpr::factor(WedgeFactor::of(Comp::du, {kXt}))),
                           WedgeExpr::factor(WedgeFactor::of(Comp::du, {kZt})));
  Canonical diff = ibp_canonicalize(d_omega - target);
  rep.check("d omega = du[x] ^ du[xt] ^ du[zt] mod DIV", diff.remainder.is_zero(), summary(diff.remainder));
  Canonical c = ibp_canonicalize(d_omega);
  rep.check("d omega mod DIV", c.remainder.is_zero(), summary(c.remainder));
  rep.check("certificate re-expands", c.certificate.verifies(d_omega, c.remainder));
  rep.wedge_claims.push_back({"d omega = remainder + div W", d_omega, c.remainder + c.certificate.divergence()});
  rep.certificate = cert_sizes(c.certificate);
  return rep;
}

namespace {

// The three prolongation formulas as displayed, built from total derivatives
// of their bracketed groups.
struct Displays {
  WedgeExpr A, mu, nu;
};

Displays prolongation_displays(const Definitions& d) {
  auto e = [&](const char* s) { return parse_expr(s, d); };
  auto eta = [](std::initializer_list<BaseVar> v = {}) { return WedgeExpr::factor(WedgeFactor::of(Comp::eta, v)); };
  auto th = [](std::initializer_list<BaseVar> v = {}) { return WedgeExpr::factor(WedgeFactor::of(Comp::theta, v)); };
  auto D = [](const WedgeExpr& w, BaseVar v) { return total_derivative(w, v); };
  DiffExpr a = DiffExpr::param("a"), b = DiffExpr::param("b"), c = DiffExpr::param("c");

  Displays out;
  out.A = eta({kXt}).times(b) - eta({kZt}).times(a) - th({kX, kZt}).times(a) - th({kX, kXt}).times(b) +
          D(D(th().times(e("($a*mu - $b*nu + $c)/A")), kXt), kZt);

  // Shared groups of the mu and nu displays, before the outer derivative.
  WedgeExpr g_eta = eta().times(e("($b*nu - $a*mu - $c)/A"));
  WedgeExpr g_j22 = (th({kXt}).times(b) - th({kZt}).times(a)).times(e("1/A^2")) -
                    th().times(e("($b*u[xt,xt,zt] - $a*u[xt,zt,zt])/A^3"));
  WedgeExpr g_dx = th().times(total_derivative(e("($a*mu + $b*nu)/A"), kX));
  WedgeExpr g_mu = D(th().times(e("($a*mu + $c)/A")), kXt).times(e("mu/A"));
  WedgeExpr g_nu = D(th().times(e("($b*nu - $c)/A")), kZt).times(e("nu/A"));
  WedgeExpr g_dx2 = th().times(total_derivative(e("($a*mu - $b*nu + $c)/A"), kX));
  WedgeExpr g_c = th().times(e("$c*v[xt,zt]/A^2"));

  WedgeExpr inner_mu = g_eta + g_j22 - th({kX}).times(e("($a*mu + 3*$b*nu - $c)/A")) - g_dx + g_mu - g_nu + g_dx2 +
                       g_c;
  out.mu = eta({kX}).times(b.scaled(2)) - th({kX, kX}).times(b.scaled(2)) + D(inner_mu, kZt);

  WedgeExpr inner_nu = g_eta + g_j22 - th({kX}).times(e("(3*$a*mu + $b*nu + $c)/A")) - g_dx + g_mu - g_nu - g_dx2 +
                       g_c;
  out.nu = eta({kX}).times(a.scaled(2)) + th({kX, kX}).times(a.scaled(2)) + D(inner_nu, kXt);
  return out;
}

}  // namespace

VerificationReport check_jacobi_pencil(const Definitions& d) {
  const MatrixOp& J = d.matrix("Jabc");
  VerificationReport rep;
  rep.name = "jacobi-pencil";
  Prolongation pr(J);
  Displays disp = prolongation_displays(d);
  rep.expect_equal("pr v(A) display", pr(A_expr()), disp.A);
  rep.expect_equal("pr v(mu) display", pr(mu_expr()), disp.mu);
  rep.expect_equal("pr v(nu) display", pr(nu_expr()), disp.nu);
  rep.expect_equal("2 A_x = mu_xt - nu_zt",
                   total_derivative(A_expr(), kX).scaled(2),
                   total_derivative(mu_expr(), kXt) - total_derivative(nu_expr(), kZt));
  rep.expect_equal("2 v_xtzt = mu_xt + nu_zt", DiffExpr::jet(Dep::v, {kXt, kZt}).scaled(2),
                   total_derivative(mu_expr(), kXt) + total_derivative(nu_expr(), kZt));
  JacobiResult jr = jacobi_criterion(J, "jacobi-pencil");
  rep.merge(jr.report);
  rep.note("Theta: " + std::to_string(jr.theta.size()) + " terms; pr v(Theta): " +
           std::to_string(jr.prv_theta.size()) + " terms");
  return rep;
}

VerificationReport check_jacobi_mutants(const Definitions& d) {
  VerificationReport rep;
  rep.name = "jacobi-mutants";
  int falsified = 0;
  std::vector<Mutant> ms = jacobi_mutants(d);
  for (const auto& m : ms) {
    JacobiResult jr = jacobi_criterion(m.J, m.label);
    bool local_remainder = jr.report.status == Status::fail && !jr.canonical.remainder.is_zero();
    bool residue = jr.report.status == Status::nonlocal_residue && !jr.nonlocal_part.is_zero();
    if (local_remainder) {
      ++falsified;
      rep.note(m.label + ": remainder " + summary(jr.canonical.remainder, 2));
    } else if (residue) {
      rep.note(m.label + ": uncanceled nonlocal terms " + summary(jr.nonlocal_part, 2));
    }
    rep.check(m.label + " violates the criterion", local_remainder || residue, status_name(jr.report.status).data());
  }
  rep.check("at least 5 mutants with a nonzero local remainder", falsified >= 5);
  rep.certificate = std::to_string(falsified) + " of " + std::to_string(ms.size()) +
                    " mutants leave a nonzero local remainder";
  return rep;
}

}  // namespace fhs
