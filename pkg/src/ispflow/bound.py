"""Bound-sector renormalization: ground-state transseries, running-coupling
table, resummation checks, and the beta function.

Conventions.  The non-perturbative unit of every transseries here is
eps = exp(-(2b+1) pi/g - gamma); sector l carries eps^l.  The leading
growth factor E(g) = exp(gamma + Arg Gamma(1+ig)/g) is a clean power series
in g^2 with zeta-polynomial coefficients, so all sector series stay inside
the exact constants ring.  The exponentiated quantization condition is

    a0 e^{-(2b+1)pi/g} + sum_i a_{2i+1} (Lambda_IR/Lambda)^{2i+1} = 0 ,

with a0 = -e^{-gamma} E(g); we store E and keep the e^{-gamma} in the unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .constexpr import ConstExpr, GRat
from .coupling import (BOUND_COLUMNS, BOUND_COLUMN_IDS, GAMMA_LADDER,
                       CouplingTable, N_PI, resummation_check,
                       solve_coupling_table, structure_fit)
from .expansions import (ARG_GAMMA_MAX_ORDER, arg_gamma_series,
                         growth_unit_series, eta_series,
                         odd_coefficient_family, sector_condition_residual,
                         solve_sector_ansatz)
from .series import SeriesError, TruncSeries
from .transseries import Transseries


@dataclass
class GroundStateCondition:
    """Exponentiated quantization condition in polynomial form.

    a0_scaled is E(g) = -a0 * e^gamma (unit constant term); a_odd[i] is the
    coefficient a_{2i+1}(g) of (Lambda_IR/Lambda)^{2i+1}, with a_odd[0] = 1.
    """

    a0_scaled: TruncSeries
    a_odd: dict
    branch: int
    g_order: int
    x_order: int

    def a0_value(self, g, dps=None):
        """Numeric a0(g) = -e^{-gamma} E(g); a0(0) = -e^{-gamma}."""
        with mp.workdps(dps or mp.mp.dps):
            return -mp.e ** (-mp.euler) * self.a0_scaled.eval_mp(
                {"g": mp.mpmathify(g)})


def build_ground_state_condition(g_order: int, xi_order: int,
                                 b: int = 0) -> GroundStateCondition:
    if g_order < 3 or xi_order < 3:
        raise SeriesError("orders must be at least 3")
    e = growth_unit_series(g_order)
    a_odd = odd_coefficient_family(g_order, xi_order + 1, alternating=False)
    return GroundStateCondition(e, a_odd, b, g_order, xi_order)


def ground_state_transseries(cond: GroundStateCondition,
                             max_sector: int) -> Transseries:
    """Transseries solution Lambda_IR/Lambda = f(g), sectors 1,3,..,max_sector."""
    if max_sector > 2 * max(cond.a_odd) + 1:
        raise SeriesError(f"condition holds a-coefficients only up to index "
                          f"{2 * max(cond.a_odd) + 1}; cannot reach sector "
                          f"{max_sector}")
    return solve_sector_ansatz(cond.a0_scaled, cond.a_odd, max_sector,
                               "bound", cond.branch)


def ground_state_residual(cond: GroundStateCondition,
                          f: Transseries) -> Transseries:
    return sector_condition_residual(cond.a0_scaled, cond.a_odd, f)


# ---------------------------------------------------------------------------
# Running-coupling table.
# ---------------------------------------------------------------------------

def bound_condition_series(g_order: int, xi_order: int) -> TruncSeries:
    """rho-free part of the running-coupling condition:
    n pi - Arg Gamma(1+ig) + Arg eta(g, xi), as a series in (g, xi)."""
    ag = arg_gamma_series(min(g_order, ARG_GAMMA_MAX_ORDER))
    arg_eta = eta_series(g_order, xi_order, "xi").log().imag_part()
    vars_ = ("g", "xi")
    out = (TruncSeries.const(N_PI, vars_, (g_order, xi_order))
           - ag.extend_to(vars_) + arg_eta)
    return out.truncate((g_order, xi_order))


def running_coupling_coeffs(p_max: int, l_max: int,
                            g_order: int | None = None) -> CouplingTable:
    """Solve the bound-sector table c_{p,l} for p <= p_max, l <= l_max."""
    if g_order is None:
        g_order = max(l_max - 1, 3)
    cond = bound_condition_series(g_order, p_max)
    return solve_coupling_table(cond, p_max, l_max, "bound")


def bound_resummation_report(table: CouplingTable, l_max: int | None = None):
    """Run the four closed-form column checks; returns {label: (ok, residuals)}."""
    l_max = table.l_max if l_max is None else l_max
    return {label: resummation_check(table, BOUND_COLUMNS[label], l_max)
            for label in BOUND_COLUMN_IDS}


def bound_structure_fit(table: CouplingTable):
    return structure_fit(table, GAMMA_LADDER, +1)


# ---------------------------------------------------------------------------
# Beta function.
# ---------------------------------------------------------------------------

@dataclass
class BetaTransseries:
    ts: Transseries
    sector_tag: str

    def perturbative(self) -> TruncSeries:
        return self.ts.sector(0)

    def sector(self, l: int) -> TruncSeries:
        return self.ts.sector(l)

    def check_sector_structure(self):
        """Every sector must start at g^2; the perturbative one at -g^2/pi."""
        for l, s in self.ts.sectors.items():
            lead = min(e[0] for e in s.coeffs)
            assert lead >= 2, f"beta sector {l} starts at g^{lead}"
        c2 = self.ts.sector(0).coefficient((2,))
        assert c2 == ConstExpr.monomial(-1, pi=-1), \
            f"leading perturbative coefficient is {c2}"

    def eval_mp(self, g, assignment=None, max_sector=None):
        total = mp.mpc(0)
        eps = self.ts.unit_value(g, assignment)
        for l, s in self.ts.sectors.items():
            if max_sector is not None and l > max_sector:
                continue
            total += s.eval_mp({"g": mp.mpmathify(g)}, assignment) * eps ** l
        return mp.re(total)


def beta_transseries(f: Transseries, max_sector: int | None = None) -> BetaTransseries:
    """beta = -f / (df/dg) by graded division.

    Requires branch b = 0 (the level substitutes to 1, so the coefficients
    stay free of the formal level generator).
    """
    if f.branch != 0:
        raise ValueError("beta is derived on branch 0; rescale the level "
                         "via the table's branch covariance instead")
    fp = f.derivative_g()
    beta = (-f) / fp
    if max_sector is not None:
        beta = Transseries({l: s for l, s in beta.sectors.items()
                            if l <= max_sector},
                           beta.branch, beta.flavor, max_sector)
    out = BetaTransseries(beta, f.flavor)
    out.check_sector_structure()
    return out


def _arg_gamma_mp(g):
    return mp.im(mp.loggamma(1 + mp.mpc(0, 1) * g))


def _w_mp(g):
    """W(g) = d/dg [Arg Gamma(1+ig) / g]."""
    return (g * mp.re(mp.psi(0, 1 + mp.mpc(0, 1) * g)) - _arg_gamma_mp(g)) / g ** 2


def beta_exact_sector_eval(g, sector: int, dps: int | None = None):
    """Closed-form numeric evaluation of the beta sectors l = 0, 2, 4
    (branch 0), including the non-perturbative exponential prefactor.

    The sector forms follow from the graded division with the rational
    sector prefactors R_3 = 1/(1+g^2), R_5 = 3(5+2g^2)/(2(1+g^2)^2(4+g^2)):

        beta_0 = -(g^2/pi) / den,        den = 1 + g^2 W / pi ,
        beta_2 = (2 g^2/pi^2) [pi(1+g^2) - g^3 + (1+g^2) g^2 W]
                 / ((1+g^2)^2 den^2) ,
        beta_4 = (g^2/pi) [ 6/(uv den) + (g^3/pi)(49+11g^2-2g^4)/(u^3 v^2 den^2)
                 - 4 g^6/(pi^2 u^4 den^3) ],   u = 1+g^2, v = 4+g^2 ,

    each times e^{2l ArgGamma(1+ig)/g} e^{-2l pi/g} at sector index 2l.
    (The printed closed form for the second non-perturbative order carries a
    spurious global factor (1+g^2)^4/(4+g^2)^2: its weak-coupling limit is
    3/(32 pi) g^2, inconsistent with the printed transseries lead
    3/(2 pi) g^2; the form above reproduces the transseries exactly.)
    """
    if sector not in (0, 2, 4):
        raise ValueError("closed forms are available for sectors 0, 2, 4")
    with mp.workdps(dps or mp.mp.dps):
        g = mp.mpf(g)
        if not 0 < g < 2:
            raise ValueError("g must lie in (0, 2)")
        w = _w_mp(g)
        den = 1 + g ** 2 * w / mp.pi
        if sector == 0:
            return -(g ** 2 / mp.pi) / den
        ag = _arg_gamma_mp(g)
        u = 1 + g ** 2
        v = 4 + g ** 2
        if sector == 2:
            pref = (2 / mp.pi ** 2) * g ** 2 / u ** 2
            num = mp.pi + (mp.pi - g) * g ** 2 + u * g ** 2 * w
            return (pref * num / den ** 2
                    * mp.e ** (2 * ag / g) * mp.e ** (-2 * mp.pi / g))
        bracket = (6 / (u * v * den)
                   + (g ** 3 / mp.pi) * (49 + 11 * g ** 2 - 2 * g ** 4)
                   / (u ** 3 * v ** 2 * den ** 2)
                   - 4 * g ** 6 / (mp.pi ** 2 * u ** 4 * den ** 3))
        return (g ** 2 / mp.pi * bracket
                * mp.e ** (4 * ag / g) * mp.e ** (-4 * mp.pi / g))


def excited_state_scale(n_level: int, g):
    """Scale ratio Lambda_n / Lambda_IR = exp(-(n_level - 1) pi / g)."""
    if n_level < 1:
        raise ValueError("levels are labelled from 1")
    g = mp.mpf(g)
    if g <= 0:
        raise ValueError("g must be positive")
    return mp.e ** (-(n_level - 1) * mp.pi / g)


# ---------------------------------------------------------------------------
# Cross-consistency: the table, f, and beta satisfy the defining flow ODE.
# ---------------------------------------------------------------------------

def unit_in_cutoff_variables(f: Transseries, xi_order: int,
                             g_order: int) -> TruncSeries:
    """The non-perturbative unit eps as a series in (g, xi) along the flow,
    obtained by inverting xi = sum_l S_l(g) eps^l gradedly."""
    vars_ = ("g", "xi")
    xi = TruncSeries.var("xi", vars_, (g_order, xi_order))
    sectors = {l: s.extend_to(vars_, (g_order, xi_order))
               for l, s in f.sectors.items()}
    eps = xi * sectors[1].inverse()
    for _ in range(xi_order // 2 + 1):
        den = None
        for l, s in sectors.items():
            term = s if l == 1 else s * eps ** (l - 1)
            den = term if den is None else den + term
        eps_next = xi * den.inverse()
        if (eps_next - eps).is_zero():
            eps = eps_next
            break
        eps = eps_next
    return eps


def flow_ode_residual(table: CouplingTable, f: Transseries,
                      beta: BetaTransseries, p_max: int, l_max: int) -> list:
    """Cells where  Lambda d g(Lambda)/d Lambda  differs from  beta(g(Lambda)).

    Both sides are expanded in (xi, rho); the left side is
    -rho^2 dG/drho - xi dG/dxi on the solved table G.
    """
    table = table.substitute_level(2 * f.branch + 1)
    g_series = table.as_series("xi", p_max, l_max)
    lhs = (-(g_series.derivative("rho").shift("rho", 2))
           - g_series.derivative("xi").shift("xi", 1))

    g_order = min(s.trunc_order[0] for s in beta.ts.sectors.values())
    eps_gxi = unit_in_cutoff_variables(f, p_max, g_order)
    rhs = None
    for l, s in beta.ts.sectors.items():
        term = s.extend_to(("g", "xi"), (g_order, p_max))
        if l:
            term = term * eps_gxi ** l
        rhs = term if rhs is None else rhs + term
    rhs = rhs.substitute_var("g", g_series)

    bad = []
    for p in range(0, p_max + 1, 2):
        for l in range(2, l_max + 1):
            diff = lhs.coefficient((p, l)) - rhs.coefficient((p, l))
            if not diff.is_zero():
                bad.append((p, l, diff))
    return bad
