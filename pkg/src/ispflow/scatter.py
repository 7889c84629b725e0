"""Scattering-sector renormalization.

The phase condition

    K + (1/2) coth(pi g / 2) tan[ g ln(p/Lambda) - Arg Gamma(1+ig)
                                  + Arg eta~(p/Lambda) ] = 0

plays the role the quantization condition plays for bound states.  Solving
the tangent for its argument turns it into the same polynomial shape as the
bound condition, with the branch offset arctan(-2 K tanh(pi g/2)) carrying
all K dependence; everything downstream (coupling table, sector ansatz,
beta by graded division) reuses the bound-sector machinery with the
alternating-sign small-argument profile eta~ and the unit
eps = exp(-n pi/g - gamma - K pi).

The cross-sector expansion rewrites the scattering coupling in terms of the
bound coupling by substituting p/Lambda -> shat * f(g_B) and
ln(Lambda/p) -> pi L - ln f(g_B); the result is graded by even powers of
exp(-(pi/g_B + gamma)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .bound import build_ground_state_condition, ground_state_transseries
from .constexpr import ConstExpr, GRat
from .coupling import (SCATTER_LADDER, CouplingTable, N_PI,
                       solve_coupling_table, structure_fit)
from .expansions import (ARG_GAMMA_MAX_ORDER, arg_gamma_series, eta_series,
                         growth_unit_series_scatter, log_growth_unit,
                         odd_coefficient_family, phase_branch_offset,
                         solve_sector_ansatz)
from .series import (INF_ORDER, SeriesError, TruncSeries, coth_series,
                     tan_series)
from .transseries import Transseries
from .bound import BetaTransseries


# ---------------------------------------------------------------------------
# Phase condition.
# ---------------------------------------------------------------------------

@dataclass
class PhaseCondition:
    """Assembled phase condition as a formal series.

    ``series`` is K + (1/2)coth(pi g/2) tan(g u) in (g, sigma) with the
    cutoff log ln(Lambda/p) carried by the polynomial generator ``lam``
    (u = -lam + gamma - zeta3 g^2/3 + ... + (1/g) Arg eta~).  The tangent is
    expanded about zero, so this object is the formal identity used to
    exhibit the cancellation of the coth pole; quantitative work (the
    residual check) re-expands the tangent about the -n pi branch where its
    argument is small along the flow.
    """

    series: TruncSeries
    half_coth: TruncSeries
    tan_argument_over_g: TruncSeries
    g_order: int
    sigma_order: int

    def assert_pole_free(self):
        lead = self.series.lead_exponents()
        if not self.series.is_zero() and lead[0] < 0:
            raise SeriesError("phase condition keeps a 1/g pole; the coth "
                              "pole failed to cancel")


def half_coth_series(g_order: int) -> TruncSeries:
    """(1/2) coth(pi g / 2) = 1/(pi g) + pi g/12 - ... as a Laurent series."""
    xc = coth_series("t", g_order + 1).shift("t", 1)  # t coth t, regular
    half_pi_g = TruncSeries.var("g", ("g",), (g_order + 1,),
                                coef=ConstExpr.monomial(Fraction(1, 2), pi=1))
    sub = xc.substitute_var("t", half_pi_g)
    return (sub.shift("g", -1) * ConstExpr.monomial(1, pi=-1)
            ).truncate((g_order,))


def _tan_argument_over_g(g_order: int, sigma_order: int) -> TruncSeries:
    """u = ln(p/Lambda) - Arg Gamma(1+ig)/g + (1/g) Arg eta~(sigma)."""
    ag = arg_gamma_series(min(g_order + 1, ARG_GAMMA_MAX_ORDER))
    u = (-ag.shift("g", -1)).truncate((g_order,))
    eta = eta_series(g_order + 1, sigma_order, "sigma", alternating=True)
    u = u.extend_to(("g", "sigma")) + eta.log().imag_part().shift("g", -1)
    u = u - ConstExpr.generator("lam")
    return u.truncate((g_order, sigma_order))


def build_phase_condition(g_order: int, sigma_order: int) -> PhaseCondition:
    if g_order < 3 or sigma_order < 3:
        raise SeriesError("orders must be at least 3")
    u = _tan_argument_over_g(g_order + 1, sigma_order)
    gu = u.shift("g", 1)
    tan_gu = tan_series("t", g_order + 1).substitute_var("t", gu)
    hc = half_coth_series(g_order + 1)
    series = (TruncSeries.const(ConstExpr.generator("K"), ("g", "sigma"),
                                (g_order, sigma_order))
              + (hc.extend_to(("g", "sigma")) * tan_gu
                 ).truncate((g_order, sigma_order)))
    pc = PhaseCondition(series, hc.truncate((g_order,)),
                        u.truncate((g_order, sigma_order)),
                        g_order, sigma_order)
    pc.assert_pole_free()
    return pc


# ---------------------------------------------------------------------------
# Coupling table.
# ---------------------------------------------------------------------------

def scatter_condition_series(g_order: int, sigma_order: int) -> TruncSeries:
    """rho-free part of the scattering running-coupling condition:
    n pi - Arg Gamma(1+ig) + Arg eta~(g, sigma) - arctan(-2K tanh(pi g/2))."""
    ag = arg_gamma_series(min(g_order, ARG_GAMMA_MAX_ORDER))
    arg_eta = eta_series(g_order, sigma_order, "sigma",
                         alternating=True).log().imag_part()
    vars_ = ("g", "sigma")
    out = (TruncSeries.const(N_PI, vars_, (g_order, sigma_order))
           - ag.extend_to(vars_) + arg_eta
           - phase_branch_offset(g_order).extend_to(vars_))
    return out.truncate((g_order, sigma_order))


def scatter_coupling_coeffs(p_max: int, l_max: int,
                            g_order: int | None = None) -> CouplingTable:
    if g_order is None:
        g_order = max(l_max - 1, 3)
    cond = scatter_condition_series(g_order, p_max)
    return solve_coupling_table(cond, p_max, l_max, "scattering")


def scatter_structure_fit(table: CouplingTable):
    return structure_fit(table, SCATTER_LADDER, -1)


def phase_condition_residual(pc: PhaseCondition,
                             table: CouplingTable) -> TruncSeries:
    """Plug the solved coupling table into the tangent form of the phase
    condition (re-expanded about the -n pi branch) and return the residual
    series in (sigma, rho); it must vanish identically on the solved box."""
    g_ansatz = table.as_series("sigma")
    # tangent argument g*u with lam -> 1/rho, shifted by +n pi
    u_nolam = pc.tan_argument_over_g + ConstExpr.generator("lam")
    gu = u_nolam.shift("g", 1).substitute_var("g", g_ansatz) \
        - g_ansatz.shift("rho", -1)
    w = gu + TruncSeries.const(N_PI, gu.variables, gu.trunc_order)
    if w.constant_term():
        raise SeriesError("branch shift failed to cancel the constant")
    tan_w = tan_series("t", pc.g_order).substitute_var("t", w)
    # (1/2) coth(pi g/2) with the ansatz: split the pole as 1/(pi g) + rest
    pole = g_ansatz.inverse() * ConstExpr.monomial(1, pi=-1)
    rest = (pc.half_coth - TruncSeries.var(
        "g", ("g",), pc.half_coth.trunc_order, power=-1,
        coef=ConstExpr.monomial(1, pi=-1))).shift("g", 1)
    rest_sub = rest.substitute_var("g", g_ansatz) * g_ansatz.inverse()
    k_const = TruncSeries.const(ConstExpr.generator("K"), tan_w.variables,
                                tan_w.trunc_order)
    return (k_const + (pole + rest_sub) * tan_w).truncate(
        (table.p_max, table.l_max - 1))


# ---------------------------------------------------------------------------
# Scattering transseries and beta.
# ---------------------------------------------------------------------------

def scatter_momentum_transseries(g_order: int, max_sector: int) -> Transseries:
    """p/Lambda as a transseries in g along the scattering flow:
    sigma(g) = sum_l S_l(g) eps^l with eps = exp(-n pi/g - gamma - K pi)."""
    e_hat = growth_unit_series_scatter(g_order)
    a_odd = odd_coefficient_family(g_order, max_sector + 1, alternating=True,
                                   x_var="sigma")
    return solve_sector_ansatz(e_hat, a_odd, max_sector, "scatter", 0)


def scatter_beta(max_sector: int, g_order: int = 10) -> BetaTransseries:
    """Scattering beta by graded division, beta = -sigma(g)/sigma'(g)."""
    f_s = scatter_momentum_transseries(g_order, max_sector + 1)
    return _beta_from(f_s, max_sector)


def _beta_from(f_s: Transseries, max_sector: int) -> BetaTransseries:
    from .bound import beta_transseries
    return beta_transseries(f_s, max_sector)


# ---------------------------------------------------------------------------
# Cross-sector expansion and the analytic continuation check.
# ---------------------------------------------------------------------------

def cross_sector_expansion(g_order: int, max_sector: int,
                           table: CouplingTable | None = None) -> Transseries:
    """The scattering coupling expanded in the bound coupling g_B (n = 1,
    branch 0).

    Sector l of the returned (bound-flavored) transseries multiplies
    exp(-2l (pi/g_B + gamma)); its series carry the generators K, L and
    shat = p/Lambda_IR.  ``max_sector`` counts those even non-perturbative
    orders, so sectors 0..max_sector are returned.
    """
    eps_max = 2 * max_sector
    l_max = g_order + 1
    if table is None:
        table = scatter_coupling_coeffs(min(4, 2 * max_sector + 2), l_max,
                                        g_order=max(l_max, 6))
    table = table.substitute_level(1)

    vars_ = ("g", "eps")
    to = (g_order + 2, eps_max)
    f = ground_state_transseries(
        build_ground_state_condition(g_order + 2, eps_max + 4, b=0),
        eps_max + 1)
    f_series = None
    for l, s in f.sectors.items():
        term = s.extend_to(vars_, to).shift("eps", l)
        f_series = term if f_series is None else f_series + term

    s1 = f.sectors[1].extend_to(vars_, to)
    one_plus_u = (f_series.shift("eps", -1)) * s1.inverse()
    log_np = one_plus_u.log()
    inv_rho = (TruncSeries.var("g", vars_, to, power=-1,
                               coef=ConstExpr.generator("pi"))
               + ConstExpr.monomial(1, pi=1, L=1)
               + ConstExpr.generator("gamma")
               - log_growth_unit(g_order + 2).extend_to(vars_, to)
               - log_np)
    rho = inv_rho.inverse()
    sigma = f_series * ConstExpr.generator("shat")

    out = None
    rho_pow = {0: TruncSeries.const(1, vars_, to)}
    sig_pow = {0: TruncSeries.const(1, vars_, to)}
    for l in range(1, table.l_max + 1):
        rho_pow[l] = (rho_pow[l - 1] * rho).truncate(to)
    for p in range(2, table.p_max + 1, 2):
        sig_pow[p] = (sig_pow[p - 2] * sigma * sigma).truncate(to)
    for (p, l), c in table.entries.items():
        term = (sig_pow[p] * rho_pow[l]) * c
        out = term if out is None else out + term
    out = out.truncate((g_order, eps_max))

    sectors = {}
    for (gk, ek), c in out.coeffs.items():
        if ek % 2:
            raise SeriesError("odd non-perturbative order in the cross-"
                              "sector expansion")
        sectors.setdefault(ek // 2, {})[(gk,)] = c
    g_trunc = out.trunc_order[0]
    return Transseries(
        {l: TruncSeries(("g",), coeffs, (0,), (g_trunc,))
         for l, coeffs in sectors.items()},
        0, "bound", max_sector)


def analytic_continuation_check(g_order: int = 5, max_sector: int = 2,
                                cross: Transseries | None = None) -> bool:
    """Substituting K -> -i/2, L -> -i/2, shat^2 -> -1 must collapse the
    cross-sector expansion to the identity g_S = g_B, sector by sector."""
    if cross is None:
        cross = cross_sector_expansion(g_order, max_sector)
    half_i = GRat(0, Fraction(-1, 2))

    def continue_coeff(c: ConstExpr) -> ConstExpr:
        return (c.substitute("K", half_i)
                .substitute("L", half_i)
                .substitute("shat", GRat(0, 1)))

    for l, s in cross.sectors.items():
        mapped = s.map_coeffs(continue_coeff)
        if l == 0:
            expect = TruncSeries.var("g", ("g",), s.trunc_order)
            if not (mapped - expect).is_zero():
                return False
        elif not mapped.is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# Fixed point in physical observables.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPointRelation:
    """tan(delta0) = (ln(p/Lambda_IR) + pi/2) / (ln(p/Lambda_IR) - pi/2),
    equivalently tan(delta + pi/4) = (2/pi) ln(Lambda_IR / p)."""

    description: str = ("tan(delta0) = (ln(p/L_IR) + pi/2)"
                        " / (ln(p/L_IR) - pi/2)")
    two_momentum_form: str = ("tan(delta'(p1)) = tan(delta'(p0))"
                              " - (2/pi) ln(p1/p0)")

    def delta0(self, p_over_lambda_ir):
        x = mp.log(mp.mpf(p_over_lambda_ir))
        den = x - mp.pi / 2
        if den == 0:
            raise ZeroDivisionError("singular at ln(p/Lambda_IR) = pi/2")
        return mp.atan((x + mp.pi / 2) / den)

    def tan_delta_prime(self, p_over_lambda_ir):
        """tan(delta + pi/4) at the fixed point: (2/pi) ln(Lambda_IR/p)."""
        return -(2 / mp.pi) * mp.log(mp.mpf(p_over_lambda_ir))

    def two_momentum_residual(self, p0, p1):
        lhs = self.tan_delta_prime(p1)
        rhs = self.tan_delta_prime(p0) - (2 / mp.pi) * mp.log(
            mp.mpf(p1) / mp.mpf(p0))
        return lhs - rhs


def fixed_point_relation() -> FixedPointRelation:
    return FixedPointRelation()
