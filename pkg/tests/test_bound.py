"""Bound-sector derivations against their published closed forms."""

import mpmath as mp
import pytest

from ispflow import golden
from ispflow.bound import (beta_exact_sector_eval, beta_transseries,
                           bound_resummation_report, bound_structure_fit,
                           build_ground_state_condition, excited_state_scale,
                           flow_ode_residual, ground_state_residual,
                           ground_state_transseries, running_coupling_coeffs)
from ispflow.constexpr import ConstExpr
from ispflow.coupling import (BOUND_COLUMNS, CouplingTable, N_PI,
                              condition_residual_box, resummation_check)
from ispflow.bound import bound_condition_series
from ispflow.expansions import growth_unit_series

mp.mp.dps = 50


@pytest.fixture(scope="module")
def cond():
    return build_ground_state_condition(10, 10, b=0)


@pytest.fixture(scope="module")
def f(cond):
    return ground_state_transseries(cond, 9)


@pytest.fixture(scope="module")
def table():
    return running_coupling_coeffs(4, 9)


@pytest.fixture(scope="module")
def beta(f):
    return beta_transseries(f)


def test_gs_coefficients_match_closed_forms(cond):
    order = cond.g_order
    assert cond.a_odd[0] == golden.rational_series([1], [], order)
    assert cond.a_odd[1] == golden.gs_a3(order)
    assert cond.a_odd[2] == golden.gs_a5(order)
    assert cond.a_odd[3] == golden.gs_a7(order)
    assert golden.gs_a7_denominator_check(order)


def test_a0_numeric_limit(cond):
    # a0(0) = -e^{-gamma}
    assert abs(cond.a0_value(mp.mpf("1e-25")) + mp.e ** (-mp.euler)) < 1e-45


def test_arg_eta_reconciles_with_a3():
    """Leading small-argument phase of the profile: once exponentiated, its
    first coefficient reproduces a_3 = -1/(1+g^2)."""
    from ispflow.expansions import arg_eta_over_g
    w = arg_eta_over_g(6, 2, x_var="x")
    # (1/g) Arg eta = -x^2/(1+g^2) + O(x^4)
    expect = -golden.rational_series([1], [(1, 1)], 6)
    got = {e[:1]: c for e, c in w.coeffs.items() if e[1] == 2}
    from ispflow.series import TruncSeries
    got_series = TruncSeries(("g",), got, (0,), (6,))
    assert (got_series - expect).is_zero()


def test_transseries_sectors_match_prefactors(f):
    e = growth_unit_series(10)
    for l in (1, 3, 5, 7):
        ref = golden.f_sector_prefactor(l, 10) * e ** l
        assert (f.sectors[l] - ref.truncate(f.sectors[l].trunc_order)).is_zero()


def test_transseries_expanded_coefficients(f):
    for l, lead in golden.F_SECTOR_LEAD.items():
        assert f.sectors[l].coefficient((0,)) == ConstExpr.number(lead.re,
                                                                  lead.im)
    for l, coef in golden.F_SECTOR_G2.items():
        assert f.sectors[l].coefficient((2,)) == coef


def test_transseries_solves_condition(f, cond):
    resid = ground_state_residual(cond, f)
    for l, s in resid.sectors.items():
        assert s.is_zero(), f"sector {l} residual {s}"


def test_f_vanishes_at_weak_coupling(f):
    for l in f.sectors:
        val = f.eval_sector_mp(l, mp.mpf("0.05"))
        assert abs(val) < mp.e ** (-l * mp.pi / mp.mpf("0.05") / 2)


def test_coupling_table_golden_entries(table):
    for (p, l), expr in golden.BOUND_TABLE.items():
        assert table.entry(p, l) == expr, f"c_({p},{l})"


def test_table_base_invariants(table):
    table.check_base_invariants()


def test_table_solves_condition(table):
    cond_series = bound_condition_series(max(table.l_max - 1, 3), table.p_max)
    assert condition_residual_box(cond_series, table) == []


def test_branch_covariance(table):
    for b in (0, 1, 2):
        scaled = table.substitute_level(2 * b + 1)
        assert scaled.entry(0, 1) == ConstExpr.monomial(2 * b + 1, pi=1)


def test_resummation_columns_through_13():
    t13 = running_coupling_coeffs(0, 13, g_order=12)
    report = bound_resummation_report(t13, 13)
    for label, (ok, residuals) in report.items():
        assert ok, f"column {label} residuals {residuals}"


def test_resummation_detects_perturbation(table):
    entries = dict(table.entries)
    entries[(0, 5)] = entries[(0, 5)] + N_PI
    bad = CouplingTable("bound", entries, table.p_max, table.l_max)
    ok, residuals = resummation_check(bad, BOUND_COLUMNS["level"], 9)
    assert not ok and 5 in residuals


def test_structure_fit_heads(table):
    heads, ok, failures = bound_structure_fit(table)
    assert ok, failures
    assert heads[(2, 4)] == ConstExpr.monomial(1, n=3, pi=3)
    assert heads[(4, 2)] == golden.npi(1) * golden._f(5, 8)
    assert heads[(0, 4)] == ConstExpr.psi(2, golden.F(1, 6)) * golden.npi(3)


def test_beta_perturbative_coefficients(beta):
    s0 = beta.ts.sector(0)
    for k, coef in golden.BOUND_BETA_PERTURBATIVE.items():
        assert s0.coefficient((k,)) == coef, f"g^{k}"
    # no even-order terms below g^8
    for k in (3, 4, 6):
        assert s0.coefficient((k,)).is_zero()


def test_beta_sector_leads_and_terms(beta):
    for l, coef in golden.BOUND_BETA_SECTOR_LEAD.items():
        assert beta.ts.sector(l).coefficient((2,)) == coef, f"sector {l}"
    for (l, k), coef in golden.BOUND_BETA_SECTOR_TERMS.items():
        assert beta.ts.sector(l).coefficient((k,)) == coef, f"sector {l} g^{k}"


def test_beta_sector_structure(beta):
    beta.check_sector_structure()


def test_beta_requires_branch_zero(cond):
    c1 = build_ground_state_condition(6, 6, b=1)
    f1 = ground_state_transseries(c1, 3)
    with pytest.raises(ValueError):
        beta_transseries(f1)


def test_beta_exact_sector_eval_matches_series(beta):
    # perturbative sector: closed form vs series
    limit = beta_exact_sector_eval(mp.mpf("1e-6"), 0) / mp.mpf("1e-12")
    assert abs(limit + 1 / mp.pi) < 1e-10
    g = mp.mpf("0.3")
    closed0 = beta_exact_sector_eval(g, 0)
    series0 = beta.ts.sector(0).eval_mp({"g": g})
    assert abs(closed0 - series0) / abs(closed0) < 1e-6
    closed2 = beta_exact_sector_eval(g, 2)
    series2 = beta.ts.eval_sector_mp(2, g)
    assert abs(closed2 - series2) / abs(closed2) < 1e-4
    closed4 = beta_exact_sector_eval(g, 4)
    series4 = beta.ts.eval_sector_mp(4, g)
    assert abs(closed4 - series4) / abs(closed4) < 1e-3


def test_excited_state_scale():
    assert excited_state_scale(1, 0.7) == 1
    assert abs(excited_state_scale(2, mp.pi) - mp.e ** -1) < 1e-45
    val = excited_state_scale(3, 0.5)
    assert abs(val - mp.e ** (-4 * mp.pi)) < 1e-40
    assert abs(val - mp.mpf("3.487e-6")) < 1e-9


def test_flow_ode_consistency(table, f, beta):
    bad = flow_ode_residual(table, f, beta, 4, 8)
    assert bad == [], bad
