import math

import numpy as np
import pytest

from qmoments.core import DomainError, make_exponents
from qmoments.inequalities import (
    RECIPROCAL,
    DiscreteDensity,
    DivergenceReport,
    RF_R,
    RF_RINV,
    RadialFunction,
    equality_density,
    holder_verdict,
    holder_verdict_continuous,
    random_density,
    reciprocal_moment_verdict,
    schwarz_verdict,
    sweep,
    uncertainty_chain_finite,
    uncertainty_verdict_canonical,
)
from qmoments.matrixlab import (
    FiniteState,
    ground_state,
    pauli,
    random_hermitian,
    random_state,
    truncated_canonical_pair,
)
from qmoments.rng import SplitMix64
from qmoments.states import GaussianPacket, HarmonicOscillatorGround, HydrogenGroundState


@pytest.fixture(scope="module")
def hydrogen():
    return HydrogenGroundState()


# --- discrete two-function bound ---------------------------------------------


def test_holder_constant_functions_equality():
    d = DiscreteDensity.uniform(np.ones(10), np.ones(10))
    v = holder_verdict(d, make_exponents(3.3, 1.1))
    assert v.lhs == pytest.approx(1.0, abs=1e-15)
    assert v.rhs == pytest.approx(1.0, abs=1e-15)
    assert v.holds


def test_holder_equality_manifold():
    rng = SplitMix64(21)
    e = make_exponents(3, 2)
    d = equality_density(rng, 200, e)
    v = holder_verdict(d, e)
    assert v.ratio == pytest.approx(1.0, abs=1e-10)


def test_holder_random_density_margin():
    rng = SplitMix64(22)
    d = random_density(rng, 100)
    v = holder_verdict(d, make_exponents(3, 2))
    assert v.holds
    assert v.margin >= -1e-12


def test_holder_swap_symmetry():
    rng = SplitMix64(23)
    d = random_density(rng, 64)
    e = make_exponents(2.6, 1.3)
    v1 = holder_verdict(d, e)
    v2 = holder_verdict(DiscreteDensity(d.g, d.f, d.w), e.swapped())
    assert v1.holds == v2.holds
    assert v1.ratio == pytest.approx(v2.ratio, abs=1e-12)


def test_holder_empty_rejected():
    with pytest.raises(DomainError):
        DiscreteDensity.uniform(np.array([]), np.array([]))


def test_schwarz_equality_when_equal():
    d = DiscreteDensity.uniform(np.array([1.0, 2.0, 0.5]), np.array([1.0, 2.0, 0.5]))
    v = schwarz_verdict(d)
    assert v.ratio == pytest.approx(1.0, abs=1e-12)


def test_schwarz_strict_margin():
    f = np.array([1.0, -1.0, 2.0, -2.0])
    g = np.array([1.0, 1.0, -0.1, 0.1])
    v = schwarz_verdict(DiscreteDensity.uniform(f, g))
    assert v.holds
    assert v.margin > 0.0


def test_schwarz_single_point_equality():
    v = schwarz_verdict(DiscreteDensity.uniform(np.array([1.7]), np.array([-0.4])))
    assert v.ratio == pytest.approx(1.0, abs=1e-12)


# --- continuous two-function bound -------------------------------------------


def test_holder_continuous_r_rinv(hydrogen):
    v = holder_verdict_continuous(hydrogen, RF_R, RF_RINV, make_exponents(2, 2))
    assert v.lhs == pytest.approx(1.0, rel=1e-9)  # |r * 1/r| == 1
    assert v.rhs >= 1.0
    assert v.holds


def test_holder_continuous_f_equals_g(hydrogen):
    v = holder_verdict_continuous(hydrogen, RF_R, RF_R, make_exponents(4, 2))
    assert v.holds


def test_holder_continuous_matches_discretization(hydrogen):
    # bounded f, g at p=q=2, sampled densely on the radial density
    f = RadialFunction(lambda r: np.exp(-r), 0.0, "exp(-r)")
    g = RadialFunction(lambda r: 1.0 / (1.0 + r), 0.0, "1/(1+r)")
    cont = holder_verdict_continuous(hydrogen, f, g, make_exponents(2, 2))
    r = np.linspace(1e-6, 45.0, 60_000)
    w = hydrogen.radial_density(r)
    disc = holder_verdict(DiscreteDensity(f.fn(r), g.fn(r), w), make_exponents(2, 2))
    assert cont.lhs == pytest.approx(disc.lhs, rel=1e-6)
    assert cont.rhs == pytest.approx(disc.rhs, rel=1e-6)


def test_holder_continuous_divergent_side(hydrogen):
    sharp = RadialFunction(lambda r: r**-2.0, -2.0, "1/r^2")
    out = holder_verdict_continuous(hydrogen, sharp, RF_R, make_exponents(2, 2))
    assert isinstance(out, DivergenceReport)


# --- reciprocal moments -------------------------------------------------------


def test_reciprocal_hydrogen_unit_orders(hydrogen):
    v = reciprocal_moment_verdict(hydrogen, make_exponents(1, 1))
    assert v.lhs == 1.0
    assert v.rhs == pytest.approx(math.sqrt(1.5), rel=1e-9)
    assert v.holds


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_reciprocal_product_form(hydrogen, alpha):
    # <r^a><r^-a> >= 1
    v = reciprocal_moment_verdict(hydrogen, make_exponents(alpha, alpha))
    assert v.holds


def test_reciprocal_divergent_q3(hydrogen):
    out = reciprocal_moment_verdict(hydrogen, make_exponents(1, 3))
    assert isinstance(out, DivergenceReport)
    assert "divergent" in out.detail


# --- canonical pair -----------------------------------------------------------


def test_canonical_hydrogen_three_two(hydrogen):
    v = uncertainty_verdict_canonical(hydrogen, 3, 3, make_exponents(3, 2))
    assert v.holds
    assert v.ratio**5 == pytest.approx(3.0 / 25.0, rel=1e-6)


def test_canonical_qho_saturation():
    v = uncertainty_verdict_canonical(HarmonicOscillatorGround(), 1, 1, make_exponents(2, 2))
    assert v.ratio == pytest.approx(1.0, abs=1e-9)
    assert v.holds


def test_canonical_gaussian_saturation():
    v = uncertainty_verdict_canonical(GaussianPacket(x0=1.0, p0=-0.3, sigma=0.6), 1, 1,
                                      make_exponents(2, 2))
    assert v.ratio == pytest.approx(1.0, abs=1e-9)


def test_canonical_off_axes(hydrogen):
    v = uncertainty_verdict_canonical(hydrogen, 1, 2, make_exponents(3, 2))
    assert v.lhs == 0.0
    assert v.holds


def test_canonical_symmetric_order_lhs_exact(hydrogen):
    # at p = q = 2 the left side is exactly hbar/2 * delta_ij
    v = uncertainty_verdict_canonical(hydrogen, 3, 3, make_exponents(2, 2))
    assert v.lhs == 0.5
    v0 = uncertainty_verdict_canonical(hydrogen, 2, 3, make_exponents(2, 2))
    assert v0.lhs == 0.0


def test_holder_continuous_randomized_margins(hydrogen):
    rng = SplitMix64(61)
    fams = [
        RadialFunction(lambda r: np.exp(-0.7 * r), 0.0, "exp(-0.7r)"),
        RadialFunction(lambda r: 1.0 / (1.0 + r), 0.0, "1/(1+r)"),
        RF_R,
        RadialFunction(lambda r: np.sqrt(r), 0.5, "sqrt(r)"),
    ]
    for _ in range(30):
        e = make_exponents(rng.uniform_in(0.25, 8.0), rng.uniform_in(0.25, 8.0))
        f = fams[rng.integer(0, len(fams) - 1)]
        g = fams[rng.integer(0, len(fams) - 1)]
        out = holder_verdict_continuous(hydrogen, f, g, e)
        assert not isinstance(out, DivergenceReport)
        assert out.margin >= -1e-12
        assert out.holds


def test_canonical_low_order_violation_gaussian_oracle():
    # at p = q = 1 the claimed bound fails even for the minimum-uncertainty
    # state: lhs = sqrt(hbar/2), rhs = sigma_x*sqrt(2/pi) exactly
    q = HarmonicOscillatorGround()
    v = uncertainty_verdict_canonical(q, 1, 1, make_exponents(1, 1))
    assert v.lhs == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert v.rhs == pytest.approx(math.sqrt(1.0 / math.pi), rel=1e-9)
    assert not v.holds  # reported, not raised


def test_canonical_divergent_momentum_order(hydrogen):
    out = uncertainty_verdict_canonical(hydrogen, 3, 3, make_exponents(2, 5.5))
    assert isinstance(out, DivergenceReport)


# --- finite-dimensional chain ---------------------------------------------------


def test_chain_pauli_equality():
    v1, v2 = uncertainty_chain_finite(pauli("x"), pauli("y"), FiniteState([1, 0]),
                                      make_exponents(2, 2))
    for v in (v1, v2):
        assert v.lhs == pytest.approx(1.0, abs=1e-10)
        assert v.rhs == pytest.approx(1.0, abs=1e-10)
        assert v.holds


def test_chain_equal_operators_zero_commutator():
    rng = SplitMix64(30)
    a = random_hermitian(rng, 5)
    psi = random_state(rng, 5)
    _, v2 = uncertainty_chain_finite(a, a, psi, make_exponents(2, 2))
    assert v2.lhs == pytest.approx(0.0, abs=1e-12)
    assert v2.holds


def test_chain_truncated_oscillator_saturation():
    x, p = truncated_canonical_pair(32)
    _, v2 = uncertainty_chain_finite(x, p, ground_state(32), make_exponents(2, 2))
    assert v2.ratio == pytest.approx(1.0, abs=1e-6)


def test_chain_shared_rhs():
    rng = SplitMix64(31)
    a = random_hermitian(rng, 4)
    b = random_hermitian(rng, 4)
    psi = random_state(rng, 4)
    v1, v2 = uncertainty_chain_finite(a, b, psi, make_exponents(3, 1.5))
    assert v1.rhs == v2.rhs


def test_chain_violations_reported_not_raised():
    # the commutator bound fails on a sizeable fraction of random pairs at
    # p=q=2; the chain must report those, reproducibly from the seed
    def margins(seed):
        rng = SplitMix64(seed)
        out = []
        for _ in range(60):
            a = random_hermitian(rng, 4)
            b = random_hermitian(rng, 4)
            psi = random_state(rng, 4)
            _, v2 = uncertainty_chain_finite(a, b, psi, make_exponents(2, 2))
            out.append((v2.margin, v2.holds))
        return out

    first = margins(3)
    second = margins(3)
    assert first == second  # bit-for-bit reproducible
    n_viol = sum(1 for _, holds in first if not holds)
    assert 0 < n_viol < 60


def test_chain_robertson_always_weaker():
    # sanity anchor: |<[A,B]>|/2 <= sd(A) sd(B) is a theorem; the chain's
    # lhs (modulus inside) must always dominate that scalar value
    rng = SplitMix64(33)
    for _ in range(40):
        a = random_hermitian(rng, 4)
        b = random_hermitian(rng, 4)
        psi = random_state(rng, 4)
        _, v2 = uncertainty_chain_finite(a, b, psi, make_exponents(2, 2))
        comm = a.entries @ b.entries.conj().T  # placeholder, recomputed below
        comm = a.entries @ b.entries - b.entries @ a.entries
        robertson = abs(complex(psi.amplitudes.conj() @ (comm @ psi.amplitudes))) / 2.0
        assert robertson <= v2.lhs + 1e-10
        assert robertson <= v2.rhs + 1e-10  # the true theorem


# --- sweeps ---------------------------------------------------------------------


def _closed_form_cell(p, q):
    """Closed-form canonical sides for hydrogen (a0 = 1): Gamma/Beta oracle."""
    e = make_exponents(p, q)
    mx = 4.0 * math.gamma(p + 3.0) / 2.0 ** (p + 3.0) / (p + 1.0)
    mom_int = 0.5 * math.gamma((q + 3.0) / 2.0) * math.gamma((5.0 - q) / 2.0) / 6.0
    mp = (32.0 / math.pi) * mom_int / (q + 1.0)
    lhs = 0.5**e.r_star
    rhs = mx**e.w_f * mp**e.w_g
    return lhs, rhs


def test_sweep_hydrogen_matches_cell_oracle(hydrogen):
    grid = [1.0, 2.0, 3.0]
    table = sweep(hydrogen, 3, 3, grid, grid)
    assert len(table.rows) == 9
    idx = 0
    for p in grid:
        for q in grid:
            row = table.rows[idx]
            idx += 1
            assert (row.p, row.q) == (p, q)
            lhs, rhs = _closed_form_cell(p, q)
            assert row.lhs == pytest.approx(lhs, rel=1e-8)
            assert row.rhs == pytest.approx(rhs, rel=1e-7)
            assert row.holds == (lhs <= rhs + 1e-9)
    # the low-order cells genuinely violate; the p,q >= 2 cells all hold
    assert not table.rows[0].holds  # p=q=1
    assert all(r.holds for r in table.rows if r.p >= 2.0 and r.q >= 2.0)


def test_sweep_row_major_deterministic(hydrogen):
    t1 = sweep(hydrogen, 3, 3, [2.0, 3.0], [2.0, 2.5])
    t2 = sweep(hydrogen, 3, 3, [2.0, 3.0], [2.0, 2.5])
    assert [(r.p, r.q) for r in t1.rows] == [(2.0, 2.0), (2.0, 2.5), (3.0, 2.0), (3.0, 2.5)]
    assert t1.to_csv() == t2.to_csv()


def test_sweep_divergent_cells_marked(hydrogen):
    table = sweep(hydrogen, 3, 3, [2.0], [5.0, 6.0])
    assert [r.status for r in table.rows] == ["divergent", "divergent"]
    assert table.any_divergent
    assert not table.any_violation


def test_sweep_off_axis_all_zero_lhs(hydrogen):
    table = sweep(hydrogen, 1, 3, [2.0, 3.0], [2.0, 3.0])
    assert all(r.lhs == 0.0 and r.holds for r in table.rows)


def test_sweep_reciprocal_kind(hydrogen):
    table = sweep(hydrogen, 3, 3, [1.0, 2.0], [1.0, 4.0], kind=RECIPROCAL)
    statuses = {(r.p, r.q): r.status for r in table.rows}
    assert statuses[(1.0, 1.0)] == "ok"
    assert statuses[(1.0, 4.0)] == "divergent"  # <r^-4> diverges
    ok_rows = [r for r in table.rows if r.status == "ok"]
    assert all(r.holds for r in ok_rows)


def test_sweep_csv_header():
    table = sweep(HydrogenGroundState(), 3, 3, [2.0], [2.0])
    lines = table.to_csv().splitlines()
    assert lines[0] == "p,q,r_star,lhs,rhs,ratio,holds,status"
    assert lines[1].endswith(",ok")


def test_sweep_empty_grid_rejected(hydrogen):
    with pytest.raises(DomainError):
        sweep(hydrogen, 3, 3, [], [2.0])


def test_sweep_unknown_kind(hydrogen):
    with pytest.raises(DomainError):
        sweep(hydrogen, 3, 3, [2.0], [2.0], kind="nope")


def test_holder_continuous_on_grid_state():
    r = np.linspace(0.0, 36.0, 3000)
    u = r * np.exp(-r)
    from qmoments.states import RadialGridState

    st = RadialGridState(r, u)
    v = holder_verdict_continuous(st, RF_R, RF_RINV, make_exponents(2, 2))
    assert v.lhs == pytest.approx(1.0, rel=1e-6)
    assert v.holds


def test_holder_violation_flagged_internal_error():
    # a verdict that fails a guaranteed inequality carries the severity marker;
    # force one through an artificial slack-free comparison on equal sides
    rng = SplitMix64(40)
    d = equality_density(rng, 20, make_exponents(2, 2))
    v = holder_verdict(d, make_exponents(2, 2), slack=0.0)
    if not v.holds:  # round-off direction is not guaranteed either way
        assert v.inputs.get("severity") == "internal-error"
