import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import generators as gen
from posrep.errors import InputError, TypeNotPosRepresentable, TypeNotRepresentable, ZeroWeightAgent
from posrep.mechanism import (
    MechanismSpec,
    Pivot,
    RepresentationMode,
    choose_alternative,
    clarke_pivot,
    run,
    run_valuations,
    verify_pivot_bound,
)
from posrep.pwl import PiecewiseLinearCurve, curve_from_segments
from posrep.representation import classify
from posrep.utility import UtilityFunction, Valuation, ql_from_valuation

AB, ABC = ("a", "b"), ("a", "b", "c")
HALF = (F(1, 2), F(1, 2))


def tilted_type():
    return UtilityFunction(ABC, (
        curve_from_segments([(-3, 0)], -1, F(-1, 3)),
        PiecewiseLinearCurve.quasilinear(-2),
        curve_from_segments([(-1, 0)], -1, -3),
    ))


def w_type():
    return UtilityFunction(ABC, (
        PiecewiseLinearCurve.quasilinear(1),
        curve_from_segments([(2, 0)], -1, -2),
        curve_from_segments([(3, 0)], -1, -3),
    ))


V1, V2 = Valuation(AB, (3, 0)), Valuation(AB, (0, 1))


def test_choose_reference_values():
    spec = MechanismSpec(AB, HALF, (0, 0))
    assert choose_alternative(spec, [V1, V2]) == "a"
    only_b = MechanismSpec(AB, HALF, (0, 0), allowed=("b",))
    assert choose_alternative(only_b, [V1, V2]) == "b"
    tie = Valuation(AB, (1, 1))
    assert choose_alternative(spec, [tie, tie]) == "a"


def test_tie_break_follows_alternative_order_not_allowed_order():
    spec = MechanismSpec(AB, HALF, (0, 0), allowed=("b", "a"))
    assert spec.allowed == ("a", "b")
    tie = Valuation(AB, (1, 1))
    assert choose_alternative(spec, [tie, tie]) == "a"


def test_clarke_reference_values():
    spec = MechanismSpec(AB, HALF, (0, 0), pivot=Pivot.clarke())
    # agent 0's own entry is ignored
    assert clarke_pivot(spec, 0, [V1, V2]) == 1
    assert clarke_pivot(spec, 1, [V1, V2]) == 3
    solo = MechanismSpec(AB, (1,), (0, 0), pivot=Pivot.clarke())
    assert clarke_pivot(solo, 0, [V1]) == 0


def test_clarke_zero_weight_rejected():
    spec = MechanismSpec(AB, (1, 0), (0, 0), pivot=Pivot.clarke())
    with pytest.raises(ZeroWeightAgent):
        run_valuations(spec, [V1, V2])


def test_run_clarke_reference():
    spec = MechanismSpec(AB, HALF, (0, 0), pivot=Pivot.clarke())
    out = run(spec, [ql_from_valuation(V1), ql_from_valuation(V2)])
    assert out.chosen == "a"
    assert out.payments == (1, 0)
    assert out.canonical_valuations == (V1, V2)


def test_run_single_agent_zero_pivot():
    v = Valuation(ABC, (2, 5, 1))
    out = run(MechanismSpec(ABC, (1,), (0, 0, 0)), [ql_from_valuation(v)])
    assert out.chosen == "b"
    assert out.payments == (0,)  # h = 0 and the others' sum is empty


def test_run_mixed_reference():
    spec = MechanismSpec(ABC, HALF, (0, 0, 0))
    out = run(spec, [tilted_type(), w_type()])
    assert [v.values for v in out.canonical_valuations] == [(-3, -2, -1), (1, 2, 3)]
    assert out.chosen == "c"
    # p_1 = 0 - 2 * (1/2 * 3), p_2 = 0 - 2 * (1/2 * -1)
    assert out.payments == (-3, 1)


def test_mode_gates():
    spec = MechanismSpec(ABC, HALF, (0, 0, 0), representation_mode=RepresentationMode.FULL)
    with pytest.raises(TypeNotRepresentable):
        run(spec, [tilted_type(), w_type()])
    never = UtilityFunction(AB, (curve_from_segments([(0, 0)], -1, -1), curve_from_segments([(0, 0)], -2, -1)))
    with pytest.raises(TypeNotPosRepresentable):
        run(MechanismSpec(AB, (1,), (0, 0)), [never])


def test_spec_validation():
    with pytest.raises(InputError):
        MechanismSpec(AB, (F(1, 2), F(1, 3)), (0, 0))
    with pytest.raises(InputError):
        MechanismSpec(AB, (F(3, 2), F(-1, 2)), (0, 0))
    with pytest.raises(InputError):
        MechanismSpec(AB, HALF, (0,))
    with pytest.raises(InputError):
        MechanismSpec(AB, HALF, (0, 0), allowed=())
    with pytest.raises(InputError):
        MechanismSpec(AB, HALF, (0, 0), pivot=Pivot.constant([1]))
    with pytest.raises(InputError):
        MechanismSpec(AB, (0.5, 0.5), (0, 0))


def test_pivot_bound_examples():
    u1, u2 = w_type(), UtilityFunction(ABC, tuple(curve_from_segments([(v, 0)], -1, -2) for v in (0, 2, 1)))
    clarke = MechanismSpec(ABC, HALF, (0, 0, 0), pivot=Pivot.clarke())
    assert verify_pivot_bound(clarke, [u1, u2]) == (True, True)
    # RHS for agent 1: 2 * max(1/2*(1+0), 1/2*(2+2), 1/2*(3+1)) = 4
    assert verify_pivot_bound(clarke.with_pivot(Pivot.constant([4, 0])), [u1, u2]) == (True, True)
    assert verify_pivot_bound(clarke.with_pivot(Pivot.constant([5, 0])), [u1, u2]) == (False, True)
    solo = MechanismSpec(ABC, (1,), (0, 0, 0))
    assert verify_pivot_bound(solo, [u1]) == (True,)


def test_pivot_bound_vacuous_for_represented_types():
    # quasi-linear types can be shifted up without limit
    spec = MechanismSpec(AB, HALF, (0, 0), pivot=Pivot.constant([100, 100]))
    assert verify_pivot_bound(spec, [ql_from_valuation(V1), ql_from_valuation(V2)]) == (True, True)


def test_zero_weight_agent_pays_pivot_and_is_ignored():
    r = random.Random(7)
    for _ in range(30):
        vals = [gen.valuation(r, ABC) for _ in range(3)]
        spec = MechanismSpec(ABC, (F(1, 3), 0, F(2, 3)), tuple(gen.rational(r) for _ in ABC),
                             pivot=Pivot.constant([1, 5, 2]))
        out = run_valuations(spec, vals)
        assert out.payments[1] == 5
        reduced = MechanismSpec(ABC, (F(1, 3), F(2, 3)), spec.costs)
        assert choose_alternative(reduced, [vals[0], vals[2]]) == out.chosen


seeds = st.integers(min_value=0, max_value=10**9)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_affine_maximizer_identity(seed):
    r = random.Random(seed)
    n, m = r.choice([1, 2, 3]), r.choice([2, 3, 4])
    alts = gen.ALTS[:m]
    spec = MechanismSpec(alts, gen.simplex(r, n), tuple(gen.rational(r) for _ in alts))
    vals = [gen.valuation(r, alts) for _ in range(n)]
    out = run_valuations(spec, vals)

    def score(a):
        return spec.cost(a) + sum(w * v[a] for w, v in zip(spec.weights, vals))

    assert all(score(out.chosen) >= score(b) for b in spec.allowed)
    assert all(score(out.chosen) > score(b) for b in spec.allowed[: spec.allowed.index(out.chosen)])


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_reparameterization_invariance(seed):
    r = random.Random(seed)
    alts = ABC
    types = [gen.posrep_type(r, alts, gen.valuation(r, alts, 0, 6), level=gen.rational(r, -2, 2)) for _ in range(2)]
    spec = MechanismSpec(alts, gen.simplex(r, 2, allow_zero=False), (0, 1, 0), pivot=Pivot.clarke())
    i = r.randrange(2)
    other = list(types)
    other[i] = types[i].reparameterized(gen.monotone_map(r))
    a, b = run(spec, types), run(spec, other)
    assert a.chosen == b.chosen
    assert a.payments[i] == b.payments[i]


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_downward_shift_of_canonical_valuation(seed):
    r = random.Random(seed)
    types = [gen.posrep_type(r, ABC, gen.valuation(r, ABC, 0, 6)) for _ in range(3)]
    spec = MechanismSpec(ABC, gen.simplex(r, 3, allow_zero=False), (0, 0, 1), pivot=Pivot.clarke())
    vals = [classify(u).valuation for u in types]
    i = r.randrange(3)
    shifted = list(vals)
    shifted[i] = vals[i].shifted(-gen.positive(r, 5))
    a, b = run_valuations(spec, vals), run_valuations(spec, shifted)
    assert a.chosen == b.chosen
    assert a.payments[i] == b.payments[i]
