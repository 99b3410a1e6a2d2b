from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lejasparse.multiindex import (
    MultiIndexSet,
    admissible_set,
    backward_neighbors,
    forward_neighbors,
    is_downward_closed,
    isotropic_set,
    linear_extension,
)


def S(*members):
    return MultiIndexSet(len(members[0]), members)


def test_downward_closed_examples():
    assert is_downward_closed(S((0, 0)))
    assert not is_downward_closed(S((0, 0), (1, 1)))
    assert is_downward_closed(S((0,), (1,), (2,)))


def test_admissible_examples():
    assert admissible_set(S((0, 0))) == S((1, 0), (0, 1))
    assert admissible_set(S((0, 0), (1, 0))) == S((2, 0), (0, 1))
    assert admissible_set(S((0, 0), (1, 0), (0, 1))) == S((2, 0), (1, 1), (0, 2))


def test_admissible_requires_downward_closed():
    with pytest.raises(ValueError):
        admissible_set(S((0, 0), (1, 1)))
    with pytest.raises(ValueError):
        admissible_set(MultiIndexSet(2))


def test_isotropic_examples():
    assert list(isotropic_set(1, 3)) == [(0,), (1,), (2,), (3,)]
    assert len(isotropic_set(2, 2)) == 6
    assert list(isotropic_set(8, 0)) == [(0,) * 8]


@pytest.mark.parametrize("dim,level", [(1, 5), (2, 4), (3, 3), (5, 2), (8, 2)])
def test_isotropic_cardinality(dim, level):
    s = isotropic_set(dim, level)
    assert len(s) == comb(dim + level, dim)
    assert is_downward_closed(s)


def test_set_bookkeeping():
    s = MultiIndexSet(2)
    s.add((0, 0))
    s.add([1, 0])
    assert (1, 0) in s and [1, 0] in s and (0, 1) not in s
    assert s.index((1, 0)) == 1
    with pytest.raises(ValueError):
        s.add((1, 0))
    with pytest.raises(ValueError):
        s.add((0, -1))
    with pytest.raises(ValueError):
        s.add((0, 0, 0))
    c = s.copy()
    c.add((0, 1))
    assert len(s) == 2 and len(c) == 3


def test_neighbors():
    assert sorted(backward_neighbors((2, 0, 1))) == [(1, 0, 1), (2, 0, 0)]
    assert list(forward_neighbors((0, 1))) == [(1, 1), (0, 2)]


def test_csv(tmp_path):
    path = tmp_path / "set.csv"
    S((0, 0), (1, 0)).to_csv(path)
    assert path.read_text().splitlines() == ["i1,i2", "0,0", "1,0"]


@st.composite
def downward_closed_sets(draw, max_dim=4, max_steps=25):
    dim = draw(st.integers(1, max_dim))
    s = MultiIndexSet(dim, [(0,) * dim])
    for _ in range(draw(st.integers(0, max_steps))):
        frontier = list(admissible_set(s))
        s.add(draw(st.sampled_from(frontier)))
    return s


@settings(max_examples=120, deadline=None)
@given(downward_closed_sets())
def test_admissible_properties(s):
    adm = admissible_set(s)
    assert all(i not in s for i in adm)
    union = MultiIndexSet(s.dim, list(s) + list(adm))
    assert is_downward_closed(union)
    for i in adm:
        grown = MultiIndexSet(s.dim, list(s) + [i])
        assert is_downward_closed(grown)
        assert MultiIndexSet(s.dim, [j for j in grown if j != i]) == s
    # every outside index with all backward neighbors present is found
    for idx in s:
        for f in forward_neighbors(idx):
            if f not in s and all(b in s for b in backward_neighbors(f)):
                assert f in adm


@settings(max_examples=80, deadline=None)
@given(downward_closed_sets())
def test_incremental_frontier_matches_recomputation(s):
    adm = admissible_set(s)
    for i in adm:
        new = s.newly_admissible(i)
        grown = MultiIndexSet(s.dim, list(s) + [i])
        expected = set(admissible_set(grown)) - (set(adm) - {i})
        assert set(new) == expected


@settings(max_examples=60, deadline=None)
@given(downward_closed_sets())
def test_linear_extension_respects_order(s):
    order = linear_extension(s)
    pos = {idx: k for k, idx in enumerate(order)}
    assert all(pos[b] < pos[idx] for idx in s for b in backward_neighbors(idx))
