"""Truncated Hilbert series and the tail root test."""
from math import comb

import numpy as np
import pytest

from frobcat.linalg import PrimeMatrix
from frobcat.repcat import GroupRep, cyclic_group, cyclic_rep, trivial_rep
from frobcat.series import TruncSeries, growth_check, hilbert_coeffs


def test_trunc_series_validation():
    s = TruncSeries((1, 2, 3), 2)
    assert s.to_json() == [1, 2, 3]
    with pytest.raises(ValueError):
        TruncSeries((1, 2), 2)
    with pytest.raises(ValueError):
        TruncSeries((2, 2, 2), 2)
    with pytest.raises(ValueError):
        TruncSeries((1, -1, 0), 2)


def test_hilbert_coeffs_known_dimensions():
    ones = hilbert_coeffs(trivial_rep(cyclic_group(5), 5), 8)
    assert ones.coeffs == (1,) * 9
    line = hilbert_coeffs(cyclic_rep(3, (2,)), 10)
    assert line.coeffs == tuple(i + 1 for i in range(11))
    plane = hilbert_coeffs(cyclic_rep(3, (3,)), 6)
    assert plane.coeffs == tuple(comb(i + 2, 2) for i in range(7))
    with pytest.raises(ValueError):
        hilbert_coeffs(cyclic_rep(3, (2,)), -1)


def test_hilbert_zero_dimensional_rep():
    p = 3
    zero = GroupRep(
        group=cyclic_group(p), p=p, dim=0,
        matrices=(PrimeMatrix.dense(np.zeros((0, 0), int), p),),
    )
    s = hilbert_coeffs(zero, 12)
    assert s.coeffs == (1,) + (0,) * 12
    report = growth_check(s)
    assert report["verdict"] == "polynomial"
    assert not report["flagged"]


def test_growth_check_linear_series():
    s = hilbert_coeffs(cyclic_rep(2, (2,)), 40)
    report = growth_check(s)
    assert report["verdict"] == "non-polynomial"
    assert report["threshold"] == 1.25
    assert report["max_root_estimate"] <= 1.25
    assert abs(report["final_root_estimate"] - 41 ** (1 / 40)) < 1e-12
    assert not report["flagged"]
    assert "diagnostic" in report["note"]


def test_growth_check_flags_geometric_growth():
    s = TruncSeries(tuple(2**i for i in range(13)), 12)
    report = growth_check(s)
    assert report["flagged"]
    assert abs(report["max_root_estimate"] - 2.0) < 1e-12


def test_growth_check_rejects_short_series():
    with pytest.raises(ValueError):
        growth_check(TruncSeries((1,) * 9, 8))
