"""Fusion ring of the semisimplified mod-p cyclic category.

Simple classes L_1 .. L_{p-1}; the product follows the truncated
Clebsch-Gordan rule, and semisimplification of a module drops the Jordan
blocks of full size p.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import induced_on_subquotient, is_prime
from .nilmod import (
    NilModule,
    _image_of_power,
    _kernel_of_power,
    _power,
    functor_B,
    jordan_type,
    multiplicity_vector,
)
from .repcat import GroupRep, decompose_cyclic

__all__ = [
    "FusionElement",
    "WeightVector",
    "simple",
    "fusion_tensor",
    "fusion_matrix",
    "fpdim_simple",
    "fpdim",
    "fpdim_perron",
    "semisimplify",
    "natfunc_hom_dims",
    "verlinde_weights",
    "concave_weights_to_cone",
    "verlinde_cone_report",
]


@dataclass(frozen=True)
class FusionElement:
    """Nonnegative integer combination of the simples; mult[r-1] counts L_r."""

    p: int
    mult: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if len(self.mult) != self.p - 1:
            raise ValueError(f"need {self.p - 1} multiplicities")
        if any(m < 0 for m in self.mult):
            raise ValueError("multiplicities must be nonnegative")

    def __add__(self, other: "FusionElement") -> "FusionElement":
        if self.p != other.p:
            raise ValueError("mixed moduli")
        return FusionElement(self.p, tuple(a + b for a, b in zip(self.mult, other.mult)))

    def scale(self, k: int) -> "FusionElement":
        return FusionElement(self.p, tuple(k * m for m in self.mult))

    @property
    def is_zero(self) -> bool:
        return not any(self.mult)

    def to_json(self) -> dict:
        return {"p": self.p, "mult": list(self.mult)}


def zero(p: int) -> FusionElement:
    return FusionElement(p, (0,) * (p - 1))


def simple(p: int, r: int) -> FusionElement:
    if not 1 <= r <= p - 1:
        raise ValueError(f"simple index {r} outside [1, {p - 1}]")
    mult = [0] * (p - 1)
    mult[r - 1] = 1
    return FusionElement(p, tuple(mult))


def _fuse_simples(p: int, r: int, s: int) -> FusionElement:
    # L_r (x) L_s = sum over L_{|r-s| + 2i - 1}, i = 1 .. min(r, s, p-r, p-s)
    mult = [0] * (p - 1)
    for i in range(1, min(r, s, p - r, p - s) + 1):
        mult[abs(r - s) + 2 * i - 2] += 1
    return FusionElement(p, tuple(mult))


def fusion_tensor(a, b, p: int | None = None) -> FusionElement:
    """Product in the fusion ring; accepts simple indices or elements."""
    if isinstance(a, int) and isinstance(b, int):
        if p is None:
            raise ValueError("p required when multiplying by index")
        return _fuse_simples(p, a, b)
    if not isinstance(a, FusionElement) or not isinstance(b, FusionElement):
        raise ValueError("arguments must both be indices or both FusionElements")
    if a.p != b.p:
        raise ValueError("mixed moduli")
    out = zero(a.p)
    for r, mr in enumerate(a.mult, start=1):
        if not mr:
            continue
        for s, ms in enumerate(b.mult, start=1):
            if ms:
                out = out + _fuse_simples(a.p, r, s).scale(mr * ms)
    return out


def fusion_matrix(p: int, r: int) -> np.ndarray:
    """N_r with (N_r)[t-1, s-1] = multiplicity of L_t in L_r (x) L_s."""
    n = np.zeros((p - 1, p - 1), np.int64)
    for s in range(1, p):
        n[:, s - 1] = _fuse_simples(p, r, s).mult
    return n


def fpdim_simple(p: int, r: int) -> float:
    return math.sin(math.pi * r / p) / math.sin(math.pi / p)


def fpdim(e: FusionElement) -> float:
    return sum(m * fpdim_simple(e.p, r) for r, m in enumerate(e.mult, start=1))


def fpdim_perron(p: int) -> np.ndarray:
    """FPdims of all simples read off the Perron eigenvector of N_2."""
    if p == 2:
        return np.array([1.0])
    n2 = fusion_matrix(p, 2).astype(np.float64)
    vals, vecs = np.linalg.eig(n2)
    lead = int(np.argmax(vals.real))
    vec = vecs[:, lead].real
    vec = vec / vec[0]
    if vec[1] < 0:
        vec = -vec
    return vec


def semisimplify(x) -> FusionElement:
    """Class of a module in the fusion ring: Jordan blocks, size-p blocks dropped."""
    if isinstance(x, NilModule):
        if x.n > x.p:
            raise ValueError(f"nilpotency order {x.n} exceeds p = {x.p}")
        p, t = x.p, jordan_type(x)
    elif isinstance(x, GroupRep):
        p, t = x.p, decompose_cyclic(x)
    else:
        raise ValueError("semisimplify expects a NilModule or a cyclic GroupRep")
    return FusionElement(p, tuple(t.multiplicity(r) for r in range(1, p)))


def natfunc_hom_dims(x: NilModule, i: int) -> dict:
    """Hom and negligible-hom dimensions from the i-th simple, with the quotient.

    hom = dim Ker D^i; negligible = dim(Ker D^i cap Im D + Ker D^{i-1});
    the quotient is carried isomorphically onto the i-th block multiplicity
    space by D^{i-1}, which is verified by an explicit induced map.
    """
    if not 1 <= i <= x.p - 1:
        raise ValueError(f"index {i} outside [1, {x.p - 1}]")
    ker_i = _kernel_of_power(x, i)
    negligible = ker_i.intersect(_image_of_power(x, 1)).add(_kernel_of_power(x, i - 1))
    b = functor_B(x, i)
    quotient_dim = ker_i.dim - negligible.dim
    induced = induced_on_subquotient(_power(x, i - 1), ker_i, negligible, b.sup, b.sub)
    if not (quotient_dim == b.dim and induced.rank() == b.dim):
        raise AssertionError("quotient does not map isomorphically onto the block space")
    return {
        "hom": ker_i.dim,
        "negligible": negligible.dim,
        "quotient_dim": quotient_dim,
        "iso_onto_block_space": True,
    }


def verlinde_weights(p: int) -> "WeightVector":
    """a_j = FPdim(L_j) extended by a_0 = a_p = 0."""
    vals = [0.0] + [fpdim_simple(p, j) for j in range(1, p)] + [0.0]
    return WeightVector(p, tuple(vals))


@dataclass(frozen=True)
class WeightVector:
    """Symmetric concave weights a_0..a_p with a_0 = a_p = 0."""

    p: int
    a: tuple[float, ...]

    def __post_init__(self):
        if len(self.a) != self.p + 1:
            raise ValueError(f"need {self.p + 1} weights")


def concave_weights_to_cone(w: WeightVector, tol: float = 1e-9) -> np.ndarray:
    """Unique cone coordinates x with a_j = sum_i x_i min(i,j,p-i,p-j).

    The min-matrix on indices 1..floor(p/2) is inverted by second
    differences, except that the middle index of an even p satisfies
    x_{p/2} = a_{p/2} - a_{p/2-1}.
    """
    p = w.p
    a = np.asarray(w.a, dtype=np.float64)
    if abs(a[0]) > tol or abs(a[p]) > tol:
        raise ValueError("weights must vanish at the endpoints")
    if any(abs(a[j] - a[p - j]) > tol for j in range(p + 1)):
        raise ValueError("weights are not symmetric")
    if any(a[j - 1] - 2 * a[j] + a[j + 1] > tol for j in range(1, p)):
        raise ValueError("weights are not concave")
    half = p // 2
    x = np.zeros(half)
    for i in range(1, half + 1):
        if 2 * i < p:
            x[i - 1] = 2 * a[i] - a[i - 1] - a[i + 1]
        else:
            x[i - 1] = a[i] - a[i - 1]
    recon = np.zeros(p + 1)
    for i in range(1, half + 1):
        v = multiplicity_vector(p, i)
        recon[1:] += x[i - 1] * np.asarray(v, dtype=np.float64)
    err = float(np.max(np.abs(recon - a)))
    if err > 1e-12:
        raise AssertionError(f"cone reconstruction off by {err}")
    return x


def verlinde_cone_report(p: int) -> dict:
    """Cone coordinates of the FPdim weights, with the proportionality data.

    Reports x_j / sin(pi j / p) and its ratio to tan(pi / 2p); the observed
    constant is recorded, not asserted.
    """
    w = verlinde_weights(p)
    x = concave_weights_to_cone(w)
    half = p // 2
    ratios = [float(x[j - 1] / math.sin(math.pi * j / p)) for j in range(1, half + 1)]
    constant = ratios[0]
    return {
        "p": p,
        "x": [float(v) for v in x],
        "ratios": ratios,
        "ratio_spread": max(ratios) - min(ratios),
        "constant_over_tan_half_angle": constant / math.tan(math.pi / (2 * p)),
    }
