"""Explicit transport maps between complex and real matrix algebras.

The block embedding ``sigma`` replaces each complex entry a + ib by the
2x2 real block [[a, b], [-b, a]] and is a unital *-homomorphism; the
block collapse ``rho`` averages each 2x2 block back to
(a + d)/2 + i (b - c)/2 and is a compression, so both are completely
positive and ``rho . sigma`` is the identity.  ``theta`` is sigma scaled
by 1/(N(x) + 1) with N(x) the largest column sum of |Re| + |Im|; that
normalizer makes it contractive in the column-sum norm but also makes
the literal map nonlinear, so a fixed-scale linear variant is provided
alongside.  ``eta`` (entrywise diag(a, b)) and the scalar functionals
``upsilon``, ``eta1``, ``upsilon1`` feed the trace-intertwining checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cpmaps import COMPLEX, REAL, LinearMapMat, compose
from .matrix import as_array, col_norm1
from .realform import AntiAutomorphism, conj_phi

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def sigma(x) -> np.ndarray:
    """Entrywise block embedding a + ib -> [[a, b], [-b, a]]."""
    a = as_array(x).astype(np.complex128)
    return np.kron(a.real, np.eye(2)) + np.kron(a.imag, _J)


def rho(m) -> np.ndarray:
    """Collapse of 2x2 blocks [[a, b], [c, d]] -> (a+d)/2 + i(b-c)/2."""
    a = as_array(m)
    if np.iscomplexobj(a) and np.any(a.imag != 0):
        raise ValueError("rho expects a real matrix")
    a = a.real
    if a.shape[0] != a.shape[1] or a.shape[0] % 2 != 0:
        raise ValueError(f"rho needs an even square matrix, got shape {a.shape}")
    re = (a[0::2, 0::2] + a[1::2, 1::2]) / 2.0
    im = (a[0::2, 1::2] - a[1::2, 0::2]) / 2.0
    return re + 1j * im


def rho_isometry(k: int) -> np.ndarray:
    """The 2k x k isometry w with rho(m) = w* m w (compression form)."""
    w = np.zeros((2 * k, k), dtype=np.complex128)
    for l in range(k):
        w[2 * l, l] = 1.0 / np.sqrt(2.0)
        w[2 * l + 1, l] = 1j / np.sqrt(2.0)
    return w


def theta_normalizer(x) -> float:
    """N(x) = max over columns of sum_j (|Re x_jl| + |Im x_jl|).

    Equals the column-sum norm of sigma(x), so the scaled map
    sigma(x)/(N(x)+1) has column-sum norm N/(N+1) < 1 for x != 0.
    """
    a = as_array(x).astype(np.complex128)
    if a.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a.real) + np.abs(a.imag), axis=0)))


@dataclass(frozen=True)
class ThetaScale:
    """Scaling mode for theta: the literal nonlinear normalizer or a fixed
    linear constant."""

    mode: str = "paper"          # "paper" | "fixed"
    value: float = 1.0           # used in fixed mode

    def __post_init__(self) -> None:
        if self.mode not in ("paper", "fixed"):
            raise ValueError(f"theta mode must be 'paper' or 'fixed', got {self.mode!r}")
        if self.mode == "fixed" and not (self.value > 0):
            raise ValueError("fixed theta scale must be positive")

    @property
    def is_linear(self) -> bool:
        return self.mode == "fixed"

    @classmethod
    def parse(cls, text: str) -> "ThetaScale":
        """Parse 'paper' or 'fixed:<value>'."""
        if text == "paper":
            return cls("paper")
        if text.startswith("fixed:"):
            return cls("fixed", float(text.split(":", 1)[1]))
        raise ValueError(f"bad theta mode {text!r}; expected 'paper' or 'fixed:<value>'")

    @classmethod
    def for_working_set(cls, mats) -> "ThetaScale":
        """Fixed scale 1/(max N + 1) over the matrices theta will see,
        so the linear variant is contractive on that working set."""
        worst = max((theta_normalizer(m) for m in mats), default=0.0)
        return cls("fixed", 1.0 / (worst + 1.0))


def theta(x, scale: ThetaScale = ThetaScale()) -> np.ndarray:
    """Scaled block embedding; contractive in col_norm1 in paper mode."""
    s = sigma(x)
    if scale.mode == "paper":
        return s / (theta_normalizer(x) + 1.0)
    return scale.value * s


def eta(x) -> np.ndarray:
    """Entrywise a + ib -> diag(a, b)."""
    a = as_array(x).astype(np.complex128)
    return np.kron(a.real, np.diag([1.0, 0.0])) + np.kron(a.imag, np.diag([0.0, 1.0]))


def eta1(z) -> np.ndarray:
    """Scalar-only a + ib -> diag(a, |b|); matrix input is rejected
    because |b| has no canonical meaning for a matrix imaginary part."""
    if isinstance(z, np.ndarray) and z.ndim > 0:
        raise TypeError("eta1 accepts scalars only")
    z = complex(z)
    return np.array([[z.real, 0.0], [0.0, abs(z.imag)]])


def eta1_entrywise(x) -> np.ndarray:
    """The level-k version of eta1: apply the scalar rule to each entry."""
    a = as_array(x).astype(np.complex128)
    return np.kron(a.real, np.diag([1.0, 0.0])) + np.kron(np.abs(a.imag), np.diag([0.0, 1.0]))


def upsilon(z, scale: float = 0.5) -> float:
    """scale * (a + b) for z = a + ib.

    The default scale 1/2 is what makes the normalized-trace
    intertwining with eta exact; scale 1 is the literal scalar map and
    is kept for auditing.
    """
    if isinstance(z, np.ndarray) and z.ndim > 0:
        raise TypeError("upsilon accepts scalars only; see upsilon_entrywise")
    z = complex(z)
    return scale * (z.real + z.imag)


def upsilon_entrywise(x, scale: float = 0.5) -> np.ndarray:
    a = as_array(x).astype(np.complex128)
    return scale * (a.real + a.imag)


def upsilon1(z, scale: float = 0.5) -> float:
    """scale * (a + |b|) for z = a + ib; scalar-only like eta1."""
    if isinstance(z, np.ndarray) and z.ndim > 0:
        raise TypeError("upsilon1 accepts scalars only")
    z = complex(z)
    return scale * (z.real + abs(z.imag))


def normalized_trace(x) -> complex:
    a = as_array(x)
    return complex(np.trace(a)) / a.shape[0]


# -- maps as LinearMapMat objects ----------------------------------------


def sigma_map(k: int) -> LinearMapMat:
    """sigma on M_k(C) as a real-linear map into M_2k(R)."""
    return LinearMapMat.from_function(sigma, k, REAL, dom_field=COMPLEX,
                                      cod_field=REAL)


def rho_map(k: int) -> LinearMapMat:
    """rho on M_2k(R) as a real-linear map into M_k(C)."""
    return LinearMapMat.from_function(rho, 2 * k, REAL, dom_field=REAL,
                                      cod_field=COMPLEX)


def eta_map(k: int) -> LinearMapMat:
    return LinearMapMat.from_function(eta, k, REAL, dom_field=COMPLEX,
                                      cod_field=REAL)


def upsilon_map(k: int, scale: float = 0.5) -> LinearMapMat:
    return LinearMapMat.from_function(lambda x: upsilon_entrywise(x, scale), k,
                                      REAL, dom_field=COMPLEX, cod_field=REAL)


def transport_factorization(phi: LinearMapMat, psi: LinearMapMat
                            ) -> tuple[LinearMapMat, LinearMapMat]:
    """Rewrite a factorization through M_n(C) as one through M_2n(R).

    Returns (sigma . phi, psi . rho); because rho . sigma is the
    identity, the composite psi' . phi' equals psi . phi.
    """
    if phi.cod_dim != psi.dom_dim:
        raise ValueError(
            f"dimension mismatch: phi maps into {phi.cod_dim}, psi expects {psi.dom_dim}"
        )
    n = phi.cod_dim
    phi_prime = compose(sigma_map(n), phi)
    psi_prime = compose(psi, rho_map(n))
    return phi_prime, psi_prime


@dataclass(frozen=True, eq=False)
class RealifiedMap:
    """theta . phi . Phi . * : the real-form transport of a complex map.

    In fixed mode this is a genuine real-linear map (see
    :meth:`as_linear_map`); in paper mode the theta normalizer depends on
    the input, so the object is a plain function and is flagged as
    nonlinear wherever it is reported.
    """

    phi: LinearMapMat
    anti: AntiAutomorphism
    scale: ThetaScale

    @property
    def is_linear(self) -> bool:
        return self.scale.is_linear

    @property
    def cod_dim(self) -> int:
        return 2 * self.phi.cod_dim

    def apply(self, x) -> np.ndarray:
        return theta(self.phi.apply(conj_phi(self.anti, x)), self.scale)

    def __call__(self, x) -> np.ndarray:
        return self.apply(x)

    def as_linear_map(self) -> LinearMapMat:
        if not self.is_linear:
            raise ValueError("the paper-mode theta is nonlinear; no LinearMapMat exists")
        return LinearMapMat.from_function(self.apply, self.phi.dom_dim, REAL,
                                          dom_field=COMPLEX, cod_field=REAL)


def realify_map(phi: LinearMapMat, anti: AntiAutomorphism,
                scale: ThetaScale = ThetaScale()) -> RealifiedMap:
    """Build theta . phi . (Phi . *) for a complex-linear phi into M_k(C)."""
    if phi.linearity != COMPLEX:
        raise ValueError("realify_map expects a complex-linear map")
    if anti.dim != phi.dom_dim:
        raise ValueError("antiautomorphism dimension does not match the map's domain")
    return RealifiedMap(phi, anti, scale)


def theta_contraction_margin(x, scale: ThetaScale = ThetaScale()) -> float:
    """col_norm1(theta(x)); < 1 in paper mode for any nonzero x."""
    return col_norm1(theta(x, scale))
