"""Klein pairs, model geometries and reductive splittings."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numkit
from .errors import InvalidInputError, NotReductiveError
from .liegroups import MatrixLieGroup, SubgroupInclusion
from .numkit import DEFAULT_TOL, Subspace, Tolerances
from .report import CheckReport


@dataclass(frozen=True, eq=False)
class KleinPair:
    """A Lie algebra ``g`` with a candidate subalgebra given by the columns of
    ``h_coords`` (coordinates in the basis of ``g``). Closure is checked by
    ``check_klein_pair``, not at construction."""

    g: MatrixLieGroup
    h_coords: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h_coords, dtype=float).reshape(self.g.dim, -1)
        rank, _ = numkit.rank_nullspace(h)
        if rank != h.shape[1]:
            raise InvalidInputError("subalgebra generators are linearly dependent")
        object.__setattr__(self, "h_coords", h)

    @classmethod
    def from_inclusion(cls, incl: SubgroupInclusion) -> "KleinPair":
        return cls(incl.ambient, incl.algebra_injection)

    @property
    def h_dim(self) -> int:
        return self.h_coords.shape[1]


@dataclass(frozen=True, eq=False)
class ModelGeometry:
    """Klein pair plus an integration ``H`` of h and a representation
    ``rho(h) -> (dim g x dim g)`` extending Ad on h.

    ``embed`` maps H matrices into G when the model comes from a Klein
    geometry; it is only used by ``model_to_cartan``.
    """

    pair: KleinPair
    H: MatrixLieGroup
    rho: Callable[[np.ndarray], np.ndarray]
    embed: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""
    semidirect: bool = False

    def __post_init__(self):
        if self.H.dim != self.pair.h_dim:
            raise InvalidInputError("dim H does not match the subalgebra dimension")

    @classmethod
    def from_inclusion(cls, incl: SubgroupInclusion, name: str = "", semidirect: bool = False):
        G = incl.ambient
        embed = incl.embed
        return cls(KleinPair.from_inclusion(incl), incl.sub, lambda h: G.Ad(embed(h)),
                   embed, name or G.name, semidirect)

    @property
    def g(self) -> MatrixLieGroup:
        return self.pair.g


@dataclass(frozen=True, eq=False)
class ReductiveSplitting:
    """g = h + l with projections along the complement.

    ``l_frame`` keeps the caller's generators of l (used for chart sections);
    ``l_basis`` is an orthonormal basis of the same span.
    """

    h_coords: np.ndarray
    l_frame: np.ndarray
    l_basis: Subspace = field(init=False)
    pr_h: np.ndarray = field(init=False)
    pr_l: np.ndarray = field(init=False)
    h_part: np.ndarray = field(init=False, repr=False)
    l_part: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        h = np.asarray(self.h_coords, dtype=float)
        l = np.asarray(self.l_frame, dtype=float).reshape(h.shape[0], -1)
        full = np.hstack([h, l])
        if full.shape[0] != full.shape[1] or numkit.rank_nullspace(full)[0] != full.shape[0]:
            raise NotReductiveError("candidate is not a complement of h in g")
        inv = np.linalg.inv(full)
        d = h.shape[1]
        object.__setattr__(self, "l_frame", l)
        object.__setattr__(self, "l_basis", Subspace.span(l))
        object.__setattr__(self, "h_part", inv[:d])
        object.__setattr__(self, "l_part", inv[d:])
        object.__setattr__(self, "pr_h", h @ inv[:d])
        object.__setattr__(self, "pr_l", l @ inv[d:])

    @property
    def l_dim(self) -> int:
        return self.l_frame.shape[1]


def check_klein_pair(pair: KleinPair, tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    """Subalgebra closure of h on all pairs of generators."""
    g = pair.g
    h = pair.h_coords
    span = Subspace.span(h, tol=tol)
    worst, witness = 0.0, None
    for i in range(h.shape[1]):
        for j in range(i + 1, h.shape[1]):
            b = g.bracket_coords(h[:, i], h[:, j])
            r = span.contains(b)
            if r > worst or witness is None:
                worst, witness = max(worst, r), {"i": i, "j": j, "bracket": b}
    return CheckReport("klein_pair_closure", "h is closed under the bracket of g",
                       h.shape[1] * (h.shape[1] - 1) // 2, worst, tol.exact_tol, witness)


def check_model_geometry(m: ModelGeometry, samples: int = 50, rng: np.random.Generator | None = None,
                         tol: Tolerances = DEFAULT_TOL) -> list[CheckReport]:
    """Sampled homomorphism property of rho and agreement with Ad on h."""
    rng = np.random.default_rng(0) if rng is None else rng
    H, ih = m.H, m.pair.h_coords
    eye = np.eye(m.g.dim)
    hom_worst, hom_wit = float(np.max(np.abs(m.rho(H.identity) - eye))), {"identity": True}
    ad_worst, ad_wit = 0.0, None
    for _ in range(samples):
        c1, c2 = H.random_coords(rng), H.random_coords(rng)
        h1, h2 = H.exp(c1), H.exp(c2)
        r = float(np.max(np.abs(m.rho(h1 @ h2) - m.rho(h1) @ m.rho(h2))))
        if r > hom_worst:
            hom_worst, hom_wit = r, {"h1": c1, "h2": c2}
        r = float(np.max(np.abs(m.rho(h1) @ ih - ih @ H.Ad(h1))))
        if r >= ad_worst:
            ad_worst, ad_wit = r, {"h": c1}
    return [
        CheckReport("rho_homomorphism", "rho is a representation of H", samples + 1,
                    hom_worst, tol.exact_tol, hom_wit),
        CheckReport("rho_extends_adjoint", "rho restricted to h is the adjoint action", samples,
                    ad_worst, tol.exact_tol, ad_wit),
    ]


def _invariant_projection(g: MatrixLieGroup, h: np.ndarray, tol: Tolerances) -> np.ndarray | None:
    """Solve for Q (d x D) with Q h = I and h Q ad_X = ad_X h Q for X in h.

    P = h Q is then a projection onto h commuting with ad_h, so ker P is an
    ad_h-invariant complement. Linear in Q; returns None when inconsistent.
    """
    D, d = h.shape
    rows, rhs = [], []
    # Q h = I: (h^T kron I_d) vec(Q) = vec(I), vec column-major
    rows.append(np.kron(h.T, np.eye(d)))
    rhs.append(np.eye(d).ravel(order="F"))
    for k in range(d):
        adx = g.ad(h[:, k])
        # h Q adx - adx h Q = 0
        rows.append(np.kron(adx.T, h) - np.kron(np.eye(D), adx @ h))
        rhs.append(np.zeros(D * D))
    a = np.vstack(rows)
    b = np.concatenate(rhs)
    q, *_ = np.linalg.lstsq(a, b, rcond=None)
    if np.linalg.norm(a @ q - b) > 1e-8 * max(1.0, np.linalg.norm(b)):
        return None
    return q.reshape((d, D), order="F")


def reductive_split(m: ModelGeometry, candidate=None, samples: int = 50,
                    rng: np.random.Generator | None = None,
                    tol: Tolerances = DEFAULT_TOL) -> ReductiveSplitting:
    """Find or validate an h-invariant complement l.

    Without a candidate the infinitesimal condition [h, l] in l is solved as a
    linear system; either way finite rho(H)-invariance is then sampled.
    """
    g, h = m.g, m.pair.h_coords
    if candidate is None:
        q = _invariant_projection(g, h, tol)
        if q is None:
            raise NotReductiveError(f"{m.name}: no ad(h)-invariant complement exists")
        _, kernel = numkit.rank_nullspace(h @ q, tol)
        l = kernel.basis
    else:
        l = np.asarray(candidate, dtype=float).reshape(g.dim, -1)
    split = ReductiveSplitting(h, l)
    for k in range(h.shape[1]):
        image = g.ad(h[:, k]) @ split.l_frame
        if np.max(np.abs(split.pr_h @ image), initial=0.0) > tol.exact_tol * max(1.0, np.abs(image).max()):
            raise NotReductiveError("complement is not invariant under ad(h)")
    rng = np.random.default_rng(0) if rng is None else rng
    for _ in range(samples):
        image = m.rho(m.H.random_element(rng)) @ split.l_frame
        if np.max(np.abs(split.pr_h @ image), initial=0.0) > tol.exact_tol * max(1.0, np.abs(image).max()):
            raise NotReductiveError("complement is not invariant under rho(H)")
    return split
