"""Typical matrix representations of the classical Lie algebras A_r, B_r, C_r, D_r.

The representation space is ordered |e_1>, ..., |e_r>, (|0> for B), |-e_r>, ...,
|-e_1>, so that the partner of index k (1-based) is k̄ = N + 1 - k.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from .report import VerificationReport

SERIES = ("A", "B", "C", "D")


@dataclass(frozen=True)
class AlgebraSeries:
    series: str
    rank: int

    def __post_init__(self):
        if self.series not in SERIES:
            raise ValueError(f"unknown series {self.series!r}; expected one of {SERIES}")
        min_rank = 2 if self.series in ("C", "D") else 1
        if int(self.rank) != self.rank or self.rank < min_rank:
            raise ValueError(f"{self.series}_r requires integer rank >= {min_rank}, got {self.rank}")

    @property
    def rep_dim(self) -> int:
        r = self.rank
        return {"A": r + 1, "B": 2 * r + 1, "C": 2 * r, "D": 2 * r}[self.series]

    @property
    def n_coords(self) -> int:
        """Dimension of the Euclidean space holding roots and weights."""
        return self.rank + 1 if self.series == "A" else self.rank

    def __str__(self):
        return f"{self.series}{self.rank}"


@dataclass(frozen=True)
class Root:
    coords: tuple
    positive: bool

    @classmethod
    def from_coords(cls, coords) -> "Root":
        coords = tuple(Fraction(c) for c in coords)
        first = next(c for c in coords if c != 0)
        return cls(coords, first > 0)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coords), not self.positive)

    def __add__(self, other):
        return tuple(a + b for a, b in zip(self.coords, other.coords))

    def dot(self, other) -> Fraction:
        oc = other.coords if isinstance(other, Root) else other
        return sum((Fraction(a) * Fraction(b) for a, b in zip(self.coords, oc)), Fraction(0))

    @property
    def norm2(self) -> Fraction:
        return self.dot(self)

    def evaluate(self, J) -> float:
        """alpha(J) for a Cartan element given by its coordinates."""
        return float(sum(float(c) * float(j) for c, j in zip(self.coords, J)))

    @property
    def vector(self) -> np.ndarray:
        return np.array([float(c) for c in self.coords])

    @property
    def label(self) -> str:
        parts = []
        for k, c in enumerate(self.coords, start=1):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else str(mag)
            parts.append(f"{sign}{coef}e{k}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class CartanElement:
    coords: tuple
    matrix: np.ndarray = field(repr=False)
    regular: bool

    @property
    def diag(self) -> np.ndarray:
        return np.diag(self.matrix).copy()


@dataclass(frozen=True, eq=False)
class AlgebraBasis:
    series_rank: AlgebraSeries
    rep_dim: int
    roots: tuple
    cartan_generators: tuple = field(repr=False)
    root_vectors: MappingProxyType = field(repr=False)
    s_matrix: np.ndarray | None = field(repr=False)
    sigma: int | None
    fundamental_weights: tuple = field(repr=False)

    @property
    def rank(self) -> int:
        return self.series_rank.rank

    @property
    def series(self) -> str:
        return self.series_rank.series

    @property
    def positive_roots(self) -> list:
        return [a for a in self.roots if a.positive]

    def root(self, coords) -> Root:
        key = tuple(Fraction(c) for c in coords)
        for a in self.roots:
            if a.coords == key:
                return a
        raise KeyError(f"{coords} is not a root of {self.series_rank}")

    def E(self, root) -> np.ndarray:
        if not isinstance(root, Root):
            root = self.root(root)
        return self.root_vectors[root]

    def H(self, coords) -> np.ndarray:
        """sum_k coords[k] H_{e_k}."""
        out = np.zeros((self.rep_dim, self.rep_dim), dtype=complex)
        for c, Hk in zip(coords, self.cartan_generators):
            out = out + float(c) * Hk
        return out

    def H_root(self, root: Root) -> np.ndarray:
        return self.H(root.coords)

    @property
    def s_inverse(self) -> np.ndarray | None:
        if self.s_matrix is None:
            return None
        return self.sigma * self.s_matrix

    def basis_weights(self) -> list:
        return _basis_weights(self.series_rank)

    def generators(self):
        yield from self.cartan_generators
        yield from (self.root_vectors[a] for a in self.roots)


def _unit(N, i, j):
    M = np.zeros((N, N), dtype=complex)
    M[i, j] = 1.0
    return M


def _basis_weights(sr: AlgebraSeries) -> list:
    r, N, d = sr.rank, sr.rep_dim, sr.n_coords
    if sr.series == "A":
        return [tuple(Fraction(int(i == k)) for i in range(d)) for k in range(N)]
    wts = [None] * N
    for k in range(r):
        e = tuple(Fraction(int(i == k)) for i in range(d))
        wts[k] = e
        wts[N - 1 - k] = tuple(-c for c in e)
    if sr.series == "B":
        wts[r] = tuple(Fraction(0) for _ in range(d))
    return wts


def _root_coords(sr: AlgebraSeries) -> list:
    r, d = sr.rank, sr.n_coords

    def e(*pairs):
        v = [0] * d
        for k, c in pairs:
            v[k] += c
        return tuple(v)

    pos = []
    if sr.series == "A":
        for i, j in itertools.combinations(range(d), 2):
            pos.append(e((i, 1), (j, -1)))
    else:
        for i, j in itertools.combinations(range(r), 2):
            pos.append(e((i, 1), (j, -1)))
            pos.append(e((i, 1), (j, 1)))
        if sr.series == "B":
            pos.extend(e((k, 1)) for k in range(r))
        elif sr.series == "C":
            pos.extend(e((k, 2)) for k in range(r))
    neg = [tuple(-c for c in v) for v in pos]
    return pos + neg


def _s_matrix(sr: AlgebraSeries):
    r, N = sr.rank, sr.rep_dim
    if sr.series == "A":
        return None, None
    S = np.zeros((N, N), dtype=complex)
    for k in range(1, r + 1):
        kb = N + 1 - k
        sgn = (-1) ** (k + 1)
        S[k - 1, kb - 1] += sgn
        S[kb - 1, k - 1] += -sgn if sr.series == "C" else sgn
    if sr.series == "B":
        S[r, r] = (-1) ** r
    return S, (-1 if sr.series == "C" else 1)


def _fundamental_weights(sr: AlgebraSeries) -> tuple:
    r, d = sr.rank, sr.n_coords
    half = Fraction(1, 2)

    def partial(j):
        return tuple(Fraction(int(i < j)) for i in range(d))

    if sr.series in ("A", "C"):
        return tuple(partial(j) for j in range(1, r + 1))
    if sr.series == "B":
        ws = [partial(j) for j in range(1, r)]
        ws.append(tuple(half for _ in range(d)))
        return tuple(ws)
    ws = [partial(j) for j in range(1, r - 1)]
    ws.append(tuple(half if i < r - 1 else -half for i in range(d)))
    ws.append(tuple(half for _ in range(d)))
    return tuple(ws)


def _freeze(M):
    M = np.array(M, dtype=complex)
    M.setflags(write=False)
    return M


def build_algebra(series_rank, rank=None) -> AlgebraBasis:
    """Build the Cartan–Weyl basis of the typical representation.

    Root vectors come from a matrix unit E_ij with wt(i) - wt(j) = alpha,
    symmetrised by the algebra involution X -> -S X^T S^{-1} (B, C, D), and
    scaled so that [E_alpha, E_alpha^T] = H_alpha.  Negative root vectors are
    transposes of the positive ones.

    >>> b = build_algebra("C", 2)
    >>> b.rep_dim, len(b.roots)
    (4, 8)
    """
    if isinstance(series_rank, str):
        series_rank = AlgebraSeries(series_rank, rank)
    sr = series_rank
    N = sr.rep_dim
    S, sigma = _s_matrix(sr)
    wts = _basis_weights(sr)

    if sr.series == "A":
        H = [_unit(N, k, k) for k in range(N)]
    else:
        H = [_unit(N, k, k) - _unit(N, N - 1 - k, N - 1 - k) for k in range(sr.rank)]

    roots = [Root.from_coords(c) for c in _root_coords(sr)]
    vectors = {}
    for a in roots:
        if not a.positive:
            continue
        i, j = next(
            (i, j)
            for i in range(N)
            for j in range(N)
            if tuple(p - q for p, q in zip(wts[i], wts[j])) == a.coords
        )
        X = _unit(N, i, j)
        if S is not None:
            X = X - S @ X.T @ np.linalg.inv(S)
        C = X @ X.T - X.T @ X
        Ha = sum(float(c) * Hk for c, Hk in zip(a.coords, H))
        scale2 = np.vdot(Ha, Ha).real / np.vdot(C, Ha).real
        Ea = np.sqrt(scale2) * X
        vectors[a] = _freeze(Ea)
        vectors[-a] = _freeze(Ea.T)

    return AlgebraBasis(
        series_rank=sr,
        rep_dim=N,
        roots=tuple(roots),
        cartan_generators=tuple(_freeze(h) for h in H),
        root_vectors=MappingProxyType(vectors),
        s_matrix=None if S is None else _freeze(S.real.astype(complex)),
        sigma=sigma,
        fundamental_weights=_fundamental_weights(sr),
    )


def commutator(X, Y):
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape[-2:] != Y.shape[-2:] or X.shape[-1] != X.shape[-2]:
        raise ValueError(f"commutator needs equal square matrices, got {X.shape} and {Y.shape}")
    return X @ Y - Y @ X


def cartan_element(basis: AlgebraBasis, coords, require_regular: bool = True) -> CartanElement:
    coords = tuple(float(c) for c in coords)
    if len(coords) != basis.series_rank.n_coords:
        raise ValueError(
            f"{basis.series_rank} needs {basis.series_rank.n_coords} Cartan coordinates, got {len(coords)}"
        )
    regular = all(a.evaluate(coords) > 0 for a in basis.positive_roots)
    if require_regular and not regular:
        bad = [a.label for a in basis.positive_roots if a.evaluate(coords) <= 0]
        raise ValueError(f"J = {coords} is not regular: alpha(J) <= 0 for {bad}")
    return CartanElement(coords, _freeze(basis.H(coords)), regular)


def _diag_gaps(J: CartanElement):
    d = np.diag(J.matrix)
    return d[:, None] - d[None, :]


def projector_p0(basis: AlgebraBasis, J: CartanElement, X):
    """Component of X in g/h: the off-diagonal part in the typical representation."""
    X = np.array(X, dtype=complex)
    idx = np.arange(basis.rep_dim)
    X[..., idx, idx] = 0.0
    return X


def ad_j_inverse(basis: AlgebraBasis, J: CartanElement, X, tol: float = 1e-12):
    """Solve [J, Y] = X for Y in g/h.

    Each root component is divided by alpha(J); X must have no Cartan
    (diagonal) part.
    """
    if not J.regular:
        raise ValueError("ad_J is not invertible for non-regular J")
    X = np.asarray(X, dtype=complex)
    diag = np.diagonal(X, axis1=-2, axis2=-1)
    scale = max(1.0, float(np.abs(X).max(initial=0.0)))
    if np.abs(diag).max(initial=0.0) > tol * scale:
        raise ValueError("ad_J^{-1} applied to a matrix with a nonzero Cartan component")
    gaps = _diag_gaps(J)
    np.fill_diagonal(gaps, 1.0)
    Y = X / gaps
    idx = np.arange(basis.rep_dim)
    Y[..., idx, idx] = 0.0
    return Y


def ad_j(J: CartanElement, X):
    return _diag_gaps(J) * np.asarray(X, dtype=complex)


def root_components(basis: AlgebraBasis, M) -> dict:
    """Coefficients of M along each root vector (Frobenius projection)."""
    M = np.asarray(M)
    out = {}
    for a in basis.roots:
        Ea = basis.root_vectors[a]
        out[a] = np.einsum("ij,...ij->...", Ea.conj(), M) / np.vdot(Ea, Ea).real
    return out


def verify_cartan_weyl(basis: AlgebraBasis, tol: float = 1e-12) -> VerificationReport:
    """Check every basis identity; one report entry per identity, max deviation each."""
    rep = VerificationReport()
    roots = basis.roots
    root_set = {a.coords for a in roots}
    H = basis.cartan_generators
    E = basis.root_vectors

    dev = 0.0
    for k, Hk in enumerate(H):
        ek = tuple(int(i == k) for i in range(basis.series_rank.n_coords))
        for a in roots:
            dev = max(dev, np.abs(commutator(Hk, E[a]) - float(a.dot(ek)) * E[a]).max())
    rep.add("cartan_action", dev, tol)

    dev = max((np.abs(commutator(Hj, Hk)).max() for Hj in H for Hk in H), default=0.0)
    rep.add("cartan_abelian", dev, tol)

    dev = max(np.abs(commutator(E[a], E[-a]) - basis.H_root(a)).max() for a in roots)
    rep.add("root_pair_commutator", dev, tol)

    dev = max(np.abs(E[-a] - E[a].T).max() for a in roots)
    rep.add("transpose_pairing", dev, tol)

    dev = 0.0
    for a in roots:
        Ha = basis.H_root(a)
        lhs = np.trace(E[-a] @ E[a]) * float(a.norm2)
        dev = max(dev, abs(lhs - np.trace(Ha @ Ha)))
    rep.add("trace_normalization", dev, tol, note="tr(E_-a E_a)(a,a) = tr(H_a H_a)")

    closure = 0.0
    antisym = 0.0
    for a, b in itertools.product(roots, roots):
        s = a + b
        C = commutator(E[a], E[b])
        if all(c == 0 for c in s):
            continue
        if s not in root_set:
            closure = max(closure, np.abs(C).max())
            continue
        ab = basis.root(s)
        Eab = E[ab]
        n_ab = np.vdot(Eab, C) / np.vdot(Eab, Eab).real
        closure = max(closure, np.abs(C - n_ab * Eab).max())
        Cm = commutator(E[-a], E[-b])
        Em = E[-ab]
        n_mm = np.vdot(Em, Cm) / np.vdot(Em, Em).real
        antisym = max(antisym, abs(n_mm + n_ab))
    rep.add("root_closure", closure, tol)
    rep.add("structure_constant_antisymmetry", antisym, tol)

    expected = {
        "A": lambda r: r * (r + 1),
        "B": lambda r: 2 * r * r,
        "C": lambda r: 2 * r * r,
        "D": lambda r: 2 * r * (r - 1),
    }[basis.series](basis.rank)
    rep.add("root_count", abs(len(roots) - expected), 0.0)

    if basis.s_matrix is not None:
        S = basis.s_matrix
        Sinv = np.linalg.inv(S)
        dev = max(np.abs(Sinv - S.T).max(), np.abs(S.T - basis.sigma * S).max())
        rep.add("s_matrix_identities", dev, tol)
        dev = max(np.abs(S @ G.T @ Sinv + G).max() for G in basis.generators())
        rep.add("algebra_membership", dev, tol)
    return rep


def _mat_to_json(M):
    M = np.asarray(M)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _mat_from_json(data):
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def _frac_json(c: Fraction):
    return int(c) if c.denominator == 1 else float(c)


def basis_to_dict(basis: AlgebraBasis) -> dict:
    return {
        "series": basis.series,
        "rank": basis.rank,
        "rep_dim": basis.rep_dim,
        "sigma": basis.sigma,
        "roots": [[_frac_json(c) for c in a.coords] for a in basis.roots],
        "cartan_generators": [_mat_to_json(h) for h in basis.cartan_generators],
        "root_vectors": [_mat_to_json(basis.root_vectors[a]) for a in basis.roots],
        "s_matrix": None if basis.s_matrix is None else _mat_to_json(basis.s_matrix),
        "fundamental_weights": [[_frac_json(c) for c in w] for w in basis.fundamental_weights],
    }


def basis_from_dict(d: dict) -> AlgebraBasis:
    sr = AlgebraSeries(d["series"], int(d["rank"]))
    roots = [Root.from_coords(Fraction(c).limit_denominator() for c in coords) for coords in d["roots"]]
    vectors = {a: _freeze(_mat_from_json(m)) for a, m in zip(roots, d["root_vectors"])}
    return AlgebraBasis(
        series_rank=sr,
        rep_dim=int(d["rep_dim"]),
        roots=tuple(roots),
        cartan_generators=tuple(_freeze(_mat_from_json(h)) for h in d["cartan_generators"]),
        root_vectors=MappingProxyType(vectors),
        s_matrix=None if d["s_matrix"] is None else _freeze(_mat_from_json(d["s_matrix"])),
        sigma=d["sigma"],
        fundamental_weights=tuple(
            tuple(Fraction(c).limit_denominator() for c in w) for w in d["fundamental_weights"]
        ),
    )
