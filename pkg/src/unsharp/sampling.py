"""Seeded random instances for the property suites."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import interval as ir
from . import order
from .contexts import Context, ContextFragment, StarHom, embedding_hom, fragment_build, jacobi
from .dasein import GlobalSection


def rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_rational(g: np.random.Generator, lo: int = -10, hi: int = 10, den: int = 8) -> Fraction:
    return Fraction(int(g.integers(lo * den, hi * den + 1)), int(g.integers(1, den + 1)))


def random_interval(g: np.random.Generator) -> ir.RatInterval:
    a, b = random_rational(g), random_rational(g)
    return ir.RatInterval(min(a, b), max(a, b))


def random_poset(g: np.random.Generator, max_size: int = 7) -> order.FinitePoset:
    """Random DAG on a shuffled list of labels, closed transitively."""
    n = int(g.integers(1, max_size + 1))
    labels = [f"x{i}" for i in range(n)]
    perm = g.permutation(n)
    density = g.uniform(0.1, 0.7)
    edges = [
        (labels[perm[i]], labels[perm[j]])
        for i in range(n) for j in range(i + 1, n)
        if g.random() < density
    ]
    return order.validate_poset(labels, edges)


def random_unitary(g: np.random.Generator, n: int) -> np.ndarray:
    z = g.normal(size=(n, n)) + 1j * g.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_permutation_matrix(g: np.random.Generator, n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)[:, g.permutation(n)]


def random_groups(g: np.random.Generator, n: int) -> list[list[int]]:
    """Random set partition of ``0..n-1``."""
    labels = g.integers(0, n, size=n)
    return [np.nonzero(labels == k)[0].tolist() for k in np.unique(labels)]


def coarsen(g: np.random.Generator, groups: list[list[int]]) -> list[list[int]]:
    merge = random_groups(g, len(groups))
    return [sorted(i for b in block for i in groups[b]) for block in merge]


def random_fragment(g: np.random.Generator, dim: int, max_size: int = 12) -> ContextFragment:
    """Meet-closed fragment with bottom from 2-4 contexts in one or two random bases."""
    while True:
        bases = [random_unitary(g, dim) for _ in range(int(g.integers(1, 3)))]
        vs = []
        for _ in range(int(g.integers(2, 5))):
            u = bases[int(g.integers(len(bases)))]
            groups = random_groups(g, dim)
            vs.append(Context.from_basis(u, groups))
            if g.random() < 0.5:
                vs.append(Context.from_basis(u, coarsen(g, groups)))
        frag = fragment_build(vs)
        if len(frag.contexts) <= max_size:
            return frag


def random_diagonal_chain(g: np.random.Generator, dim: int) -> list[Context]:
    """Contexts ``V_1 ⊑ ... ⊑ V_k`` obtained by successive refinement of diagonal partitions."""
    groups = [list(range(dim))]
    chain = [Context.diagonal(groups)]
    while len(groups) < dim and g.random() < 0.8:
        splittable = [k for k, b in enumerate(groups) if len(b) > 1]
        k = int(g.choice(splittable))
        b = list(g.permutation(groups[k]))
        cut = int(g.integers(1, len(b)))
        groups = groups[:k] + [sorted(b[:cut]), sorted(b[cut:])] + groups[k + 1:]
        chain.append(Context.diagonal(groups))
    return chain


def random_hom(g: np.random.Generator, source_blocks: tuple[int, ...], max_mult: int = 2,
               permutation: bool | None = None, min_mult: int = 1) -> StarHom:
    """``A ↦ W (⊕ copies of the blocks) W^H`` with ``W`` a permutation or a random unitary."""
    mults = [int(g.integers(min_mult, max_mult + 1)) for _ in source_blocks]
    if sum(b * k for b, k in zip(source_blocks, mults)) == 0:
        mults[0] = 1
    n = sum(b * k for b, k in zip(source_blocks, mults))
    if permutation is None:
        permutation = bool(g.random() < 0.5)
    w = random_permutation_matrix(g, n) if permutation else random_unitary(g, n)
    return embedding_hom(source_blocks, mults, w)


def random_block_context(g: np.random.Generator, blocks: tuple[int, ...]) -> Context:
    """Random context inside ``M_{n1} ⊕ ... ⊕ M_{nk}``."""
    n = sum(blocks)
    u = np.zeros((n, n), dtype=complex)
    start = 0
    for b in blocks:
        u[start:start + b, start:start + b] = random_unitary(g, b)
        start += b
    return Context.from_basis(u, random_groups(g, n))


def random_hermitian(g: np.random.Generator, dim: int) -> tuple[np.ndarray, list[Fraction]]:
    """``U diag(s) U^H`` with a random unitary and a small rational spectrum (repeats allowed)."""
    pool = [Fraction(k, 2) for k in range(-6, 7)]
    spectrum = [pool[int(i)] for i in g.integers(0, len(pool), size=dim)]
    u = random_unitary(g, dim) if g.random() < 0.7 else random_permutation_matrix(g, dim)
    a = u @ np.diag([float(s) for s in spectrum]).astype(complex) @ u.conj().T
    return (a + a.conj().T) / 2, spectrum


def operator_fragment(g: np.random.Generator, a: np.ndarray, max_size: int = 12) -> ContextFragment:
    """Fragment around an operator: its eigenbasis contexts, a random basis, meets and bottom."""
    dim = a.shape[0]
    while True:
        _, vecs = jacobi(a)
        vs = [Context.from_basis(vecs, [[i] for i in range(dim)])]
        vs.append(Context.from_basis(vecs, coarsen(g, [[i] for i in range(dim)])))
        vs.append(Context.from_basis(random_unitary(g, dim), random_groups(g, dim)))
        if g.random() < 0.5:
            vs.append(Context.diagonal(random_groups(g, dim)))
        frag = fragment_build(vs)
        if len(frag.contexts) <= max_size:
            return frag


def random_section(g: np.random.Generator, poset: order.FinitePoset) -> GlobalSection:
    """Order-preserving section: running max of random lower ends and running min of upper ends."""
    base_lo = {x: Fraction(int(g.integers(0, 41)), 4) for x in poset.elements}
    base_hi = {x: Fraction(int(g.integers(40, 81)), 4) for x in poset.elements}
    out = {}
    for x in poset.elements:
        below = poset.down(x)
        out[x] = ir.RatInterval(max(base_lo[y] for y in below), min(base_hi[y] for y in below))
    return GlobalSection(poset, out)


def directed_section_family(g: np.random.Generator, poset: order.FinitePoset, k: int = 3) -> list[GlobalSection]:
    """``k`` random sections closed under pairwise labelwise intersection."""
    fam = [random_section(g, poset) for _ in range(k)]
    changed = True
    while changed:
        changed = False
        for s in list(fam):
            for t in list(fam):
                glb = GlobalSection(poset, {x: ir.sup_directed([s[x], t[x]]) for x in s.domain})
                if not any(glb.leq(u) and u.leq(glb) for u in fam):
                    fam.append(glb)
                    changed = True
    return fam
