"""Correspondence between coordinate vectors and polynomial factorizations.

Fix a pattern for degree n.  The coordinate space F_q^n is tiled by one
window of length i for each part of size i, in increasing size order; the
window starting at offset ell carries the element
alpha = x_ell theta + x_(ell+1) theta^q + ... over F_(q^i), written in
the normal basis of that layer.  Applying the i Galois automorphisms to
alpha gives i root values per window, and

    G(x, T) = prod over windows, prod over sigma (T - sigma(alpha))

is a monic degree-n polynomial with coefficients in F_q.  A vector is
"typed" when each window's translates are pairwise distinct, i.e. alpha
has a full Galois orbit; typed vectors are exactly those whose G realizes
the pattern, and each square-free polynomial with the pattern is hit by
exactly w (the pattern weight) typed vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ._dense import pmul
from .errors import BudgetError, GaloisDescentError
from .patterns import Pattern
from .poly import MonicPoly

SCAN_BUDGET = 10 ** 7


@dataclass(frozen=True)
class PatternLayout:
    pattern: Pattern
    windows: tuple   # ((size, start), ...) in increasing (size, copy) order

    def window_of(self, position: int):
        """Index of the window containing a 0-based coordinate position."""
        for w, (size, start) in enumerate(self.windows):
            if start <= position < start + size:
                return w
        raise IndexError(position)


def layout(pattern: Pattern) -> PatternLayout:
    """Window sizes and start offsets; windows tile 0..n-1 in order."""
    windows = []
    start = 0
    for i, c in enumerate(pattern.counts, start=1):
        for _ in range(c):
            windows.append((i, start))
            start += i
    assert start == pattern.n
    return PatternLayout(pattern, tuple(windows))


def window_start(pattern: Pattern, i: int, j: int) -> int:
    """Start offset of the j-th (1-based) window of size i:
    sum of k*counts[k-1] below i, plus (j-1)*i."""
    if not 1 <= j <= pattern.counts[i - 1]:
        raise ValueError(f"no window ({i}, {j}) in this pattern")
    below = sum(k * c for k, c in enumerate(pattern.counts[:i - 1], start=1))
    return below + (j - 1) * i


def is_type_lambda(x, pattern: Pattern) -> bool:
    """True iff every window's cyclic shifts are pairwise distinct."""
    x = tuple(x)
    if len(x) != pattern.n:
        raise ValueError("vector length must equal the pattern degree")
    for size, start in layout(pattern).windows:
        win = x[start:start + size]
        shifts = {win[k:] + win[:k] for k in range(size)}
        if len(shifts) != size:
            return False
    return True


class RootVector:
    """A coordinate vector together with its per-window root values.

    y holds, window by window, the Galois orbit of the window's element:
    y[w][k] = sigma^k(alpha_w) as a code in the window's layer.
    """

    def __init__(self, x, pattern: Pattern, bank):
        self.x = tuple(x)
        self.pattern = pattern
        self.layout = layout(pattern)
        ys = []
        for size, start in self.layout.windows:
            ctx = bank.get(size)
            ys.append(tuple(_window_orbit(ctx, self.x[start:start + size])))
        self.y = tuple(ys)

    def typed(self) -> bool:
        return all(len(set(win)) == len(win) for win in self.y)


def _window_orbit(ctx, coords):
    """Galois orbit of alpha = sum coords[h] * theta^(q^h), via the
    circulant conjugate matrix: row k is sigma^k applied to alpha."""
    add, mul = ctx.add, ctx.mul
    orbit = []
    for row in ctx.A:
        acc = 0
        for c, a in zip(coords, row):
            if c:
                acc = add(acc, mul(c, a))
        orbit.append(acc)
    return orbit


def build_G(pattern: Pattern, x, bank) -> MonicPoly:
    """The monic degree-n image of x: product over windows of the full
    conjugate product of the window element.

    Each window product is computed inside its own layer F_(q^i); its
    coefficients must be Frobenius-fixed, and any failure to land in F_q
    raises GaloisDescentError (a corrupted-tables trap).
    """
    x = tuple(x)
    if len(x) != pattern.n:
        raise ValueError("vector length must equal the pattern degree")
    base = bank.base
    out = [1]
    for size, start in layout(pattern).windows:
        ctx = bank.get(size)
        orbit = _window_orbit(ctx, x[start:start + size])
        win_poly = [1]
        for root in orbit:
            win_poly = pmul(ctx, win_poly, [ctx.neg(root), 1])
        down = []
        for c in win_poly:
            if not ctx.in_base(c):
                raise GaloisDescentError(
                    f"window product coefficient {c} is not in F_q")
            down.append(c)
        out = pmul(base, out, down)
    return MonicPoly.from_full(base, out)


def fiber_count(f: MonicPoly, pattern: Pattern, bank,
                budget: int = SCAN_BUDGET) -> int:
    """Number of vectors x with G(x, T) = f, by exhaustive scan."""
    if f.degree != pattern.n:
        raise ValueError("degree mismatch between f and the pattern")
    total = bank.base.q ** pattern.n
    if total > budget:
        raise BudgetError(f"scan size {total} exceeds budget {budget}")
    target = f.coeffs
    count = 0
    for x in _all_vectors(bank.base.q, pattern.n):
        if build_G(pattern, x, bank).coeffs == target:
            count += 1
    return count


def fiber_map(pattern: Pattern, bank, budget: int = SCAN_BUDGET):
    """One scan over F_q^n returning (typed_fibers, untyped_count), where
    typed_fibers maps the coeff tuple of G(x) to the number of typed x."""
    q = bank.base.q
    total = q ** pattern.n
    if total > budget:
        raise BudgetError(f"scan size {total} exceeds budget {budget}")
    fibers: dict[tuple, int] = {}
    untyped = 0
    for x in _all_vectors(q, pattern.n):
        if not is_type_lambda(x, pattern):
            untyped += 1
            continue
        key = build_G(pattern, x, bank).coeffs
        fibers[key] = fibers.get(key, 0) + 1
    return fibers, untyped


def _all_vectors(q, n):
    return product(range(q), repeat=n)


def verify_membership_equivalence(fam, pattern: Pattern, bank,
                        budget: int = SCAN_BUDGET):
    """Check, over every typed vector, that G(x) lies in the family iff
    the reduced symmetric system vanishes at x.

    Returns (ok, counterexample) where the counterexample is None or a
    dict with the offending vector and both verdicts.
    """
    q = bank.base.q
    total = q ** pattern.n
    if total > budget:
        raise BudgetError(f"scan size {total} exceeds budget {budget}")
    from .variety import eval_R, sym_system
    sys_ = sym_system(fam, pattern, bank)
    for x in _all_vectors(q, pattern.n):
        if not is_type_lambda(x, pattern):
            continue
        g = build_G(pattern, x, bank)
        in_family = fam.contains_coeffs(g.full())
        on_variety = all(v == 0 for v in eval_R(sys_, x))
        if in_family != on_variety:
            return False, {"x": tuple(x), "in_family": in_family,
                           "on_variety": on_variety}
    return True, None
