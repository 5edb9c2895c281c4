"""Decomposition of small finite abelian groups given by explicit multiplication.

Groups here are tiny (ray class groups of desk-scale moduli), so we can afford
the naive approach: find an element of maximal order in the current quotient,
correct it to have that exact order in the group, split off the cyclic factor,
repeat.  The result is a generator list with invariants d_1 >= d_2 >= ... and
an additive discrete log on exponent vectors.
"""

from __future__ import annotations

from math import gcd, lcm


class FiniteAbelianGroup:
    """A finite abelian group over hashable element keys.

    ``mul`` must be a total commutative associative operation on the keys.
    """

    def __init__(self, elements, mul, identity):
        self.elements = list(elements)
        self.mul = mul
        self.identity = identity
        self.order = len(self.elements)
        self.generators: list = []
        self.invariants: list[int] = []
        self._dlog: dict = {}
        self._decompose()

    def _pow(self, g, n):
        x = self.identity
        b = g
        while n:
            if n & 1:
                x = self.mul(x, b)
            b = self.mul(b, b)
            n >>= 1
        return x

    def _quotient_order(self, g, covered):
        x = g
        n = 1
        while x not in covered:
            x = self.mul(x, g)
            n += 1
        return n

    def _try_correct(self, g, n, covered):
        """Replace g by g*h^-1 with h in the covered subgroup so that the
        corrected element has exact order n; returns None if impossible."""
        c0 = self._pow(g, n)
        vec = covered[c0]
        # solve n*a_i == v_i mod d_i coordinatewise
        adj = self.identity
        for a_i_target, (gen, d) in zip(vec, zip(self.generators, self.invariants)):
            gg = gcd(n, d)
            if a_i_target % gg != 0:
                return None
            a = (a_i_target // gg * pow(n // gg, -1, d // gg)) % (d // gg) if d != gg else 0
            adj = self.mul(adj, self._pow(gen, a))
        # g' = g * adj^{-1}, with adj^{-1} = adj^(o-1) for o = exponent so far
        o = lcm(*self.invariants) if self.invariants else 1
        inv_adj = self._pow(adj, o - 1)
        gp = self.mul(g, inv_adj)
        if self._pow(gp, n) != self.identity:
            return None
        return gp

    def _decompose(self):
        covered = {self.identity: ()}
        while len(covered) < self.order:
            best_n = 1
            candidates = []
            for g in self.elements:
                if g in covered:
                    continue
                n = self._quotient_order(g, covered)
                if n > best_n:
                    best_n, candidates = n, [g]
                elif n == best_n:
                    candidates.append(g)
            chosen = None
            for g in candidates:
                gp = self._try_correct(g, best_n, covered)
                if gp is not None:
                    chosen = gp
                    break
            if chosen is None:
                raise ValueError("abelian decomposition failed; not a group?")
            self.generators.append(chosen)
            self.invariants.append(best_n)
            new_covered = {}
            for e, vec in covered.items():
                x = e
                for j in range(best_n):
                    new_covered[x] = vec + (j,)
                    x = self.mul(x, chosen)
            covered = new_covered
        k = len(self.generators)
        self._dlog = {e: tuple(v) + (0,) * (k - len(v)) for e, v in covered.items()}

    @property
    def exponent(self) -> int:
        return lcm(*self.invariants) if self.invariants else 1

    def dlog(self, element):
        try:
            return self._dlog[element]
        except KeyError:
            raise ValueError(f"element {element!r} not in group") from None
