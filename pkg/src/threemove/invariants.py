"""Kauffman bracket, writhe and Jones polynomial.

The bracket is computed in the variable A with the unknot normalized to 1 and
each extra loop contributing a factor -A^2 - A^-2.  The Jones polynomial is
(-A)^(-3w) <D> re-expressed in t = A^-4, so the right-handed trefoil comes out
as -t^4 + t^3 + t; this pins the variable convention for the whole package.

At each crossing the A-smoothing joins slots (0,1) and (2,3) of the
counterclockwise PD presentation and the B-smoothing joins (0,3) and (1,2);
states are summed by a tangle contraction that processes crossings in PD order
and merges branches with equal open-end pairings, which keeps 20-crossing
diagrams comfortably in range.
"""

from __future__ import annotations

from fractions import Fraction

from .diagrams import LinkDiagram, crossing_sign

MAX_BRACKET_CROSSINGS = 24


class LaurentPoly:
    """Sparse integer Laurent polynomial in one variable (used for A)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def monomial(cls, coeff: int = 1, exp: int = 0) -> "LaurentPoly":
        return cls({exp: coeff})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    def shifted(self, k: int, scale: int = 1) -> "LaurentPoly":
        """self * scale * A^k."""
        return LaurentPoly({e + k: c * scale for e, c in self.coeffs.items()})

    def substitute_inverse(self) -> "LaurentPoly":
        """p(A) -> p(A^-1)."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def min_exp(self) -> int:
        return min(self.coeffs)

    def max_exp(self) -> int:
        return max(self.coeffs)

    def __repr__(self):
        return f"LaurentPoly({dict(sorted(self.coeffs.items()))})"


DELTA = LaurentPoly({2: -1, -2: -1})  # value of an extra closed loop


def _div_delta(p: LaurentPoly) -> LaurentPoly:
    """Exact division by -A^2 - A^-2 (raises if it does not divide)."""
    if not p:
        return p
    # p / (-A^2 - A^-2) = p * (-A^2) / (A^4 + 1); divide from the top down.
    num = dict(p.shifted(2, -1).coeffs)
    quo: dict[int, int] = {}
    while num:
        e = max(num)
        c = num.pop(e)
        quo[e - 4] = quo.get(e - 4, 0) + c
        low = num.get(e - 4, 0) - c
        if low:
            num[e - 4] = low
        else:
            num.pop(e - 4, None)
    return LaurentPoly(quo)


def kauffman_bracket(d: LinkDiagram) -> LaurentPoly:
    """Kauffman bracket of an (un)oriented diagram, <unknot> = 1."""
    if len(d.crossings) > MAX_BRACKET_CROSSINGS:
        raise ValueError(
            f"bracket limited to {MAX_BRACKET_CROSSINGS} crossings "
            f"(got {len(d.crossings)})"
        )
    one = LaurentPoly({0: 1})
    if not d.crossings:
        result = one
        for _ in range(max(d.unknotted_extras - 1, 0)):
            result = result * DELTA
        return result

    # State: frozenset of (arc, arc) open-end pairings -> coefficient.
    states: dict[frozenset, LaurentPoly] = {frozenset(): one}
    for cr in d.crossings:
        joins_a = ((cr[0], cr[1]), (cr[2], cr[3]))
        joins_b = ((cr[0], cr[3]), (cr[1], cr[2]))
        nxt: dict[frozenset, LaurentPoly] = {}
        for key, poly in states.items():
            for joins, shift in ((joins_a, 1), (joins_b, -1)):
                pairing: dict[int, int] = {}
                for a, b in key:
                    pairing[a] = b
                    pairing[b] = a
                loops = 0
                ok = True
                for u, v in joins:
                    if u == v:
                        if u in pairing:
                            ok = False
                            break
                        loops += 1
                        continue
                    pu = pairing.pop(u, None)
                    pv = pairing.pop(v, None)
                    if pu is None and pv is None:
                        pairing[u] = v
                        pairing[v] = u
                    elif pu is not None and pv is None:
                        if pu == v:
                            loops += 1
                        else:
                            pairing[pu] = v
                            pairing[v] = pu
                    elif pu is None and pv is not None:
                        if pv == u:
                            loops += 1
                        else:
                            pairing[pv] = u
                            pairing[u] = pv
                    else:
                        if pu == v:  # then pv == u: chain closes
                            loops += 1
                        else:
                            pairing[pu] = pv
                            pairing[pv] = pu
                if not ok:
                    continue
                contrib = poly.shifted(shift)
                for _ in range(loops):
                    contrib = contrib * DELTA
                new_key = frozenset(
                    (a, b) for a, b in pairing.items() if a < b
                )
                prev = nxt.get(new_key)
                nxt[new_key] = contrib if prev is None else prev + contrib
        states = nxt
    if set(states) != {frozenset()}:
        raise AssertionError("open strands remained after contraction")
    raw = states[frozenset()]
    for _ in range(d.unknotted_extras):
        raw = raw * DELTA
    return _div_delta(raw)


def writhe(d: LinkDiagram) -> int:
    """Sum of crossing signs of an oriented diagram."""
    return sum(crossing_sign(d, ci) for ci in range(len(d.crossings)))


class JonesPolynomial:
    """Jones polynomial stored as a Laurent polynomial in A (t = A^-4).

    Links with an even number of components have half-integer t-exponents;
    they are kept exact as A-powers and exposed through :meth:`t_coefficients`
    as Fractions.
    """

    __slots__ = ("apoly",)

    def __init__(self, apoly: LaurentPoly):
        self.apoly = apoly

    def t_coefficients(self) -> dict[Fraction, int]:
        return {Fraction(-e, 4): c for e, c in self.apoly.coeffs.items()}

    def t_int_coefficients(self) -> dict[int, int]:
        """Coefficient map with integer exponents; raises on half-integers."""
        out = {}
        for e, c in self.apoly.coeffs.items():
            if e % 4:
                raise ValueError("Jones polynomial has non-integer t-exponents")
            out[-e // 4] = c
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, JonesPolynomial) and self.apoly == other.apoly

    def __hash__(self):
        return hash(self.apoly)

    def substitute_inverse(self) -> "JonesPolynomial":
        """J(t) -> J(1/t)."""
        return JonesPolynomial(self.apoly.substitute_inverse())

    def __str__(self):
        terms = sorted(self.t_coefficients().items())
        if not terms:
            return "0"
        parts = []
        for e, c in terms:
            if e == 0:
                body = str(abs(c))
            else:
                if e.denominator == 1:
                    expo = str(e.numerator) if e >= 0 else f"({e.numerator})"
                else:
                    expo = f"({e.numerator}/{e.denominator})"
                tpow = "t" if e == 1 else f"t^{expo}"
                body = tpow if abs(c) == 1 else f"{abs(c)}{tpow}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"JonesPolynomial({self})"


def jones(d: LinkDiagram) -> JonesPolynomial:
    """Jones polynomial of an oriented diagram via the normalized bracket."""
    if d.orientation is None:
        raise ValueError("jones requires an oriented diagram")
    w = writhe(d)
    bracket = kauffman_bracket(d)
    # (-A)^(-3w) <D>
    normalized = bracket.shifted(-3 * w, (-1) ** (3 * w))
    return JonesPolynomial(normalized)


def palindromic(p: JonesPolynomial) -> bool:
    """True when p(t) = p(1/t) after re-centering the exponents.

    Non-palindromic coefficients certify that the underlying link differs
    from its mirror image.
    """
    coeffs = p.apoly.coeffs
    if not coeffs:
        return True
    s = p.apoly.min_exp() + p.apoly.max_exp()
    return all(coeffs.get(s - e) == c for e, c in coeffs.items())
