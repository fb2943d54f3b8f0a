# === pe2_core.py (pe(2) generators, brackets, roots, weights, blocks) ===
from fractions import Fraction
from itertools import product
from typing import NamedTuple

from errors import BlockError

# ===== GENERATORS =====
# x, y, h span sl2; xi_dxi is the extra Cartan element; d_xi spans g_1;
# x_minus, y_minus, h_minus span g_-1 (f tensor xi).
GENERATORS = ("x", "y", "h", "xi_dxi", "d_xi", "x_minus", "y_minus", "h_minus")
EVEN = ("x", "y", "h", "xi_dxi")
ODD = ("d_xi", "x_minus", "y_minus", "h_minus")
CARTAN = ("h", "xi_dxi")

PARITY = {g: (0 if g in EVEN else 1) for g in GENERATORS}

# g_-1 element -> its sl2 part under [d_xi, f tensor xi] = f
SL2_PART = {"x_minus": "x", "y_minus": "y", "h_minus": "h"}
ODD_PART = {v: k for k, v in SL2_PART.items()}

# sl2 brackets, stored once per unordered pair
_SL2 = {
    ("h", "x"): {"x": 2},
    ("h", "y"): {"y": -2},
    ("x", "y"): {"h": 1},
}


class Weight(NamedTuple):
    """a*eps + b*delta."""
    a: int
    b: int

    def __add__(self, other):
        return Weight(self.a + other[0], self.b + other[1])

    def __sub__(self, other):
        return Weight(self.a - other[0], self.b - other[1])

    def shift(self, da, db):
        return Weight(self.a + da, self.b + db)

    def dual(self):
        return dual(self)

    def __str__(self):
        return f"{self.a},{self.b}"


ZERO = Weight(0, 0)

ROOTS = {
    "x": Weight(2, 0),
    "y": Weight(-2, 0),
    "h": ZERO,
    "xi_dxi": ZERO,
    "d_xi": Weight(0, 1),
    "x_minus": Weight(2, -1),
    "y_minus": Weight(-2, -1),
    "h_minus": Weight(0, -1),
}


def parity(g):
    return PARITY[g]


def is_even(g):
    return PARITY[g] == 0


def _sl2_bracket(g1, g2):
    if g1 == g2:
        return {}
    if (g1, g2) in _SL2:
        return dict(_SL2[(g1, g2)])
    if (g2, g1) in _SL2:
        return {k: -v for k, v in _SL2[(g2, g1)].items()}
    return {}


def _base_bracket(g1, g2):
    """Bracket for ordered pairs with g1 even, or both odd."""
    if g1 in ("x", "y", "h") and g2 in ("x", "y", "h"):
        return _sl2_bracket(g1, g2)
    if g1 in ("x", "y", "h"):
        if g2 in SL2_PART:
            # [X, f tensor xi] = [X, f] tensor xi
            return {ODD_PART[k]: v for k, v in _sl2_bracket(g1, SL2_PART[g2]).items()}
        return {}
    if g1 == "xi_dxi":
        if g2 in SL2_PART:
            return {g2: 1}
        if g2 == "d_xi":
            return {"d_xi": -1}
        return {}
    # odd with odd
    if g1 == "d_xi" and g2 in SL2_PART:
        return {SL2_PART[g2]: 1}
    if g2 == "d_xi" and g1 in SL2_PART:
        return {SL2_PART[g1]: 1}
    return {}


def bracket(g1, g2):
    """Superbracket [g1, g2] as {generator: Fraction}; zero coefficients dropped."""
    if g1 not in PARITY or g2 not in PARITY:
        raise KeyError(f"unknown generator in ({g1}, {g2})")
    if PARITY[g1] == 1 and PARITY[g2] == 0:
        # [A, B] = -(-1)^{|A||B|} [B, A]
        raw = {k: -v for k, v in _base_bracket(g2, g1).items()}
    else:
        raw = _base_bracket(g1, g2)
    return {k: Fraction(v) for k, v in raw.items() if v}


# Literal 8x8 structure-constant table.
BRACKET_TABLE = {(g1, g2): bracket(g1, g2) for g1 in GENERATORS for g2 in GENERATORS}


def root(g):
    """Root of a generator; Cartan elements give the zero weight."""
    return ROOTS[g]


def weight_of_word(word):
    total = ZERO
    for g in word:
        total = total + ROOTS[g]
    return total


# ===== WEIGHTS & BLOCKS =====

def dual(w):
    return Weight(-w[0] - 2, w[1])


def block_of(w):
    """'even' for even a; 'odd0' for (2n+1, 2k-n); 'odd1' for (2n+1, 2k-n-1)."""
    a, b = w
    if a % 2 == 0:
        return "even"
    n = (a - 1) // 2
    return "odd0" if (b + n) % 2 == 0 else "odd1"


def in_odd_block(w):
    return block_of(w) == "odd0"


def require_odd(w):
    """Validate a weight argument: both odd components are accepted."""
    w = Weight(int(w[0]), int(w[1]))
    if block_of(w) == "even":
        raise BlockError(f"weight {w} has even a and lies in O_even, not O_odd")
    return w


def parse_weight(text):
    try:
        a, b = (int(part) for part in str(text).split(","))
    except ValueError as e:
        raise BlockError(f"cannot read weight {text!r}, expected 'a,b'") from e
    return Weight(a, b)


# ===== SELF-CHECKS =====

def bracket_combo(left, right):
    """Bilinear extension to {generator: coeff} combinations."""
    out = {}
    for g1, c1 in left.items():
        for g2, c2 in right.items():
            for g, c in BRACKET_TABLE[(g1, g2)].items():
                value = out.get(g, 0) + c1 * c2 * c
                if value:
                    out[g] = value
                else:
                    out.pop(g, None)
    return out


def check_super_antisymmetry():
    failures = []
    for g1, g2 in product(GENERATORS, repeat=2):
        sign = -((-1) ** (PARITY[g1] * PARITY[g2]))
        expected = {k: sign * v for k, v in BRACKET_TABLE[(g2, g1)].items()}
        if BRACKET_TABLE[(g1, g2)] != expected:
            failures.append((g1, g2))
    return failures


def check_super_jacobi():
    """[A,[B,C]] = [[A,B],C] + (-1)^{|A||B|} [B,[A,C]] on all 512 triples."""
    failures = []
    for g1, g2, g3 in product(GENERATORS, repeat=3):
        lhs = bracket_combo({g1: 1}, BRACKET_TABLE[(g2, g3)])
        first = bracket_combo(BRACKET_TABLE[(g1, g2)], {g3: 1})
        second = bracket_combo({g2: 1}, BRACKET_TABLE[(g1, g3)])
        sign = (-1) ** (PARITY[g1] * PARITY[g2])
        rhs = dict(first)
        for g, c in second.items():
            value = rhs.get(g, 0) + sign * c
            if value:
                rhs[g] = value
            else:
                rhs.pop(g, None)
        if lhs != rhs:
            failures.append((g1, g2, g3))
    return failures


def check_root_additivity():
    failures = []
    for (g1, g2), value in BRACKET_TABLE.items():
        expected = ROOTS[g1] + ROOTS[g2]
        for g in value:
            if ROOTS[g] != expected:
                failures.append((g1, g2, g))
    return failures


# ===== QUIVER ARROWS =====
# Degree-one morphisms between projectives, by source weight:
#   f: a >= 1 -> (a+2, b+1)        g: a >= 3 -> (a-2, b+1)
#   p: a >= 1 -> dual              q: a <= -3 -> dual
#   gprime: a <= -3 -> (a+2, b+1)  fprime: a <= -1 -> (a-2, b+1)
ARROW_TAGS = ("f", "g", "p", "q", "fprime", "gprime")
ARROW_SYMBOL = {"f": "f", "g": "g", "p": "p", "q": "q", "fprime": "f'", "gprime": "g'"}


def arrow_target(tag, source):
    """Target of the arrow `tag` out of `source`, or None when that arrow does not exist."""
    a, b = source
    if tag == "f" and a >= 1:
        return Weight(a + 2, b + 1)
    if tag == "g" and a >= 3:
        return Weight(a - 2, b + 1)
    if tag == "p" and a >= 1:
        return dual(source)
    if tag == "q" and a <= -3:
        return dual(source)
    if tag == "gprime" and a <= -3:
        return Weight(a + 2, b + 1)
    if tag == "fprime" and a <= -1:
        return Weight(a - 2, b + 1)
    return None


def arrows_out(source):
    out = []
    for tag in ARROW_TAGS:
        target = arrow_target(tag, source)
        if target is not None:
            out.append((tag, target))
    return out


def check_arrow_blocks(weights):
    """Arrows and the dual map keep every weight in its odd component."""
    failures = []
    for w in weights:
        w = Weight(*w)
        if block_of(dual(w)) != block_of(w):
            failures.append(("dual", w))
        for tag, target in arrows_out(w):
            if block_of(target) != block_of(w):
                failures.append((tag, w))
    return failures
