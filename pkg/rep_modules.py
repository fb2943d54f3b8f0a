# === rep_modules.py (Delta_0, P_0, induced modules and their actions) ===
from fractions import Fraction
from functools import lru_cache
from itertools import product

import settings
from errors import BlockError, WindowError
from exact_linalg import SparseMatrix, rank
from pe2_core import (
    BRACKET_TABLE,
    GENERATORS,
    PARITY,
    ROOTS,
    Weight,
    require_odd,
)

# PBW order of the odd lowering part: y_minus^a1 h_minus^a2 x_minus^a3
ODD_ORDER = ("y_minus", "h_minus", "x_minus")
ODD_INDEX = {g: i for i, g in enumerate(ODD_ORDER)}
NO_ODD = (0, 0, 0)
MONOMIALS = tuple(sorted(product((0, 1), repeat=3)))


class ModuleVector:
    """Sparse exact combination of basis keys (odd monomial, base label)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for key, coeff in (terms or {}).items():
            self.add_term(key, coeff)

    def add_term(self, key, coeff):
        value = self.terms.get(key, 0) + Fraction(coeff)
        if value:
            self.terms[key] = value
        else:
            self.terms.pop(key, None)

    def coefficient(self, key):
        return self.terms.get(key, Fraction(0))

    def keys(self):
        return sorted(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def scaled(self, c):
        c = Fraction(c)
        if not c:
            return ModuleVector()
        return ModuleVector({k: v * c for k, v in self.terms.items()})

    def __add__(self, other):
        out = ModuleVector(self.terms)
        for k, v in other.terms.items():
            out.add_term(k, v)
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __neg__(self):
        return self.scaled(-1)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"ModuleVector({format_vector(self)})"


def mono_names(mono):
    return [g for g, present in zip(ODD_ORDER, mono) if present]


def key_str(key):
    mono, (kind, index) = key
    prefix = "*".join(mono_names(mono)) or "1"
    return f"{prefix} (x) {kind}{index}"


def format_vector(vec):
    if not vec:
        return "0"
    parts = []
    for key, coeff in vec.items():
        parts.append(f"{coeff} {key_str(key)}")
    return " + ".join(parts)


# ===== g_0 SIDE =====

class BaseModule:
    """Weight-based g_0 module, generated by `generator_label`, truncated at `depth` y-steps."""

    kind = "base"

    def __init__(self, weight, depth):
        if depth < 1:
            raise ValueError("depth must be at least 1")
        self.weight = Weight(*weight)
        self.depth = depth

    def label_weight(self, label):
        kind, index = label
        return Weight(self.weight.a - 2 * index, self.weight.b)

    def _check_depth(self, index):
        if index > self.depth - 1:
            raise WindowError(
                self.label_weight(("w", index)),
                f"needs y-depth {index + 1} in the module of {self.weight}, increase PE2_DEPTH_PAD",
            )

    def _lift(self, label):
        kind, index = label
        if index + 1 > self.depth:
            raise WindowError(self.label_weight(label), f"y leaves the truncation of {self.weight}")
        return (kind, index + 1)

    def act(self, gen, label):
        raise NotImplementedError

    def labels_at(self, weight):
        raise NotImplementedError


class Verma0(BaseModule):
    """sl2 Verma module: w_k = y^k w."""

    kind = "verma"
    generator_label = ("w", 0)

    def labels_at(self, weight):
        a, b = self.weight
        if weight[1] != b or (a - weight[0]) % 2:
            return []
        k = (a - weight[0]) // 2
        if k < 0:
            return []
        self._check_depth(k)
        return [("w", k)]

    def labels(self):
        return [("w", k) for k in range(self.depth + 1)]

    def act(self, gen, label):
        a, b = self.weight
        _, k = label
        if gen == "y":
            return {self._lift(label): Fraction(1)}
        if gen == "x":
            c = k * (a - k + 1)
            return {("w", k - 1): Fraction(c)} if c else {}
        if gen == "h":
            return {label: Fraction(a - 2 * k)} if a - 2 * k else {}
        if gen == "xi_dxi":
            return {label: Fraction(-b)} if b else {}
        raise KeyError(f"{gen} is not a g_0 generator")

    def reaching_word(self, label):
        return ("y",) * label[1], Fraction(1)


class Proj0(BaseModule):
    """P_0(lambda), a <= -3: top row v_j (weight a-2j, j >= a+1) spanning Delta_0(lambda'),
    bottom row u_j = y^j u_0 with x u_j = v_{j-1} + j(a-j+1) u_{j-1}."""

    kind = "projective"
    generator_label = ("u", 0)

    def __init__(self, weight, depth):
        super().__init__(weight, depth)
        a = self.weight.a
        self.top_index = a + 1
        # x^m u_0 = c_m v_{-m}
        self._c = {1: Fraction(1)}
        for m in range(1, -a - 1):
            self._c[m + 1] = self._c[m] * (-m) * (a + 1 + m)

    def labels_at(self, weight):
        a, b = self.weight
        if weight[1] != b or (a - weight[0]) % 2:
            return []
        j = (a - weight[0]) // 2
        out = []
        if j >= self.top_index:
            self._check_depth(j)
            out.append(("v", j))
        if j >= 0:
            self._check_depth(j)
            out.append(("u", j))
        return out

    def labels(self):
        top = [("v", j) for j in range(self.top_index, self.depth + 1)]
        return top + [("u", j) for j in range(self.depth + 1)]

    def act(self, gen, label):
        a, b = self.weight
        kind, j = label
        if gen == "y":
            return {self._lift(label): Fraction(1)}
        if gen == "h":
            return {label: Fraction(a - 2 * j)} if a - 2 * j else {}
        if gen == "xi_dxi":
            return {label: Fraction(-b)} if b else {}
        if gen != "x":
            raise KeyError(f"{gen} is not a g_0 generator")
        if kind == "v":
            c = j * (a + 1 - j)
            return {("v", j - 1): Fraction(c)} if c else {}
        out = {("v", j - 1): Fraction(1)}
        c = j * (a - j + 1)
        if c:
            out[("u", j - 1)] = Fraction(c)
        return out

    def reaching_word(self, label):
        kind, j = label
        if kind == "u":
            return ("y",) * j, Fraction(1)
        if j >= -1:
            return ("x",) + ("y",) * (j + 1), Fraction(1)
        m = -j
        return ("x",) * m, 1 / self._c[m]


def build_verma0(weight, depth):
    return Verma0(require_odd(weight), depth)


def build_proj0(weight, depth):
    weight = require_odd(weight)
    if weight.a >= -1:
        raise BlockError(f"P_0{tuple(weight)} is the Verma module for a >= -1, use build_verma0")
    return Proj0(weight, depth)


def base_apply(m0, word, vector):
    """Apply g_0 generators in list order to a {label: coeff} vector."""
    for gen in word:
        out = {}
        for label, coeff in vector.items():
            for key, value in m0.act(gen, label).items():
                _accumulate(out, key, coeff * value)
        vector = out
    return vector


def base_kernel_dim(m0, word, mu):
    """dim {v in (m0)_mu : word v = 0}."""
    cols = m0.labels_at(mu)
    row_index = {}
    entries = {}
    for j, label in enumerate(cols):
        for key, value in base_apply(m0, word, {label: Fraction(1)}).items():
            entries[(row_index.setdefault(key, len(row_index)), j)] = value
    return len(cols) - rank(SparseMatrix(len(row_index), len(cols), entries))


def check_proj0_extension(p0):
    """Failures of 0 -> Delta_0(lambda') -> P_0(lambda) -> Delta_0(lambda) -> 0 on the untruncated labels."""
    a, b = p0.weight
    top = p0.top_index
    sub = Verma0(Weight(-a - 2, b), p0.depth - top)
    quotient = Verma0(p0.weight, p0.depth)
    failures = []
    for kind, j in p0.labels():
        if j >= p0.depth:
            continue
        for gen in ("x", "y", "h", "xi_dxi"):
            image = p0.act(gen, (kind, j))
            if kind == "v":
                if any(k != "v" for k, _ in image):
                    failures.append(f"{gen} v_{j} leaves the top row")
                elif {("w", i - top): c for (_, i), c in image.items()} != sub.act(gen, ("w", j - top)):
                    failures.append(f"{gen} v_{j} does not match Delta_0{tuple(sub.weight)}")
                continue
            rest = {("w", i): c for (k, i), c in image.items() if k == "u"}
            if rest != quotient.act(gen, ("w", j)):
                failures.append(f"{gen} u_{j} does not match Delta_0{tuple(p0.weight)} modulo the top row")
    return failures


def endomorphism_dim(p0):
    """dim End P_0(lambda): vectors of weight lambda killed by x^{-a}, the relation on u_0."""
    if p0.kind != "projective":
        raise ValueError("endomorphism_dim expects a P_0 built by build_proj0")
    return base_kernel_dim(p0, ("x",) * -p0.weight.a, p0.weight)


# ===== INDUCED MODULES =====

def _normal_order(factors):
    """Sort anticommuting g_-1 factors into PBW order: (sign, mono) or None if a square appears."""
    if len(set(factors)) != len(factors):
        return None
    idx = [ODD_INDEX[g] for g in factors]
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    mono = [0, 0, 0]
    for i in idx:
        mono[i] = 1
    return sign, tuple(mono)


class InducedModule:
    """U(g) tensor over g_>=0 of a base module; basis keys (odd monomial, base label)."""

    def __init__(self, base):
        self.base = base
        self.weight = base.weight
        self.kind = base.kind
        self.depth = base.depth
        self.generator_key = (NO_ODD, base.generator_label)
        self._cache = {}

    def generator(self):
        return ModuleVector({self.generator_key: 1})

    def key_weight(self, key):
        mono, label = key
        w = self.base.label_weight(label)
        for g in mono_names(mono):
            w = w + ROOTS[g]
        return w

    def basis_at(self, mu):
        mu = Weight(*mu)
        keys = []
        for mono in MONOMIALS:
            shift = Weight(0, 0)
            for g in mono_names(mono):
                shift = shift + ROOTS[g]
            for label in self.base.labels_at(mu - shift):
                keys.append((mono, label))
        return sorted(keys)

    def act_key(self, gen, key):
        cache_key = (gen, key)
        if cache_key not in self._cache:
            if gen in ODD_INDEX:
                out = self._act_lower(gen, key)
            elif gen == "d_xi":
                out = self._act_raise(key)
            else:
                out = self._act_even(gen, key)
            self._cache[cache_key] = out
        return self._cache[cache_key]

    def _act_lower(self, gen, key):
        mono, label = key
        i = ODD_INDEX[gen]
        if mono[i]:
            return {}
        sign = (-1) ** sum(mono[:i])
        new = list(mono)
        new[i] = 1
        return {(tuple(new), label): Fraction(sign)}

    def _act_even(self, gen, key):
        mono, label = key
        out = {}
        factors = mono_names(mono)
        for pos, factor in enumerate(factors):
            for new_factor, c in BRACKET_TABLE[(gen, factor)].items():
                normal = _normal_order(factors[:pos] + [new_factor] + factors[pos + 1:])
                if normal is None:
                    continue
                sign, new_mono = normal
                _accumulate(out, (new_mono, label), c * sign)
        for new_label, c in self.base.act(gen, label).items():
            _accumulate(out, (mono, new_label), c)
        return out

    def _act_raise(self, key):
        # d (e1 m) = [d, e1] m - e1 (d m), and d kills 1 (x) P_0
        mono, label = key
        if not any(mono):
            return {}
        i = mono.index(1)
        first = ODD_ORDER[i]
        rest = list(mono)
        rest[i] = 0
        rest_key = (tuple(rest), label)
        out = {}
        for even, c in BRACKET_TABLE[("d_xi", first)].items():
            for k, v in self._act_even(even, rest_key).items():
                _accumulate(out, k, c * v)
        for k, v in self.act_key("d_xi", rest_key).items():
            for k2, v2 in self._act_lower(first, k).items():
                _accumulate(out, k2, -v * v2)
        return out

    def act(self, gen, vector):
        out = ModuleVector()
        for key, coeff in vector.terms.items():
            for k, v in self.act_key(gen, key).items():
                out.add_term(k, coeff * v)
        return out

    def apply_word(self, word, vector):
        """Apply generators in list order (first entry acts first)."""
        for gen in word:
            vector = self.act(gen, vector)
            if not vector:
                break
        return vector

    def from_pbw(self, word, coeff=1):
        """Evaluate a word written outermost-first, e.g. ('y', 'h_minus') is y (h_minus (x) gen)."""
        return self.apply_word(tuple(reversed(word)), self.generator()).scaled(coeff)

    def reaching_word(self, key):
        mono, label = key
        word, scale = self.base.reaching_word(label)
        odd = tuple(g for g in ("x_minus", "h_minus", "y_minus") if mono[ODD_INDEX[g]])
        return word + odd, scale


def _accumulate(out, key, value):
    value = out.get(key, 0) + value
    if value:
        out[key] = value
    else:
        out.pop(key, None)


def induce(m0, weight=None):
    if weight is not None and Weight(*weight) != m0.weight:
        raise ValueError(f"base module has weight {m0.weight}, not {weight}")
    return InducedModule(m0)


def default_depth(weight):
    return 2 * abs(weight[0]) + 16 + settings.DEPTH_PAD


@lru_cache(maxsize=None)
def projective(weight):
    """P(lambda): induced from P_0(lambda) for a <= -3, the Verma module otherwise."""
    weight = require_odd(weight)
    depth = default_depth(weight)
    if weight.a <= -3:
        return induce(build_proj0(weight, depth))
    return induce(build_verma0(weight, depth))


@lru_cache(maxsize=None)
def verma(weight):
    weight = require_odd(weight)
    return induce(build_verma0(weight, default_depth(weight)))


# ===== WEIGHT SPACES =====

def weight_space(m, mu):
    return [ModuleVector({key: 1}) for key in m.basis_at(mu)]


def operator_matrix(m, words, mu):
    """Stack the matrices of each word on m_mu; columns follow basis_at(mu)."""
    cols = m.basis_at(mu)
    row_index = {}
    entries = {}
    for block, word in enumerate(words):
        for j, key in enumerate(cols):
            image = m.apply_word(word, ModuleVector({key: 1}))
            for out_key, value in image.terms.items():
                i = row_index.setdefault((block, out_key), len(row_index))
                entries[(i, j)] = value
    return SparseMatrix(len(row_index), len(cols), entries), cols


def ker_im_partial(m, mu):
    """(dim ker d_xi on m_mu, dim d_xi(m_{mu-delta}))."""
    mu = Weight(*mu)
    below = mu.shift(0, -1)
    kernel_matrix, cols = operator_matrix(m, [("d_xi",)], mu)
    kernel_dim = len(cols) - rank(kernel_matrix)
    image_matrix, _ = operator_matrix(m, [("d_xi",)], below)
    return kernel_dim, rank(image_matrix)


# ===== SELF-CHECKS =====

def check_d_squared(m, weights):
    failures = []
    for mu in weights:
        for key in m.basis_at(mu):
            if m.apply_word(("d_xi", "d_xi"), ModuleVector({key: 1})):
                failures.append(key)
    return failures


def check_representation(m, weights, generators=GENERATORS):
    """g1 (g2 v) - (-1)^{p1 p2} g2 (g1 v) = [g1, g2] v on every basis vector of the given weights."""
    failures = []
    for mu in weights:
        for key in m.basis_at(mu):
            v = ModuleVector({key: 1})
            for g1 in generators:
                for g2 in generators:
                    sign = (-1) ** (PARITY[g1] * PARITY[g2])
                    lhs = m.act(g1, m.act(g2, v)) - m.act(g2, m.act(g1, v)).scaled(sign)
                    rhs = ModuleVector()
                    for g, c in BRACKET_TABLE[(g1, g2)].items():
                        rhs = rhs + m.act(g, v).scaled(c)
                    if lhs != rhs:
                        failures.append((g1, g2, key))
    return failures


def dump_module(m, weights):
    """JSON-ready description: basis per weight and sparse action entries per generator."""
    basis = []
    for mu in weights:
        basis.extend(m.basis_at(mu))
    actions = {}
    for gen in GENERATORS:
        entries = []
        for key in basis:
            for out_key, value in sorted(m.act_key(gen, key).items()):
                entries.append([key_str(key), key_str(out_key), str(value)])
        actions[gen] = entries
    return {
        "weight": [m.weight.a, m.weight.b],
        "kind": m.kind,
        "depth": m.depth,
        "basis": [{"key": key_str(k), "weight": list(m.key_weight(k))} for k in basis],
        "actions": actions,
    }
