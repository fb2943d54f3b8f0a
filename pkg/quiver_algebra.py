# === quiver_algebra.py (the graded algebra A = CQ/I presented by arrows and quadratic relations) ===
from collections import deque
from fractions import Fraction
from typing import NamedTuple

import settings
from errors import PresentationError, WindowError
from pe2_core import ARROW_SYMBOL, ARROW_TAGS, Weight, arrow_target

TOP_DEGREE = 4
PRESENTATION_VERSION = 1

# Normal basis words by source class, application order (first arrow first).
_BASIS_POSITIVE = (
    (),
    ("f",), ("g",), ("p",),
    ("f", "g"), ("p", "gprime"), ("p", "fprime"),
    ("p", "fprime", "gprime"),
)
_BASIS_NEGATIVE = (
    (),
    ("fprime",), ("gprime",), ("q",),
    ("q", "p"), ("fprime", "gprime"), ("fprime", "q"), ("gprime", "q"),
    ("q", "f", "g"), ("fprime", "q", "p"), ("q", "p", "gprime"),
    ("fprime", "q", "p", "gprime"),
)
_BASIS_MINUS_ONE = (
    (),
    ("fprime",), ("fprime", "q"), ("fprime", "q", "p"), ("fprime", "q", "p", "gprime"),
)


def word_name(word):
    """Composition notation, last arrow leftmost: ('f', 'g') -> 'gf'; the empty word is 'e'."""
    if not word:
        return "e"
    return "".join(ARROW_SYMBOL[t] for t in reversed(word))


def parse_word_name(text):
    """Inverse of word_name."""
    if text == "e":
        return ()
    tags = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch not in ("f", "g", "p", "q"):
            raise PresentationError(f"bad path name {text!r}")
        if i + 1 < len(text) and text[i + 1] == "'":
            tags.append(ch + "prime")
            i += 2
        else:
            tags.append(ch)
            i += 1
    return tuple(reversed(tags))


class Arrow(NamedTuple):
    tag: str
    source: Weight
    target: Weight


class NormalPath(NamedTuple):
    source: Weight
    target: Weight
    word: tuple

    @property
    def degree(self):
        return len(self.word)

    def name(self):
        return word_name(self.word)


class Relation(NamedTuple):
    """sum(coeff * word) = 0 for paths starting at `source`; `name` is unique per source."""
    name: str
    source: Weight
    terms: tuple


def relation_text(rel):
    parts = []
    for coeff, word in rel.terms:
        if coeff == 1:
            parts.append(word_name(word))
        elif coeff == -1:
            parts.append(f"-{word_name(word)}")
        else:
            parts.append(f"({coeff}){word_name(word)}")
    return " + ".join(parts).replace("+ -", "- ") + " = 0"


def expected_basis_words(source):
    a = source[0]
    if a >= 1:
        words = _BASIS_POSITIVE
        if a == 1:
            words = tuple(w for w in words if w != ("g",))
        return words
    if a == -1:
        return _BASIS_MINUS_ONE
    words = _BASIS_NEGATIVE
    if a == -3:
        words = tuple(w for w in words if w != ("gprime", "q"))
    return words


def pe2_relations(source):
    """Quadratic relations whose paths start at `source`."""
    source = Weight(*source)
    a = source.a
    rels = []

    def zero(word):
        rels.append(Relation(word_name(word), source, ((Fraction(1), word),)))

    def binomial(w1, c2, w2):
        rels.append(Relation(word_name(w1), source, ((Fraction(1), w1), (Fraction(c2), w2))))

    if a >= 1:
        zero(("f", "f"))
        if a >= 5:
            zero(("g", "g"))
        zero(("p", "q"))
        if a >= 3:
            # fg = -((a-1)/(a+3)) gf
            binomial(("g", "f"), Fraction(a - 1, a + 3), ("f", "g"))
            binomial(("p", "gprime"), -(a + 1), ("g", "p"))
        binomial(("p", "fprime"), -(a + 1), ("f", "p"))
    elif a <= -3:
        center = -a - 2
        zero(("fprime", "fprime"))
        if a <= -5:
            zero(("gprime", "gprime"))
            c = Fraction(center - 1, center + 3)
            binomial(("gprime", "fprime"), c * c, ("fprime", "gprime"))
            binomial(("gprime", "q"), -(center - 1), ("q", "g"))
        else:
            binomial(("gprime", "fprime"), Fraction(-1, 16), ("fprime", "gprime"))
        binomial(("fprime", "q"), -(center + 3), ("q", "f"))
    else:
        zero(("fprime", "fprime"))
        zero(("fprime", "gprime"))
    return rels


# ===== PRESENTATIONS =====

def _as_window(window):
    if window is None:
        return None
    a_min, a_max, b_min, b_max = (int(x) for x in window)
    if a_min > a_max or b_min > b_max:
        raise PresentationError(f"empty window {window}")
    return (a_min, a_max, b_min, b_max)


class Presentation:
    """Arrows and relations of A, generated by rule, restricted to a rectangular window."""

    def __init__(self, window=None, dropped=()):
        self.window = _as_window(window)
        self.dropped = frozenset(dropped)

    def contains(self, v):
        if v[0] % 2 == 0:
            return False
        if self.window is None:
            return True
        a_min, a_max, b_min, b_max = self.window
        return a_min <= v[0] <= a_max and b_min <= v[1] <= b_max

    def vertices(self):
        if self.window is None:
            raise PresentationError("an unbounded presentation has no vertex list")
        a_min, a_max, b_min, b_max = self.window
        start = a_min if a_min % 2 else a_min + 1
        return [Weight(a, b) for b in range(b_min, b_max + 1) for a in range(start, a_max + 1, 2)]

    def arrows_from(self, v):
        v = Weight(*v)
        out = []
        for tag in ARROW_TAGS:
            target = arrow_target(tag, v)
            if target is not None and self.contains(target):
                out.append(Arrow(tag, v, target))
        return out

    def relations_at(self, v):
        return [r for r in pe2_relations(v) if r.name not in self.dropped]

    def preferred_words(self, v):
        return expected_basis_words(v)

    def with_dropped_relation(self, name):
        known = {r.name for v in (Weight(5, 0), Weight(-7, 0), Weight(1, 0), Weight(-3, 0), Weight(-1, 0))
                 for r in pe2_relations(v)}
        if name not in known:
            raise PresentationError(f"no relation named {name!r}")
        settings.log("INFO", f"presentation mutated: relation {name} dropped")
        return Presentation(self.window, self.dropped | {name})


class TablePresentation:
    """Presentation read back from a JSON document: explicit arrows and relations per vertex."""

    def __init__(self, window, arrows, relations, basis=None):
        self.window = _as_window(window)
        self._arrows = arrows
        self._relations = relations
        self._basis = basis or {}
        self.dropped = frozenset()

    def contains(self, v):
        return Weight(*v) in self._arrows

    def vertices(self):
        return sorted(self._arrows, key=lambda w: (w.b, w.a))

    def arrows_from(self, v):
        return list(self._arrows.get(Weight(*v), []))

    def relations_at(self, v):
        return list(self._relations.get(Weight(*v), []))

    def preferred_words(self, v):
        return self._basis.get(Weight(*v), ())

    def with_dropped_relation(self, name):
        relations = {v: [r for r in rels if r.name != name] for v, rels in self._relations.items()}
        return TablePresentation(self.window, self._arrows, relations, self._basis)


def presentation_to_json(pres):
    vertices = pres.vertices()
    arrows, relations, basis = [], [], []
    for v in vertices:
        for arrow in pres.arrows_from(v):
            arrows.append({"tag": arrow.tag, "source": list(arrow.source), "target": list(arrow.target)})
        for rel in pres.relations_at(v):
            relations.append({
                "name": rel.name,
                "source": list(v),
                "terms": [{"coeff": str(c), "word": list(w)} for c, w in rel.terms],
                "text": relation_text(rel),
            })
        basis.append({"source": list(v), "words": [list(w) for w in pres.preferred_words(v)]})
    return {
        "version": PRESENTATION_VERSION,
        "window": list(pres.window) if pres.window else None,
        "top_degree": TOP_DEGREE,
        "vertices": [list(v) for v in vertices],
        "arrows": arrows,
        "relations": relations,
        "basis": basis,
    }


def presentation_from_json(doc):
    if doc.get("version") != PRESENTATION_VERSION:
        raise PresentationError(f"unsupported presentation version {doc.get('version')!r}")
    try:
        arrows = {Weight(*v): [] for v in doc["vertices"]}
        for item in doc["arrows"]:
            source, target = Weight(*item["source"]), Weight(*item["target"])
            if item["tag"] not in ARROW_TAGS:
                raise PresentationError(f"unknown arrow tag {item['tag']!r}")
            if source not in arrows or target not in arrows:
                raise PresentationError(f"arrow {item['tag']} {source}->{target} leaves the vertex list")
            arrows[source].append(Arrow(item["tag"], source, target))
        relations = {}
        for item in doc.get("relations", []):
            source = Weight(*item["source"])
            terms = tuple((Fraction(t["coeff"]), tuple(t["word"])) for t in item["terms"])
            if not 1 <= len(terms) <= 2:
                raise PresentationError(f"relation {item['name']} must have one or two terms")
            relations.setdefault(source, []).append(Relation(item["name"], source, terms))
        basis = {Weight(*b["source"]): tuple(tuple(w) for w in b["words"]) for b in doc.get("basis", [])}
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, PresentationError):
            raise
        raise PresentationError(f"malformed presentation document: {e}") from e
    return TablePresentation(doc.get("window"), arrows, relations, basis)


# ===== ALGEBRA ELEMENTS =====

class AlgebraElement:
    """Sparse combination of normal paths."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for path, coeff in (terms or {}).items():
            self.add_term(path, coeff)

    def add_term(self, path, coeff):
        value = self.terms.get(path, 0) + Fraction(coeff)
        if value:
            self.terms[path] = value
        else:
            self.terms.pop(path, None)

    def items(self):
        return sorted(self.terms.items())

    def scaled(self, c):
        return AlgebraElement({p: v * Fraction(c) for p, v in self.terms.items()})

    def __add__(self, other):
        out = AlgebraElement(self.terms)
        for p, v in other.terms.items():
            out.add_term(p, v)
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "AlgebraElement(0)"
        body = " + ".join(f"{c}*{p.name()}@{p.source}" for p, c in self.items())
        return f"AlgebraElement({body})"


# ===== THE ALGEBRA =====

class QuiverAlgebra:
    """Path algebra modulo quadratic relations; normal forms by scalar-tracked swap components."""

    def __init__(self, presentation, top_degree=TOP_DEGREE):
        self.presentation = presentation
        self.top_degree = top_degree
        self._nf = {}
        self._basis = {}

    def walk(self, source, word):
        """Vertices visited by `word` from `source`, or None if some arrow is missing."""
        v = Weight(*source)
        if not self.presentation.contains(v):
            raise WindowError(v, "vertex outside the presentation")
        visited = [v]
        for tag in word:
            nxt = None
            for arrow in self.presentation.arrows_from(v):
                if arrow.tag == tag:
                    nxt = arrow.target
                    break
            if nxt is None:
                return None
            v = nxt
            visited.append(v)
        return visited

    def _relation_moves(self, vertex, pair):
        """(zero?, [(replacement, factor)]) for a length-2 subword starting at `vertex`."""
        moves = []
        for rel in self.presentation.relations_at(vertex):
            terms = rel.terms
            if len(terms) == 1:
                if terms[0][1] == pair and terms[0][0]:
                    return True, []
                continue
            for (ca, wa), (cb, wb) in ((terms[0], terms[1]), (terms[1], terms[0])):
                if wa != pair or not ca:
                    continue
                if not cb:
                    return True, []
                moves.append((wb, -cb / ca))
        return False, moves

    def _component(self, source, word):
        scal = {word: Fraction(1)}
        queue = deque([word])
        zero = False
        while queue and not zero:
            w = queue.popleft()
            if self.top_degree is not None and len(w) > self.top_degree:
                zero = True
                break
            verts = self.walk(source, w)
            for i in range(len(w) - 1):
                kills, moves = self._relation_moves(verts[i], w[i:i + 2])
                if kills:
                    zero = True
                    break
                for replacement, factor in moves:
                    new = w[:i] + replacement + w[i + 2:]
                    value = scal[w] * factor
                    if new in scal:
                        if scal[new] != value:
                            zero = True
                            break
                    else:
                        scal[new] = value
                        queue.append(new)
                if zero:
                    break
        return scal, zero

    def normal_form(self, source, word):
        """(coefficient, NormalPath) with word = coefficient * path, or None when the word is zero."""
        source = Weight(*source)
        word = tuple(word)
        cache_key = (source, word)
        if cache_key in self._nf:
            return self._nf[cache_key]
        verts = self.walk(source, word)
        if verts is None:
            self._nf[cache_key] = None
            return None
        if not word:
            result = (Fraction(1), NormalPath(source, source, ()))
            self._nf[cache_key] = result
            return result
        scal, zero = self._component(source, word)
        if zero:
            for w in scal:
                self._nf[(source, w)] = None
            return None
        preferred = [w for w in self.presentation.preferred_words(source) if w in scal]
        rep = preferred[0] if preferred else min(scal)
        path = NormalPath(source, verts[-1], rep)
        for w, k in scal.items():
            # start = k * w, start = k_rep * rep
            self._nf[(source, w)] = (scal[rep] / k, path)
        return self._nf[cache_key]

    def path_element(self, source, word):
        nf = self.normal_form(source, word)
        if nf is None:
            return AlgebraElement()
        coeff, path = nf
        return AlgebraElement({path: coeff})

    def idempotent(self, v):
        return self.path_element(v, ())

    def arrow_element(self, tag, source):
        return self.path_element(source, (tag,))

    def multiply(self, x, y):
        """x after y: paths of y followed by paths of x; non-composable pairs give zero."""
        out = AlgebraElement()
        for py, cy in y.terms.items():
            for px, cx in x.terms.items():
                if px.source != py.target:
                    continue
                nf = self.normal_form(py.source, py.word + px.word)
                if nf is not None:
                    out.add_term(nf[1], cx * cy * nf[0])
        return out

    def extend(self, path, tag):
        """Normal form of `path` followed by one arrow, as (coeff, NormalPath) or None."""
        return self.normal_form(path.source, path.word + (tag,))

    def basis_paths(self, source):
        """Normal basis of A e_source, sorted by (degree, word)."""
        source = Weight(*source)
        if source in self._basis:
            return self._basis[source]
        start = self.normal_form(source, ())[1]
        found = {start}
        layer = [start]
        while layer:
            nxt = []
            for path in layer:
                for arrow in self.presentation.arrows_from(path.target):
                    nf = self.extend(path, arrow.tag)
                    if nf is not None and nf[1] not in found:
                        found.add(nf[1])
                        nxt.append(nf[1])
            layer = nxt
        basis = sorted(found, key=lambda p: (p.degree, p.word))
        self._basis[source] = basis
        return basis

    def graded_dim(self, mu, lam, d):
        lam = Weight(*lam)
        return sum(1 for p in self.basis_paths(mu) if p.target == lam and p.degree == d)

    def hom_dims(self, mu):
        """{target: total number of basis paths from mu}."""
        out = {}
        for p in self.basis_paths(mu):
            out[p.target] = out.get(p.target, 0) + 1
        return out

    def with_dropped_relation(self, name):
        """Same presentation without `name`; words longer than top_degree still vanish."""
        return QuiverAlgebra(self.presentation.with_dropped_relation(name), self.top_degree)


# ===== SELF-CHECKS =====

def _all_words(algebra, source, length):
    words = [((), Weight(*source))]
    for _ in range(length):
        grown = []
        for word, v in words:
            for arrow in algebra.presentation.arrows_from(v):
                grown.append((word + (arrow.tag,), arrow.target))
        words = grown
    return [w for w, _ in words]


def check_confluence(algebra, source, max_length=TOP_DEGREE):
    """Reducing the prefix first and the suffix first reach the same normal form."""
    source = Weight(*source)
    failures = []
    for length in range(2, max_length + 1):
        for word in _all_words(algebra, source, length):
            direct = algebra.path_element(source, word)
            head = algebra.path_element(source, word[:-1])
            last_source = algebra.walk(source, word[:-1])[-1]
            prefix_first = algebra.multiply(algebra.arrow_element(word[-1], last_source), head)
            first = algebra.arrow_element(word[0], source)
            second = algebra.walk(source, word[:1])[-1]
            suffix_first = algebra.multiply(algebra.path_element(second, word[1:]), first)
            if not (direct == prefix_first == suffix_first):
                failures.append(word_name(word))
    return failures


def check_associativity(algebra, source):
    """(x y) z = x (y z) over composable triples of basis paths."""
    source = Weight(*source)
    failures = []
    for z in algebra.basis_paths(source):
        for y in algebra.basis_paths(z.target):
            for x in algebra.basis_paths(y.target):
                ex, ey, ez = (AlgebraElement({p: 1}) for p in (x, y, z))
                left = algebra.multiply(algebra.multiply(ex, ey), ez)
                right = algebra.multiply(ex, algebra.multiply(ey, ez))
                if left != right:
                    failures.append((x.name(), y.name(), z.name()))
    return failures


def check_idempotents(algebra, source):
    """e_target p = p = p e_source for every basis path."""
    failures = []
    for p in algebra.basis_paths(source):
        elem = AlgebraElement({p: 1})
        left = algebra.multiply(algebra.idempotent(p.target), elem)
        right = algebra.multiply(elem, algebra.idempotent(p.source))
        if left != elem or right != elem:
            failures.append(p.name())
    return failures


def check_top_degree(presentation, source, top_degree=TOP_DEGREE):
    """Paths longer than `top_degree` vanish by the relations alone."""
    free = QuiverAlgebra(presentation, top_degree=None)
    return [
        word_name(w) for w in _all_words(free, source, top_degree + 1)
        if free.normal_form(source, w) is not None
    ]


def check_expected_basis(algebra, source):
    """Normal basis of A e_source against the expected word list."""
    got = sorted(p.word for p in algebra.basis_paths(source))
    want = sorted(expected_basis_words(source))
    return [] if got == want else [("got", [word_name(w) for w in got]), ("want", [word_name(w) for w in want])]
