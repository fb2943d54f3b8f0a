# === resolution.py (minimal graded projective resolutions of simples, Koszulity, Ext tables) ===
from dataclasses import dataclass, field
from fractions import Fraction

import settings
from errors import VerificationError, WindowError
from exact_linalg import SparseMatrix, complement_basis, kernel_basis
from pe2_core import Weight, dual, require_odd
from quiver_algebra import TOP_DEGREE, Presentation, QuiverAlgebra, word_name

RESOLUTION_VERSION = 1


# ===== TYPES =====

@dataclass
class GradedProjectiveSum:
    """P(v_1)<s_1> + ... + P(v_k)<s_k>; summand order is the generator order."""
    summands: list = field(default_factory=list)

    def __len__(self):
        return len(self.summands)

    def vertices(self):
        return [v for v, _ in self.summands]

    def count(self, vertex, shift=None):
        vertex = Weight(*vertex)
        return sum(1 for v, s in self.summands if v == vertex and (shift is None or s == shift))

    def block(self, algebra, degree, end):
        """Basis (summand index, path) of the graded piece of `degree` whose paths end at `end`."""
        out = []
        for i, (v, s) in enumerate(self.summands):
            for path in algebra.basis_paths(v):
                if s + path.degree == degree and path.target == end:
                    out.append((i, path))
        return out

    def degree_range(self, algebra):
        if not self.summands:
            return range(0)
        low = min(s for _, s in self.summands)
        high = max(s + max(p.degree for p in algebra.basis_paths(v)) for v, s in self.summands)
        return range(low, high + 1)

    def ends(self, algebra):
        return sorted({p.target for v, _ in self.summands for p in algebra.basis_paths(v)})


@dataclass
class ResolutionStep:
    """P_n with the images of its generators in P_{n-1} (as {(index, NormalPath): coeff})."""
    n: int
    projectives: GradedProjectiveSum
    boundary: list = field(default_factory=list)

    def generator_degrees(self):
        return [s for _, s in self.projectives.summands]


# ===== ELEMENT ARITHMETIC =====

def _add(out, key, value):
    value = out.get(key, 0) + value
    if value:
        out[key] = value
    else:
        out.pop(key, None)


def apply_boundary(algebra, step, element):
    """phi_n on an element of P_n, landing in P_{n-1}."""
    out = {}
    for (i, path), c in element.items():
        for (j, inner), c2 in step.boundary[i].items():
            nf = algebra.normal_form(inner.source, inner.word + path.word)
            if nf is not None:
                _add(out, (j, nf[1]), c * c2 * nf[0])
    return out


def left_multiply_arrow(algebra, tag, element):
    """arrow . element: extend every path by one arrow."""
    out = {}
    for (i, path), c in element.items():
        nf = algebra.extend(path, tag)
        if nf is not None:
            _add(out, (i, nf[1]), c * nf[0])
    return out


def _coordinates(element, block):
    index = {key: pos for pos, key in enumerate(block)}
    vec = [Fraction(0)] * len(block)
    for key, c in element.items():
        vec[index[key]] = c
    return vec


# ===== WINDOW =====

def required_region(mu, n_max):
    """Weights a resolution up to n_max may touch: |a+1| grows by at most 2 per arrow, b by at most 1."""
    steps = n_max + TOP_DEGREE + 1
    radius = abs(mu[0] + 1) + 2 * steps
    return (-radius - 1, radius - 1, mu[1], mu[1] + steps)


def check_window(presentation, mu, n_max):
    a_min, a_max, b_min, b_max = required_region(mu, n_max)
    for b in range(b_min, b_max + 1):
        for a in range(a_min, a_max + 1, 2):
            if not presentation.contains((a, b)):
                raise WindowError((a, b), f"resolving {tuple(mu)} to degree {n_max} needs a window "
                                          f"covering a in [{a_min}, {a_max}], b in [{b_min}, {b_max}]")


# ===== RESOLUTION =====

def _kernel_blocks(algebra, step):
    """ker phi_n by (degree, end vertex) as lists of element dicts; phi_0 is the projection to the top."""
    kernels = {}
    for d in step.projectives.degree_range(algebra):
        for end in step.projectives.ends(algebra):
            block = step.projectives.block(algebra, d, end)
            if not block:
                continue
            if step.n == 0:
                vectors = [{key: Fraction(1)} for key in block if key[1].degree > 0]
            else:
                images = [apply_boundary(algebra, step, {key: Fraction(1)}) for key in block]
                rows = sorted({k for image in images for k in image}, key=lambda k: (k[0], k[1].word))
                row_index = {k: r for r, k in enumerate(rows)}
                entries = {}
                for col, image in enumerate(images):
                    for k, c in image.items():
                        entries[(row_index[k], col)] = c
                matrix = SparseMatrix(len(rows), len(block), entries)
                vectors = [{block[j]: c for j, c in enumerate(vec) if c} for vec in kernel_basis(matrix)]
            if vectors:
                kernels[(d, end)] = (block, vectors)
    return kernels


def _minimal_generators(algebra, kernels):
    """Complement of A_{>0} K inside K, degree by degree; leading coefficient 1."""
    found = []
    for d, end in sorted(kernels, key=lambda k: (k[0], k[1])):
        block, vectors = kernels[(d, end)]
        lower = []
        for (d0, end0), (_, vecs0) in kernels.items():
            if d0 != d - 1:
                continue
            for arrow in algebra.presentation.arrows_from(end0):
                if arrow.target != end:
                    continue
                for vec in vecs0:
                    image = left_multiply_arrow(algebra, arrow.tag, vec)
                    if image:
                        lower.append(_coordinates(image, block))
        candidates = [_coordinates(vec, block) for vec in vectors]
        for index in complement_basis(lower, candidates):
            vec = candidates[index]
            lead = next(c for c in vec if c)
            found.append((d, end, {block[j]: c / lead for j, c in enumerate(vec) if c}))
    return found


def _check_step(algebra, prev, step):
    n = step.n
    for (v, s), gen in zip(step.projectives.summands, step.boundary):
        if s < n:
            raise VerificationError(f"P_{n} has summand P({v})<{s}> with shift below {n}")
        for (j, path), c in gen.items():
            if path.degree == 0:
                raise VerificationError(f"boundary of P_{n} has an idempotent entry at summand {j}")
            if s == n and (prev.projectives.summands[j][1] != n - 1 or path.degree != 1):
                raise VerificationError(f"linear generator of P_{n} leaves the degree-{n - 1} part")
        if n >= 2 and apply_boundary(algebra, prev, gen):
            raise VerificationError(f"boundary squared is nonzero on a generator of P_{n}")


def resolve(algebra, mu, n_max):
    """Steps 0..n_max of the minimal graded projective resolution of L(mu)."""
    mu = require_odd(mu)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    pres = algebra.presentation
    if not (isinstance(pres, Presentation) and pres.window is None):
        check_window(pres, mu, n_max)
    steps = [ResolutionStep(0, GradedProjectiveSum([(mu, 0)]), [])]
    for n in range(1, n_max + 1):
        prev = steps[-1]
        kernels = _kernel_blocks(algebra, prev)
        low = min((d for d, _ in kernels), default=None)
        if low is not None and low < n:
            raise VerificationError(f"ker phi_{n - 1} has an element of degree {low} < {n}")
        gens = _minimal_generators(algebra, kernels)
        step = ResolutionStep(
            n,
            GradedProjectiveSum([(end, d) for d, end, _ in gens]),
            [vec for _, _, vec in gens],
        )
        _check_step(algebra, prev, step)
        steps.append(step)
        settings.log("DEBUG", f"resolve {mu}: P_{n} has {len(step.projectives)} summands, "
                              f"degrees {sorted(set(step.generator_degrees()))}")
    return steps


# ===== KOSZULITY =====

def koszul_check(steps, top_degree=None):
    """(True, None) when every generator of P_n sits in degree n, else (False, first offender).

    With the algebra's length cut-off `top_degree`, the offender also says whether the cut-off
    can produce it: vanishing words longer than top_degree only reach generators of P_n in
    degrees above top_degree + n - 2.
    """
    for step in steps[1:]:
        for v, s in step.projectives.summands:
            if s != step.n:
                failure = {"n": step.n, "vertex": str(v), "degree": s}
                if top_degree is not None:
                    failure["cutoff_reachable"] = s > top_degree + step.n - 2
                return False, failure
    return True, None


def linear_strand(steps):
    """Subcomplex of summands P(v)<n> in homological degree n."""
    strand = []
    keep_prev = None
    for step in steps:
        keep = [i for i, (_, s) in enumerate(step.projectives.summands) if s == step.n]
        remap = {old: new for new, old in enumerate(keep_prev or [])}
        boundary = []
        for i in keep:
            if step.n == 0:
                break
            gen = {(remap[j], p): c for (j, p), c in step.boundary[i].items() if j in remap}
            boundary.append(gen)
        strand.append(ResolutionStep(
            step.n,
            GradedProjectiveSum([step.projectives.summands[i] for i in keep]),
            boundary,
        ))
        keep_prev = keep
    return strand


def strand_equals_resolution(steps):
    """Complexes agree summand by summand."""
    strand = linear_strand(steps)
    return all(s.projectives.summands == t.projectives.summands for s, t in zip(strand, steps))


def check_linear_strand(algebra, strand):
    failures = []
    for prev, step in zip(strand[1:], strand[2:]):
        for i, gen in enumerate(step.boundary):
            if apply_boundary(algebra, prev, gen):
                failures.append((step.n, i))
    return failures


def koszul_mutation_check(algebra, mu, n_max=3, relation="qp"):
    """koszul_check of the resolution over the algebra with one relation dropped.

    The mutated algebra keeps the length cut-off of `algebra`: it is the algebra without the
    relation, modulo every word longer than top_degree. `cutoff_reachable` in the offender
    marks a failure that the cut-off alone can explain.
    """
    mutated = algebra.with_dropped_relation(relation)
    return koszul_check(resolve(mutated, mu, n_max), mutated.top_degree)


# ===== EXT =====

def ext_dims(steps, lam, n):
    """Multiplicity of P(lambda)<n> in P_n."""
    if n >= len(steps):
        raise ValueError(f"resolution only computed to degree {len(steps) - 1}")
    return steps[n].projectives.count(lam, shift=n)


def _m_set(n):
    if n < 0:
        return []
    return [2 * n - 4 * i for i in range(n + 1)]


def ext_formula(mu, lam, n):
    """Closed form for dim Ext^n(L(mu), L(lambda)) in the grading that makes it Koszul."""
    mu, lam = require_odd(mu), Weight(*lam)
    a, b = mu
    mu_dual = dual(mu)
    total = 0
    if a >= 1:
        total += sum(1 for m in _m_set(n) if m > 2 * (n - a - 1) and lam == mu + (m, n))
        total += sum(1 for m in _m_set(n - 1) if m < -2 * (n - a - 2) and lam == mu_dual + (m, n - 1))
        total += sum(1 for m in _m_set(n - 2) if m > 2 * (n - a - 3) and lam == mu + (m, n - 2))
    else:
        total += sum(1 for m in _m_set(n) if m < 1 - a and lam == mu + (m, n))
        total += sum(1 for m in _m_set(n - 1) if m > 2 * (n + a) and lam == mu_dual + (m, n - 1))
    return total


def formula_support(mu, n):
    """Weights lambda with ext_formula(mu, lambda, n) possibly nonzero."""
    mu = require_odd(mu)
    out = {mu + (m, n) for m in _m_set(n)}
    out |= {dual(mu) + (m, n - 1) for m in _m_set(n - 1)}
    out |= {mu + (m, n - 2) for m in _m_set(n - 2)}
    return sorted(out)


def ext_table(algebra, mu, n_max, steps=None):
    """Rows (mu, lambda, n, computed, formula) over the union of both supports."""
    mu = require_odd(mu)
    if steps is None:
        steps = resolve(algebra, mu, n_max)
    rows = []
    for n in range(n_max + 1):
        weights = set(formula_support(mu, n)) | set(steps[n].projectives.vertices())
        for lam in sorted(weights):
            computed = ext_dims(steps, lam, n)
            formula = ext_formula(mu, lam, n)
            if not (computed or formula):
                continue
            rows.append({
                "mu": str(mu),
                "lambda": str(lam),
                "n": n,
                "computed": computed,
                "formula": formula,
                "status": "ok" if computed == formula else "FAIL",
            })
    return rows


def ext_agreement(algebra, mus, n_max):
    """ext_table over several mu; a mu whose resolution leaves the window gets window-limited rows."""
    rows = []
    for mu in mus:
        try:
            rows.extend(ext_table(algebra, mu, n_max))
        except WindowError as e:
            settings.log("WARN", f"{tuple(mu)}: window-limited ({e})")
            rows.extend({"mu": str(Weight(*mu)), "lambda": "", "n": n, "computed": None, "formula": None,
                         "status": "window-limited"} for n in range(n_max + 1))
    return rows


def ext_grid_markdown(rows, mu):
    """Grid of computed Ext dimensions keyed by (da, db) offsets from mu, one block per n."""
    mu = Weight(*mu)
    lines = []
    by_n = {}
    for row in rows:
        if row["computed"] is None or row["mu"] != str(mu):
            continue
        lam = Weight(*(int(x) for x in row["lambda"].split(",")))
        by_n.setdefault(row["n"], {})[(lam.a - mu.a, lam.b - mu.b)] = row["computed"]
    for n in sorted(by_n):
        cells = by_n[n]
        das = sorted({da for da, _ in cells})
        dbs = sorted({db for _, db in cells})
        lines.append(f"### n = {n}")
        lines.append("")
        lines.append("| db \\ da | " + " | ".join(str(da) for da in das) + " |")
        lines.append("|---" * (len(das) + 1) + "|")
        for db in dbs:
            lines.append(f"| {db} | " + " | ".join(str(cells.get((da, db), "")) for da in das) + " |")
        lines.append("")
    return "\n".join(lines)


# ===== COEFFICIENT RECURSIONS =====

def expected_coefficients(a, n):
    """Predicted linear generators at level n for a center a <= -1 (valid while 2n < 1-a).

    Returns {target offset: {summand offset: coefficient}}; offsets are (kind, m, level) with
    kind "mu" for mu + (m, level) and "dual" for mu' + (m, level)."""
    if a > -1:
        raise ValueError("coefficient recursions are for a <= -1")
    sigma, tau = {}, {}
    for k in range(1, n + 1):
        for m in _m_set(k):
            if m == 2 * k:
                sigma[(k, m)], tau[(k, m)] = Fraction(0), Fraction(1)
            elif m == -2 * k:
                sigma[(k, m)], tau[(k, m)] = Fraction(1), Fraction(0)
            else:
                sigma[(k, m)] = 1 / tau[(k - 1, m + 2)]
                tau[(k, m)] = (1 / sigma[(k - 1, m - 2)]) * Fraction(a + m + 3, a + m - 1) ** 2
    out = {}
    for m in _m_set(n):
        combo = {}
        if sigma[(n, m)]:
            combo[("mu", m + 2, n - 1)] = sigma[(n, m)]
        if tau[(n, m)]:
            combo[("mu", m - 2, n - 1)] = tau[(n, m)]
        out[("mu", m, n)] = combo
    for m in _m_set(n - 1):
        combo = {("mu", -m, n - 1): Fraction(1)}
        if n >= 2:
            beta = (a - m + 1) * sigma[(n - 1, -m)]
            gamma = (a - m + 1) * tau[(n - 1, -m)]
            if beta:
                combo[("dual", m - 2, n - 2)] = beta
            if gamma:
                combo[("dual", m + 2, n - 2)] = gamma
        out[("dual", m, n - 1)] = combo
    return out


def _offset_weight(mu, offset):
    kind, m, level = offset
    base = mu if kind == "mu" else dual(mu)
    return base + (m, level)


def coefficient_ratio_report(steps, mu):
    """Compare linear generators with the predicted coefficients up to one scalar per generator."""
    mu = require_odd(mu)
    a = mu.a
    rows = []
    scales = {0: [Fraction(1)]}
    for step in steps[1:]:
        n = step.n
        prev_summands = steps[n - 1].projectives.summands
        prev_scales = scales[n - 1]
        scales[n] = [None] * len(step.projectives)
        if 2 * n >= 1 - a:
            rows.append({"mu": str(mu), "n": n, "target": "", "predicted": "", "computed": "",
                         "status": "outside-range"})
            continue
        try:
            coefficients = expected_coefficients(a, n)
        except ZeroDivisionError:
            rows.append({"mu": str(mu), "n": n, "target": "", "predicted": "", "computed": "",
                         "status": "denominator-vanishes"})
            continue
        predicted = {_offset_weight(mu, t): {_offset_weight(mu, s): c for s, c in combo.items()}
                     for t, combo in coefficients.items()}
        for i, ((target, shift), gen) in enumerate(zip(step.projectives.summands, step.boundary)):
            want = predicted.get(target)
            got = {}
            for (j, path), c in gen.items():
                scale = prev_scales[j]
                got[prev_summands[j][0]] = c * scale if scale is not None else None
            row = {
                "mu": str(mu),
                "n": n,
                "target": str(target),
                "predicted": "" if want is None else ", ".join(f"{w}:{c}" for w, c in sorted(want.items())),
                "computed": ", ".join(f"{w}:{c}" for w, c in sorted(got.items())),
            }
            if want is None:
                row["status"] = "unexpected"
            elif None in got.values() or set(got) != set(want):
                row["status"] = "mismatch"
            else:
                first = sorted(want)[0]
                ratio = got[first] / want[first]
                ok = all(got[w] == ratio * want[w] for w in want)
                row["status"] = "ok" if ok else "mismatch"
                if ok:
                    scales[n][i] = ratio
            rows.append(row)
    return rows


# ===== SERIALIZATION =====

def resolution_to_json(steps, mu):
    doc = {"version": RESOLUTION_VERSION, "mu": list(Weight(*mu)), "steps": []}
    for step in steps:
        doc["steps"].append({
            "n": step.n,
            "projectives": [{"vertex": list(v), "shift": s} for v, s in step.projectives.summands],
            "boundary": [
                [{"summand": j, "path": word_name(p.word), "source": list(p.source), "coeff": str(c)}
                 for (j, p), c in sorted(gen.items(), key=lambda kv: (kv[0][0], kv[0][1].word))]
                for gen in step.boundary
            ],
        })
    return doc


def default_algebra(mu_list, n_max):
    """Algebra over a window large enough for every listed mu."""
    regions = [required_region(require_odd(mu), n_max) for mu in mu_list]
    window = (min(r[0] for r in regions), max(r[1] for r in regions),
              min(r[2] for r in regions), max(r[3] for r in regions))
    return QuiverAlgebra(Presentation(window))
