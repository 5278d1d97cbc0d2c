"""
Rank-2 symplectic Lie algebra in the complexified basis and PBW normal ordering.

Structure constants come from the concrete 4x4 matrices: each commutator is
solved back into the ten-element basis with an exact left inverse over Q(i).
"""

import logging
import random
from functools import lru_cache

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from .exact import I_UNIT, ExactScalar, MultiPoly
from .reports import CheckResult

logger = logging.getLogger(__name__)

LETTERS = (
    "Eplus11", "Eplus12", "Eplus22",
    "Eminus11", "Eminus12", "Eminus22",
    "B11", "B12", "B21", "B22",
)
# Root spaces of the positive system lie in C*B12 + p^-.
POSITIVE_LETTERS = frozenset({"B12", "Eminus11", "Eminus12", "Eminus22"})
CARTAN_LETTERS = ("B11", "B22")
NEGATIVE_LETTERS = frozenset(set(LETTERS) - POSITIVE_LETTERS - set(CARTAN_LETTERS))

ORDERINGS = ("scalarK", "borelHC")


class InternalConsistencyError(Exception):
    """Raised when a commutator cannot be reproduced in the basis."""


# -----------------------------------------------------------------------------
# Matrices
# -----------------------------------------------------------------------------
ZERO = ExactScalar(0)
ONE = ExactScalar(1)
HALF = ExactScalar(1, 0) / 2


def _unit(k, l):
    return tuple(tuple(ONE if (i, j) == (k - 1, l - 1) else ZERO for j in range(2)) for i in range(2))


def _add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _scale(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def matmul(a, b):
    n, m = len(a), len(b[0])
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(len(b))), ZERO) for j in range(m))
        for i in range(n)
    )


def mat_sub(a, b):
    return _add(a, _scale(ExactScalar(-1), b))


def identity(n):
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zero_matrix(n):
    return tuple(tuple(ZERO for _ in range(n)) for _ in range(n))


def transpose(a):
    return tuple(zip(*a))


def kron(pattern, block):
    rows = []
    for r in range(2):
        for i in range(2):
            rows.append(tuple(pattern[r][c] * block[i][j] for c in range(2) for j in range(2)))
    return tuple(rows)


M_PLUS = ((ONE, I_UNIT), (I_UNIT, -ONE))
M_MINUS = ((ONE, -I_UNIT), (-I_UNIT, -ONE))
J_PATTERN = ((ZERO, ONE), (-ONE, ZERO))


def sym_unit(k, l):
    """X^(kl) = (e_kl + e_lk) / 2."""
    return _scale(HALF, _add(_unit(k, l), _unit(l, k)))


def parse_tag(tag):
    """'Eplus12' -> ('Eplus', 1, 2)."""
    if tag not in LETTERS:
        raise KeyError(f"unknown basis letter {tag!r}")
    return tag[:-2], int(tag[-2]), int(tag[-1])


def entry_tag(kind, k, l):
    """Letter for the (k, l) entry of E+, E- (symmetric) or B."""
    if kind in ("Eplus", "Eminus"):
        k, l = min(k, l), max(k, l)
    return f"{kind}{k}{l}"


@lru_cache(maxsize=None)
def basis_matrix(tag):
    kind, k, l = parse_tag(tag)
    if kind == "Eplus":
        return kron(M_PLUS, sym_unit(k, l))
    if kind == "Eminus":
        return kron(M_MINUS, sym_unit(k, l))
    a = _scale(HALF, mat_sub(_unit(k, l), _unit(l, k)))
    s = _scale(I_UNIT / 2, _add(_unit(k, l), _unit(l, k)))
    return _add(kron(identity(2), a), kron(J_PATTERN, s))


# [[0, E], [-E, 0]]; the condition M'W + WM = 0 does not see the overall sign.
SYMPLECTIC_FORM = kron(J_PATTERN, identity(2))


def is_symplectic_algebra_element(m):
    lhs = _add(matmul(transpose(m), SYMPLECTIC_FORM), matmul(SYMPLECTIC_FORM, m))
    return all(x.is_zero() for row in lhs for x in row)


def commutator(a, b):
    return mat_sub(matmul(a, b), matmul(b, a))


# -----------------------------------------------------------------------------
# Structure constants
# -----------------------------------------------------------------------------
def _flatten(m):
    return [x for row in m for x in row]


@lru_cache(maxsize=None)
def _left_inverse():
    """Rows E with E*A = [I; 0] for the 16x10 matrix A of flattened basis vectors."""
    columns = [_flatten(basis_matrix(tag)) for tag in LETTERS]
    rows = [[columns[j][i].to_domain() for j in range(len(LETTERS))] for i in range(16)]
    a = DomainMatrix(rows, (16, len(LETTERS)), QQ_I)
    reduced, pivots = a.hstack(DomainMatrix.eye(16, QQ_I)).rref()
    if tuple(pivots[: len(LETTERS)]) != tuple(range(len(LETTERS))):
        raise InternalConsistencyError("basis matrices are not linearly independent")
    dense = reduced.to_Matrix()
    return tuple(
        tuple(ExactScalar.of(dense[i, len(LETTERS) + j]) for j in range(16)) for i in range(16)
    )


def coordinates(m):
    """Exact coordinates of a 4x4 matrix in the basis; raises when outside the span."""
    inv = _left_inverse()
    flat = _flatten(m)
    solved = [sum((inv[i][j] * flat[j] for j in range(16)), ZERO) for i in range(16)]
    if any(not x.is_zero() for x in solved[len(LETTERS):]):
        raise InternalConsistencyError("matrix lies outside the span of the basis")
    return {tag: c for tag, c in zip(LETTERS, solved) if not c.is_zero()}


def combination_matrix(combo):
    total = zero_matrix(4)
    for tag, c in combo.items():
        total = _add(total, _scale(c, basis_matrix(tag)))
    return total


@lru_cache(maxsize=None)
def _bracket_items(x, y):
    target = commutator(basis_matrix(x), basis_matrix(y))
    combo = coordinates(target)
    if combination_matrix(combo) != target:
        raise InternalConsistencyError(f"[{x},{y}] is not reproduced by its coordinates")
    return tuple(sorted(combo.items(), key=lambda item: LETTERS.index(item[0])))


def bracket(x, y):
    """[x, y] as {letter: ExactScalar}."""
    return dict(_bracket_items(x, y))


def structure_constants():
    """All nonzero brackets [x, y] with x before y in the letter order."""
    table = {}
    for i, x in enumerate(LETTERS):
        for y in LETTERS[i + 1:]:
            combo = bracket(x, y)
            if combo:
                table[(x, y)] = combo
    return table


def format_combination(combo):
    if not combo:
        return "0"
    pieces = []
    for tag in LETTERS:
        if tag not in combo:
            continue
        c = combo[tag]
        if c == 1:
            body, negative = tag, False
        elif c == -1:
            body, negative = tag, True
        elif c.is_real():
            body, negative = f"{abs(c.re)}*{tag}", c.re < 0
        else:
            body, negative = f"{c}*{tag}", False
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def format_structure_constants():
    """Deterministic text table, one bracket per line."""
    lines = [f"[{x},{y}] = {format_combination(combo)}" for (x, y), combo in structure_constants().items()]
    return "\n".join(lines) + "\n"


def jacobi_residual(x, y, z):
    """[x,[y,z]] + [y,[z,x]] + [z,[x,y]] as a combination (empty when it holds)."""
    total = {}
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        for inner, coeff in bracket(b, c).items():
            for outer, coeff2 in bracket(a, inner).items():
                total[outer] = total.get(outer, ZERO) + coeff * coeff2
    return {tag: c for tag, c in total.items() if not c.is_zero()}


def root_of(tag):
    """Weight of a letter under ad B11, ad B22 (letters are weight vectors)."""
    weight = []
    for h in CARTAN_LETTERS:
        combo = bracket(h, tag)
        if not combo:
            weight.append(ExactScalar(0))
            continue
        if set(combo) != {tag}:
            raise InternalConsistencyError(f"{tag} is not a weight vector for {h}")
        weight.append(combo[tag])
    return tuple(weight)


# -----------------------------------------------------------------------------
# PBW normal ordering
# -----------------------------------------------------------------------------
def _rank_table(ordering):
    if ordering == "scalarK":
        return {tag: i for i, tag in enumerate(LETTERS)}
    if ordering == "borelHC":
        ordered = (
            [t for t in LETTERS if t in NEGATIVE_LETTERS]
            + list(CARTAN_LETTERS)
            + [t for t in LETTERS if t in POSITIVE_LETTERS]
        )
        return {tag: i for i, tag in enumerate(ordered)}
    raise ValueError(f"unknown ordering {ordering!r}; expected one of {ORDERINGS}")


@lru_cache(maxsize=None)
def _ranks(ordering):
    return _rank_table(ordering)


def _first_inversion(word, ranks):
    for i in range(len(word) - 1):
        if ranks[word[i]] > ranks[word[i + 1]]:
            return i
    return None


def _accumulate(acc, items, factor):
    for w, c in items:
        acc[w] = acc.get(w, ZERO) + factor * c


@lru_cache(maxsize=None)
def normal_form_word(ordering, word):
    """PBW normal form of a single word as ((word, ExactScalar), ...)."""
    ranks = _ranks(ordering)
    i = _first_inversion(word, ranks)
    if i is None:
        return ((word, ONE),)
    x, y = word[i], word[i + 1]
    acc = {}
    # xy = yx + [x, y]
    _accumulate(acc, normal_form_word(ordering, word[:i] + (y, x) + word[i + 2:]), ONE)
    for z, c in _bracket_items(x, y):
        _accumulate(acc, normal_form_word(ordering, word[:i] + (z,) + word[i + 2:]), c)
    return tuple(sorted(((w, c) for w, c in acc.items() if not c.is_zero()), key=lambda t: _word_key(t[0], ranks)))


@lru_cache(maxsize=None)
def hc_project_word(word):
    """Cartan part of a word along n^- U(g) + U(g) n^+ (borelHC ranks)."""
    if not word:
        return (((), ONE),)
    if word[0] in NEGATIVE_LETTERS or word[-1] in POSITIVE_LETTERS:
        return ()
    ranks = _ranks("borelHC")
    i = _first_inversion(word, ranks)
    if i is None:
        return ((word, ONE),)
    x, y = word[i], word[i + 1]
    acc = {}
    _accumulate(acc, hc_project_word(word[:i] + (y, x) + word[i + 2:]), ONE)
    for z, c in _bracket_items(x, y):
        _accumulate(acc, hc_project_word(word[:i] + (z,) + word[i + 2:]), c)
    return tuple(sorted((w, c) for w, c in acc.items() if not c.is_zero()))


def _word_key(word, ranks):
    return (len(word), [ranks[t] for t in word])


def is_ordered(word, ordering):
    return _first_inversion(word, _ranks(ordering)) is None


class UEAElement:
    """Finite sum of words with polynomial coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for word, coeff in (terms or {}).items():
            if not isinstance(coeff, MultiPoly):
                coeff = MultiPoly.const(coeff)
            if not coeff.is_zero():
                clean[tuple(word)] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("UEAElement is immutable")

    @classmethod
    def letter(cls, tag):
        parse_tag(tag)
        return cls({(tag,): 1})

    @classmethod
    def word(cls, tags, coeff=1):
        for tag in tags:
            parse_tag(tag)
        return cls({tuple(tags): coeff})

    @classmethod
    def scalar(cls, value):
        return cls({(): value})

    def is_zero(self):
        return not self.terms

    def _combine(self, other, sign):
        out = dict(self.terms)
        for word, coeff in other.terms.items():
            out[word] = out.get(word, MultiPoly.const(0)) + coeff * sign
        return UEAElement(out)

    def __add__(self, other):
        return self._combine(_as_element(other), 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(_as_element(other), -1)

    def __neg__(self):
        return UEAElement({w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, UEAElement):
            out = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    out[w] = out.get(w, MultiPoly.const(0)) + c1 * c2
            return UEAElement(out)
        return UEAElement({w: c * other for w, c in self.terms.items()})

    def __rmul__(self, other):
        return UEAElement({w: c * other for w, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, UEAElement):
            other = _as_element(other)
        return self.terms == other.terms

    __hash__ = None

    def summand_count(self):
        return len(self.terms)

    def normalize(self, ordering):
        """PBW normal form under the named ordering."""
        out = {}
        for word, coeff in self.terms.items():
            for w, c in normal_form_word(ordering, word):
                out[w] = out.get(w, MultiPoly.const(0)) + coeff.scale(c)
        return UEAElement(out)

    def is_normalized(self, ordering):
        return all(is_ordered(w, ordering) for w in self.terms)

    def to_matrix(self):
        """Image in the defining representation (constant coefficients only)."""
        total = zero_matrix(4)
        for word, coeff in self.terms.items():
            m = identity(4)
            for tag in word:
                m = matmul(m, basis_matrix(tag))
            total = _add(total, _scale(coeff.constant_value(), m))
        return total

    def sorted_terms(self):
        ranks = _ranks("scalarK")
        return sorted(self.terms.items(), key=lambda t: _word_key(t[0], ranks))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for word, coeff in self.sorted_terms():
            label = "*".join(word) if word else "1"
            parts.append(f"({coeff})*{label}")
        return " + ".join(parts)

    def __repr__(self):
        return f"UEAElement({self})"


def _as_element(value):
    if isinstance(value, UEAElement):
        return value
    return UEAElement.scalar(value)


def random_element(rng, max_length=3, n_terms=4):
    """Random element with small integer coefficients, for property checks."""
    terms = {}
    for _ in range(n_terms):
        length = rng.randint(0, max_length)
        word = tuple(rng.choice(LETTERS) for _ in range(length))
        terms[word] = MultiPoly.const(rng.randint(-3, 3)) + terms.get(word, MultiPoly.const(0))
    return UEAElement(terms)


def default_rng(seed):
    return random.Random(seed)


# -----------------------------------------------------------------------------
# Checks
# -----------------------------------------------------------------------------
def _combo_text(combo):
    return format_combination(dict(combo))


def verify_basis():
    bad = [tag for tag in LETTERS if not is_symplectic_algebra_element(basis_matrix(tag))]
    results = [CheckResult.predicate(
        "uea.basis.symplectic",
        "every basis matrix M satisfies M'W + WM = 0",
        f"{len(LETTERS) - len(bad)}/{len(LETTERS)}",
        f"{len(LETTERS)}/{len(LETTERS)}",
        not bad,
        mismatch=f"not in sp: {bad}",
    )]
    unreproduced = []
    for x in LETTERS:
        for y in LETTERS:
            try:
                bracket(x, y)
            except InternalConsistencyError:
                unreproduced.append(f"[{x},{y}]")
    results.append(CheckResult.predicate(
        "uea.bracket.reconstruction",
        "each commutator is reproduced exactly by its basis coordinates",
        len(LETTERS) ** 2 - len(unreproduced),
        len(LETTERS) ** 2,
        not unreproduced,
        mismatch=", ".join(unreproduced),
    ))
    got = bracket("B12", "B21")
    results.append(CheckResult.predicate(
        "uea.bracket.B12_B21", "[B12, B21] = B11 - B22", _combo_text(got), "B11 - B22", got == {"B11": ONE, "B22": -ONE}
    ))
    got = bracket("Eminus11", "Eplus11")
    results.append(CheckResult.predicate(
        "uea.bracket.p_minus_p_plus",
        "[p-, p+] lies in k",
        _combo_text(got),
        "combination of B letters",
        bool(got) and all(parse_tag(tag)[0] == "B" for tag in got),
    ))
    return results


def verify_jacobi():
    failures = []
    count = 0
    for i, x in enumerate(LETTERS):
        for j in range(i + 1, len(LETTERS)):
            for z in LETTERS[j + 1:]:
                count += 1
                if jacobi_residual(x, LETTERS[j], z):
                    failures.append((x, LETTERS[j], z))
    return CheckResult.predicate(
        "uea.jacobi",
        "Jacobi identity on all basis triples",
        f"{count - len(failures)}/{count}",
        "120/120",
        not failures and count == 120,
        mismatch=f"failing triples {failures[:3]}",
    )


def verify_roots():
    weights = {tag: tuple(int(c.re) for c in root_of(tag)) for tag in sorted(POSITIVE_LETTERS)}
    expected = {"B12": (1, -1), "Eminus11": (2, 0), "Eminus12": (1, 1), "Eminus22": (0, 2)}
    return CheckResult.predicate(
        "uea.roots.positive",
        "root spaces of the positive system lie in C*B12 + p^-",
        weights,
        expected,
        weights == expected,
    )


def verify_normal_ordering(seed=0, samples=50):
    results = []
    got = UEAElement.word(("B21", "B12")).normalize("scalarK")
    expected = UEAElement.word(("B12", "B21")) - UEAElement.letter("B11") + UEAElement.letter("B22")
    results.append(CheckResult.predicate(
        "uea.pbw.single_rewrite", "B21 B12 = B12 B21 - B11 + B22", got, expected, got == expected
    ))
    rng = default_rng(seed)
    not_idempotent, changed_image, unordered = [], [], []
    for i in range(samples):
        element = random_element(rng)
        for ordering in ORDERINGS:
            normal = element.normalize(ordering)
            if not normal.is_normalized(ordering):
                unordered.append((i, ordering))
            if normal.normalize(ordering) != normal:
                not_idempotent.append((i, ordering))
            if normal.to_matrix() != element.to_matrix():
                changed_image.append((i, ordering))
    results.append(CheckResult.predicate(
        "uea.pbw.ordered", "normal forms are supported on ordered words", len(unordered), 0, not unordered
    ))
    results.append(CheckResult.predicate(
        "uea.pbw.idempotent", "normalize o normalize = normalize", len(not_idempotent), 0, not not_idempotent
    ))
    results.append(CheckResult.predicate(
        "uea.pbw.matrix_image",
        "normal form has the same image in the defining representation",
        len(changed_image),
        0,
        not changed_image,
        mismatch=f"samples {changed_image[:5]}",
        details={"samples": samples, "seed": seed},
    ))
    return results


def run_checks(seed=0):
    logger.info("Running enveloping algebra checks (seed %d)", seed)
    results = verify_basis()
    results.append(verify_jacobi())
    results.append(verify_roots())
    results += verify_normal_ordering(seed)
    return results
