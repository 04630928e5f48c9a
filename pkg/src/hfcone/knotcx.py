"""Finite presentations of doubly filtered knot complexes over F2[U, U^-1].

A complex is given by its generators at U-power zero.  Generator ``g`` with
Alexander grading ``A`` sits at filtration level ``(0, A)``; the element
``U^{-i} g`` sits at ``(i, i + A)`` and has internal grading ``M + 2i``.
Differential entries ``(from, to, e)`` mean that ``d(from)`` contains
``U^e to``.  Flip entries ``(from, to)`` mean that the flip map sends
``from`` to a sum containing ``U^{-A(from)} to``, so that the filtration box
``(i, j)`` is carried to ``(j, i)``.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field

__all__ = [
    "KnotComplex",
    "ComplexError",
    "ValidationError",
    "parse_complex",
    "load_complex",
    "serialize",
    "dumps",
    "validate",
    "builtin_unknot",
    "builtin_t34",
    "builtin_staircase",
    "builtin_borromean",
    "builtin",
    "isomorphic",
]


class ComplexError(ValueError):
    """Malformed complex document."""


class ValidationError(ComplexError):
    """A structurally valid document violating a complex invariant."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


@dataclass(frozen=True)
class Generator:
    id: str
    alexander: int
    maslov: int


@dataclass(frozen=True)
class DiffEntry:
    source: str
    target: str
    u_power: int


@dataclass(frozen=True)
class FlipEntry:
    source: str
    target: str


@dataclass(frozen=True)
class KnotComplex:
    name: str
    generators: tuple[Generator, ...]
    differential: tuple[DiffEntry, ...] = ()
    flip: tuple[FlipEntry, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {g.id: g for g in self.generators})

    def __getitem__(self, gid: str) -> Generator:
        return self._index[gid]

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(g.id for g in self.generators)

    @property
    def max_abs_alexander(self) -> int:
        return max((abs(g.alexander) for g in self.generators), default=0)

    @property
    def maslov_range(self) -> tuple[int, int]:
        ms = [g.maslov for g in self.generators]
        return min(ms), max(ms)

    @property
    def has_flip(self) -> bool:
        return bool(self.flip)

    def boundary_of(self, gid: str) -> list[tuple[str, int]]:
        return [(d.target, d.u_power) for d in self.differential if d.source == gid]

    def flip_of(self, gid: str) -> list[str]:
        return [f.target for f in self.flip if f.source == gid]


# -- serialization -----------------------------------------------------------

_TOP_FIELDS = {"name", "generators", "differential", "flip"}
_GEN_FIELDS = {"id", "alexander", "maslov"}
_DIFF_FIELDS = {"from", "to", "u_power"}
_FLIP_FIELDS = {"from", "to"}


def _check_fields(obj, allowed, where, required=None):
    if not isinstance(obj, dict):
        raise ComplexError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ComplexError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = (allowed if required is None else required) - set(obj)
    if missing:
        raise ComplexError(f"{where}: missing field(s) {sorted(missing)}")


def _as_int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ComplexError(f"{where}: expected an integer, got {value!r}")
    return value


def _build(document) -> KnotComplex:
    _check_fields(document, _TOP_FIELDS, "document", required={"name", "generators"})
    name = document["name"]
    if not isinstance(name, str):
        raise ComplexError("name: expected a string")
    gens = []
    seen = set()
    for k, g in enumerate(document["generators"]):
        _check_fields(g, _GEN_FIELDS, f"generators[{k}]")
        gid = g["id"]
        if not isinstance(gid, str) or not gid:
            raise ComplexError(f"generators[{k}].id: expected a non-empty string")
        if gid in seen:
            raise ComplexError(f"generators[{k}]: duplicate id {gid!r}")
        seen.add(gid)
        gens.append(Generator(gid, _as_int(g["alexander"], f"{gid}.alexander"),
                              _as_int(g["maslov"], f"{gid}.maslov")))
    if not gens:
        raise ComplexError("generators: at least one generator is required")
    diff = []
    for k, d in enumerate(document.get("differential", [])):
        _check_fields(d, _DIFF_FIELDS, f"differential[{k}]")
        for end in ("from", "to"):
            if d[end] not in seen:
                raise ComplexError(f"differential[{k}].{end}: unknown generator {d[end]!r}")
        diff.append(DiffEntry(d["from"], d["to"], _as_int(d["u_power"], f"differential[{k}].u_power")))
    flip = []
    for k, f in enumerate(document.get("flip", [])):
        _check_fields(f, _FLIP_FIELDS, f"flip[{k}]")
        for end in ("from", "to"):
            if f[end] not in seen:
                raise ComplexError(f"flip[{k}].{end}: unknown generator {f[end]!r}")
        flip.append(FlipEntry(f["from"], f["to"]))
    return KnotComplex(name, tuple(gens), tuple(diff), tuple(flip))


def parse_complex(document, *, check: bool = True) -> KnotComplex:
    """Build a complex from a JSON string or an already decoded mapping.

    Raises ``ComplexError`` on malformed input and ``ValidationError`` naming
    every violated invariant when ``check`` is set.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ComplexError(f"syntax error: {exc}") from exc
    C = _build(document)
    if check:
        failures = validate(C)
        if failures:
            raise ValidationError(failures)
    return C


def load_complex(path, *, check: bool = True) -> KnotComplex:
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read(), check=check)


def serialize(C: KnotComplex) -> dict:
    return {
        "name": C.name,
        "generators": [{"id": g.id, "alexander": g.alexander, "maslov": g.maslov}
                       for g in C.generators],
        "differential": [{"from": d.source, "to": d.target, "u_power": d.u_power}
                         for d in C.differential],
        "flip": [{"from": f.source, "to": f.target} for f in C.flip],
    }


def dumps(C: KnotComplex, indent: int | None = 2) -> str:
    return json.dumps(serialize(C), indent=indent)


# -- validation --------------------------------------------------------------

def _odd_terms(pairs):
    """Keep the (target, power) terms that occur an odd number of times."""
    counts = Counter(pairs)
    return {t for t, c in counts.items() if c % 2}


def _flip_homology_check(C: KnotComplex, delta: int) -> str | None:
    # local import: regions/homalg depend on this module
    from .regions import flip_map
    from .homalg import is_quasi_iso

    if not is_quasi_iso(flip_map(C, delta)):
        return f"flip is not a quasi-isomorphism at delta={delta}"
    return None


def validate(C: KnotComplex, *, require_flip: bool = True, delta: int | None = None) -> list[str]:
    """Return a list of violated invariants (empty when the complex is valid).

    Local checks run first; the homological check on the flip only runs when
    everything else passes.  ``delta`` defaults to ``2 * max|A| + 2``.
    """
    failures = []
    gen = C._index
    for d in C.differential:
        src, tgt = gen[d.source], gen[d.target]
        if d.u_power < 0:
            failures.append(f"negative U power on {d.source}->{d.target}")
            continue
        if tgt.maslov - 2 * d.u_power != src.maslov - 1:
            failures.append(f"Maslov drop != 1 on {d.source}->{d.target} (U^{d.u_power})")
        if tgt.alexander - d.u_power > src.alexander:
            failures.append(f"filtration not respected on {d.source}->{d.target} (U^{d.u_power})")
    if failures:
        return failures

    bd = defaultdict(list)
    for d in C.differential:
        bd[d.source].append((d.target, d.u_power))
    for g in C.ids:
        square = _odd_terms((w, e1 + e2) for (u, e1) in bd[g] for (w, e2) in bd[u])
        if square:
            failures.append(f"d^2 != 0 at generator {g}")

    if not C.flip:
        if require_flip:
            failures.append("flip required")
        return failures

    fl = defaultdict(list)
    for f in C.flip:
        src, tgt = gen[f.source], gen[f.target]
        fl[f.source].append(f.target)
        if tgt.alexander != -src.alexander:
            failures.append(f"flip {f.source}->{f.target}: Alexander grading not negated")
        if tgt.maslov != src.maslov - 2 * src.alexander:
            failures.append(f"flip {f.source}->{f.target}: internal grading not preserved")
    if failures:
        return failures

    for g in C.ids:
        a_g = gen[g].alexander
        # flip then differential, as Laurent terms (target, U-power)
        lhs = _odd_terms((w, -a_g + e) for t in fl[g] for (w, e) in bd[t])
        rhs = _odd_terms((w, e - gen[u].alexander) for (u, e) in bd[g] for w in fl[u])
        if lhs != rhs:
            failures.append(f"flip is not a chain map at generator {g}")
    if failures:
        return failures

    if delta is None:
        delta = 2 * C.max_abs_alexander + 2
    msg = _flip_homology_check(C, delta)
    if msg:
        failures.append(msg)
    return failures


# -- built-in complexes ------------------------------------------------------

def builtin_unknot() -> KnotComplex:
    return KnotComplex("unknot", (Generator("x", 0, 0),), (), (FlipEntry("x", "x"),))


def builtin_t34() -> KnotComplex:
    alex = (3, 2, 0, -2, -3)
    masl = (0, -1, -2, -5, -6)
    gens = tuple(Generator(f"x{k + 1}", a, m) for k, (a, m) in enumerate(zip(alex, masl)))
    diff = (
        DiffEntry("x2", "x1", 1), DiffEntry("x2", "x3", 0),
        DiffEntry("x4", "x3", 2), DiffEntry("x4", "x5", 0),
    )
    flip = tuple(FlipEntry(f"x{k}", f"x{6 - k}") for k in range(1, 6))
    return KnotComplex("T(3,4)", gens, diff, flip)


def builtin_staircase(steps) -> KnotComplex:
    """Staircase complex with alternating horizontal/vertical step lengths.

    ``steps = (h1, v1, h2, v2, ...)``.  Outer corners ``z0..zk`` are cycles,
    inner corners ``y1..yk`` have ``d y_m = U^{h_m} z_{m-1} + z_m``.
    """
    steps = tuple(int(s) for s in steps)
    if any(s <= 0 for s in steps):
        raise ComplexError("staircase steps must be positive")
    if len(steps) % 2:
        raise ComplexError("staircase needs an even number of steps")
    if steps != steps[::-1]:
        raise ComplexError("staircase steps must be palindromic")
    k = len(steps) // 2
    hs, vs = steps[0::2], steps[1::2]
    top = sum(vs)
    gens, diff = [], []
    x, y = 0, top
    maslov = 0
    gens.append(Generator("z0", y - x, maslov))
    for m in range(1, k + 1):
        x += hs[m - 1]
        maslov += 1 - 2 * hs[m - 1]
        gens.append(Generator(f"y{m}", y - x, maslov))
        y -= vs[m - 1]
        maslov -= 1
        gens.append(Generator(f"z{m}", y - x, maslov))
        diff.append(DiffEntry(f"y{m}", f"z{m - 1}", hs[m - 1]))
        diff.append(DiffEntry(f"y{m}", f"z{m}", 0))
    flip = [FlipEntry(f"z{m}", f"z{k - m}") for m in range(k + 1)]
    flip += [FlipEntry(f"y{m}", f"y{k + 1 - m}") for m in range(1, k + 1)]
    name = "staircase(" + ",".join(map(str, steps)) + ")" if steps else "unknot"
    # order generators by decreasing Alexander grading
    gens.sort(key=lambda g: -g.alexander)
    return KnotComplex(name, tuple(gens), tuple(diff), tuple(flip))


def _monomial_name(subset, g):
    if not subset:
        return "1"
    labels = [f"a{k + 1}" if k < g else f"b{k - g + 1}" for k in subset]
    return "^".join(labels)


def builtin_borromean(g: int) -> KnotComplex:
    """Genus-g Borromean knot: exterior algebra on a symplectic basis, d = 0.

    The flip is the Hodge star composed with the symplectic rotation
    ``a_k -> b_k, b_k -> a_k`` (signs vanish mod 2).
    """
    if g < 1:
        raise ComplexError("genus must be positive")
    basis = range(2 * g)
    subsets = [s for k in range(2 * g + 1) for s in itertools.combinations(basis, k)]
    gens = tuple(Generator(_monomial_name(s, g), len(s) - g, len(s) - g) for s in subsets)

    def rotate(k):
        return k + g if k < g else k - g

    flip = []
    for s in subsets:
        rotated = {rotate(k) for k in s}
        comp = tuple(k for k in basis if k not in rotated)
        flip.append(FlipEntry(_monomial_name(s, g), _monomial_name(comp, g)))
    return KnotComplex(f"borromean({g})", gens, (), tuple(flip))


def builtin(spec: str) -> KnotComplex:
    """Resolve ``unknot``, ``t34``, ``staircase:1,2,2,1`` or ``borromean:G``."""
    head, _, arg = spec.partition(":")
    head = head.strip().lower()
    if head == "unknot" and not arg:
        return builtin_unknot()
    if head == "t34" and not arg:
        return builtin_t34()
    if head == "staircase":
        steps = [int(t) for t in arg.split(",") if t.strip()] if arg else []
        return builtin_staircase(steps)
    if head == "borromean" and arg:
        return builtin_borromean(int(arg))
    raise ComplexError(f"unknown built-in {spec!r}")


# -- comparison --------------------------------------------------------------

def _signature(C: KnotComplex):
    return sorted((g.alexander, g.maslov) for g in C.generators)


def isomorphic(C1: KnotComplex, C2: KnotComplex) -> dict[str, str] | None:
    """Find a generator renaming carrying C1 to C2 (differential and flip).

    Brute force over grading-preserving bijections; intended for small
    complexes.  Returns the renaming or None.
    """
    if _signature(C1) != _signature(C2):
        return None
    buckets = defaultdict(list)
    for g in C2.generators:
        buckets[(g.alexander, g.maslov)].append(g.id)
    keys = sorted(buckets)
    groups1 = [[g.id for g in C1.generators if (g.alexander, g.maslov) == k] for k in keys]
    d2 = Counter((d.source, d.target, d.u_power) for d in C2.differential)
    f2 = Counter((f.source, f.target) for f in C2.flip)
    for perms in itertools.product(*(itertools.permutations(buckets[k]) for k in keys)):
        ren = {}
        for src, img in zip(groups1, perms):
            ren.update(zip(src, img))
        d1 = Counter((ren[d.source], ren[d.target], d.u_power) for d in C1.differential)
        f1 = Counter((ren[f.source], ren[f.target]) for f in C1.flip)
        if d1 == d2 and f1 == f2:
            return ren
    return None
