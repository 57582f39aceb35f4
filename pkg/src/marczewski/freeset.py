"""Free sets in finite powers A^X, with re-checkable certificates.

Construction, for a base algebra with clone slice up to arity ``cap``:

* every ordered pair of distinct r-ary term operations (1 <= r <= cap),
  together with an injective index tuple ``u: r -> m``, is a *triple* and
  gets its own coordinate of X;
* each triple stores the lexicographically least tuple ``p`` on which its
  two operations differ;
* generator ``f_j`` takes the value ``p[i]`` at a triple whose ``u[i] == j``
  and the default element everywhere else.

After the triple coordinates, X holds one pattern point per generator.
Pattern point ``e_j`` plays the role of a point lying in the j-th set of
an independent family and in no other, so a triple's tuple ``u`` stands
for the separating map onto those points.

Freeness then holds coordinate by coordinate: if two distinct term
operations agreed on an injective tuple of generators, they would have to
agree at the coordinate of the matching triple, where they are evaluated
at its ``p``.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .algebra import AlgebraError, FiniteAlgebra, Operation, projection, tuple_index
from .clone import DEFAULT_GUARD, CloneSlice, clone_upto
from .independence import Verdict
from .power import PowerElement

__all__ = [
    "Triple",
    "FreeSetCertificate",
    "FreeSetResult",
    "PowerCollision",
    "CertificateReport",
    "CertificateFormatError",
    "CERT_HEADER",
    "enumerate_triples",
    "build_free_set",
    "verify_free_in_power",
    "check_certificate",
    "dump_certificate",
    "load_certificate",
    "verify_certificate_text",
]

CERT_HEADER = "marczewski-cert/1"


class PowerCollision(NamedTuple):
    """Lifted alpha and beta agree on the generators ``F[i] for i in xi``."""

    alpha: Operation
    beta: Operation
    xi: tuple[int, ...]


@dataclass(frozen=True)
class Triple:
    alpha: Operation
    beta: Operation
    u: tuple[int, ...]
    p: tuple[int, ...]

    @property
    def arity(self) -> int:
        return self.alpha.arity


@dataclass(frozen=True)
class FreeSetCertificate:
    algebra: FiniteAlgebra
    cap: int
    m: int
    default: int
    triples: tuple[Triple, ...]
    generators: tuple[PowerElement, ...]

    @property
    def x_size(self) -> int:
        return len(self.triples) + self.m

    def pattern_point(self, j: int) -> int:
        return len(self.triples) + j


@dataclass(frozen=True)
class FreeSetResult:
    x_size: int
    functions: tuple[PowerElement, ...]
    certificate: FreeSetCertificate
    clone: CloneSlice = field(repr=False, compare=False)


def _least_difference(alpha: Operation, beta: Operation) -> tuple[int, ...]:
    i = int(np.flatnonzero(alpha.array != beta.array)[0])
    n = alpha.carrier_size
    digits = []
    for _ in range(alpha.arity):
        i, d = divmod(i, n)
        digits.append(d)
    return tuple(reversed(digits))


def enumerate_triples(slice_: CloneSlice, m: int, cap: int | None = None):
    """Triples in a fixed order: arity, then alpha, then beta (clone slice
    order), then u in lexicographic order."""
    cap = slice_.arity_cap if cap is None else cap
    for r in range(1, cap + 1):
        ops = slice_.members(r)
        us = list(itertools.permutations(range(m), r))
        for a in ops:
            for b in ops:
                if a == b:
                    continue
                p = _least_difference(a, b)
                for u in us:
                    yield Triple(a, b, u, p)


def _generators(triples: Sequence[Triple], m: int, default: int) -> tuple[PowerElement, ...]:
    f = np.full((m, len(triples) + m), default, dtype=np.int64)
    for x, t in enumerate(triples):
        for i, j in enumerate(t.u):
            f[j, x] = t.p[i]
    return tuple(tuple(row) for row in f.tolist())


def build_free_set(algebra: FiniteAlgebra, m: int, cap: int, default: int = 0,
                   guard: int = DEFAULT_GUARD) -> FreeSetResult:
    """Build m generators of A^X that form a free set for all term
    operations of arity <= cap."""
    if algebra.carrier_size < 2:
        raise AlgebraError("the construction requires |A| >= 2")
    if m < 2:
        raise AlgebraError(f"m must be >= 2, got {m}")
    if not 0 <= cap <= m:
        raise AlgebraError(f"cap must satisfy 0 <= cap <= m, got cap={cap}, m={m}")
    if not 0 <= default < algebra.carrier_size:
        raise AlgebraError(f"default element {default} outside carrier")
    sl = clone_upto(algebra, cap, guard=guard)
    triples = tuple(enumerate_triples(sl, m))
    gens = _generators(triples, m, default)
    cert = FreeSetCertificate(algebra, cap, m, default, triples, gens)
    return FreeSetResult(cert.x_size, gens, cert, sl)


def verify_free_in_power(
    slice_: CloneSlice, functions: Sequence[Sequence[int]], x_size: int | None = None
) -> Verdict:
    """No two distinct term operations of arity r <= min(cap, |F|) have equal
    lifts on an injective r-tuple of members of F, checked pointwise.

    ``x_size`` is only needed when F is empty; it defaults to 1 there.  Over
    an empty X every two operations of the same arity have equal lifts.
    """
    F = [tuple(f) for f in functions]
    n = slice_.carrier_size
    width = len(F[0]) if F else (1 if x_size is None else x_size)
    if any(len(f) != width for f in F) or (x_size is not None and width != x_size):
        raise AlgebraError("all functions must have the same length")
    arr = np.array(F, dtype=np.int64).reshape(len(F), width)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise AlgebraError("function values outside the carrier")
    for r in range(min(slice_.arity_cap, len(F)) + 1):
        ops = slice_.members(r)
        if len(ops) < 2:
            continue
        if width == 0:
            return Verdict(False, "free-in-power", PowerCollision(ops[0], ops[1], tuple(range(r))))
        tables = slice_.tables(r)
        for xi in itertools.permutations(range(len(F)), r):
            idx = np.zeros(width, dtype=np.int64)
            for i in xi:
                idx = idx * n + arr[i]
            images = np.ascontiguousarray(tables[:, idx])
            packed = images.view(np.dtype((np.void, images.dtype.itemsize * width))).ravel()
            _, first, inverse = np.unique(packed, return_index=True, return_inverse=True)
            if len(first) < len(ops):
                inverse = np.asarray(inverse).ravel()
                dup = next(i for i in range(len(ops)) if first[inverse[i]] != i)
                return Verdict(
                    False, "free-in-power", PowerCollision(ops[first[inverse[dup]]], ops[dup], xi)
                )
    return Verdict(True, "free-in-power")


@dataclass
class CertificateReport:
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def fail(self, clause: str, detail: str):
        self.failures.append((clause, detail))


def check_certificate(cert: FreeSetCertificate, guard: int = DEFAULT_GUARD) -> CertificateReport:
    """Re-derive every certificate clause from the stored data."""
    rep = CertificateReport()
    n = cert.algebra.carrier_size
    if n < 2:
        rep.fail("hypothesis", "carrier has fewer than 2 elements")
        return rep
    if not 0 <= cert.default < n:
        rep.fail("default", f"default element {cert.default} outside carrier")
    if not 0 <= cert.cap <= cert.m:
        rep.fail("cap", f"cap {cert.cap} not within [0, m={cert.m}]")
        return rep

    sl = clone_upto(cert.algebra, cert.cap, guard=guard)
    expected = list(enumerate_triples(sl, cert.m))
    if len(expected) != len(cert.triples):
        rep.fail("enumeration", f"{len(cert.triples)} triples stored, clone slice yields {len(expected)}")
    for x, (t, e) in enumerate(zip(cert.triples, expected)):
        if (t.alpha, t.beta, t.u) != (e.alpha, e.beta, e.u):
            rep.fail("enumeration", f"triple at coordinate {x} differs from the clone enumeration")
            break

    for x, t in enumerate(cert.triples):
        if t.alpha.arity != t.beta.arity or len(t.u) != t.alpha.arity or len(t.p) != t.alpha.arity:
            rep.fail("triple", f"triple at coordinate {x} has inconsistent arities")
            continue
        if t.alpha == t.beta:
            rep.fail("triple", f"triple at coordinate {x} pairs an operation with itself")
        if len(set(t.u)) != len(t.u) or any(not 0 <= j < cert.m for j in t.u):
            rep.fail("triple", f"triple at coordinate {x} has non-injective or out-of-range u={t.u}")
        if any(not 0 <= v < n for v in t.p):
            rep.fail("witness", f"triple at coordinate {x}: p={t.p} outside carrier")
            continue
        i = tuple_index(t.p, n)
        if t.alpha.table[i] == t.beta.table[i]:
            rep.fail("witness", f"triple at coordinate {x}: operations agree at p={t.p}")
        elif t.alpha != t.beta and _least_difference(t.alpha, t.beta) != t.p:
            rep.fail("witness", f"triple at coordinate {x}: p={t.p} is not the least distinguishing tuple")

    gens = cert.generators
    if len(gens) != cert.m or any(len(f) != cert.x_size for f in gens):
        rep.fail("layout", f"expected {cert.m} generators of length {cert.x_size}")
        return rep
    if any(not 0 <= v < n for f in gens for v in f):
        rep.fail("layout", "generator value outside carrier")
        return rep
    for x, t in enumerate(cert.triples):
        if len(t.u) != len(t.p):
            continue
        want = [cert.default] * cert.m
        for i, j in enumerate(t.u):
            if 0 <= j < cert.m:
                want[j] = t.p[i]
        got = [f[x] for f in gens]
        if got != want:
            rep.fail("generator", f"generator values at triple coordinate {x} are {got}, expected {want}")
    for j in range(cert.m):
        for f_i, f in enumerate(gens):
            if f[cert.pattern_point(j)] != cert.default:
                rep.fail("generator", f"generator {f_i} at pattern point e_{j} is not the default")

    if cert.cap >= 2:
        pr0, pr1 = projection(0, 2, n), projection(1, 2, n)
        where = {(t.alpha, t.beta, t.u): x for x, t in enumerate(cert.triples)}
        for j, k in itertools.permutations(range(cert.m), 2):
            x = where.get((pr0, pr1, (j, k)))
            if x is None:
                rep.fail("distinctness", f"no projection triple for generators ({j}, {k})")
            elif gens[j][x] == gens[k][x]:
                rep.fail("distinctness", f"generators {j} and {k} agree at projection triple {x}")

    verdict = verify_free_in_power(sl, gens)
    if not verdict:
        w = verdict.witness
        rep.fail("freeness", f"lifted operations {list(w.alpha.table)} and {list(w.beta.table)} agree on {w.xi}")
    return rep


class CertificateFormatError(AlgebraError):
    pass


def _ints(token: str) -> list[int]:
    return [] if token == "-" else [int(v) for v in token.split(",")]


def _fmt(values) -> str:
    values = list(values)
    return ",".join(map(str, values)) if values else "-"


def _body_lines(cert: FreeSetCertificate) -> list[str]:
    lines = [CERT_HEADER, f"carrier {cert.algebra.carrier_size}"]
    for name, op in cert.algebra.operations.items():
        lines.append(f"operation {name} {_fmt(op.support)} {_fmt(op.table)}")
    lines += [f"cap {cert.cap}", f"m {cert.m}", f"default {cert.default}", f"x_size {cert.x_size}"]
    for x, t in enumerate(cert.triples):
        lines.append(
            f"triple {x} {t.arity} {_fmt(t.alpha.table)} {_fmt(t.beta.table)} {_fmt(t.u)} {_fmt(t.p)}"
        )
    for j, f in enumerate(cert.generators):
        lines.append(f"generator {j} {_fmt(f)}")
    return lines


def dump_certificate(cert: FreeSetCertificate) -> str:
    body = "\n".join(_body_lines(cert)) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    return body + f"digest sha256:{digest}\n"


def load_certificate(text: str) -> tuple[FreeSetCertificate, str | None]:
    """Parse a certificate; also returns the stored digest (None if absent)."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != CERT_HEADER:
        raise CertificateFormatError(f"line 1: expected header {CERT_HEADER!r}")
    carrier = None
    ops: dict[str, Operation] = {}
    scalars: dict[str, int] = {}
    triples, gens = [], []
    digest = None
    for no, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        key = parts[0]
        try:
            if key == "carrier":
                carrier = int(parts[1])
            elif key == "operation":
                _, name, support, table = parts
                if name in ops:
                    raise CertificateFormatError(f"line {no}: duplicate operation {name!r}")
                ops[name] = Operation(tuple(_ints(support)), carrier, _ints(table))
            elif key in ("cap", "m", "default", "x_size"):
                scalars[key] = int(parts[1])
            elif key == "triple":
                _, x, r, a, b, u, p = parts
                if int(x) != len(triples):
                    raise CertificateFormatError(f"line {no}: triple coordinate {x} out of order")
                support = tuple(range(int(r)))
                triples.append(
                    Triple(Operation(support, carrier, _ints(a)), Operation(support, carrier, _ints(b)),
                           tuple(_ints(u)), tuple(_ints(p)))
                )
            elif key == "generator":
                _, j, values = parts
                if int(j) != len(gens):
                    raise CertificateFormatError(f"line {no}: generator index {j} out of order")
                gens.append(tuple(_ints(values)))
            elif key == "digest":
                digest = parts[1].removeprefix("sha256:")
            else:
                raise CertificateFormatError(f"line {no}: unknown record {key!r}")
        except CertificateFormatError:
            raise
        except (ValueError, TypeError, IndexError) as exc:
            raise CertificateFormatError(f"line {no}: {exc}") from exc
    missing = [k for k in ("cap", "m", "default", "x_size") if k not in scalars]
    if carrier is None or missing:
        raise CertificateFormatError(f"missing records: {['carrier'] * (carrier is None) + missing}")
    cert = FreeSetCertificate(
        FiniteAlgebra(carrier, ops), scalars["cap"], scalars["m"], scalars["default"], tuple(triples), tuple(gens)
    )
    if scalars["x_size"] != cert.x_size:
        raise CertificateFormatError(f"x_size {scalars['x_size']} does not match {cert.x_size} = triples + m")
    return cert, digest


def verify_certificate_text(text: str) -> CertificateReport:
    """Parse and fully re-check a serialized certificate, including its digest."""
    try:
        cert, digest = load_certificate(text)
    except AlgebraError as exc:
        rep = CertificateReport()
        rep.fail("format", str(exc))
        return rep
    rep = check_certificate(cert)
    body = text[: text.rfind("digest ")] if digest is not None else text
    if digest is None:
        rep.fail("digest", "no digest record")
    elif hashlib.sha256(body.encode()).hexdigest() != digest:
        rep.fail("digest", "stored digest does not match the certificate body")
    return rep

