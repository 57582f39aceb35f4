"""Command-line front end.

Algebra files are JSON documents::

    {"carrier": 2,
     "operations": [{"name": "and", "support": [0, 1], "table": [0, 0, 0, 1]}]}

A table lists the values on all tuples of the support, first support
coordinate most significant: for ``and`` the entries are the values at
(0,0), (0,1), (1,0), (1,1).  A path that does not exist is looked up among
the bundled fixtures, so ``nand.json`` or just ``nand`` works anywhere.

Exit codes: 0 when the verdict holds, 1 when it does not, 2 on errors.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import random
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .algebra import AlgebraError, FiniteAlgebra, GuardError, Operation
from .clone import clone_upto
from .corpus import (
    check_prop_1_3,
    conjugation_identities_hold,
    constant_pair_algebra,
    gould_algebra,
    semidirect_group,
)
from .families import (
    check_prop_4_1,
    coordinate_family,
    format_family,
    hausdorff_family,
    is_independent_family,
    parse_family,
    SubsetFamily,
)
from .freeset import (
    build_free_set,
    check_certificate,
    dump_certificate,
    verify_certificate_text,
    verify_free_in_power,
)
from .hull import (
    algebra_hull,
    closure_violations,
    elements,
    exchange_violations,
    generated_hull,
    mask,
    term_closure_hull,
    EXHAUSTIVE_BOUND,
)
from .independence import (
    Verdict,
    is_free,
    is_free_clone,
    is_independent,
    is_strongly_independent,
)

WORKERS_ENV = "MARCZEWSKI_WORKERS"
FIXTURES = "data"


# ---------------------------------------------------------------- documents


def resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    name = p.name if p.suffix else p.name + ".json"
    bundled = resources.files(__package__).joinpath(FIXTURES, name)
    if bundled.is_file():
        return Path(str(bundled))
    raise AlgebraError(f"{path}: no such file or bundled fixture")


def _line_of(text: str, needle: str) -> int | None:
    at = text.find(needle)
    return None if at < 0 else text.count("\n", 0, at) + 1


def parse_algebra(text: str, source: str = "<input>") -> FiniteAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"{source}:{exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict) or set(doc) - {"carrier", "operations"} or "carrier" not in doc:
        raise AlgebraError(f"{source}: expected an object with keys 'carrier' and 'operations'")
    n = doc["carrier"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        line = _line_of(text, '"carrier"')
        raise AlgebraError(f"{source}:{line}: carrier must be an integer >= 1")
    ops = []
    for i, entry in enumerate(doc.get("operations", [])):
        name = entry.get("name") if isinstance(entry, dict) else None
        where = f"{source}:{_line_of(text, json.dumps(name)) if isinstance(name, str) else '?'}"
        if not isinstance(name, str) or not name or any(c.isspace() for c in name):
            raise AlgebraError(f"{where}: operation {i} needs a name without whitespace")
        if set(entry) != {"name", "support", "table"}:
            raise AlgebraError(f"{where}: operation {name!r} needs exactly 'name', 'support', 'table'")
        try:
            ops.append((name, Operation(tuple(entry["support"]), n, tuple(entry["table"]))))
        except (AlgebraError, TypeError) as exc:
            raise AlgebraError(f"{where}: operation {name!r}: {exc}") from None
    try:
        return FiniteAlgebra(n, ops)
    except AlgebraError as exc:
        raise AlgebraError(f"{source}: {exc}") from None


def algebra_document(alg: FiniteAlgebra) -> dict:
    return {
        "carrier": alg.carrier_size,
        "operations": [
            {"name": name, "support": list(op.support), "table": list(op.table)}
            for name, op in alg.operations.items()
        ],
    }


def dump_algebra(alg: FiniteAlgebra) -> str:
    doc = algebra_document(alg)
    lines = ["{", f'  "carrier": {doc["carrier"]},', '  "operations": [']
    rows = [json.dumps(o) for o in doc["operations"]]
    lines += [f"    {r}," for r in rows[:-1]] + [f"    {r}" for r in rows[-1:]]
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def parse_set(spec: str, carrier: int) -> int:
    spec = spec.strip()
    if spec in ("", "-", "{}"):
        return 0
    try:
        items = [int(s) for s in spec.strip("{}").split(",")]
    except ValueError:
        raise AlgebraError(f"bad set {spec!r}: expected comma separated integers") from None
    bad = [x for x in items if not 0 <= x < carrier]
    if bad:
        raise AlgebraError(f"set elements {bad} outside carrier of size {carrier}")
    return mask(items)


def parse_functions(text: str) -> list[tuple[int, ...]]:
    out = []
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#")[0].strip()
        if not line:
            continue
        try:
            out.append(tuple(int(v) for v in line.replace(",", " ").split()))
        except ValueError:
            raise AlgebraError(f"line {no}: expected integers") from None
    return out


# ------------------------------------------------------------------ reports


class Report:
    def __init__(self, argv: Sequence[str]):
        self.data: dict[str, Any] = {
            "command": "marczewski " + " ".join(argv),
            "version": __version__,
            "inputs": {},
            "seed": None,
            "workers": int(os.environ.get(WORKERS_ENV, "1") or 1),
        }
        self._start = time.perf_counter()

    def read(self, path: str) -> str:
        p = resolve(path)
        raw = p.read_bytes()
        self.data["inputs"][path] = "sha256:" + hashlib.sha256(raw).hexdigest()
        return raw.decode()

    def __setitem__(self, key, value):
        self.data[key] = value

    def finish(self) -> dict:
        self.data["seconds"] = round(time.perf_counter() - self._start, 4)
        return self.data


def _show(value) -> str:
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], (list, tuple, dict)):
        return "\n" + "\n".join(f"  {_show(v)}" for v in value)
    if isinstance(value, dict):
        return ", ".join(f"{k}={v}" for k, v in value.items())
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def emit(report: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        json.dump(report, out, indent=2, sort_keys=False, default=str)
        out.write("\n")
        return
    for key, value in report.items():
        if value in (None, {}) and key in ("seed", "inputs"):
            continue
        out.write(f"{key}: {_show(value)}\n")


def _op_text(op: Operation) -> str:
    return f"support={list(op.support)} table={list(op.table)}"


def witness_data(w) -> Any:
    if w is None:
        return None
    if hasattr(w, "_asdict"):
        out = {"kind": type(w).__name__}
        for k, v in w._asdict().items():
            if isinstance(v, Operation):
                v = _op_text(v)
            elif isinstance(v, frozenset):
                v = sorted(v)
            out[k] = v
        return out
    return w


def _verdict(rep: Report, v: Verdict) -> int:
    rep["check"] = v.check
    rep["verdict"] = bool(v)
    if not v:
        rep["witness"] = witness_data(v.witness)
    return 0 if v else 1


# ----------------------------------------------------------------- commands


def cmd_clone(args, rep: Report) -> int:
    alg = parse_algebra(rep.read(args.file), args.file)
    sl = clone_upto(alg, args.cap)
    rep["cap"] = args.cap
    rep["counts"] = sl.counts()
    if args.dump:
        ops = {f"t{r}_{i}": op for r in range(args.cap + 1) for i, op in enumerate(sl.members(r))}
        doc = dump_algebra(FiniteAlgebra(alg.carrier_size, ops))
        Path(args.dump).write_text(doc)
        rep["dump"] = args.dump
    return 0


def _hull_operator(alg: FiniteAlgebra, kind: str, size: int):
    if kind == "one-step":
        return algebra_hull(alg)
    if kind == "generated":
        return generated_hull(alg)
    if kind == "term":
        return term_closure_hull(alg)
    from .hull import clone_hull

    return clone_hull(clone_upto(alg, size))


def cmd_hull(args, rep: Report) -> int:
    alg = parse_algebra(rep.read(args.file), args.file)
    rep["hull"] = args.kind
    status = 0
    if args.set is not None:
        b = parse_set(args.set, alg.carrier_size)
        h = _hull_operator(alg, args.kind, len(elements(b)))
        rep["set"] = list(elements(b))
        rep["result"] = list(elements(h(b)))
    if args.battery:
        if args.kind == "clone":
            raise AlgebraError("the battery needs a hull defined on every subset; use generated or one-step")
        h = _hull_operator(alg, args.kind, alg.carrier_size)
        kw = {}
        if alg.carrier_size > EXHAUSTIVE_BOUND:
            kw = {"samples": args.samples, "seed": args.seed}
            rep["seed"] = args.seed
        bad_closure = next(closure_violations(h, **kw), None)
        bad_exchange = next(exchange_violations(h, **kw), None)
        rep["closure"] = bad_closure is None
        rep["exchange"] = bad_exchange is None
        rep["matroid_type"] = bad_closure is None and bad_exchange is None
        if bad_closure is not None:
            rep["closure_witness"] = list(elements(bad_closure))
        if bad_exchange is not None:
            a, x, y = bad_exchange
            rep["exchange_witness"] = {"A": list(elements(a)), "x": x, "y": y}
        status = 0 if rep.data["matroid_type"] else 1
    return status


def cmd_indep(args, rep: Report) -> int:
    alg = parse_algebra(rep.read(args.file), args.file)
    b = parse_set(args.set, alg.carrier_size)
    rep["set"] = list(elements(b))
    rep["mode"] = args.mode
    if args.mode == "free":
        return _verdict(rep, is_free(alg, b))
    if args.mode == "free-clone":
        return _verdict(rep, is_free_clone(clone_upto(alg, len(elements(b))), b))
    rep["hull"] = args.hull
    h = _hull_operator(alg, args.hull, len(elements(b)))
    if args.mode == "independent":
        return _verdict(rep, is_independent(h, b))
    return _verdict(rep, is_strongly_independent(h, b))


def cmd_free(args, rep: Report) -> int:
    alg = parse_algebra(rep.read(args.file), args.file)
    fs = parse_functions(rep.read(args.functions))
    if any(v >= alg.carrier_size or v < 0 for f in fs for v in f):
        raise AlgebraError("function values outside the carrier")
    cap = len(fs) if args.cap is None else args.cap
    rep["functions"] = len(fs)
    rep["cap"] = cap
    return _verdict(rep, verify_free_in_power(clone_upto(alg, cap), fs))


def _family_report(rep: Report, fam: SubsetFamily, out: str | None) -> int:
    v = is_independent_family(fam)
    rep["base"] = fam.base_size
    rep["sets"] = len(fam)
    rep["independent"] = bool(v)
    if not v:
        rep["empty_pattern"] = [i for i in range(len(fam)) if v.witness >> i & 1]
    if out:
        Path(out).write_text(format_family(fam))
        rep["out"] = out
    return 0 if v else 1


def cmd_family(args, rep: Report) -> int:
    if args.family_cmd == "verify":
        fam = parse_family(rep.read(args.file))
    elif args.family_cmd == "coordinate":
        fam = coordinate_family(args.m)
    else:
        fam = hausdorff_family(args.n)
    rep["family"] = args.family_cmd
    return _family_report(rep, fam, args.out)


def cmd_build_free(args, rep: Report) -> int:
    alg = parse_algebra(rep.read(args.file), args.file)
    res = build_free_set(alg, args.m, args.cap, default=args.default)
    text = dump_certificate(res.certificate)
    report = check_certificate(res.certificate)
    rep["m"] = args.m
    rep["cap"] = args.cap
    rep["triples"] = len(res.certificate.triples)
    rep["x_size"] = res.x_size
    rep["certificate_ok"] = bool(report)
    rep["digest"] = text.rstrip("\n").rsplit(" ", 1)[-1]
    if args.out:
        Path(args.out).write_text(text)
        rep["certificate"] = args.out
    return 0 if report else 1


def cmd_verify_cert(args, rep: Report) -> int:
    report = verify_certificate_text(rep.read(args.file))
    rep["verdict"] = bool(report)
    if not report:
        rep["failures"] = [{"clause": c, "detail": d} for c, d in report.failures[:20]]
        rep["failure_count"] = len(report.failures)
    return 0 if report else 1


def cmd_demo(args, rep: Report) -> int:
    name = args.demo
    if name == "prop13":
        r = check_prop_1_3(args.k)
        rep["result"] = r.summary()
        rep["deviations"] = [list(map(str, d)) for d in r.deviations]
        if args.k == 2:
            rep["conjugation_identities"] = conjugation_identities_hold(semidirect_group(2))
        return 0 if not r.deviations else 1
    if name == "gould":
        g = gould_algebra()
        h = generated_hull(g)
        full = mask(range(2))
        rep["independent"] = bool(is_independent(h, full))
        free = is_free(g, full)
        rep["free"] = bool(free)
        rep["free_witness"] = witness_data(free.witness)
        rep["every_subset_closed"] = all(h(b) == b for b in range(4))
        # the pair must avoid the common constant value 0
        cp = constant_pair_algebra(3)
        pair = mask([1, 2])
        rep["constant_pair_set"] = [1, 2]
        rep["constant_pair_strong"] = bool(is_strongly_independent(algebra_hull(cp), pair))
        shrunk = is_strongly_independent(algebra_hull(cp.restrict(["alpha"])), pair)
        rep["alpha_only_strong"] = bool(shrunk)
        rep["alpha_only_witness"] = witness_data(shrunk.witness)
        ok = rep.data["independent"] and not rep.data["free"] and rep.data["constant_pair_strong"] \
            and not rep.data["alpha_only_strong"]
        return 0 if ok else 1
    if name == "fkh":
        rows = []
        for n in range(args.n + 1 if args.n is not None else 4):
            fam = hausdorff_family(n)
            rows.append({"n": n, "base": fam.base_size, "sets": len(fam),
                         "independent": bool(is_independent_family(fam))})
        rep["families"] = rows
        return 0 if all(r["independent"] for r in rows) else 1
    # prop41
    rng = random.Random(args.seed)
    rep["seed"] = args.seed
    checked = failures = 0
    for base in range(1, 5):
        for size in (1, 2):
            for members in itertools.combinations(range(1 << base), size):
                checked += 1
                failures += not check_prop_4_1(SubsetFamily(base, members))
    for _ in range(args.samples):
        base = rng.randint(2, 6)
        members = rng.sample(range(1 << base), 3)
        checked += 1
        failures += not check_prop_4_1(SubsetFamily(base, tuple(members)))
    rep["families_checked"] = checked
    rep["false_returns"] = failures
    return 0 if failures == 0 else 1


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="marczewski", description="Independence and clones of finite algebras.")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("clone", help="term operations up to an arity cap")
    c.add_argument("file")
    c.add_argument("--cap", type=int, default=2)
    c.add_argument("--counts", action="store_true", help="per-arity counts (always printed)")
    c.add_argument("--dump", metavar="OUT", help="write the slice as an algebra document")

    h = sub.add_parser("hull", help="hull of a set and the matroid battery")
    h.add_argument("file")
    h.add_argument("--set")
    h.add_argument("--kind", choices=["one-step", "generated", "term", "clone"], default="generated")
    h.add_argument("--battery", action="store_true")
    h.add_argument("--samples", type=int, default=2000)
    h.add_argument("--seed", type=int, default=0)

    i = sub.add_parser("indep", help="independence deciders")
    i.add_argument("file")
    i.add_argument("--set", required=True)
    i.add_argument("--mode", choices=["independent", "strong", "free", "free-clone"], default="independent")
    i.add_argument("--hull", choices=["one-step", "generated", "term", "clone"], default="generated")

    f = sub.add_parser("free", help="freeness of functions in a power of the algebra")
    f.add_argument("file")
    f.add_argument("--functions", required=True, help="one function per line, values separated by commas")
    f.add_argument("--cap", type=int)

    fam = sub.add_parser("family", help="independent families of sets")
    fsub = fam.add_subparsers(dest="family_cmd", required=True)
    fv = fsub.add_parser("verify")
    fv.add_argument("file")
    fc = fsub.add_parser("coordinate")
    fc.add_argument("--m", type=int, required=True)
    fh = fsub.add_parser("hausdorff")
    fh.add_argument("--n", type=int, required=True)
    for q in (fv, fc, fh):
        q.add_argument("--out")

    b = sub.add_parser("build-free", help="construct a free set in A^X with a certificate")
    b.add_argument("file")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--cap", type=int, required=True)
    b.add_argument("--default", type=int, default=0)
    b.add_argument("--out")

    v = sub.add_parser("verify-cert", help="re-check a certificate")
    v.add_argument("file")

    d = sub.add_parser("demo", help="built-in worked examples")
    d.add_argument("demo", choices=["prop13", "gould", "fkh", "prop41"])
    d.add_argument("--k", type=int, default=2)
    d.add_argument("--n", type=int)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--samples", type=int, default=100)
    return p


COMMANDS = {
    "clone": cmd_clone,
    "hull": cmd_hull,
    "indep": cmd_indep,
    "free": cmd_free,
    "family": cmd_family,
    "build-free": cmd_build_free,
    "verify-cert": cmd_verify_cert,
    "demo": cmd_demo,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    rep = Report(argv)
    try:
        status = COMMANDS[args.cmd](args, rep)
    except GuardError as exc:
        rep["error"] = str(exc)
        rep["guard"] = exc.guard
        status = 2
    except (AlgebraError, OSError) as exc:
        rep["error"] = str(exc)
        status = 2
    rep["exit"] = status
    emit(rep.finish(), args.json)
    return status


if __name__ == "__main__":
    sys.exit(main())
