"""Batch command-line frontend.

Three subcommands: ``resultant``, ``discriminant``, ``eigendisc``.  Inputs
are polynomial strings in the x0..x3/u,v,w,t grammar or a JSON tensor
file; computations run over exact integers by default, mod a list of
primes with ``--mod``, or parametrically with ``--param``.  Output is a
flat ``key = value`` document (or JSON with ``--json``), byte-identical
for identical job specifications including the seed.  Timings are opt-in
(``--timings``) precisely so that default output stays reproducible.

Exit codes: 0 ok, 2 parse error, 3 degenerate input, 4 internal tripwire.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field

from . import eigen
from .linalg import InsufficientBound
from .mpoly import PARAMS, VAR_INDEX, VAR_NAMES, PolyParseError, parse_poly
from .primefield import crt_combine
from .resultant import DegenerateInput, NonGeneric, resultant_macaulay, resultant_robust
from .discriminant import discriminant_robust
from .rings import GF, ZZ, NotDivisible

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_TRIPWIRE = 4

_N4_CROSS_CHOICES = ((0, 1, 2, 3), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 1, 2))


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class JobSpec:
    command: str
    forms: list = field(default_factory=list)
    poly: str | None = None
    tensor_file: str | None = None
    symmetric: bool = False
    n: int | None = None
    d: int | None = None
    degrees: list | None = None
    moduli: list = field(default_factory=list)
    param: str | None = None
    bound: int | None = None
    index: tuple | None = None
    robust: bool = True
    via_family: bool = False
    cross_check: bool = False
    certificate: bool = False
    seed: int = 0
    timings: bool = False
    as_json: bool = False


def _parse_forms(strings, ring):
    forms = []
    for s in strings:
        try:
            forms.append(parse_poly(s, ring))
        except PolyParseError as exc:
            raise CliError(EXIT_PARSE, f"cannot parse form {s!r}: {exc}")
    return forms


def _infer_variables(forms, count):
    variables = tuple(range(count))
    for f in forms:
        extra = (f.support_indices() - set(PARAMS)) - set(variables)
        if extra:
            raise CliError(EXIT_PARSE,
                           f"form uses {[VAR_NAMES[i] for i in sorted(extra)]} beyond the first {count} variables")
    return variables


def _declared_degrees(forms, variables, declared):
    if declared is not None:
        if len(declared) != len(forms):
            raise CliError(EXIT_PARSE, "--degrees must list one degree per form")
        return list(declared)
    degrees = []
    for f in forms:
        if f.is_zero():
            raise CliError(EXIT_PARSE, "zero form needs an explicit --degrees entry")
        d = f.homogeneous_degree(variables)
        if d is None:
            raise CliError(EXIT_PARSE, f"form {f} is not homogeneous; declare --degrees")
        degrees.append(d)
    return degrees


def _format_value(v):
    return str(v)


def _load_tensor(path: str) -> eigen.TensorData:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read tensor file {path}: {exc}")
    try:
        entries = {tuple(idx): int(val) for idx, val in doc["entries"]}
        return eigen.TensorData(int(doc["n"]), int(doc["d"]), entries,
                                bool(doc.get("symmetric", False)))
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"bad tensor document: {exc}")


def _build_map(job: JobSpec, ring) -> eigen.RationalMapData:
    try:
        if job.tensor_file:
            tensor = _load_tensor(job.tensor_file)
            psi = eigen.tensor_to_map(tensor)
        elif job.poly is not None:
            try:
                phi = parse_poly(job.poly, ZZ)
            except PolyParseError as exc:
                raise CliError(EXIT_PARSE, f"cannot parse --poly: {exc}")
            psi = eigen.polar_map(phi, job.n)
        elif job.forms:
            forms = _parse_forms(job.forms, ZZ)
            n = job.n or len(forms)
            if all(f.is_zero() for f in forms):
                raise CliError(EXIT_DEGENERATE, "zero map")
            d = next(f.homogeneous_degree(tuple(range(n))) for f in forms if not f.is_zero())
            if d is None:
                raise CliError(EXIT_PARSE, "map components must be homogeneous")
            psi = eigen.RationalMapData(n, job.d or d + 1, tuple(forms))
        else:
            raise CliError(EXIT_PARSE, "eigendisc needs --poly, --forms or --tensor-file")
    except ValueError as exc:
        code = EXIT_DEGENERATE if "zero map" in str(exc) else EXIT_PARSE
        raise CliError(code, str(exc))
    if job.n is not None and psi.n != job.n:
        raise CliError(EXIT_PARSE, f"--n {job.n} does not match the input format n={psi.n}")
    if job.d is not None and psi.d != job.d:
        raise CliError(EXIT_PARSE, f"--d {job.d} does not match the input degree d={psi.d}")
    if ring is not ZZ:
        psi = psi.to_gf(ring)
    return psi


def _param_index(name: str) -> int:
    if name not in VAR_INDEX or VAR_INDEX[name] not in PARAMS:
        raise CliError(EXIT_PARSE, f"--param must be one of u, v, w, t (got {name!r})")
    return VAR_INDEX[name]


def run(job: JobSpec) -> dict:
    """Execute a job; returns the ordered result document."""
    t_start = time.perf_counter()
    if job.param is not None and job.moduli:
        raise CliError(EXIT_PARSE, "--param and --mod are mutually exclusive")
    rng = random.Random(job.seed)
    doc: dict = {"command": job.command, "seed": job.seed}
    rings = [GF(p) for p in job.moduli] if job.moduli else [ZZ]
    doc["mode"] = ("mod " + ",".join(str(p) for p in job.moduli)) if job.moduli \
        else ("parametric " + job.param if job.param else "exact-ZZ")

    if job.command in ("resultant", "discriminant"):
        if not job.forms:
            raise CliError(EXIT_PARSE, f"{job.command} needs --forms")
        base_forms = _parse_forms(job.forms, ZZ)
        nvars = len(base_forms) if job.command == "resultant" else len(base_forms) + 1
        if nvars > 4:
            raise CliError(EXIT_PARSE, "at most 4 variables are supported")
        variables = _infer_variables(base_forms, nvars)
        degrees = _declared_degrees(base_forms, variables, job.degrees)
        for pos, f in enumerate(base_forms):
            doc[f"input.form{pos}"] = str(f)
        doc["degrees"] = ",".join(str(d) for d in degrees)
        values = []
        for ring in rings:
            forms = base_forms if ring is ZZ else [f.to_gf(ring) for f in base_forms]
            try:
                if job.command == "resultant":
                    if job.robust:
                        val = resultant_robust(forms, degrees, variables, ring, rng=rng)
                    else:
                        val = resultant_macaulay(forms, degrees, variables, ring)
                else:
                    val = discriminant_robust(forms, degrees, variables, ring, rng=rng)
            except (NonGeneric, DegenerateInput) as exc:
                raise CliError(EXIT_DEGENERATE, str(exc))
            except (NotDivisible, InsufficientBound, ArithmeticError) as exc:
                raise CliError(EXIT_TRIPWIRE, str(exc))
            values.append(val)
        _emit_values(doc, values, job)
    elif job.command == "eigendisc":
        _run_eigendisc(job, doc, rings, rng)
    else:
        raise CliError(EXIT_PARSE, f"unknown command {job.command!r}")

    if job.timings:
        doc["timing.total_s"] = f"{time.perf_counter() - t_start:.3f}"
    return doc


def _emit_values(doc, values, job):
    if job.moduli:
        for p, v in zip(job.moduli, values):
            doc[f"value.mod{p}"] = _format_value(v)
        if len(job.moduli) > 1:
            doc["value.crt"] = str(crt_combine(values, job.moduli))
    else:
        doc["value"] = _format_value(values[0])


def _run_eigendisc(job: JobSpec, doc: dict, rings, rng):
    if job.param is not None:
        q = _param_index(job.param)
        psi = _build_map(job, ZZ)
        doc["n"], doc["d"] = psi.n, psi.d
        for pos, f in enumerate(psi.forms):
            doc[f"input.psi{pos}"] = str(f)
        bounds = {q: job.bound} if job.bound is not None else None
        try:
            value = eigen.eigendisc_parametric(psi, bounds=bounds, rng=rng)
        except (NonGeneric, DegenerateInput) as exc:
            raise CliError(EXIT_DEGENERATE, str(exc))
        except (NotDivisible, InsufficientBound) as exc:
            raise CliError(EXIT_TRIPWIRE, str(exc))
        doc["value"] = str(value)
        return

    values = []
    for ring in rings:
        try:
            psi = _build_map(job, ring)
        except ValueError as exc:
            raise CliError(EXIT_PARSE, str(exc))
        if "n" not in doc:
            doc["n"], doc["d"] = psi.n, psi.d
            for pos, f in enumerate(psi.forms):
                doc[f"input.psi{pos}"] = str(f)
        kwargs = {"rng": rng, "robust": job.robust}
        if psi.n != 2 and job.index is not None:
            kwargs["choice"] = job.index
        try:
            if job.via_family and psi.n == 3 and ring is ZZ:
                value = eigen.eigendisc_via_family(psi, rng=rng)
                result = None
            else:
                result = eigen.eigendisc(psi, **kwargs) if psi.n != 2 else eigen.eigendisc_n2(psi, rng=rng)
                value = result.value
        except (NonGeneric, DegenerateInput) as exc:
            raise CliError(EXIT_DEGENERATE, str(exc))
        except (NotDivisible, InsufficientBound) as exc:
            raise CliError(EXIT_TRIPWIRE, str(exc))
        values.append(value)
        tag = f".mod{ring.p}" if ring is not ZZ else ""
        if result is not None:
            doc[f"index_choice{tag}"] = ",".join(str(i) for i in result.index_choice)
            if result.coordinate_change is not None:
                cc = result.coordinate_change
                doc[f"coordinate_change{tag}"] = json.dumps(
                    {"matrix": cc["matrix"], "det": cc["det"], "exponent": cc["exponent"]})
            if job.certificate:
                doc[f"certificate.disc_minors{tag}"] = _format_value(result.disc_minors)
                for cof in result.cofactors:
                    doc[f"certificate.{cof.name}{tag}"] = _format_value(cof.value)
                    doc[f"certificate.{cof.name}{tag}.multiplicity"] = str(cof.multiplicity)
        if job.cross_check and psi.n in (3, 4):
            choices = eigen.N3_CHOICES if psi.n == 3 else _N4_CROSS_CHOICES
            seen = {}
            for ch in choices:
                try:
                    alt = eigen.eigendisc(psi, choice=ch, rng=random.Random(job.seed + 1), robust=True)
                except (NonGeneric, DegenerateInput):
                    continue
                seen[ch] = alt.value
                doc[f"crosscheck.{'_'.join(map(str, ch))}{tag}"] = _format_value(alt.value)
            if len(set(map(str, seen.values()))) > 1:
                raise CliError(EXIT_TRIPWIRE,
                               "cross-check mismatch: " + "; ".join(f"{k}: {v}" for k, v in seen.items()))
    _emit_values(doc, values, job)


def _render(doc: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(doc, indent=2)
    return "\n".join(f"{k} = {v}" for k, v in doc.items())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eigendisc",
        description="Exact resultants, discriminants and tensor eigendiscriminants.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mod", default=None,
                       help="comma-separated odd primes; compute mod each and CRT-combine")
        p.add_argument("--param", default=None, help="formal parameter name (u, v, w or t)")
        p.add_argument("--bound", type=int, default=None, help="degree bound for the parameter")
        p.add_argument("--seed", type=int, default=0, help="seed for coordinate randomization")
        p.add_argument("--json", action="store_true", help="emit a JSON document")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings (breaks byte-identical output)")

    pr = sub.add_parser("resultant", help="resultant of k homogeneous forms in k variables")
    pr.add_argument("--forms", nargs="+", required=True)
    pr.add_argument("--degrees", default=None, help="comma-separated declared degrees")
    pr.add_argument("--no-robust", dest="robust", action="store_false",
                    help="fail instead of changing coordinates on degeneracy")
    common(pr)

    pd = sub.add_parser("discriminant", help="discriminant of n forms in n+1 variables")
    pd.add_argument("--forms", nargs="+", required=True)
    pd.add_argument("--degrees", default=None)
    common(pd)

    pe = sub.add_parser("eigendisc", help="eigendiscriminant of a map / tensor")
    pe.add_argument("--n", type=int, default=None, help="format (2, 3 or 4)")
    pe.add_argument("--d", type=int, default=None, help="tensor dimension (map degree + 1)")
    pe.add_argument("--poly", default=None, help="symmetric input: the polynomial whose polar map is used")
    pe.add_argument("--symmetric", action="store_true",
                    help="marker that --poly describes a symmetric tensor (the default reading)")
    pe.add_argument("--forms", nargs="*", default=[], help="map components psi_0 .. psi_{n-1}")
    pe.add_argument("--tensor-file", default=None, help="JSON tensor document")
    pe.add_argument("--index", default=None,
                    help="index choice: i,j,k for n=3 or k,i,j,l for n=4")
    pe.add_argument("--no-robust", dest="robust", action="store_false")
    pe.add_argument("--via-family", action="store_true",
                    help="evaluate through a perturbation pencil instead of coordinate changes (n=3)")
    pe.add_argument("--cross-check", action="store_true",
                    help="recompute with several index choices and compare")
    pe.add_argument("--certificate", action="store_true", help="emit the cofactor certificate")
    common(pe)
    return ap


def job_from_args(args) -> JobSpec:
    moduli = []
    if getattr(args, "mod", None):
        try:
            moduli = [int(p) for p in args.mod.split(",") if p.strip()]
        except ValueError:
            raise CliError(EXIT_PARSE, f"bad --mod list {args.mod!r}")
    degrees = None
    if getattr(args, "degrees", None):
        try:
            degrees = [int(x) for x in args.degrees.split(",")]
        except ValueError:
            raise CliError(EXIT_PARSE, f"bad --degrees list {args.degrees!r}")
    index = None
    if getattr(args, "index", None):
        try:
            index = tuple(int(x) for x in args.index.split(","))
        except ValueError:
            raise CliError(EXIT_PARSE, f"bad --index {args.index!r}")
    return JobSpec(
        command=args.command,
        forms=list(getattr(args, "forms", []) or []),
        poly=getattr(args, "poly", None),
        tensor_file=getattr(args, "tensor_file", None),
        symmetric=getattr(args, "symmetric", False),
        n=getattr(args, "n", None),
        d=getattr(args, "d", None),
        degrees=degrees,
        moduli=moduli,
        param=args.param,
        bound=args.bound,
        index=index,
        robust=getattr(args, "robust", True),
        via_family=getattr(args, "via_family", False),
        cross_check=getattr(args, "cross_check", False),
        certificate=getattr(args, "certificate", False),
        seed=args.seed,
        timings=args.timings,
        as_json=args.json,
    )


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    # the only single-dash option is -h; anything else starting with a single
    # dash is a negative coefficient (argparse would otherwise reject it)
    argv = [a if a in ("-h",) or not a.startswith("-") or a.startswith("--") else " " + a
            for a in argv]
    args = build_parser().parse_args(argv)
    try:
        job = job_from_args(args)
        for p in job.moduli:
            GF(p)  # validate early: composite or even moduli are parse-level errors
        doc = run(job)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(_render(doc, job.as_json))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
