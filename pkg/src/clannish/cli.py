"""Command-line front end: ``clannish check | module | witness``.

Exit codes: 0 success, 1 domain failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import catalog
from .algebra import AlgebraPresentation, PresentationError, validate_clannish, validate_string_algebra
from .field import DEFAULT_FIELD, Field
from .foursub import canonical_type
from .hyperfinite import HyperfinitenessWitness, WitnessError, fmt_frac, module_id, parse_eps, uniform_family, \
    verify_witness, witness
from .inner import InnerModuleError, LaurentModule, inner_from_dict
from .modules import ModuleError, ModuleRep, build_band_module, build_string_module, rebuild
from .quivers import coefficient_quiver, to_dot
from .words import (BandWord, WordError, classify_band, classify_string, enumerate_bands,
                    enumerate_strings, is_band_word, parse_word)

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    field: Field
    max_len: int
    max_inner: int
    eps: tuple
    out: Path | None
    seed: int

    def __post_init__(self):
        if self.max_len < 1 or self.max_inner < 1:
            raise UsageError("budgets must be positive")
        for e in self.eps:
            if not 0 < e < 1:
                raise UsageError(f"eps must lie in (0, 1), got {fmt_frac(e)}")


# -- helpers -------------------------------------------------------------------------

def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_presentation(ref: str) -> AlgebraPresentation:
    """A path to a JSON presentation, or the name of a bundled one."""
    path = Path(ref)
    if path.exists():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"{ref}: {exc}") from exc
        return AlgebraPresentation.from_json(text, path.stem)
    if ref in catalog.NAMES:
        return catalog.load(ref)
    raise UsageError(f"{ref}: no such file or bundled presentation")


def parse_field(name: str) -> Field:
    try:
        return Field.from_name(name)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_eps_arg(text: str) -> Fraction:
    try:
        return parse_eps(text)
    except (WitnessError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _lam(text: str, F: Field):
    try:
        return F.parse(text)
    except ValueError:
        # a symbolic eigenvalue: any fixed nonzero scalar gives an isomorphism class of the family
        print(f"note: symbolic eigenvalue {text!r} instantiated as 2", file=sys.stderr)
        return F(2)


def _inner(args, F: Field):
    given = [x for x in (args.jordan, args.companion, args.inner_file) if x]
    if len(given) > 1:
        raise UsageError("give at most one of --jordan, --companion, --inner-file")
    if args.jordan:
        try:
            n, lam = args.jordan.split(",", 1)
            n = int(n)
        except ValueError as exc:
            raise UsageError(f"--jordan expects n,lambda ({exc})") from exc
        return LaurentModule.jordan(_lam(lam, F), n, F)
    if args.companion:
        try:
            coeffs = [F.parse(c) for c in args.companion.split(",")]
        except ValueError as exc:
            raise UsageError(f"--companion expects comma-separated coefficients ({exc})") from exc
        return LaurentModule.companion(coeffs, args.power, F)
    if args.inner_file:
        try:
            d = json.loads(Path(args.inner_file).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--inner-file: {exc}") from exc
        if "phi" in d and "type" not in d:
            d = dict(d, type="two_idempotent" if "psi" in d else "laurent")
        return inner_from_dict(d, F)
    return None


def _name(word: str) -> str:
    keep = "".join(c if c.isalnum() else "_" for c in word.replace("-", "i").replace("*", "s"))
    return keep.strip("_") or "trivial"


# -- check ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    p = load_presentation(args.presentation)
    if args.cls == "string" and p.special:
        print(f"presentation: {p.name}")
        print(f"class string: fail (special loops {', '.join(sorted(p.special))})")
        return FAIL
    report = validate_clannish(p) if args.cls == "clannish" else validate_string_algebra(p)
    print(f"presentation: {p.name}")
    print(report.summary())
    ok = report.is_clannish if args.cls == "clannish" else report.is_string_algebra
    print(f"class {args.cls}: {'pass' if ok else 'fail'}")
    return OK if ok else FAIL


# -- module --------------------------------------------------------------------------

def build_from_args(args, p: AlgebraPresentation, F: Field) -> ModuleRep:
    inner = _inner(args, F)
    if args.band is not None:
        if args.word:
            raise UsageError("give the band with --band or a string positionally, not both")
        w = parse_word(p, args.band)
        if not is_band_word(p, w):
            raise WordError(f"not a band: {args.band}")
        b = classify_band(p, w)
        # asymmetric bands are built in the rotation given on the command line
        band = b if b.symmetric else BandWord(tuple(w), False)
        if inner is None:
            raise ModuleError("band modules need an inner module (--jordan, --companion or --inner-file)")
        return build_band_module(p, band, inner, F)
    if inner is not None:
        raise ModuleError("inner modules only apply to bands")
    word = (args.word or "").strip()
    if word.startswith("1_") or not word:
        v = word[2:] if word else args.vertex
        if v is None:
            raise UsageError("trivial strings need a vertex (1_<v> or --vertex)")
        if v not in p.vertices:
            raise WordError(f"unknown vertex {v!r}")
        return build_string_module(p, classify_string(p, (), v), None, F)
    s = classify_string(p, parse_word(p, word), args.vertex)
    if s.symmetric and args.T is None:
        raise ModuleError("symmetric string: choose --T 0 or --T 1")
    return build_string_module(p, s, args.T if s.symmetric else None, F)


def cmd_module(args) -> int:
    p = load_presentation(args.presentation)
    F = args.field
    try:
        m = build_from_args(args, p, F)
    except (WordError, ModuleError, InnerModuleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    prov = m.provenance
    tag = _name(prov.get("word", "") or f"1_{prov.get('vertex', '')}")
    if prov.get("constructor") == "band":
        tag = f"band_{tag}"
    dot = to_dot(coefficient_quiver(m), coefficients=True, name=tag) if args.dot else None
    if args.out:
        out = Path(args.out)
        write_atomic(out / f"{p.name}_{tag}.json", m.to_json() + "\n")
        if dot:
            write_atomic(out / f"{p.name}_{tag}.dot", dot)
    else:
        print(dot if dot else m.to_json())
    dims = " ".join(f"{v}:{d}" for v, d in m.dim_vector().items())
    print(f"module {tag}: dim {m.dim} ({dims}); relations {'ok' if m.satisfies_relations() else 'FAIL'}",
          file=sys.stderr)
    return OK


# -- witness -------------------------------------------------------------------------

def family_modules(p: AlgebraPresentation, cfg: RunConfig, kinds: str) -> list[ModuleRep]:
    """Strings of length <= max_len; bands of length <= max_len with inner dims <= max_inner."""
    F = cfg.field
    rng = random.Random(cfg.seed)
    out: list[ModuleRep] = []
    if kinds in ("strings", "all"):
        for s in enumerate_strings(p, cfg.max_len):
            for T in ((0, 1) if s.symmetric else (None,)):
                out.append(build_string_module(p, s, T, F))
    if kinds in ("bands", "all"):
        for b in enumerate_bands(p, cfg.max_len):
            if b.symmetric:
                for n in range(1, cfg.max_inner + 1):
                    if 2 * n <= cfg.max_inner:
                        out.append(build_band_module(p, b, canonical_type("0", n, F), F))
                    if 2 * n + 1 <= cfg.max_inner:
                        out.append(build_band_module(p, b, canonical_type("I", n, F), F))
                        out.append(build_band_module(p, b, canonical_type("II", n, F), F))
            else:
                for m in range(1, cfg.max_inner + 1):
                    lam = F(rng.randrange(1, F.p)) if F.p else F(rng.randint(1, 9))
                    out.append(build_band_module(p, b, LaurentModule.jordan(lam, m, F), F))
    return out


def _job(payload):
    pres, field_name, prov, eps_list = payload
    p = AlgebraPresentation.from_dict(pres, pres.get("name", ""))
    F = Field.from_name(field_name)
    m = rebuild(prov, p, F)
    return [witness(m, e).to_dict() for e in eps_list]


def cmd_witness(args) -> int:
    p = load_presentation(args.presentation)
    cfg = RunConfig(args.field, args.max_len, args.max_inner, tuple(args.eps or [Fraction(1, 4)]),
                    Path(args.out) if args.out else None, args.seed)
    mods = family_modules(p, cfg, args.family)
    if not mods:
        print("empty family")
        return OK
    payloads = [(p.to_dict() | {"name": p.name}, cfg.field.name, m.provenance, list(cfg.eps)) for m in mods]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_job, payloads))
    else:
        results = [_job(x) for x in payloads]
    failures = []
    rows = []
    for k, eps in enumerate(cfg.eps):
        ws = [HyperfinitenessWitness.from_dict(r[k]) for r in results]
        fam = uniform_family(mods, ws, eps)
        worst = Fraction(1)
        for w in fam.witnesses:
            text = w.to_json() + "\n"
            if cfg.out:
                name = f"{p.name}-{module_id(w.module)}-eps{eps.numerator}_{eps.denominator}.json"
                write_atomic(cfg.out / name, text)
            back = HyperfinitenessWitness.from_json(text)
            cert = verify_witness(back.module, back)
            if not cert:
                failures.append((fmt_frac(eps), module_id(w.module), cert.reason))
            worst = min(worst, Fraction(w.dim_N, w.module.dim))
        rows.append((fmt_frac(eps), len(fam.witnesses), fam.L, worst, fam.bounded_shortcut))
    print(f"{'eps':>6} {'modules':>8} {'L':>6} {'min dimN/dimM':>14}  shortcut")
    for e, n, L, worst, short in rows:
        print(f"{e:>6} {n:>8} {L:>6} {float(worst):>14.4f}  {'yes' if short else 'no'}")
    if cfg.out:
        summary = {"presentation": p.name, "field": cfg.field.name, "family": args.family,
                   "max_len": cfg.max_len, "max_inner": cfg.max_inner, "seed": cfg.seed,
                   "runs": [{"eps": e, "modules": n, "L": L, "min_ratio": fmt_frac(worst), "bounded_shortcut": s}
                            for e, n, L, worst, s in rows]}
        write_atomic(cfg.out / "summary.json", json.dumps(summary, indent=1) + "\n")
    for e, mid, why in failures:
        print(f"FAILED eps={e} module={mid}: {why}", file=sys.stderr)
    return FAIL if failures else OK


# -- entry point -----------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clannish", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="validate a presentation")
    c.add_argument("presentation")
    c.add_argument("--class", dest="cls", choices=("string", "clannish"), default="clannish")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("module", help="build a string or band module")
    m.add_argument("presentation")
    m.add_argument("word", nargs="?", help="string word, e.g. 'a b- a'; '1_<v>' for a trivial string")
    m.add_argument("--band", help="band word")
    m.add_argument("--vertex", help="start vertex for trivial strings")
    m.add_argument("--T", type=int, choices=(0, 1), help="action of the centre on a symmetric string")
    m.add_argument("--jordan", help="n,lambda: Jordan block inner module")
    m.add_argument("--companion", help="comma-separated coefficients (constant first) of a monic polynomial")
    m.add_argument("--power", type=int, default=1, help="power of the --companion polynomial")
    m.add_argument("--inner-file", help="JSON inner module ({phi} or {phi, psi})")
    m.add_argument("--dot", action="store_true", help="emit the coefficient quiver as DOT")
    m.add_argument("--field", type=parse_field, default=DEFAULT_FIELD, help="q or gf:<p> (default gf:101)")
    m.add_argument("--out", help="output directory")
    m.set_defaults(func=cmd_module)

    w = sub.add_parser("witness", help="hyperfiniteness witnesses for an enumerated family")
    w.add_argument("presentation")
    w.add_argument("--eps", type=parse_eps_arg, action="append", help="p/q in (0,1); repeatable")
    w.add_argument("--family", choices=("strings", "bands", "all"), default="all")
    w.add_argument("--max-len", type=int, default=6)
    w.add_argument("--max-inner", type=int, default=4)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--field", type=parse_field, default=DEFAULT_FIELD)
    w.add_argument("--out", help="output directory for witness files")
    w.set_defaults(func=cmd_witness)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PresentationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
