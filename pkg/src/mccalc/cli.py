"""Command-line front end and the algebra file format.

Algebra files use chain degrees (``gen x 2`` puts ``x`` in ``L_2``, i.e.
cohomological degree ``-2``)::

    algebra xab
    gen x 0
    gen a -1
    gen b -1
    d x = a
    [x, a] = b

Reports are plain text with a versioned header and three sections,
``[results]``, ``[checks]`` and ``[status]``; identical input and seed give
identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import random
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Sequence

from .dgla import (
    Dgla,
    DglaError,
    NotMaurerCartan,
    PreconditionFailed,
    ValidationError,
    curvature,
    gauge_act,
    twist,
    validate,
)
from .forms import (
    FormError,
    contract_h,
    degeneracy,
    extend_nu,
    face,
    integrate,
    parse_form,
    render,
)
from .scalar_linear import LinearAlgebraError, Vec
from .textfmt import ParseError, format_combo, format_scalar, parse_combo

__all__ = [
    "FORMAT_VERSION",
    "UnknownCommand",
    "Report",
    "parse_algebra",
    "format_algebra",
    "load_algebra",
    "corpus_names",
    "chain_to_cohomological",
    "main",
    "run",
]

FORMAT_VERSION = "mc-calculus/1"
SEED_ENV = "MCCALC_SEED"

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_INPUT = 2


class UnknownCommand(ValueError):
    pass


def chain_to_cohomological(k: int) -> int:
    """The only place where file degrees are converted."""
    return -k


# -- algebra files -----------------------------------------------------------------

_SYM = r"[A-Za-z_][A-Za-z0-9_']*"
_RE_HEADER = re.compile(rf"algebra\s+({_SYM})$")
_RE_GEN = re.compile(rf"gen\s+({_SYM})\s+(-?\d+)$")
_RE_DIFF = re.compile(rf"d\s+({_SYM})\s*=\s*(.+)$")
_RE_BRACKET = re.compile(rf"\[\s*({_SYM})\s*,\s*({_SYM})\s*\]\s*=\s*(.+)$")
_RE_FILT = re.compile(rf"filtration\s+(\d+)\s*:\s*((?:{_SYM}\s*)+)$")


def parse_algebra(text: str, check: bool = True) -> Dgla:
    """Parse an algebra file; errors carry the offending line number."""
    name = None
    gens: list[tuple[str, int]] = []
    seen: set[str] = set()
    diffs: dict[str, tuple[int, str]] = {}
    brackets: dict[tuple[str, str], tuple[int, str]] = {}
    filt: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _RE_HEADER.match(line):
            if name is not None:
                raise ParseError("duplicate algebra header", lineno)
            name = m.group(1)
        elif m := _RE_GEN.match(line):
            sym = m.group(1)
            if sym in seen:
                raise ParseError(f"generator {sym!r} defined twice", lineno)
            if sym == "d":
                raise ParseError("'d' is reserved", lineno)
            seen.add(sym)
            gens.append((sym, chain_to_cohomological(int(m.group(2)))))
        elif m := _RE_BRACKET.match(line):
            s, t = m.group(1), m.group(2)
            for u in (s, t):
                if u not in seen:
                    raise ParseError(f"unknown symbol {u!r}", lineno)
            if (s, t) in brackets or (t, s) in brackets:
                raise ParseError(f"bracket [{s}, {t}] defined twice", lineno)
            brackets[(s, t)] = (lineno, m.group(3))
        elif m := _RE_DIFF.match(line):
            s = m.group(1)
            if s not in seen:
                raise ParseError(f"unknown symbol {s!r}", lineno)
            if s in diffs:
                raise ParseError(f"differential of {s!r} defined twice", lineno)
            diffs[s] = (lineno, m.group(2))
        elif m := _RE_FILT.match(line):
            p = int(m.group(1))
            for s in m.group(2).split():
                if s not in seen:
                    raise ParseError(f"unknown symbol {s!r}", lineno)
                if s in filt:
                    raise ParseError(f"filtration weight of {s!r} given twice", lineno)
                filt[s] = p
        else:
            raise ParseError(f"cannot parse {line!r}", lineno)
    if name is None:
        raise ParseError("missing 'algebra <name>' header", 1)
    if not gens:
        raise ParseError("no generators", 1)

    def combo(lineno: int, body: str) -> dict:
        try:
            return parse_combo(body, seen)
        except ParseError as exc:
            raise ParseError(exc.reason, lineno) from None

    differential = {s: combo(n, body) for s, (n, body) in diffs.items()}
    br = {k: combo(n, body) for k, (n, body) in brackets.items()}
    if filt and set(filt) != seen:
        missing = sorted(seen - set(filt))
        raise ParseError(f"filtration leaves {', '.join(missing)} without a weight", 1)
    L = Dgla.build(gens, differential, br, filt or None, name=name, check=False)
    if check:
        report = validate(L)
        if not report.ok:
            bad = report.first_failure()
            raise ValidationError(bad.name, bad.witness)
    return L


def format_algebra(L: Dgla) -> str:
    """Canonical file text for ``L`` (round-trips through :func:`parse_algebra`)."""
    sym = L.basis.symbols
    lines = [f"algebra {L.name or 'unnamed'}"]
    for s, d in zip(sym, L.basis.degrees):
        lines.append(f"gen {s} {chain_to_cohomological(d)}")
    for i, v in enumerate(L.diff):
        if v:
            lines.append(f"d {sym[i]} = {L.format(v)}")
    for (i, j), v in sorted(L.table.items()):
        if i < j:
            lines.append(f"[{sym[i]}, {sym[j]}] = {L.format(v)}")
    if L.filtration_override is not None:
        by_w: dict[int, list[str]] = {}
        for s, w in zip(sym, L.filtration_override):
            by_w.setdefault(w, []).append(s)
        for w in sorted(by_w):
            lines.append(f"filtration {w}: {' '.join(by_w[w])}")
    return "\n".join(lines) + "\n"


def corpus_names() -> list[str]:
    root = resources.files("mccalc") / "corpus"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".alg"))


def corpus_text(name: str) -> str:
    path = resources.files("mccalc") / "corpus" / f"{name}.alg"
    if not path.is_file():
        raise ParseError(f"no corpus algebra named {name!r}")
    return path.read_text(encoding="utf-8")


def load_algebra(spec: str, check: bool = True) -> tuple[Dgla, str]:
    """Load ``corpus:<name>`` or a file path; returns the algebra and its text."""
    if spec.startswith("corpus:"):
        text = corpus_text(spec[len("corpus:") :])
    else:
        try:
            with open(spec, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {spec}: {exc.strerror}") from None
    return parse_algebra(text, check=check), text


# -- reports -------------------------------------------------------------------------


@dataclass
class Report:
    command: str
    digest: str = "-"
    seed: int | None = None
    results: list[tuple[str, str]] = field(default_factory=list)
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    error: str | None = None
    input_error: bool = False

    def result(self, key: str, value) -> None:
        self.results.append((key, str(value)))

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(ok), detail))
        return ok

    @property
    def exit_code(self) -> int:
        if self.input_error:
            return EXIT_INPUT
        if self.error is not None or not all(ok for _, ok, _ in self.checks):
            return EXIT_PROPERTY
        return EXIT_OK

    def render(self) -> str:
        out = [f"format: {FORMAT_VERSION}", f"command: {self.command}", f"input-sha256: {self.digest}"]
        if self.seed is not None:
            out.append(f"seed: {self.seed}")
        out.append("[results]")
        out += [f"{k}: {v}" for k, v in self.results]
        out.append("[checks]")
        for name, ok, detail in self.checks:
            out.append(f"{name}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))
        out.append("[status]")
        if self.error is not None:
            out.append(f"error: {self.error}")
        passed = sum(1 for _, ok, _ in self.checks if ok)
        out.append(f"checks-passed: {passed}/{len(self.checks)}")
        out.append(f"exit: {self.exit_code}")
        return "\n".join(out) + "\n"


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"{SEED_ENV} must be an integer") from None
    return 0


def _vec(L: Dgla, text: str | None) -> Vec:
    if text is None:
        return L.zero()
    return L.element(text)


# -- commands ----------------------------------------------------------------------------


def cmd_validate(args, rep: Report) -> None:
    L, text = load_algebra(args.algebra, check=False)
    rep.digest = _digest(text)
    report = validate(L)
    rep.result("algebra", L.name)
    rep.result("dimension", L.dim)
    rep.result("degrees", " ".join(f"{s}:{chain_to_cohomological(d)}" for s, d in zip(L.basis.symbols, L.basis.degrees)))
    if report.nilpotency_class is not None:
        rep.result("nilpotency-class", report.nilpotency_class)
    for c in report.checks:
        rep.check(c.name, c.passed, "" if c.passed else f"witness {' '.join(map(str, c.witness))}")


def _load(args, rep: Report) -> Dgla:
    L, text = load_algebra(args.algebra)
    rep.digest = _digest(text)
    rep.result("algebra", L.name)
    return L


def cmd_mc_check(args, rep: Report) -> None:
    L = _load(args, rep)
    tau = _vec(L, args.element)
    curv = curvature(L, tau)
    rep.result("element", L.format(tau))
    rep.result("curvature", L.format(curv))
    rep.check("maurer-cartan", not curv)


def cmd_gauge_act(args, rep: Report) -> None:
    from .dgla import stabilizer_check, twisted_d

    L = _load(args, rep)
    x, tau = _vec(L, args.x), _vec(L, args.tau)
    if curvature(L, tau):
        raise NotMaurerCartan("--tau is not Maurer–Cartan")
    out = gauge_act(L, x, tau)
    rep.result("x", L.format(x))
    rep.result("tau", L.format(tau))
    rep.result("x.tau", L.format(out))
    rep.result("d_tau(x)", L.format(twisted_d(L, tau, x)))
    rep.check("result-maurer-cartan", not curvature(L, out))
    rep.check("stabilizer-iff-closed", stabilizer_check(L, x, tau) == (not twisted_d(L, tau, x)))


def cmd_homotopy(args, rep: Report) -> None:
    from .homotopy import homotopy_groups

    L = _load(args, rep)
    tau = _vec(L, args.tau)
    hg = homotopy_groups(L, tau, args.kmax)
    rep.result("tau", L.format(tau))
    for k in range(0, args.kmax + 1):
        h = hg.homology[k]
        rep.result(f"pi_{k + 1}", f"dimension {h.dimension}")
        for i, (x, xi) in enumerate(zip(h.representatives, hg.representatives[k])):
            rep.result(f"pi_{k + 1}[{i}]", f"[{L.format(x)}] -> {xi.format()}")
    nontrivial = [k + 1 for k in range(args.kmax + 1) if hg.homology[k].dimension]
    if nontrivial:
        rep.result("summary", "; ".join(f"pi_{n} dimension {hg.homology[n - 1].dimension}" for n in nontrivial) + "; all other pi trivial")
    else:
        rep.result("summary", "all pi trivial")
    for (i, j), c in sorted(hg.pi1_products.items()):
        rep.result(f"pi_1 product [{i}]*[{j}]", " ".join(format_scalar(a) for a in c))
    rep.check("representatives-maurer-cartan", hg.representatives_mc)
    rep.check("pi_1-well-defined", hg.pi1_well_defined)
    rep.check("pi_1-associative", hg.pi1_associative)


def cmd_samelson(args, rep: Report) -> None:
    from .homotopy import samelson

    L = _load(args, rep)
    x, y = _vec(L, args.x), _vec(L, args.y)
    v = samelson(L, x, y)
    rep.result("p,q", f"{v.p},{v.q}")
    rep.result("curtis", v.curtis.format())
    rep.result("shuffle", v.shuffle.format())
    rep.result("omega-bracket", v.target.format())
    if v.witness is not None:
        rep.result("bounding-chain", v.witness.format())
    rep.check("higher-bch-terms-vanish", v.higher_terms_vanish)
    rep.check("order-independent", v.order_independent)
    rep.check("curtis=shuffle", v.equals_shuffle)
    rep.check("shuffle~omega-bracket", v.homologous)


def cmd_connecting(args, rep: Report) -> None:
    from .homotopy import connecting_identity

    L = _load(args, rep)
    tau, x = _vec(L, args.tau), _vec(L, args.x)
    v = connecting_identity(L, tau, x)
    rep.result("k", v.k)
    rep.result("target", v.target.format())
    rep.result("(-omega~ x).tau", v.minus_value.format())
    rep.result("(+omega~ x).tau", v.plus_value.format())
    rep.check("target-maurer-cartan", v.target_mc)
    rep.check("-omega~-identity", v.negated)
    rep.result("+omega~-identity", "holds" if v.literal else "fails (sign convention, see README)")


def cmd_forms(args, rep: Report) -> None:
    rep.digest = _digest(args.form)
    w = parse_form(args.form, args.level)
    rep.result("input", render(w))
    op = args.op
    if op == "face":
        out = face(w, args.index)
        rep.result(f"d{args.index}", render(out))
        if w.level > 1:
            rep.check("commutes-with-d", face(w.d(), args.index) == out.d())
    elif op == "degeneracy":
        out = degeneracy(w, args.index)
        rep.result(f"s{args.index}", render(out))
        rep.check("commutes-with-d", degeneracy(w.d(), args.index) == out.d())
        rep.check("face-retraction", face(out, args.index) == w and face(out, args.index + 1) == w)
    elif op == "integrate":
        rep.result("integral", format_scalar(integrate(w)))
    elif op == "extend":
        out = extend_nu(w)
        rep.result("nu", render(out))
        rep.check("face-0", face(out, 0) == w)
        rep.check("inner-faces-zero", all(not face(out, i) for i in range(1, w.level + 1)))
    elif op == "contract":
        v = args.vertex
        out = contract_h(w, v)
        rep.result("h", render(out))
        from .forms import PolyForm, evaluate_vertex

        lhs = contract_h(w, v).d() + contract_h(w.d(), v)
        rhs = w - PolyForm.constant(w.level, evaluate_vertex(w, v))
        rep.check("dh+hd=1-ev", lhs == rhs)
    else:  # pragma: no cover - argparse restricts choices
        raise UnknownCommand(op)


def cmd_deligne(args, rep: Report) -> None:
    from .fuzz import random_lieform
    from .simplicial import deligne_compare, discreteness_check

    L = _load(args, rep)
    seed = _seed(args)
    rep.seed = seed
    rng = random.Random(seed)
    disc = discreteness_check(L)
    rep.result("nonnegatively-graded", "yes" if L.is_nonnegatively_graded() else "no")
    rep.result("discrete", "yes" if disc.discrete else "no")
    rep.result("dim Z0(L)", disc.constant_dim)
    for (n, b), dim in sorted(disc.closed_dims.items()):
        rep.result(f"dim Z0 Omega_{n}(L) [poly<={b}]", dim)
    if disc.witness is not None:
        rep.result("witness", disc.witness.format())
    rep.check("discrete-iff-nonnegative", disc.discrete == L.is_nonnegatively_graded())
    if L.is_nonnegatively_graded():
        tau = _vec(L, args.tau)
        gs = [random_lieform(rng, L, args.level, 0, terms=2) for _ in range(args.samples)]
        dr = deligne_compare(L, gs, tau, check_discreteness=False)
        rep.result("samples", dr.samples)
        rep.check("vertex-compatible", all(dr.vertex_ok))
        rep.check("unique-normalized-gauge", all(dr.unique_ok))
        rep.check("round-trip", all(dr.reproduce_ok))


def cmd_fill_horn(args, rep: Report) -> None:
    from .fuzz import random_gauge_simplex, random_lieform
    from .simplicial import (
        HornProblem,
        SimplicialGroup,
        audit_filler,
        mc_check,
        mc_horn_filler,
        moore_filler,
        parse_lieform,
    )

    L = _load(args, rep)
    seed = _seed(args)
    rep.seed = seed
    rng = random.Random(seed)
    n, k = args.level, args.missing
    if args.face:
        faces = {}
        for spec in args.face:
            j, _, body = spec.partition("=")
            faces[int(j)] = parse_lieform(L, body, n - 1)
    elif args.group:
        g = random_lieform(rng, L, n, 0, terms=2)
        faces = {j: g.face(j) for j in range(n + 1) if j != k}
    else:
        _, xi = random_gauge_simplex(rng, L, n, _vec(L, args.tau), terms=2)
        faces = {j: xi.face(j) for j in range(n + 1) if j != k}
    horn = HornProblem(n, k, faces)
    for j in sorted(faces):
        rep.result(f"face {j}", faces[j].format())
    if args.group:
        filler = moore_filler(SimplicialGroup(L, args.group), horn)
    else:
        filler = mc_horn_filler(L, horn)
        rep.check("filler-maurer-cartan", mc_check(L, filler)[0])
    rep.result("filler", filler.format())
    for j, ok in audit_filler(horn, filler).items():
        rep.check(f"face-{j}-matches", ok)


def cmd_selftest(args, rep: Report) -> None:
    from .selftest import run_selftest

    seed = _seed(args)
    rep.seed = seed
    for name, ok, detail in run_selftest(seed, quick=args.quick):
        rep.check(name, ok, detail)


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "mc-check": cmd_mc_check,
    "gauge-act": cmd_gauge_act,
    "homotopy": cmd_homotopy,
    "samelson": cmd_samelson,
    "connecting": cmd_connecting,
    "forms": cmd_forms,
    "deligne": cmd_deligne,
    "fill-horn": cmd_fill_horn,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mccalc", description="Exact Maurer–Cartan calculus for nilpotent dg Lie algebras.")
    sub = p.add_subparsers(dest="command", metavar="command")

    def alg(sp):
        sp.add_argument("algebra", help="algebra file, or corpus:<name>")

    sp = sub.add_parser("validate", help="check the dg Lie identities and nilpotency")
    alg(sp)
    sp = sub.add_parser("mc-check", help="evaluate the Maurer–Cartan curvature")
    alg(sp)
    sp.add_argument("--element", required=True)
    sp = sub.add_parser("gauge-act", help="gauge action x·τ")
    alg(sp)
    sp.add_argument("--x", required=True)
    sp.add_argument("--tau", default=None)
    sp = sub.add_parser("homotopy", help="homotopy groups at a base point")
    alg(sp)
    sp.add_argument("--tau", default=None)
    sp.add_argument("--kmax", type=int, default=3)
    sp = sub.add_parser("samelson", help="Samelson product of two cycles")
    alg(sp)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp = sub.add_parser("connecting", help="gauge identity behind the connecting map")
    alg(sp)
    sp.add_argument("--tau", default=None)
    sp.add_argument("--x", required=True)
    sp = sub.add_parser("forms", help="operations on polynomial forms")
    sp.add_argument("op", choices=["face", "degeneracy", "integrate", "extend", "contract"])
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--form", required=True)
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--vertex", type=int, default=None)
    sp = sub.add_parser("deligne", help="Deligne groupoid comparison and discreteness")
    alg(sp)
    sp.add_argument("--tau", default=None)
    sp.add_argument("--level", type=int, default=2)
    sp.add_argument("--samples", type=int, default=4)
    sp.add_argument("--seed", type=int, default=None)
    sp = sub.add_parser("fill-horn", help="fill a horn in MC_• or in a simplicial group")
    alg(sp)
    sp.add_argument("--level", type=int, default=2)
    sp.add_argument("--missing", type=int, default=1)
    sp.add_argument("--tau", default=None)
    sp.add_argument("--face", action="append", help="j=<lie form>, repeatable; random horn when omitted")
    sp.add_argument("--group", choices=["G", "exp"], default=None, help="fill in a simplicial group instead")
    sp.add_argument("--seed", type=int, default=None)
    sp = sub.add_parser("selftest", help="run the property ledger")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--quick", action="store_true")
    return p


def _command_line(argv: Sequence[str]) -> str:
    return " ".join(argv)


def run(argv: Sequence[str]) -> Report:
    parser = build_parser()
    argv = list(argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        rep = Report(_command_line(argv))
        rep.error = "invalid arguments"
        rep.input_error = exc.code != 0
        return rep
    rep = Report(_command_line(argv))
    if args.command is None:
        rep.error = "no command given"
        rep.input_error = True
        return rep
    handler = COMMANDS.get(args.command)
    if handler is None:
        rep.error = str(UnknownCommand(args.command))
        rep.input_error = True
        return rep
    try:
        handler(args, rep)
    except (ParseError, ValidationError, KeyError) as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
        rep.input_error = True
    except (NotMaurerCartan, PreconditionFailed, FormError, ValueError) as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
        rep.input_error = True
    except (DglaError, LinearAlgebraError) as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
    return rep


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or "-h" in argv or "--help" in argv:
        # help goes through argparse directly rather than into a report
        try:
            build_parser().parse_args(argv or ["--help"])
        except SystemExit as exc:
            return int(exc.code or 0)
    rep = run(argv)
    sys.stdout.write(rep.render())
    return rep.exit_code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
