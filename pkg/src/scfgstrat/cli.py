"""Command-line front end.  Every command prints one JSON report on stdout.

Exit codes: 0 success, 2 input error, 3 resource limit, 4 verification failure.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from . import multigraph as mg
from .grammar import BoundExceeded, GrammarError, SentencePair, count_derivations_oracle, parse_grammar
from .parser import UnknownSymbol, compile_strategies, count_derivations, recognize
from .reduction import cubic, gadget
from .strategy import (
    BRUTE_FORCE_LIMIT, DEFAULT_SIZE_LIMIT, SPACE, TIME, LinearStrategy, Permutation, SizeLimitExceeded,
    SizeMismatch, brute_force_optimize, decoding_exponents, evaluate, optimize_space, optimize_time,
)

EXIT_OK, EXIT_INPUT, EXIT_LIMIT, EXIT_VERIFY = 0, 2, 3, 4


class VerificationFailed(RuntimeError):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (SizeLimitExceeded, gadget.ResourceLimitExceeded, MemoryError, BoundExceeded)):
        return EXIT_LIMIT
    if isinstance(exc, (VerificationFailed, gadget.UnverifiedGadget)):
        return EXIT_VERIFY
    return EXIT_INPUT


INPUT_ERRORS = (
    ValueError, KeyError, OSError, GrammarError, mg.GraphFormatError, cubic.NotCubic, SizeMismatch,
    UnknownSymbol, gadget.GadgetError,
)


def _run(command: str, inputs: dict, body) -> None:
    """Run ``body`` and emit the report; ``body`` returns ``(result, stats)``."""
    t0 = time.perf_counter()
    report = {"command": command, "inputs": inputs}
    code = EXIT_OK
    try:
        result, stats = body()
        report["result"] = result
        report["stats"] = stats
    except (VerificationFailed, gadget.UnverifiedGadget, SizeLimitExceeded, gadget.ResourceLimitExceeded,
            MemoryError, BoundExceeded, *INPUT_ERRORS) as exc:
        code = _exit_code(exc)
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, VerificationFailed) and exc.payload:
            report["result"] = exc.payload
    report["wall_time"] = round(time.perf_counter() - t0, 6)
    click.echo(json.dumps(report, indent=2))
    sys.exit(code)


SCHEMA_DIR = Path(__file__).with_name("schemas")


def report_schema(command: str) -> dict:
    """The checked-in JSON schema of a command's report."""
    return json.loads((SCHEMA_DIR / f"{command}.json").read_text(encoding="utf-8"))


def _progress(msg: str) -> None:
    click.echo(msg, err=True)


def _perm(text: str) -> Permutation:
    try:
        return Permutation.parse(text)
    except ValueError as exc:
        raise ValueError(f"bad permutation {text!r}: {exc}") from None


@click.group()
@click.version_option(package_name="scfgstrat")
def main():
    """Linear parsing strategies for synchronous grammar rules."""


@main.command()
@click.argument("permutation")
@click.option("--strategy", "strategy", default=None, help="Collection order, e.g. \"4 5 2 3 1 6\" (default: identity).")
@click.option("--lm-order", "lm_order", type=int, default=None, help="Also report decoding exponents for an m-gram model.")
def analyze(permutation, strategy, lm_order):
    """Boundaries, fan-out and step exponents of a strategy."""

    def body():
        p = _perm(permutation)
        s = LinearStrategy.parse(strategy) if strategy else LinearStrategy.identity(p.r)
        rep = evaluate(p, s)
        out = {"permutation": list(p.image), "strategy": list(s.order), **rep.to_dict(),
               "space_exponent": rep.space_exponent, "time_exponent": rep.time_exponent}
        if lm_order is not None:
            out["decoding"] = decoding_exponents(p, s, lm_order).to_dict()
        return out, {}

    _run("analyze", {"permutation": permutation, "strategy": strategy, "lm_order": lm_order}, body)


@main.command()
@click.argument("permutation")
@click.option("--objective", type=click.Choice([SPACE, TIME]), default=SPACE, show_default=True)
@click.option("--oracle", is_flag=True, help=f"Cross-check against brute force (r <= {BRUTE_FORCE_LIMIT}).")
@click.option("--size-limit", type=int, default=DEFAULT_SIZE_LIMIT, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True, help="Accepted for compatibility; solvers are sequential.")
def optimize(permutation, objective, oracle, size_limit, threads):
    """Exact space- or time-optimal strategy for a permutation."""

    def body():
        p = _perm(permutation)
        s, value = (optimize_space if objective == SPACE else optimize_time)(p, size_limit)
        out = {"permutation": list(p.image), "objective": objective, "strategy": list(s.order), "value": value}
        if oracle:
            bs, bv = brute_force_optimize(p, objective)
            out["oracle"] = {"strategy": list(bs.order), "value": bv, "agrees": bv == value}
            if bv != value:
                raise VerificationFailed(f"optimizer value {value} differs from brute force {bv}", out)
        return out, {"size_limit": size_limit}

    _run("optimize", {"permutation": permutation, "objective": objective, "oracle": oracle}, body)


@main.command()
@click.option("--perm", "permutation", default=None, help="Build the permutation multigraph of this permutation.")
@click.option("--graph", "graph_file", type=click.Path(dir_okay=False), default=None, help="Multigraph edge-list file.")
@click.option("--variant", type=click.Choice(list(mg.VARIANTS)), default=mg.CW, show_default=True)
@click.option("--limit", type=int, default=mg.DEFAULT_VERTEX_LIMIT, show_default=True, help="Vertex limit of the exact solver.")
@click.option("--threads", type=int, default=1, show_default=True, help="Accepted for compatibility; solvers are sequential.")
def cutwidth(permutation, graph_file, variant, limit, threads):
    """Exact cutwidth (cw), extended cutwidth (ecw) or extended modified cutwidth (emcw)."""

    def body():
        if (permutation is None) == (graph_file is None):
            raise ValueError("give exactly one of --perm or --graph")
        if permutation is not None:
            g = mg.from_permutation(_perm(permutation))
        else:
            g = mg.parse_graph(Path(graph_file).read_text(encoding="utf-8"))
        res = mg.SOLVERS[variant](g, limit=limit)
        out = res.to_dict(g)
        stats = out.pop("stats")
        return out, stats

    _run("cutwidth", {"perm": permutation, "graph": graph_file, "variant": variant}, body)


def _parse_bisection(text: str, g: cubic.CubicGraph) -> tuple[cubic.Bisection, int]:
    if text == "min":
        return cubic.min_bisection_brute(g)
    try:
        left, right = text.split("/")
        b = cubic.Bisection([int(x) for x in left.split(",")], [int(x) for x in right.split(",")])
    except ValueError:
        raise ValueError(f"bisection must look like '1,2/3,4' or 'min', got {text!r}") from None
    b.validate(g.n)
    return b, g.cut(set(b.V1))


@main.command()
@click.argument("source")
@click.option("--k", "k", type=int, required=True, help="Bisection-width bound of the source instance.")
@click.option("--scale", "t", type=click.IntRange(1, 4), default=4, show_default=True, help="4 is the faithful construction.")
@click.option("--verify", is_flag=True, help="Check both Hamiltonian paths and the block structure.")
@click.option("--sweep", "sweep", default=None, help="Bisection 'V1/V2' such as '1,2/3,4', or 'min'.")
@click.option("--dump", "dump", type=click.Path(dir_okay=False), default=None, help="Write the full edge list (scale <= 2).")
@click.option("--memory-cap", "memory_cap", type=int, default=None, help=f"MB; defaults to ${gadget.MEMORY_ENV}.")
def reduce(source, k, t, verify, sweep, dump, memory_cap):
    """Build the hardness gadget for a cubic graph (file, or K4 / K33 / Q3)."""

    def body():
        if source in cubic.FIXTURES:
            g = cubic.FIXTURES[source]()
        else:
            g = cubic.parse_cubic(Path(source).read_text(encoding="utf-8"))
        _progress(f"building gadget: n={g.n} k={k} scale={t}")
        inst = gadget.build_gadget(g, k, t, memory_cap_mb=memory_cap)
        out = {"manifest": inst.manifest()}
        _progress(f"built {inst.num_vertices} vertices, k' = {inst.k_prime}")
        if dump:
            Path(dump).write_text(inst.dump_edges(), encoding="utf-8")
            _progress(f"edge list written to {dump}")
        report = None
        if verify:
            report = gadget.verify_gadget(inst)
            for c in report.checks:
                _progress(f"check {c.name}: {'pass' if c.passed else 'FAIL'} {c.detail}")
            out["verification"] = report.to_dict()
        if sweep:
            b, cut = _parse_bisection(sweep, g)
            arr = gadget.canonical_arrangement(inst, b)
            res = gadget.sweep_max_width(inst, arr)
            _progress(f"sweep: max width {res.max_width} at gap {res.argmax_gap}")
            out["sweep"] = {"bisection": b.to_dict(), "cut": cut, **res.to_dict()}
        if report is not None and not report.ok:
            raise VerificationFailed("gadget verification failed: " + ", ".join(c.name for c in report.failed()), out)
        return out, {}

    _run("reduce", {"source": source, "k": k, "scale": t, "verify": verify, "sweep": sweep}, body)


@main.command()
@click.argument("grammar_file", type=click.Path(dir_okay=False))
@click.argument("w1")
@click.argument("w2")
@click.option("--objective", type=click.Choice([SPACE, TIME]), default=SPACE, show_default=True)
@click.option("--count", "count", is_flag=True, help="Also count derivations.")
@click.option("--oracle", is_flag=True, help="Cross-check against bounded derivation enumeration.")
def parse(grammar_file, w1, w2, objective, count, oracle):
    """Recognize a sentence pair.  Strings without spaces are split into characters."""

    def body():
        g = parse_grammar(Path(grammar_file).read_text(encoding="utf-8"))
        strategies = compile_strategies(g, objective)
        pair = SentencePair.from_text(w1, w2)
        ok, stats = recognize(g, strategies, pair)
        out = {"accepted": ok, "strategies": {k: list(s.order) for k, s in strategies.items()}}
        if count:
            out["derivations"] = count_derivations(g, strategies, pair)
        if oracle:
            expected = count_derivations_oracle(g, pair)
            out["oracle"] = {"derivations": expected, "agrees": (expected > 0) == ok}
            if (expected > 0) != ok or (count and expected != out["derivations"]):
                raise VerificationFailed("chart parser disagrees with the enumeration oracle", out)
        return out, stats.to_dict()

    _run("parse", {"grammar": grammar_file, "w1": w1, "w2": w2, "objective": objective}, body)


if __name__ == "__main__":  # pragma: no cover
    main()
