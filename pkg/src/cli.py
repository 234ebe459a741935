# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""The `holimcheck` command line.

Each verb runs one construction or verifier on categories, functors and diagrams read
from documents (or built-in shape names) and prints a deterministic report. Exit
status is 0 on success, 1 when a verification fails and 2 on input or capacity errors.
"""

import argparse
import logging
import math
import random
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from chaincx import homology_table, smith_normal_form
from config import CapacityError, Limits
from documents import (
    DocumentError,
    dump_category,
    load_category,
    load_diagram,
    load_functor,
    read_matrix,
)
from fincat import (
    CategoryError,
    FinCategory,
    hasse_pairs,
    p0_inclusion,
    validate_category,
    validate_functor,
)
from generators import (
    functor_instance,
    random_diagram,
    random_poset,
    theorem_a_instance,
    theorem_b_instance,
)
from groth import (
    cofiber_structure_report,
    hoc,
    hoc_overcategory_checks,
    thomason_cofiber_check,
)
from holim import (
    Conn,
    DiagramError,
    cofinality_check,
    effective_conn,
    initial_object,
    theorem_a_bound,
    total_complex,
    validate_diagram,
    verify_theorem_a,
    verify_theorem_b,
)
from nerve import (
    degree_table,
    find_cycle,
    is_directed_reedy,
    nerve_dimension,
)
from reports import Report

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

RANDOM_VERBS = ("verify-a", "verify-b", "thomason", "over-checks", "cofinality")


class UsageError(ValueError):
    """Raised for missing or inconsistent command line arguments."""


def parse_conn(text: str) -> dict[str, Conn]:
    """Parse `a=2,b=5,c=inf` into a label -> connectivity mapping."""
    conn: dict[str, Conn] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        label, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--conn entry {item!r} is not of the form label=value")
        try:
            conn[label.strip()] = math.inf if value.strip() == "inf" else int(value)
        except ValueError:
            raise UsageError(f"--conn value {value!r} is not an integer") from None
    return conn


def parse_range(text: str) -> range:
    """`N` means degrees 0..N, `A:B` means A..B inclusive."""
    try:
        if ":" in text:
            low, high = (int(v) for v in text.split(":"))
        else:
            low, high = 0, int(text)
    except ValueError:
        raise UsageError(f"--range {text!r} is neither N nor A:B") from None
    return range(low, high + 1)


def _fmt(value: Conn) -> str:
    return "inf" if value == math.inf else str(int(value))


def _require(args: argparse.Namespace, *names: str):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.verb} needs {' and '.join(missing)}")


def _shape(args: argparse.Namespace) -> FinCategory:
    _require(args, "shape")
    return load_category(args.shape)


def _limits(args: argparse.Namespace) -> Limits:
    return Limits.from_env(max_simplices=args.max_simplices, max_generators=args.max_generators)


def _random_case(verb: str, seed: int, limits: dict, index: int) -> tuple[bool, str]:
    """Run one seeded random instance; returns the verdict and the first failure."""
    rng = random.Random(f"{verb}:{seed}:{index}")
    lim = Limits(**limits)
    if verb == "verify-a":
        report = verify_theorem_a(theorem_a_instance(rng), limits=lim)
    elif verb == "verify-b":
        functor, diagram = theorem_b_instance(rng)
        report = verify_theorem_b(functor, diagram, limits=lim)
    elif verb == "thomason":
        report = thomason_cofiber_check(functor_instance(rng), limits=lim)
    elif verb == "over-checks":
        report = hoc_overcategory_checks(functor_instance(rng), limits=lim)
    else:
        shape = _random_cofinal_shape(rng)
        report = cofinality_check(random_diagram(rng, shape), limits=lim)
    failures = report.failures
    return report.passed, failures[0].render() if failures else ""


def _random_cofinal_shape(rng: random.Random) -> FinCategory:
    while True:
        shape = random_poset(rng, rng.randint(1, 5))
        if initial_object(shape) is not None:
            return shape


def run_random(verb: str, count: int, seed: int, jobs: int, limits: Limits) -> Report:
    """Run a seeded random suite, in a process pool when `jobs` > 1.

    Results are merged by instance index, so the report does not depend on `jobs`.
    """
    case = partial(_random_case, verb, seed, limits.model_dump())
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(case, range(count)))
    else:
        results = [case(k) for k in range(count)]
    report = Report(f"random {verb} suite: {count} instances, seed {seed}")
    for k, (passed, detail) in enumerate(results):
        report.add(f"instance {k}", passed, detail)
    return report


def cmd_validate(args: argparse.Namespace) -> Report:
    """Validate whichever of --shape, --functor and --diagram are given."""
    if args.shape is None and args.functor is None and args.diagram is None:
        raise UsageError("validate needs --shape, --functor or --diagram")
    report = Report("validation")
    if args.shape is not None:
        report.extend(validate_category(load_category(args.shape)), "category: ")
    if args.functor is not None:
        functor = load_functor(args.functor)
        report.extend(validate_category(functor.source), "source: ")
        report.extend(validate_category(functor.target), "target: ")
        report.extend(validate_functor(functor), "functor: ")
    if args.diagram is not None:
        report.extend(validate_diagram(load_diagram(args.diagram)), "diagram: ")
    return report


def cmd_nerve_dim(args: argparse.Namespace) -> str:
    """Print the nerve dimension, with a witness cycle when it is infinite."""
    c = _shape(args)
    dim = nerve_dimension(c)
    if dim != math.inf:
        return f"{dim}\n"
    cycle = find_cycle(c) or ()
    return "inf\ncycle: " + " ".join(c.morphisms[k].name for k in cycle) + "\n"


def cmd_degree(args: argparse.Namespace) -> str:
    """Print deg(i) per object and whether the shape is directed Reedy."""
    c = _shape(args)
    table = degree_table(c)
    if not table.finite:
        return table.render() + "not directed Reedy: infinite degree\n"
    reedy = is_directed_reedy(c, table)
    verdict = "directed Reedy" if reedy.holds else f"not directed Reedy: {reedy.witness}"
    return table.render() + verdict + "\n"


def cmd_bound(args: argparse.Namespace) -> str:
    """Print min over i of conn(i) - deg(i)."""
    if args.diagram is not None:
        d = load_diagram(args.diagram)
        return _fmt(theorem_a_bound(d.shape, effective_conn(d))) + "\n"
    _require(args, "conn")
    return _fmt(theorem_a_bound(_shape(args), parse_conn(args.conn))) + "\n"


def cmd_hoc(args: argparse.Namespace) -> Report | str:
    """Emit the category document of hoc F; `--check` prints its structure report."""
    functor = load_functor(args.functor) if args.functor else p0_inclusion(_limits(args))
    data = hoc(functor)
    if args.check:
        report = cofiber_structure_report(data)
        if data.cofiber.is_thin:
            for x, y in hasse_pairs(data.cofiber):
                report.row(f"cover {x} < {y}")
        return report
    return dump_category(data.cofiber)


def cmd_thomason(args: argparse.Namespace) -> Report:
    """Reduced homology of N(hoc F) against the cone of N(F)."""
    functor = load_functor(args.functor) if args.functor else p0_inclusion(_limits(args))
    high = max(args.range) if args.range else 3
    return thomason_cofiber_check(functor, high, _limits(args))


def cmd_over_checks(args: argparse.Namespace) -> Report:
    """Over categories of hoc F."""
    functor = load_functor(args.functor) if args.functor else p0_inclusion(_limits(args))
    high = max(args.range) if args.range else 3
    return hoc_overcategory_checks(functor, high, limits=_limits(args))


def cmd_total(args: argparse.Namespace) -> Report:
    """Homology table of the total complex."""
    _require(args, "diagram")
    d = load_diagram(args.diagram)
    tot = total_complex(d, limits=_limits(args)).complex
    low, high = tot.bounds or (0, -1)
    degrees = args.range or range(low, high + 1)
    report = Report("total complex")
    report.row("ranks: " + " ".join(f"{n}:{tot.rank(n)}" for n in tot.degrees))
    for n, h in homology_table(tot, degrees).items():
        report.row(f"degree {n}: {h}")
    return report


def cmd_verify_a(args: argparse.Namespace) -> Report:
    """Connectivity of the homotopy limit against the bound."""
    _require(args, "diagram")
    return verify_theorem_a(load_diagram(args.diagram), args.range, _limits(args))


def cmd_verify_b(args: argparse.Namespace) -> Report:
    """The homotopy cartesian square for restriction along F."""
    _require(args, "functor", "diagram")
    degrees = args.range or range(-4, 5)
    return verify_theorem_b(
        load_functor(args.functor), load_diagram(args.diagram), degrees, _limits(args)
    )


def cmd_cofinality(args: argparse.Namespace) -> Report:
    """The homotopy limit over a shape with an initial object."""
    _require(args, "diagram")
    return cofinality_check(load_diagram(args.diagram), _limits(args))


def cmd_matrix(args: argparse.Namespace) -> str:
    """Smith normal form invariants of a plain-text matrix."""
    _require(args, "matrix")
    path = Path(args.matrix)
    try:
        text = path.read_text()
    except OSError as e:
        raise DocumentError(f"{path}: {e.strerror}") from None
    m, _, _ = read_matrix(text, str(path))
    form = smith_normal_form(m, track=False)
    return "invariants: " + " ".join(str(v) for v in form.invariants) + "\n"


COMMANDS: dict[str, Callable[[argparse.Namespace], Report | str]] = {
    "validate": cmd_validate,
    "nerve-dim": cmd_nerve_dim,
    "degree": cmd_degree,
    "bound": cmd_bound,
    "hoc": cmd_hoc,
    "thomason": cmd_thomason,
    "total": cmd_total,
    "verify-a": cmd_verify_a,
    "verify-b": cmd_verify_b,
    "over-checks": cmd_over_checks,
    "cofinality": cmd_cofinality,
    "smith": cmd_matrix,
}


def build_parser() -> argparse.ArgumentParser:
    """The argument parser; every verb shares the same flags."""
    parser = argparse.ArgumentParser(
        prog="holimcheck",
        description="Finite categories, nerves and homotopy limits of chain complexes.",
    )
    parser.add_argument("verb", choices=sorted(COMMANDS), help="operation to run")
    parser.add_argument("--shape", help="built-in shape name or category document")
    parser.add_argument("--functor", help="functor document")
    parser.add_argument("--diagram", help="diagram document")
    parser.add_argument("--matrix", help="plain-text matrix file")
    parser.add_argument("--conn", help="connectivity per object, e.g. a=2,b=5,c=3")
    parser.add_argument("--range", type=parse_range, help="degrees: N for 0..N or A:B")
    parser.add_argument("--check", action="store_true", help="hoc: print structure checks")
    parser.add_argument("--max-simplices", type=int, help="override HOLIM_MAX_SIMPLICES")
    parser.add_argument("--max-generators", type=int, help="override HOLIM_MAX_GENERATORS")
    parser.add_argument("--output", help="write the result here instead of stdout")
    parser.add_argument("--random", type=int, metavar="N", help="run N seeded random cases")
    parser.add_argument("--seed", type=int, default=0, help="seed of the random suite")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for --random")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def run(args: argparse.Namespace) -> tuple[int, str]:
    """Execute a parsed command; returns the exit status and the text to emit."""
    if args.random is not None:
        if args.verb not in RANDOM_VERBS:
            raise UsageError(f"--random is not supported by {args.verb}")
        report = run_random(args.verb, args.random, args.seed, args.jobs, _limits(args))
    else:
        result = COMMANDS[args.verb](args)
        if isinstance(result, str):
            return EXIT_OK, result
        report = result
    return (EXIT_OK if report.passed else EXIT_FAIL), report.render()


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        status, text = run(args)
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (DocumentError, UsageError, CategoryError, DiagramError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
