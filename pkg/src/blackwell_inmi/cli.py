"""Command-line front end.

Exit codes: 0 success, 1 a verified claim had violations, 2 bad input,
3 a hypothesis of the construction fails (e.g. singular M), 4 a solver did
not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import blackwell, harness, inmi, matrixio
from .experiments import (
    Experiment,
    Garbling,
    StochasticityError,
    ZeroProbabilitySignal,
    as_belief,
    garble,
    posterior,
    random_experiment,
    random_garbling,
    random_straightforward,
    signal_marginals,
)
from .feasibility import SolverError
from .matkernel import ConvergenceError

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3
EXIT_SOLVER = 4


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _load(path, kind=Experiment, label="input"):
    try:
        m, fmt = matrixio.read_matrix(path)
    except OSError as exc:
        raise CliError(f"{label}: cannot read {path}: {exc.strerror}") from None
    except matrixio.MatrixFileError as exc:
        raise CliError(f"{label} ({path}): {exc}") from None
    try:
        return kind(m), fmt
    except (StochasticityError, ValueError) as exc:
        raise CliError(f"{label} ({path}): {exc}") from None


def _emit(text, out=None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _search_json(s: blackwell.GarblingSearch):
    return {
        "found": s.found,
        "witness": None if s.witness is None else matrixio.matrix_to_json(s.witness.mat),
        "residual": s.residual,
        "method": s.method.value,
    }


def cmd_measure(args):
    e, _ = _load(args.input)
    if not e.is_square:
        raise CliError(f"input ({args.input}): d_inmi needs a square experiment, got {e.shape}")
    print(format(inmi.d_inmi(e), ".12g"))
    return EXIT_OK


def cmd_compare(args):
    a, _ = _load(args.a, label="a")
    b, _ = _load(args.b, label="b")
    if not (a.is_square and b.is_square) or a.shape != b.shape:
        raise CliError(f"compare needs square experiments of one size, got {a.shape} and {b.shape}")
    rel, fwd, back = blackwell.compare_blackwell(a, b, tol=args.tol)
    cmp = inmi.inmi_compare(a, b)
    out = {
        "blackwell": {
            "relation": rel,
            "a_to_b": _search_json(fwd),
            "b_to_a": _search_json(back),
            "tolerance": args.tol,
        },
        "inmi": {
            "relation": cmp.relation.value,
            "score_a": cmp.score_a,
            "score_b": cmp.score_b,
        },
    }
    _emit(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def cmd_garble(args):
    g, _ = _load(args.gamma, Garbling, label="gamma")
    a, fmt = _load(args.a, label="a")
    if g.shape[1] != a.n_signals:
        raise CliError(f"gamma {g.shape} cannot act on {a.n_signals} signals")
    _emit(matrixio.dumps(garble(g, a).mat, fmt), args.out)
    return EXIT_OK


def cmd_translate(args):
    g1, _ = _load(args.gamma1, Garbling, label="gamma1")
    m, _ = _load(args.m, Garbling, label="m")
    a, _ = _load(args.a, label="a")
    if not (g1.shape == m.shape and a.n_signals == m.shape[0]):
        raise CliError(f"shapes do not conform: gamma1 {g1.shape}, m {m.shape}, a {a.shape}")
    try:
        tr = blackwell.check_diagram(a, g1, m)
    except blackwell.HypothesisViolation as exc:
        raise CliError(f"{exc}; translation needs a nonsingular M", EXIT_HYPOTHESIS) from None
    out = {
        "gamma2": matrixio.matrix_to_json(tr.gamma2),
        "is_stochastic": tr.is_stochastic,
        "diagram_residual": tr.diagram_residual,
        "similarity_gap": tr.similarity_gap,
    }
    _emit(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def _parse_size(text):
    parts = text.replace(",", "-").split("-")
    try:
        vals = [int(p) for p in parts if p.strip()]
    except ValueError:
        raise CliError(f"--size: expected N or LO-HI, got {text!r}") from None
    if len(vals) == 1:
        return (vals[0], vals[0])
    if len(vals) == 2:
        return tuple(vals)
    raise CliError(f"--size: expected N or LO-HI, got {text!r}")


def cmd_verify(args):
    try:
        cfg = harness.CampaignConfig(
            theorem=args.theorem,
            trials=args.trials,
            seed=args.seed,
            size_range=_parse_size(args.size) if args.size else None,
            tolerance=args.tol,
            steps=args.steps,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    report = harness.run_campaign(cfg, workers=args.workers, verbose=args.verbose)
    _emit(harness.report_to_json(report, include_timing=args.timing), args.out)
    if report.violations and cfg.theorem not in harness.INFORMATIONAL:
        return EXIT_VIOLATIONS
    return EXIT_OK


def _parse_prior(text, n_states):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise CliError(f"--prior: cannot parse {text!r}") from None
    if len(vals) == 1 and n_states == 2:
        vals = [vals[0], 1.0 - vals[0]]
    try:
        return as_belief(vals, n_states)
    except ValueError as exc:
        raise CliError(f"--prior: {exc}") from None


def cmd_posteriors(args):
    e, _ = _load(args.a)
    prior = _parse_prior(args.prior, e.n_states) if args.prior else np.full(e.n_states, 1.0 / e.n_states)
    marg = signal_marginals(prior, e)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["signal", "marginal"] + [f"posterior_{j}" for j in range(e.n_states)] + ["note"])
    for s in range(e.n_signals):
        try:
            post = [format(v, ".17g") for v in posterior(prior, e, s)]
            note = ""
        except ZeroProbabilitySignal:
            post = [""] * e.n_states
            note = "zero-probability signal"
        w.writerow([s, format(marg[s], ".17g")] + post + [note])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_random(args):
    n_states = args.n_states or args.n
    if args.kind == "uniform":
        m = random_experiment(args.n, n_states, args.seed).mat
    elif args.kind == "straightforward":
        m = random_straightforward(args.n, args.seed).mat
    else:
        m = random_garbling(args.n, args.seed, args.min_entry).mat
    fmt = args.format or (matrixio.detect_format(args.out) if args.out not in (None, "-") else "json")
    _emit(matrixio.dumps(m, fmt), args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="blackwell-inmi",
        description="Blackwell dominance, inf-norm informativeness and verification campaigns.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("measure", help="print d_inmi of a square experiment")
    s.add_argument("input")
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("compare", help="Blackwell and INMI comparison of two experiments")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--tol", type=float, default=blackwell.DOMINANCE_TOL)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("garble", help="write gamma @ a in the format of a")
    s.add_argument("gamma")
    s.add_argument("a")
    s.add_argument("-o", "--out", required=True)
    s.set_defaults(func=cmd_garble)

    s = sub.add_parser("translate", help="gamma2 = M gamma1 M^-1 and the diagram check")
    s.add_argument("gamma1")
    s.add_argument("m")
    s.add_argument("a")
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("verify", help="run a seeded verification campaign")
    s.add_argument("--theorem", required=True, choices=[t.value for t in harness.Theorem])
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--size", help="matrix size N or range LO-HI")
    s.add_argument("--tol", type=float)
    s.add_argument("--steps", type=int, default=200, help="chain length for limits-fig3")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--verbose", action="store_true", help="include every violating trial")
    s.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identity)")
    s.add_argument("-o", "--out", default="-")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("posteriors", help="CSV of signal marginals and posteriors")
    s.add_argument("a")
    s.add_argument("--prior", help="P(state 0) for two states, or a comma list")
    s.add_argument("-o", "--out", default="-")
    s.set_defaults(func=cmd_posteriors)

    s = sub.add_parser("random", help="write a seeded random experiment or garbling")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--n-states", type=int)
    s.add_argument("--kind", choices=["uniform", "straightforward", "garbling"], default="uniform")
    s.add_argument("--min-entry", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=["json", "csv"])
    s.add_argument("-o", "--out", default="-")
    s.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ConvergenceError, SolverError) as exc:
        print(f"error: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
