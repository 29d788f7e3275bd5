"""Command-line front end.

    lonpauli classes -M 4 -N 2 --grid
    lonpauli measure --state psi0 -L l0
    lonpauli entropy --state psi0 -L xi,l0,l1,l2,l3,l4
    lonpauli cmi --state phi32 --pairs all
    lonpauli sweep noise --state phi32 --pairs all --grid 0:1:0.01
    lonpauli verify --only mub

Exit codes: 0 success, 1 validation error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as lio
from .bipartite import (
    SWEEP_FIELDS,
    BipartiteState,
    SeparableConfig,
    build_phi_3A2B,
    build_psi0,
    cmi_report,
    cmp_report,
    extract_targets,
    first_crossing,
    joint_pauli_measurement,
    sweep,
)
from .checks import SUITES, run_suites
from .fock import MixedState
from .measurement import measure, parse_config
from .pauli import (
    build_pauli_eigenstate,
    class_listing,
    complementarity_grid,
    pauli_class_of,
    pauli_classes,
)
from .quantities import ComplementaryConfig, entropy_report

EXIT_OK, EXIT_INVALID, EXIT_SUITE = 0, 1, 2

BUILTIN_HELP = "psi0, phi32, E:<rep>:<j>:<m> (e.g. E:11000:0:0) or a JSON state file"


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _log_base(text: str):
    if text not in ("2", "e", "10"):
        raise argparse.ArgumentTypeError("log base must be 2, e or 10")
    return "e" if text == "e" else float(text)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-M", type=int, help="number of modes")
    p.add_argument("-N", type=int, help="photon number")
    p.add_argument("-NA", type=int, help="photons of party A")
    p.add_argument("-NB", type=int, help="photons of party B")
    p.add_argument("--log-base", type=_log_base, default="e", help="2, e or 10 (default e)")
    p.add_argument("--sigma", help="JSON file with per-class Xi permutations")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--force", action="store_true", help="skip complementarity validation")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="lonpauli", description="Pauli measurements in linear optics networks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classes", parents=[common], help="list Pauli classes of a sector")
    p.add_argument("--grid", action="store_true", help="Lambda_j / Lambda_l complementarity grid")

    p = sub.add_parser("eigenstate", parents=[common], help="write a Lambda_j eigenstate")
    p.add_argument("--rep", required=True, help="occupation of a class member, e.g. 11000 or 1,1,0,0,0")
    p.add_argument("-j", type=int, default=0)
    p.add_argument("-m", type=int, default=0)

    p = sub.add_parser("measure", parents=[common], help="label distribution of one measurement")
    p.add_argument("--state", required=True, help=BUILTIN_HELP)
    p.add_argument("-L", "--measurement", help="xi, z or l<j> (single-party states)")
    p.add_argument("--pair", help="alpha:beta, e.g. l2:l2 (two-party states)")
    p.add_argument("--breakdown", action="store_true", help="per-(class, label) probabilities")
    p.add_argument("--photons", help="post-selected photon number(s) for mixed inputs")

    p = sub.add_parser("entropy", parents=[common], help="complementary Shannon entropy and its bound")
    p.add_argument("--state", required=True, help=BUILTIN_HELP)
    p.add_argument("-L", "--measurements", required=True, help="comma list, e.g. xi,l0,l1")

    for name, helptext in (("cmi", "complementary mutual information"), ("cmp", "complementary mutual predictability")):
        p = sub.add_parser(name, parents=[common], help=f"{helptext} and its separable bound")
        _pair_args(p)

    p = sub.add_parser("sweep", parents=[common], help="CMI/CMP along a noise or phase parameter")
    p.add_argument("kind", choices=("noise", "phase"))
    _pair_args(p)
    p.add_argument("--grid", default="0:1:0.01", help="start:stop:step (inclusive)")

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--only", help=f"comma list from {','.join(SUITES)}")
    return parser


def _pair_args(p):
    p.add_argument("--state", required=True, help=BUILTIN_HELP)
    p.add_argument("--pairs", default="all", help="'all' or comma list like z:z,l0:l0")
    p.add_argument("--size", type=int, help="use only the first SIZE pairs of --pairs")
    p.add_argument("--targets", help="comma list of CMP target labels")
    p.add_argument("--target-state", help="state whose eigenphases fix CMP targets (default --state)")


# ---------------------------------------------------------------------------
# state and config resolution
# ---------------------------------------------------------------------------

def _occ(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",")) if "," in text else tuple(int(c) for c in text)


def resolve_state(spec: str):
    key = spec.strip()
    if key == "psi0":
        return build_psi0()
    if key == "phi32":
        return build_phi_3A2B()
    if key.startswith(("E:", "e:")):
        parts = key.split(":")
        if len(parts) != 4:
            raise UsageError(f"eigenstate spec {spec!r} should be E:<rep>:<j>:<m>")
        cls = pauli_class_of(_occ(parts[1]))
        return build_pauli_eigenstate(cls, int(parts[2]), int(parts[3])).to_state()
    path = Path(key)
    if not path.exists():
        raise UsageError(f"no built-in state or file named {spec!r} ({BUILTIN_HELP})")
    state, norm = lio.load_state(path)
    if abs(norm - 1) > 1e-9:
        print(f"note: input normalized by factor {1 / norm:.12g}", file=sys.stderr)
    return state


def _state_N(state):
    if isinstance(state, MixedState):
        return state.N
    return state.N


def _check_dims(args, state):
    if args.M is not None and args.M != state.M:
        raise UsageError(f"-M {args.M} does not match the state's {state.M} modes")
    N = _state_N(state)
    if isinstance(N, tuple):
        for flag, given, actual in (("-NA", args.NA, N[0]), ("-NB", args.NB, N[1])):
            if given is not None and given != actual:
                raise UsageError(f"{flag} {given} does not match the state's {actual} photons")
    elif args.N is not None and args.N != N:
        raise UsageError(f"-N {args.N} does not match the state's {N} photons")


def _sigma(args):
    return lio.load_sigma(args.sigma) if args.sigma else None


def _is_bipartite(state) -> bool:
    if isinstance(state, MixedState):
        return isinstance(state.components[0][1], BipartiteState)
    return isinstance(state, BipartiteState)


def _pair_config(args, state) -> SeparableConfig:
    if not _is_bipartite(state):
        raise UsageError("this command needs a two-party state (e.g. phi32)")
    M = state.M
    NA, NB = _state_N(state)
    if args.pairs == "all":
        first = "z:z" if np.gcd(NA, M) == 1 and np.gcd(NB, M) == 1 else "xi:xi"
        names = [first] + [f"l{j}:l{j}" for j in range(M)]
    else:
        names = [s for s in args.pairs.split(",") if s]
    if args.size is not None:
        if not 1 <= args.size <= len(names):
            raise UsageError(f"--size must lie in 1..{len(names)}")
        names = names[: args.size]
    cfg = SeparableConfig.parse(names, M, NA, NB, sigma=_sigma(args), override=args.force)
    return cfg


def _with_targets(args, state, cfg: SeparableConfig) -> SeparableConfig:
    if args.targets:
        return cfg.with_targets([int(t) for t in args.targets.split(",")])
    target = resolve_state(args.target_state) if args.target_state else state
    if isinstance(target, MixedState):
        raise UsageError("CMP targets cannot be extracted from a mixed state; pass --targets or --target-state")
    return cfg.with_targets(extract_targets(target, cfg))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _mark(flag: bool) -> str:
    return "✓" if flag else "✗"


def cmd_classes(args):
    if args.M is None or args.N is None:
        raise UsageError("classes needs -M and -N")
    if args.M < 2 or args.N < 1:
        raise UsageError("need M >= 2 and N >= 1")
    classes = pauli_classes(args.M, args.N)
    if not args.grid:
        if args.format == "csv":
            rows = [[c.name, c.dim, " ".join("".join(map(str, v)) for v in c.members)] for c in classes]
            return lio.dumps_csv(["class", "dim", "members"], rows), []
        return lio.dumps_json(class_listing(classes)), []

    pairs, grid = complementarity_grid(args.M, args.N)
    sector = {p: all(row[p] for _, row in grid) for p in pairs}
    notes = []
    for c, _ in grid:
        if c.dim == 1:
            notes.append(
                f"{c.name} has d=1: the gcd predicate holds vacuously in this class, "
                "but the sector verdict row requires every class and is unaffected"
            )
    header = ["class", "dim"] + [f"L{j}/L{l}" for j, l in pairs]
    if args.format == "csv":
        rows = [[c.name, c.dim] + [_mark(row[p]) for p in pairs] for c, row in grid]
        rows.append(["sector", ""] + [_mark(sector[p]) for p in pairs])
        return lio.dumps_csv(header, rows), notes
    doc = {
        "modes": args.M,
        "photons": args.N,
        "pairs": [list(p) for p in pairs],
        "rows": [
            {"class": c.name, "dim": c.dim, "complementary": [row[p] for p in pairs]} for c, row in grid
        ],
        "sector": [sector[p] for p in pairs],
        "notes": notes,
    }
    return lio.dumps_json(doc), notes


def cmd_eigenstate(args):
    cls = pauli_class_of(_occ(args.rep))
    if args.M is not None and args.M != cls.M:
        raise UsageError(f"-M {args.M} does not match the representative")
    state = build_pauli_eigenstate(cls, args.j, args.m).to_state()
    return lio.dumps_json(lio.state_to_json(state)), []


def cmd_measure(args):
    state = resolve_state(args.state)
    _check_dims(args, state)
    photons = None
    if args.photons:
        ph = [int(x) for x in args.photons.split(",")]
        photons = tuple(ph) if len(ph) > 1 else ph[0]
    if _is_bipartite(state):
        if not args.pair:
            raise UsageError("two-party states need --pair alpha:beta")
        a, _, b = args.pair.partition(":")
        b = b or a
        pair = (parse_config(a, state.M, _sigma(args)), parse_config(b, state.M, _sigma(args)))
        joint = joint_pauli_measurement(state, pair, photons)
        name = f"{pair[0].name}:{pair[1].name}"
        if args.format == "csv":
            return lio.dumps_csv(*lio.joint_rows(joint)), []
        return lio.dumps_json(lio.joint_doc(joint, name, state)), []
    if not args.measurement:
        raise UsageError("single-party states need -L <measurement>")
    cfg = parse_config(args.measurement, state.M, _sigma(args))
    dist = measure(state, cfg, photons, breakdown=args.breakdown)
    if args.format == "csv":
        return lio.dumps_csv(*lio.distribution_rows(dist)), []
    return lio.dumps_json(lio.distribution_doc(dist, cfg.name)), []


def _report_out(args, doc: dict):
    if args.format == "csv":
        keys = [k for k in doc if k != "weights"]
        return lio.dumps_csv(keys, [[doc[k] for k in keys]])
    return lio.dumps_json(doc)


def cmd_entropy(args):
    state = resolve_state(args.state)
    _check_dims(args, state)
    if _is_bipartite(state):
        raise UsageError("entropy takes a single-party state")
    names = [s for s in args.measurements.split(",") if s]
    cfg = ComplementaryConfig.parse(names, state.M, _state_N(state), _sigma(args), args.force)
    report = entropy_report(state, cfg, args.log_base)
    doc = {"measurements": cfg.names, **report.to_dict()}
    doc["verdict"] = "satisfied" if report.satisfied else "violated"
    return _report_out(args, doc), []


def cmd_cmi(args):
    state = resolve_state(args.state)
    _check_dims(args, state)
    cfg = _pair_config(args, state)
    doc = {"pairs": cfg.names, **cmi_report(state, cfg, args.log_base).to_dict()}
    return _report_out(args, doc), []


def cmd_cmp(args):
    state = resolve_state(args.state)
    _check_dims(args, state)
    cfg = _with_targets(args, state, _pair_config(args, state))
    doc = {"pairs": cfg.names, "targets": list(cfg.targets), **cmp_report(state, cfg).to_dict()}
    return _report_out(args, doc), []


def parse_grid(text: str) -> np.ndarray:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"grid {text!r} should be start:stop:step") from exc
    if step <= 0 or stop < start:
        raise UsageError("grid needs step > 0 and stop >= start")
    count = int(round((stop - start) / step)) + 1
    return np.round(start + step * np.arange(count), 12)


def cmd_sweep(args):
    state = resolve_state(args.state)
    _check_dims(args, state)
    if isinstance(state, MixedState):
        raise UsageError("sweeps start from a pure two-party state")
    cfg = _with_targets(args, state, _pair_config(args, state))
    rows = sweep(args.kind, cfg, parse_grid(args.grid), target=state, base=args.log_base)
    notes = []
    if args.kind == "noise":
        for which in ("cmi", "cmp"):
            eps = first_crossing(rows, which)
            notes.append(f"{which} first meets its separable bound at eps = {eps}")
    table = [[getattr(r, f) for f in SWEEP_FIELDS] for r in rows]
    if args.format == "csv":
        return lio.dumps_csv(SWEEP_FIELDS, table), notes
    doc = {"kind": args.kind, "pairs": cfg.names, "targets": list(cfg.targets),
           "rows": [dict(zip(SWEEP_FIELDS, t)) for t in table], "notes": notes}
    return lio.dumps_json(doc), notes


def cmd_verify(args):
    only = [s for s in args.only.split(",") if s] if args.only else None
    try:
        results = run_suites(only)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    if args.format == "csv":
        text = lio.dumps_csv(["suite", "passed", "detail"], [[r.name, r.passed, r.detail] for r in results])
    else:
        text = lio.dumps_json([{"suite": r.name, "passed": r.passed, "detail": r.detail} for r in results])
    failed = [r.name for r in results if not r.passed]
    return text, ([f"failed: {', '.join(failed)}"] if failed else []), (EXIT_SUITE if failed else EXIT_OK)


COMMANDS = {
    "classes": cmd_classes,
    "eigenstate": cmd_eigenstate,
    "measure": cmd_measure,
    "entropy": cmd_entropy,
    "cmi": cmd_cmi,
    "cmp": cmd_cmp,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INVALID
    text, notes, code = (*result, EXIT_OK) if len(result) == 2 else result
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for n in notes:
        print(f"note: {n}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
