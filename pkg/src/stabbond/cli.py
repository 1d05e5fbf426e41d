"""Command-line driver.

Sessions are JSON files holding the initial state, the current state and a
log of applied operations. Qubits are addressed by their 1-based labels,
which survive the removal of measured qubits.

Exit codes: 0 success, 1 "not isomorphic" from ``iso``, 2 budget exceeded
in ``iso``, 3 usage or parse error, 4 contradicted measurement outcome,
5 budget exceeded elsewhere, 6 file error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import bonds as bondmod
from . import catalog, dynamics
from .config import BudgetExceeded
from .group import GroupError, StabilizerState, column_census, from_generators
from .isomorphism import compact_isomorphic, multigraph_isomorphic
from .pauli import PauliError

EXIT_OK = 0
EXIT_NOT_ISO = 1
EXIT_ISO_BUDGET = 2
EXIT_USAGE = 3
EXIT_CONTRADICTED = 4
EXIT_BUDGET = 5
EXIT_FILE = 6

DEFAULT_SESSION = "stabbond-session.json"


class CliError(Exception):
    def __init__(self, code: str, message: str, status: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", f"{self.prog}: {message}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- sessions ---------------------------------------------------------------


def _replay(initial: StabilizerState, log: list[dict]) -> StabilizerState:
    state = initial
    for op in log:
        kind = op.get("op")
        if kind == "cz":
            state = dynamics.apply_cz(state, state.index_of(op["a"]), state.index_of(op["b"]))
        elif kind == "local":
            state = dynamics.apply_local_clifford(state, state.index_of(op["qubit"]), op["gate"])
        elif kind == "measure":
            state, _ = dynamics.measure(
                state, state.index_of(op["qubit"]), op["basis"], outcome=op["outcome"]
            )
        else:
            raise CliError("bad_session", f"unknown logged operation {kind!r}")
    return state


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise CliError("file_not_found", f"no such file: {path}", EXIT_FILE) from None
    except json.JSONDecodeError as exc:
        raise CliError("bad_json", f"{path}: {exc}") from None


def load_session(path: str) -> tuple[StabilizerState, StabilizerState, list[dict]]:
    data = _read_json(path)
    try:
        initial = StabilizerState.from_json(data["initial"])
        state = StabilizerState.from_json(data["state"])
        log = list(data.get("log", []))
    except (KeyError, TypeError) as exc:
        raise CliError("bad_session", f"{path}: missing field {exc}") from None
    if _replay(initial, log) != state:
        raise CliError("bad_session", f"{path}: replaying the log does not give the stored state")
    return initial, state, log


def save_session(path: str, initial: StabilizerState, state: StabilizerState, log) -> None:
    data = {"initial": initial.to_json(), "state": state.to_json(), "log": list(log)}
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _summary(state: StabilizerState) -> dict:
    return {
        "n": state.n,
        "m": state.m,
        "labels": list(state.labels),
        "elements": state.size - 1,
        "partition": [list(b) for b in bondmod.entangled_partition(state).blocks],
    }


# -- commands ---------------------------------------------------------------


def _build_state(args) -> StabilizerState:
    if args.named:
        name = args.named[0]
        n = int(args.named[1]) if len(args.named) > 1 else None
        return catalog.named_state(name, n)
    if args.graph:
        spec = catalog.GraphSpec.from_json(_read_json(args.graph))
        return catalog.graph_state(spec)
    if args.state:
        return StabilizerState.from_json(_read_json(args.state))
    if args.fixture:
        try:
            return catalog.load_fixture(args.fixture).pre_state()
        except KeyError:
            raise CliError("unknown_fixture", f"unknown fixture {args.fixture!r}") from None
    if args.generators:
        return from_generators([g for g in args.generators.split(",") if g])
    raise CliError("usage", "build needs --named, --graph, --state, --fixture or --generators")


def cmd_build(args) -> int:
    state = _build_state(args)
    save_session(args.session, state, state, [])
    _emit(_summary(state))
    return EXIT_OK


def cmd_export(args) -> int:
    _, state, _ = load_session(args.session)
    _emit(state.to_json(), args.out)
    return EXIT_OK


def cmd_show(args) -> int:
    _, state, log = load_session(args.session)
    report = _summary(state)
    report["log"] = log
    report["generators"] = [str(g) for g in state.generators]
    if args.elements:
        report["group"] = [str(e) for e in state.elements()]
        report["census"] = {
            str(state.labels[k]): column_census(state, k).as_dict() for k in range(state.n)
        }
    _emit(report)
    return EXIT_OK


def cmd_apply_cz(args) -> int:
    initial, state, log = load_session(args.session)
    state = dynamics.apply_cz(state, state.index_of(args.a), state.index_of(args.b))
    log.append({"op": "cz", "a": args.a, "b": args.b})
    save_session(args.session, initial, state, log)
    _emit(_summary(state))
    return EXIT_OK


def cmd_apply_local(args) -> int:
    initial, state, log = load_session(args.session)
    state = dynamics.apply_local_clifford(state, state.index_of(args.k), args.gate)
    log.append({"op": "local", "qubit": args.k, "gate": args.gate})
    save_session(args.session, initial, state, log)
    _emit(_summary(state))
    return EXIT_OK


def cmd_measure(args) -> int:
    initial, state, log = load_session(args.session)
    outcome = "sample" if args.outcome is None else args.outcome
    post, rec = dynamics.measure(
        state, state.index_of(args.k), args.basis, outcome, random.Random(args.seed)
    )
    log.append({"op": "measure", "qubit": args.k, "basis": args.basis, "outcome": rec.outcome})
    save_session(args.session, initial, post, log)
    report = rec.to_json()
    report.update(_summary(post))
    _emit(report)
    return EXIT_OK


def cmd_analyze(args) -> int:
    _, state, _ = load_session(args.session)
    what = args.what
    dot = None
    if what == "bonds":
        g = bondmod.bonds(state)
        report = g.to_json()
        report["bond_count"] = len(g.edges)
        dot = bondmod.to_dot(g)
    elif what == "compact":
        c = bondmod.compact(bondmod.bonds(state))
        report = c.to_json()
        dot = bondmod.compact_to_dot(c)
    elif what == "partition":
        report = bondmod.entangled_partition(state).to_json()
    elif what == "core":
        if not args.about:
            raise CliError("usage", "analyze core needs --about LABEL [LABEL ...]")
        report = bondmod.core_group(state, args.about).to_json()
    else:
        report = {"persistency": bondmod.pauli_persistency(state)}
    _emit(report, args.out)
    if args.dot:
        if dot is None:
            raise CliError("usage", f"--dot is only available for bonds and compact, not {what}")
        Path(args.dot).write_text(dot)
    return EXIT_OK


def cmd_iso(args) -> int:
    _, s1, _ = load_session(args.first)
    _, s2, _ = load_session(args.second)
    g1, g2 = bondmod.bonds(s1), bondmod.bonds(s2)
    try:
        if args.compact:
            found = compact_isomorphic(bondmod.compact(g1), bondmod.compact(g2))
            report = {"isomorphic": found is not None}
            if found is not None:
                report["vertex_map"] = {str(k): v for k, v in sorted(found.items())}
        else:
            iso = multigraph_isomorphic(g1, g2)
            report = {"isomorphic": iso is not None}
            if iso is not None:
                report["vertex_map"] = {str(k): v for k, v in sorted(iso.vertex_map.items())}
                report["color_map"] = {
                    g1.signed_colors[k]: g2.signed_colors[v] for k, v in sorted(iso.color_map.items())
                }
    except BudgetExceeded as exc:
        _error("budget_exceeded", str(exc))
        return EXIT_ISO_BUDGET
    _emit(report)
    return EXIT_OK if report["isomorphic"] else EXIT_NOT_ISO


def cmd_classify(args) -> int:
    result = catalog.classify_bond_structures(
        args.n, workers=args.workers, compact_only=args.compact
    )
    summary = result.to_json()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for k, cls in enumerate(result.classes, start=1):
            (out / f"class{k}.dot").write_text(bondmod.to_dot(cls.multigraph, f"class{k}"))
        (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    _emit({"n": args.n, "class_count": summary["class_count"],
           "class_sizes": [len(c.members) for c in result.classes],
           "budget_failures": summary["budget_failures"]})
    return EXIT_BUDGET if result.budget_failures else EXIT_OK


# -- parser -----------------------------------------------------------------


def _outcome(text: str) -> int:
    if text in ("1", "+1"):
        return 1
    if text == "-1":
        return -1
    raise argparse.ArgumentTypeError(f"outcome must be +1 or -1, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stabbond", description=__doc__.splitlines()[0])
    p.add_argument("--session", "-s", default=DEFAULT_SESSION, help="session JSON file")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="start a session")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--named", nargs="+", metavar=("NAME", "N"))
    src.add_argument("--graph", metavar="FILE", help='graph JSON {"n": .., "edges": [[a, b], ..]}')
    src.add_argument("--state", metavar="FILE", help="state JSON as written by export")
    src.add_argument("--fixture", metavar="ID")
    src.add_argument(
        "--generators", metavar="P,Q,..", help="comma-separated Paulis; write --generators=-ZI,IZ"
    )
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("export", help="write the current state JSON")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)

    sh = sub.add_parser("show", help="summarize the session")
    sh.add_argument("--elements", action="store_true", help="include the full group and census")
    sh.set_defaults(func=cmd_show)

    cz = sub.add_parser("apply-cz", help="apply CZ between two qubits")
    cz.add_argument("a", type=int)
    cz.add_argument("b", type=int)
    cz.set_defaults(func=cmd_apply_cz)

    lc = sub.add_parser("apply-local", help="apply a local Clifford word such as H or HS")
    lc.add_argument("k", type=int)
    lc.add_argument("gate")
    lc.set_defaults(func=cmd_apply_local)

    m = sub.add_parser("measure", help="measure a qubit in the Z, X or Y basis")
    m.add_argument("k", type=int)
    m.add_argument("basis")
    how = m.add_mutually_exclusive_group()
    how.add_argument("--outcome", type=_outcome)
    how.add_argument("--sample", action="store_true", help="draw a random outcome (default)")
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=cmd_measure)

    a = sub.add_parser("analyze", help="bond, partition, core and persistency reports")
    a.add_argument("what", choices=("bonds", "compact", "partition", "core", "persistency"))
    a.add_argument("--about", type=int, nargs="+")
    a.add_argument("--out")
    a.add_argument("--dot")
    a.set_defaults(func=cmd_analyze)

    i = sub.add_parser("iso", help="compare the bond structures of two sessions")
    i.add_argument("first")
    i.add_argument("second")
    i.add_argument("--compact", action="store_true")
    i.set_defaults(func=cmd_iso)

    c = sub.add_parser("classify", help="bucket connected graph states by bond structure")
    c.add_argument("n", type=int)
    c.add_argument("--out")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--compact", action="store_true")
    c.set_defaults(func=cmd_classify)
    return p


def _error(code: str, message: str) -> None:
    sys.stderr.write(_dumps({"error": code, "message": message}) + "\n")


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        _error(exc.code, str(exc))
        return exc.status
    except dynamics.ContradictedOutcome as exc:
        _error(exc.code, str(exc))
        return EXIT_CONTRADICTED
    except dynamics.MeasurementError as exc:
        _error(exc.code, str(exc))
        return EXIT_USAGE
    except BudgetExceeded as exc:
        _error("budget_exceeded", str(exc))
        return EXIT_BUDGET
    except bondmod.PartitionError as exc:
        _error("partition", str(exc))
        return EXIT_USAGE
    except (GroupError, PauliError) as exc:
        _error("invalid_state", str(exc))
        return EXIT_USAGE
    except OSError as exc:
        _error("file_error", str(exc))
        return EXIT_FILE
    except ValueError as exc:
        # e.g. a non-integer STABBOND_BUDGET
        _error("invalid_value", str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
