"""Command-line front end.

Exit codes: 0 success, 1 invalid matrix (or a certificate that fails to
verify), 2 I/O, parse or budget failure, 3 no torsion witness found within
the search budgets.  Exit 3 is inconclusive; it never claims the group is
torsion-free.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .automata import (
    DEFAULT_POWER_BUDGET,
    automaton_to_dot,
    automaton_to_json,
    build_a_automaton,
    build_b_automaton,
    build_helix,
    check_bireversible,
    helix_to_dot,
    label_str,
)
from .certify import GAMMA, G, export_presentation, format_word
from .io import MatrixParseError, format_matrix_text, matrix_to_json, parse_matrix, read_matrix
from .matrix import (
    BudgetExceeded,
    PairingError,
    PairingMatrix,
    canonical_form,
    cell_budget,
    enumerate_pairings,
    is_invertible_pairing,
    validate_pairing,
)
from .torsion import (
    TorsionError,
    TorsionWitness,
    find_dual_letter_cycles,
    find_letter_cycles,
    find_word_cycles,
    theorem4_witness,
    verify_witness,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INPUT = 2
EXIT_NOT_FOUND = 3

COMMANDS = ("validate", "torsion", "enumerate", "automaton", "helix", "canon", "certify", "export")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None = None
    output_format: str = "text"
    rows: int | None = None
    cols: int | None = None
    invertible_only: bool = False
    with_torsion: bool = False
    max_input_len: int = 2
    max_state_len: int = 2
    kind: str = "A"
    group: str = "gamma"
    witness_path: str | None = None
    cell_budget: int = field(default_factory=cell_budget)
    power_budget: int = DEFAULT_POWER_BUDGET

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("max_input_len", "max_state_len", "cell_budget", "power_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


class InputFailure(Exception):
    """I/O or parse failure; maps to exit 2."""


def _dump(obj: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **obj}, indent=2) + "\n"


def _read_text(path: str | None) -> str:
    try:
        if path is None or path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputFailure(f"cannot read {path}: {exc.strerror}") from None


def _raw_matrix(cfg: RunConfig) -> list[list[int]]:
    try:
        if cfg.input_path is None or cfg.input_path == "-":
            return parse_matrix(sys.stdin.read())
        return read_matrix(cfg.input_path)
    except OSError as exc:
        raise InputFailure(f"cannot read {cfg.input_path}: {exc.strerror}") from None
    except MatrixParseError as exc:
        raise InputFailure(f"parse error: {exc}") from None


def _matrix(cfg: RunConfig) -> PairingMatrix:
    """Parsed and validated input; ``PairingError`` propagates (exit 1)."""
    return validate_pairing(_raw_matrix(cfg))


def compact(C: PairingMatrix) -> str:
    return str(C)


# --- torsion search --------------------------------------------------------

def torsion_search(C: PairingMatrix, cfg: RunConfig) -> dict:
    """Run every search in a fixed order and keep only re-verified witnesses.

    A search that is not applicable or runs out of budget is reported with
    its status and does not stop the others.
    """
    A = build_a_automaton(C)
    searches, witnesses = [], []

    def run(name, fn):
        try:
            found = fn()
        except BudgetExceeded as exc:
            searches.append({"search": name, "status": "budget_exceeded", "detail": str(exc), "found": 0})
            return
        except (TorsionError, PairingError, ValueError) as exc:
            searches.append({"search": name, "status": "skipped", "detail": str(exc) or type(exc).__name__, "found": 0})
            return
        kept = [w for w in found if verify_witness(C, w)]
        rejected = len(found) - len(kept)
        entry = {"search": name, "status": "ok", "found": len(kept)}
        if rejected:
            entry["rejected"] = rejected
        searches.append(entry)
        witnesses.extend(kept)

    run("letter_cycles", lambda: find_letter_cycles(A))
    run("dual_letter_cycles", lambda: find_dual_letter_cycles(A))
    run("word_cycles", lambda: find_word_cycles(A, cfg.max_input_len, cfg.max_state_len, cfg.power_budget))
    if C.n_rows == 3 and is_invertible_pairing(C):
        run("theorem4", lambda: [theorem4_witness(C)])
    else:
        searches.append({"search": "theorem4", "status": "skipped", "detail": "needs a 3-row invertible pairing", "found": 0})
    return {"searches": searches, "witnesses": witnesses}


def _witness_line(w: TorsionWitness) -> str:
    flag = "nontrivial" if w.nontrivial_guaranteed else "unproven-nontrivial"
    return f"{w.provenance} ({format_word(w.word)})^{w.exponent} {flag}"


def torsion_summary(result: dict) -> str:
    ws = result["witnesses"]
    if not ws:
        return "torsion: none found"
    best = next((w for w in ws if w.nontrivial_guaranteed), ws[0])
    return f"torsion: {len(ws)} witnesses; {_witness_line(best)}"


def cmd_torsion(cfg: RunConfig, out) -> int:
    C = _matrix(cfg)
    result = torsion_search(C, cfg)
    if cfg.output_format == "json":
        out.write(_dump({
            "matrix": matrix_to_json(C),
            "searches": result["searches"],
            "witnesses": [w.to_json() for w in result["witnesses"]],
        }))
    else:
        for s in result["searches"]:
            line = f"search {s['search']}: {s['status']}, {s['found']} found"
            if "detail" in s:
                line += f" ({s['detail']})"
            out.write(line + "\n")
        for w in result["witnesses"]:
            out.write(f"witness {_witness_line(w)}\n")
        if not result["witnesses"]:
            out.write("no witness found within the search budgets (inconclusive)\n")
    return EXIT_OK if result["witnesses"] else EXIT_NOT_FOUND


# --- other commands --------------------------------------------------------

def cmd_validate(cfg: RunConfig, out) -> int:
    raw = _raw_matrix(cfg)
    try:
        C = validate_pairing(raw)
    except PairingError as exc:
        if cfg.output_format == "json":
            out.write(_dump({"valid": False, "error": str(exc)}))
        else:
            out.write(f"valid: false\nerror: {exc}\n")
        return EXIT_INVALID
    report = {
        "valid": True,
        "rows": C.n_rows,
        "cols": C.n_cols,
        "invertible": is_invertible_pairing(C),
        "bireversible": check_bireversible(build_a_automaton(C)),
    }
    if cfg.output_format == "json":
        out.write(_dump(report))
    else:
        out.write(f"valid: true\nshape: {C.n_rows}x{C.n_cols}\n")
        out.write(f"invertible: {str(report['invertible']).lower()}\n")
        out.write(f"bireversible: {str(report['bireversible']).lower()}\n")
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig, out) -> int:
    if cfg.rows is None or cfg.cols is None:
        raise InputFailure("enumerate needs --rows and --cols")
    n, m = cfg.rows, cfg.cols
    if n < 1 or m < 1:
        raise InputFailure("--rows and --cols must be positive")
    if n * m > cfg.cell_budget:
        raise InputFailure(f"{n}x{m} = {n * m} cells exceeds the cell budget {cfg.cell_budget}")
    # Odd cell counts admit no pairing, so the stream is simply empty.
    stream = enumerate_pairings(n, m, cfg.invertible_only, cfg.cell_budget) if (n * m) % 2 == 0 else iter(())
    if cfg.output_format == "json":
        items = []
        for C in stream:
            item = {"entries": C.tolist()}
            if cfg.with_torsion:
                res = torsion_search(C, cfg)
                item["torsion"] = {
                    "searches": res["searches"],
                    "witnesses": [w.to_json() for w in res["witnesses"]],
                }
            items.append(item)
        out.write(_dump({"rows": n, "cols": m, "invertible_only": cfg.invertible_only, "matrices": items}))
        return EXIT_OK
    for C in stream:
        line = compact(C)
        if cfg.with_torsion:
            line += " | " + torsion_summary(torsion_search(C, cfg))
        out.write(line + "\n")
        out.flush()
    return EXIT_OK


def cmd_automaton(cfg: RunConfig, out) -> int:
    C = _matrix(cfg)
    A = build_a_automaton(C) if cfg.kind == "A" else build_b_automaton(C)
    name = f"{cfg.kind}_C"
    if cfg.output_format == "dot":
        out.write(automaton_to_dot(A, name))
    elif cfg.output_format == "json":
        out.write(_dump({"kind": cfg.kind, **automaton_to_json(A)}))
    else:
        for arrow in A.arrows():
            out.write(f"{arrow}\n")
    return EXIT_OK


def cmd_helix(cfg: RunConfig, out) -> int:
    C = _matrix(cfg)
    H = build_helix(build_a_automaton(C))

    def vtx(v):
        return f"({label_str(v[0])},{label_str(v[1])})"

    if cfg.output_format == "json":
        out.write(_dump({
            "edges": [[vtx(v), vtx(w)] for v, w in H.edges()],
            "cycles": [[vtx(v) for v in cyc] for cyc in H.cycles()],
        }))
    elif cfg.output_format == "dot":
        out.write(helix_to_dot(H))
    else:
        for cyc in H.cycles():
            out.write(" -> ".join(vtx(v) for v in cyc) + "\n")
    return EXIT_OK


def cmd_canon(cfg: RunConfig, out) -> int:
    K = canonical_form(_matrix(cfg))
    if cfg.output_format == "json":
        out.write(_dump(matrix_to_json(K)))
    else:
        out.write(format_matrix_text(K))
    return EXIT_OK


def _load_witnesses(path: str | None) -> list[TorsionWitness]:
    if path is None:
        raise InputFailure("certify needs --witness PATH")
    try:
        data = json.loads(_read_text(path))
        if isinstance(data, dict) and "witnesses" in data:
            items = data["witnesses"]
        elif isinstance(data, list):
            items = data
        else:
            items = [data]
        return [TorsionWitness.from_json(item) for item in items]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputFailure(f"bad witness file: {exc}") from None


def cmd_certify(cfg: RunConfig, out) -> int:
    C = _matrix(cfg)
    witnesses = _load_witnesses(cfg.witness_path)
    results = []
    for w in witnesses:
        try:
            ok = verify_witness(C, w)
        except ValueError:
            ok = False
        results.append((w, ok))
    if cfg.output_format == "json":
        out.write(_dump({"results": [
            {"word": list(w.word), "exponent": w.exponent, "verified": ok} for w, ok in results
        ]}))
    else:
        for w, ok in results:
            out.write(f"{'verified' if ok else 'REJECTED'} ({format_word(w.word)})^{w.exponent}\n")
    return EXIT_OK if results and all(ok for _, ok in results) else EXIT_INVALID


def cmd_export(cfg: RunConfig, out) -> int:
    C = _matrix(cfg)
    kind = GAMMA if cfg.group == "gamma" else G
    if cfg.output_format == "json":
        out.write(export_presentation(C, kind, "json"))
    else:
        out.write(export_presentation(C, kind, "cas"))
    return EXIT_OK


HANDLERS = {
    "validate": cmd_validate,
    "torsion": cmd_torsion,
    "enumerate": cmd_enumerate,
    "automaton": cmd_automaton,
    "helix": cmd_helix,
    "canon": cmd_canon,
    "certify": cmd_certify,
    "export": cmd_export,
}


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairing-automata",
        description="Pairing matrices, their automata and certified torsion in the associated groups.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", metavar="PATH", help="matrix file (text or JSON); '-' or omitted reads stdin")
    parser.add_argument("--format", choices=("text", "json", "dot"), default="text")
    parser.add_argument("--rows", type=int, metavar="N")
    parser.add_argument("--cols", type=int, metavar="M")
    parser.add_argument("--invertible-only", action="store_true")
    parser.add_argument("--with-torsion", action="store_true")
    parser.add_argument("--max-input-len", type=_positive, default=2, metavar="L")
    parser.add_argument("--max-state-len", type=_positive, default=2, metavar="K")
    parser.add_argument("--kind", choices=("A", "B"), default="A")
    parser.add_argument("--group", choices=("gamma", "g"), default="gamma")
    parser.add_argument("--witness", metavar="PATH", help="witness JSON for the certify command")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=args.input,
        output_format=args.format,
        rows=args.rows,
        cols=args.cols,
        invertible_only=args.invertible_only,
        with_torsion=args.with_torsion,
        max_input_len=args.max_input_len,
        max_state_len=args.max_state_len,
        kind=args.kind,
        group=args.group,
        witness_path=args.witness,
    )


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        return HANDLERS[cfg.command](cfg, out)
    except InputFailure as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except PairingError as exc:
        err.write(f"invalid matrix: {exc}\n")
        return EXIT_INVALID


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
