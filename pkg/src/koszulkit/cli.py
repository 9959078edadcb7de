"""``koszulkit`` command line.

Exit codes: 0 on success, 1 on domain errors (the error class is printed on
standard error), 2 on unreadable input (bad JSON, schema or word syntax).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import quadalg
from .cocycle import cyclotomic_obstruction
from .errors import KoszulkitError, SpecFormatError, WordSyntaxError
from .koszul import euler_check, is_koszul_up_to
from .ncpoly import initial_form, magnus_expand, parse_word
from .progroup import (GroupPresentation, cohomology_ring, gr_algebra, group_spec_from_json,
                       invariants, presentation_of, verify_koszul_duality, zassenhaus_dims)

DEFAULT_CAP = 6
DEFAULT_PRECISION = 8
DEFAULT_BOUND = 4
# A large prime, so that small Magnus coefficients print as plain integers.
DEFAULT_MAGNUS_PRIME = 2_147_483_647

FAMILIES = {
    "tensor": quadalg.tensor_algebra,
    "dual_numbers": quadalg.dual_numbers,
    "symmetric": quadalg.symmetric,
    "polynomial": quadalg.polynomial,
    "exterior": quadalg.exterior,
    "demushkin_dual": quadalg.demushkin_dual,
}

GROUP_ACTIONS = ("presentation", "cohomology", "gr", "invariants", "zassenhaus", "verify-duality")


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise SpecFormatError(f"{path}: {exc.strerror}") from exc


def load_algebra(data: Any) -> quadalg.QuadraticPresentation:
    """Explicit ``{"p", "generators", "relations"}`` or ``{"p", "family", "d"}``."""
    if not isinstance(data, dict) or "p" not in data:
        raise SpecFormatError("an algebra file must be an object with key 'p'")
    try:
        if "family" in data:
            family = FAMILIES.get(data["family"])
            if family is None:
                raise SpecFormatError(f"unknown algebra family {data['family']!r}")
            return family(int(data["d"]), int(data["p"]))
        return quadalg.QuadraticPresentation.from_json(data)
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"malformed algebra file: missing or bad {exc}") from exc


def _algebra_output(A: quadalg.QuadraticPresentation, N: int) -> dict:
    out = A.to_json()
    out["dims"] = list(quadalg.hilbert(A, N))
    return out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_hilbert(args) -> dict:
    A = load_algebra(_read_json(args.file))
    return {"dims": list(quadalg.hilbert(A, args.cap))}


def cmd_dual(args) -> dict:
    return quadalg.koszul_dual(load_algebra(_read_json(args.file))).to_json()


def cmd_koszul(args) -> dict:
    A = load_algebra(_read_json(args.file))
    report = is_koszul_up_to(A, args.bound)
    out = report.to_json()
    out["euler"] = {str(j): list(v) for j, v in euler_check(report.tor).items()}
    return out


def cmd_group(args) -> dict:
    spec = group_spec_from_json(_read_json(args.file))
    action, N = args.action, args.cap
    if action == "presentation":
        return presentation_of(spec).to_json()
    if action == "cohomology":
        return _algebra_output(cohomology_ring(spec), N)
    if action == "gr":
        return _algebra_output(gr_algebra(spec), N)
    if action == "invariants":
        return invariants(spec).to_json()
    if action == "zassenhaus":
        return {"dims": list(zassenhaus_dims(spec, N))}
    return verify_koszul_duality(spec, N).to_json()


def cmd_obstruction(args) -> dict:
    data = _read_json(args.file)
    if isinstance(data, dict) and "relations" in data:
        pres = GroupPresentation.from_json(data)
    else:
        pres = presentation_of(group_spec_from_json(data))
    return cyclotomic_obstruction(pres, args.precision).to_json()


def cmd_magnus(args) -> dict:
    w = parse_word(args.word)
    d = args.d
    m = magnus_expand(w, d, args.p, args.cap)
    init = initial_form(w, d, args.p, args.cap)
    out = m.to_json()
    out["text"] = str(m)
    out["initial_form"] = None if init is None else {"degree": init[0],
                                                     "vector": list(init[1].vector)}
    return out


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _render_table(command: str, result: dict, args) -> str:
    if command == "magnus":
        return result["text"]
    if command == "koszul":
        from .koszul import TorTable
        grid = result["tor"]
        dims = {(i, j): v for i, row in enumerate(grid) for j, v in enumerate(row)}
        lines = [TorTable(result["bound"], result["bound"], dims).render(),
                 f"koszul up to: {result['koszul_up_to']}",
                 f"witness: {result['witness']}",
                 f"hilbert defect: {result['hilbert_defect']}"]
        return "\n".join(lines)
    if command == "obstruction":
        cols = result["columns"]
        lines = [f"status: {result['status']} (mod {result['p']}^{result['precision']})"]
        for k, c in enumerate(cols):
            lines.append(f"r{k + 1} = {c}")
        lines.append("      " + "".join(f"{f'r{k + 1}':>10}" for k in range(len(cols))))
        for row, entries in zip(result["rows"], result["entries"]):
            lines.append(f"{row:<6}" + "".join(f"{v[0]:>10}" for v in entries))
        return "\n".join(lines)
    return "\n".join(f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in result.items())


COMMANDS = {
    "hilbert": cmd_hilbert,
    "dual": cmd_dual,
    "koszul": cmd_koszul,
    "group": cmd_group,
    "obstruction": cmd_obstruction,
    "magnus": cmd_magnus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help=f"degree cap N (default {DEFAULT_CAP})")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                        help=f"p-adic precision M (default {DEFAULT_PRECISION})")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                        help=f"bar complex bound (default {DEFAULT_BOUND})")
    common.add_argument("--format", choices=("json", "table"), default=None,
                        help="output format (default json; text for magnus)")

    parser = argparse.ArgumentParser(prog="koszulkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("hilbert", "dual", "koszul", "obstruction"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file")
    sp = sub.add_parser("group", parents=[common])
    sp.add_argument("file")
    sp.add_argument("action", choices=GROUP_ACTIONS)
    sp = sub.add_parser("magnus", parents=[common])
    sp.add_argument("word")
    sp.add_argument("--d", type=int, required=True, help="alphabet size")
    sp.add_argument("--p", type=int, default=DEFAULT_MAGNUS_PRIME,
                    help="coefficient prime (default 2^31 - 1)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision < 2:
        parser.error("--precision must be at least 2")
    if args.cap < (2 if args.command == "group" else 0):
        parser.error("--cap must be at least 2 for group commands")
    if args.bound < 1:
        parser.error("--bound must be positive")
    try:
        result = COMMANDS[args.command](args)
    except KoszulkitError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (SpecFormatError, WordSyntaxError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    fmt = args.format or ("table" if args.command == "magnus" else "json")
    if fmt == "json":
        print(json.dumps(result, sort_keys=True))
    else:
        print(_render_table(args.command, result, args))
    return 0


if __name__ == "__main__":
    sys.exit(main())
