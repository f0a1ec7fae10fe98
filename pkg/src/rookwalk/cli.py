"""Command-line entry point: ``rookwalk {count,verify,enumerate,trace}``.

Exit status is 0 when every requested check passes, 1 when a check fails and
2 for bad input.  By default every report is one JSON object per line.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import maps
from .signed import LEFT, Sijection, TaggedElement, swap_images, trace_element, verify_sijection
from .walks import WalkParseError, brute_count_2d, enum_walks_2d, format_walk, parse_walk, stanley_count

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

COMMANDS = ("count", "verify", "enumerate", "trace")
METHODS = ("formula", "brute", "both")
TARGETS = ("lemma6", "lemma7", "corollary", "lemma9", "grand", "all", "corrupted")
DEFAULT_MAX_CARRIER = 10**7


class InputError(Exception):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class RunConfig:
    command: str
    m: int | None = None
    n: int | None = None
    k: int | None = None
    method: str = "formula"
    target: str = "all"
    walk: str | None = None
    output: str = "json"
    max_carrier: int = DEFAULT_MAX_CARRIER
    a: int = 1
    b: int = 1

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise InputError(f"{self.command} needs --{name}")
        for name in ("m", "n"):
            v = getattr(self, name)
            if name in names and v < 2:
                raise InputError(f"--{name} must be at least 2, got {v}")
        if "k" in names and self.k < 0:
            raise InputError(f"--k must be nonnegative, got {self.k}")


def jsonable(x):
    if isinstance(x, TaggedElement):
        return {"side": x.side, "value": jsonable(x.element.value), "sign": x.element.sign}
    if isinstance(x, (tuple, list)):
        return [jsonable(v) for v in x]
    return x


class Emitter:
    def __init__(self, output, stream=None):
        self.output = output
        self.stream = stream or sys.stdout

    def emit(self, record: dict, text: str):
        line = json.dumps(record) if self.output == "json" else text
        # one write per record keeps lines whole
        self.stream.write(line + "\n")
        self.stream.flush()


# --------------------------------------------------------------------------


def cmd_count(cfg: RunConfig, out: Emitter) -> int:
    cfg.require("m", "n", "k")
    record = {"m": cfg.m, "n": cfg.n, "k": cfg.k}
    if cfg.method in ("formula", "both"):
        record["formula_count"] = stanley_count(cfg.m, cfg.n, cfg.k)
    if cfg.method in ("brute", "both"):
        record["brute_count"] = brute_count_2d(cfg.m, cfg.n, cfg.k)
    status = EXIT_OK
    if cfg.method == "both":
        record["agree"] = record["formula_count"] == record["brute_count"]
        status = EXIT_OK if record["agree"] else EXIT_FAIL
    text = " ".join(f"{key}={val}" for key, val in record.items())
    out.emit(record, text)
    return status


def _targets(cfg: RunConfig) -> list[Sijection]:
    t = cfg.target
    needs = {
        "lemma6": ("m", "k"),
        "lemma7": ("m", "k"),
        "corollary": ("m", "k"),
        "lemma9": ("k",),
        "grand": ("m", "n", "k"),
        "all": ("m", "n", "k"),
        "corrupted": ("m", "n", "k"),
    }[t]
    cfg.require(*needs)
    m, n, k = cfg.m, cfg.n, cfg.k
    chosen = []
    if t in ("lemma6", "all"):
        chosen.append(maps.onedim_sij(m, k))
        if t == "all" and n != m:
            chosen.append(maps.onedim_sij(n, k))
    if t in ("lemma7", "all"):
        chosen.append(maps.garsia_milne_bij(m, k))
    if t in ("corollary", "all"):
        chosen.append(maps.main_cor_sij(m, k))
    if t in ("lemma9", "all"):
        chosen.extend(maps.alpha_product_sij(i, k) for i in range(k + 1))
        chosen.append(maps.subset_indicator_bij(k))
    if t == "all":
        chosen.extend(maps.subset_complement_bij(k, i) for i in range(k + 1))
        chosen.append(maps.vandermonde_merge_bij(m, n, k))
    if t in ("grand", "all"):
        chosen.append(maps.grand_sij(m, n, k))
    if t == "corrupted":
        chosen.append(corrupted_grand(m, n, k))
    return chosen


def corrupted_grand(m: int, n: int, k: int) -> Sijection:
    """Negative control: the composite with the images of two left elements swapped."""
    s = maps.grand_sij(m, n, k)
    firsts = [v for v, _ in s.left][:2]
    if len(firsts) < 2:
        raise InputError(f"no two walks to swap for m={m}, n={n}, k={k}")
    bad = swap_images(s, (LEFT, firsts[0]), (LEFT, firsts[1]))
    bad.name = f"corrupted grand({m},{n},{k})"
    return bad


def cmd_verify(cfg: RunConfig, out: Emitter) -> int:
    sijections = _targets(cfg)
    for s in sijections:
        carrier = s.left.size() + s.right.size()
        if carrier > cfg.max_carrier:
            raise InputError(
                f"{s.name}: carrier of {carrier} elements exceeds --max-carrier {cfg.max_carrier}"
            )
    status = EXIT_OK
    for s in sijections:
        report = verify_sijection(s)
        record = {
            "target": s.name,
            "pass": report.ok,
            "carrier_size": report.carrier_size,
            "totality_ok": report.totality_ok,
            "involution_ok": report.involution_ok,
            "weight_contract_ok": report.weight_contract_ok,
            "left_weight": report.left_weight,
            "right_weight": report.right_weight,
            "first_failure": jsonable(report.first_failure),
            "failure_reason": report.failure_reason,
        }
        text = (
            f"{s.name}: {'PASS' if report.ok else 'FAIL'}  carrier {report.carrier_size}  "
            f"left {report.left_weight}  right {report.right_weight}"
        )
        if not report.ok:
            status = EXIT_FAIL
            text += f"\n  witness {jsonable(report.first_failure)}: {report.failure_reason}"
        out.emit(record, text)
    return status


def cmd_enumerate(cfg: RunConfig, out: Emitter) -> int:
    cfg.require("m", "n", "k")
    count = 0
    for w in enum_walks_2d(cfg.m, cfg.n, cfg.k):
        text = format_walk(w)
        out.emit({"walk": text}, text)
        count += 1
    out.emit({"count": count}, f"count {count}")
    return EXIT_OK


def cmd_trace(cfg: RunConfig, out: Emitter) -> int:
    cfg.require("m", "n")
    if cfg.walk is None:
        raise InputError("trace needs --walk")
    try:
        walk = parse_walk(cfg.walk, cfg.m, cfg.n)
    except WalkParseError as exc:
        raise InputError(str(exc), exc.position) from exc
    if cfg.k is not None and cfg.k != walk.k:
        raise InputError(f"walk has {walk.k} steps but --k is {cfg.k}")
    if not (1 <= cfg.a <= cfg.m and 1 <= cfg.b <= cfg.n):
        raise InputError(f"start pair ({cfg.a}, {cfg.b}) outside [{cfg.m}] x [{cfg.n}]")
    s = maps.grand_sij(cfg.m, cfg.n, walk.k)
    path = trace_element(s, s.tag(LEFT, (cfg.a, cfg.b, walk.steps)))
    record = {
        "m": cfg.m, "n": cfg.n, "k": walk.k, "walk": format_walk(walk),
        "length": len(path), "trace": [jsonable(p) for p in path],
    }
    text = "\n".join(
        f"{p.side:>12}  {p.element.sign:+d}  {jsonable(p.element.value)}" for p in path
    )
    out.emit(record, text)
    return EXIT_OK


HANDLERS = {"count": cmd_count, "verify": cmd_verify, "enumerate": cmd_enumerate, "trace": cmd_trace}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, help="board width")
    common.add_argument("--n", type=int, help="board height")
    common.add_argument("--k", type=int, help="walk length")
    common.add_argument("--output", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="rookwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count closed rook walks")
    p.add_argument("--method", choices=METHODS, default="formula")

    p = sub.add_parser("verify", parents=[common], help="exhaustively verify sijections")
    p.add_argument("--target", choices=TARGETS, default="all",
                   help="lemma7 and corollary use --m as the alphabet size")
    p.add_argument("--max-carrier", type=int, default=DEFAULT_MAX_CARRIER)

    sub.add_parser("enumerate", parents=[common], help="list closed rook walks")

    p = sub.add_parser("trace", parents=[common], help="follow a walk through the composite map")
    p.add_argument("--walk", help="e.g. h2,v3,h1,v2,h1,h2,v3,h4")
    p.add_argument("--a", type=int, default=1, help="column factor of the start pair")
    p.add_argument("--b", type=int, default=1, help="row factor of the start pair")
    return parser


def main(argv=None, stream=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    out = Emitter(cfg.output, stream)
    try:
        return HANDLERS[cfg.command](cfg, out)
    except InputError as exc:
        out.emit({"error": "input", "message": str(exc), "position": exc.position},
                 f"error: {exc}")
        print(f"rookwalk: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
