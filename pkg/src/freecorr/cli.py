"""``freecorr`` command line: expect, cesaro, law, koopman, fluct, verify, plot.

Tabular outputs start with one ``# config: {...}`` line holding the resolved
configuration as JSON; ``--format json`` embeds it under ``"config"``.
Exit status: 0 success, 2 invalid input, 1 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from . import cesaro, fluctuations, koopman, laws, pauli, shift
from .bitstream import BitStream, StreamError, parse_stream
from .parsing import ParseError, parse_pattern, parse_timed_word, parse_word, word_polynomial
from .words import ObservableSymbol

HEADER_PREFIX = "# config: "


class UsageError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    word: str | None = None
    pattern: str | None = None
    stream: str | None = None
    horizons: list = field(default_factory=list)
    schedule: str = "equal"
    law: str | None = None
    marginals: str | None = None
    ops: list = field(default_factory=list)
    center: bool = False
    N: int | None = None
    max_moment: int | None = None
    min_gap: int | None = None
    words: int | None = None
    seed: int | None = None
    mode: str | None = None
    output: str | None = None
    format: str = "csv"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        if text.startswith(HEADER_PREFIX):
            text = text[len(HEADER_PREFIX):]
        data = json.loads(text)
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def header(self) -> str:
        return HEADER_PREFIX + self.to_json()


# -- value formatting -----------------------------------------------------

def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return repr(float(x)) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, complex):
        raise TypeError("complex values are written as two columns")
    if isinstance(x, float):
        return repr(x)
    return str(x)


def jsonable(x):
    if isinstance(x, Fraction):
        return float(x) if x.denominator != 1 else x.numerator
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def render_table(config: ExperimentConfig, columns: list, rows: list) -> str:
    if config.format == "json":
        payload = {"config": asdict(config), "columns": columns,
                   "rows": [[jsonable(v) for v in r] for r in rows]}
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"
    lines = [config.header(), ",".join(columns)]
    lines += [",".join(fmt(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def render_scalar(config: ExperimentConfig, value, to_file: bool) -> str:
    if config.format == "json":
        return json.dumps({"config": asdict(config), "result": jsonable(value)}, sort_keys=True) + "\n"
    text = str(value) if not isinstance(value, (float, Fraction)) else fmt(value)
    if to_file:
        return config.header() + "\n" + text + "\n"
    return text + "\n"


# -- argument helpers -----------------------------------------------------

def _horizons(text: str) -> list:
    try:
        hs = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"horizons must be comma separated integers, got {text!r}") from None
    if not hs or any(h < 1 for h in hs):
        raise UsageError(f"horizons must be positive integers, got {text!r}")
    return hs


def read_marginals(spec: str) -> laws.MarginalState:
    """``symbolic`` or a file of ``A C = 0.7`` lines (``symbolic`` line allowed)."""
    if spec.strip() == "symbolic":
        return laws.MarginalState.symbolic_state()
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"marginals file {spec!r} not found")
    table = {}
    symbolic = False
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "symbolic":
            symbolic = True
            continue
        lhs, eq, rhs = line.partition("=")
        if not eq:
            raise UsageError(f"{spec}:{lineno}: expected 'monomial = value'")
        mono = []
        for tok in lhs.split():
            adj = tok.endswith("*") or tok.endswith("†")
            name = tok.rstrip("*†")
            if name.endswith("^"):
                name = name[:-1]
            mono.append(ObservableSymbol(name, adj))
        try:
            table[tuple(mono)] = laws.parse_value(rhs)
        except ValueError as exc:
            raise UsageError(f"{spec}:{lineno}: {exc}") from None
    return laws.MarginalState(table, symbolic=symbolic)


def generator_moments(spec: str | None, K: int) -> dict:
    if spec is None:
        return fluctuations.sign_moments(K)
    state = read_marginals(spec)
    names = {s.name for mono in state.table for s in mono}
    if len(names) != 1:
        raise UsageError("fluctuation marginals must describe powers of one symbol")
    sym = ObservableSymbol(names.pop())
    moments = {}
    for k in range(1, K + 1):
        try:
            moments[k] = state((sym,) * k)
        except laws.MissingMomentError:
            raise UsageError(f"marginals lack <{sym.name}^{k}>") from None
    return moments


def _stream_seed(stream: BitStream):
    return stream.seed if stream.kind == "bernoulli" else None


# -- subcommands ----------------------------------------------------------

def cmd_expect(args, config):
    w = parse_timed_word(args.word)
    stream = parse_stream(args.stream)
    config.seed = _stream_seed(stream)
    return "scalar", shift.expectation(w, stream)


def cmd_cesaro(args, config):
    copies = parse_pattern(args.pattern)
    stream = parse_stream(args.stream)
    config.seed = _stream_seed(stream)
    pattern = cesaro.TimePattern.from_copies(copies)
    ev = shift.ShiftCorrelation(pattern.copies, stream)
    ladder = []
    for T in config.horizons:
        if config.schedule == "staircase":
            ladder.append(cesaro.AveragingSchedule.staircase(pattern.distinct, T).horizons)
        else:
            ladder.append(tuple([T] * pattern.distinct))
    report = cesaro.convergence_report(pattern, ev, ladder, config.min_gap or 0, args.threads)
    rows = [(T, est, delta) for T, (hs, est, delta) in zip(config.horizons, report.rows)]
    return "table", (["T", "estimate", "delta"], rows)


def cmd_law(args, config):
    state = read_marginals(args.marginals)
    poly = word_polynomial(parse_word(args.word), state)
    value = laws.evaluate(poly, args.law, state)
    return "scalar", value


def cmd_koopman(args, config):
    copies = parse_pattern(args.pattern)
    paths = config.ops
    if len(paths) != len(copies):
        raise UsageError(f"pattern has {len(copies)} slots but {len(paths)} operator files were given")
    cache = {}
    ops = []
    for p in paths:
        if p not in cache:
            try:
                op, center = koopman.parse_observable_file(p)
            except OSError as exc:
                raise UsageError(f"cannot read {p}: {exc}") from None
            cache[p] = op.centered() if (center or config.center) else op
        ops.append(cache[p])
    rows = []
    for T in config.horizons:
        sched = cesaro.AveragingSchedule.equal(len(set(copies)), T)
        r = koopman.asymptotic_check(copies, ops, sched, config.min_gap, args.threads)
        rows.append((T, r.estimate.real, r.estimate.imag, r.prediction.real, r.prediction.imag, r.error))
    cols = ["T", "estimate_re", "estimate_im", "prediction_re", "prediction_im", "error"]
    return "table", (cols, rows)


def cmd_fluct(args, config):
    K = config.max_moment
    law = config.law
    if law.startswith("shift:"):
        spec = law[len("shift:"):]
        if K > 8 or config.N > 50:
            raise UsageError("shift fluctuations support --N <= 50 and --max-moment <= 8")
        if spec == "free":
            model = fluctuations.FreeShiftModel()
        else:
            stream = parse_stream(spec)
            config.seed = _stream_seed(stream)
            if not config.horizons:
                raise UsageError("shift fluctuations need --horizons")
            model = fluctuations.ShiftModel(stream, config.horizons[0], config.min_gap or 0, args.threads)
        variance = 1
    elif law in laws.LAWS:
        moments = generator_moments(config.marginals, max(K, 2))
        model = fluctuations.LawModel(law, moments)
        variance = model.variance
    else:
        raise UsageError(f"unknown law {law!r}")
    if K < 1 or K > 12:
        raise UsageError("--max-moment must lie in 1..12")
    mode = config.mode or "combinatorial"
    gref = fluctuations.gaussian_moments(K, variance)
    sref = fluctuations.semicircle_moments(K, variance)
    rows = []
    for m in range(1, K + 1):
        value = fluctuations.sum_moment(model, config.N, m, mode)
        rows.append((m, value, gref.moment(m), sref.moment(m)))
    return "table", (["m", "value", "gaussian_ref", "semicircle_ref"], rows)


def cmd_verify(args, config):
    result = pauli.cross_check(config.words, config.seed)
    return "verify", result


def cmd_plot(args, config):
    out = emit_plot_script(args.csv, args.output)
    return "text", f"wrote {out}"


# -- plotting --------------------------------------------------------------

_SCHEMAS = {
    ("T", "estimate", "delta"): "cesaro",
    ("m", "value", "gaussian_ref", "semicircle_ref"): "fluct",
    ("T", "estimate_re", "estimate_im", "prediction_re", "prediction_im", "error"): "koopman",
}


def emit_plot_script(csv_path, output=None) -> Path:
    """Write a gnuplot script for a ``cesaro``/``fluct``/``koopman`` CSV (never runs it)."""
    csv_path = Path(csv_path)
    lines = [l for l in csv_path.read_text().splitlines() if l.strip() and not l.startswith("#")]
    if not lines:
        raise UsageError(f"{csv_path} holds no CSV header")
    schema = _SCHEMAS.get(tuple(c.strip() for c in lines[0].split(",")))
    if schema is None:
        raise UsageError(f"{csv_path}: unknown CSV schema {lines[0]!r}")
    if len(lines) < 2:
        raise UsageError(f"{csv_path} holds no data rows")
    name = csv_path.name
    script = [
        "set datafile separator ','",
        "set key top right",
        "set grid",
    ]
    if schema == "cesaro":
        script += [
            "set logscale x",
            "set xlabel 'T'",
            "set ylabel 'time average'",
            f"plot '{name}' every ::1 using 1:2 with linespoints title 'estimate', \\",
            "     0 with lines dashtype 2 title 'free (0)', \\",
            "     1 with lines dashtype 3 title 'commuting (1)'",
        ]
    elif schema == "fluct":
        script += [
            "set logscale y",
            "set xlabel 'moment order m'",
            "set ylabel 'moment'",
            f"plot '{name}' every ::1 using 1:2 with points pt 7 title 'value', \\",
            f"     '{name}' every ::1 using 1:3 with linespoints dashtype 2 title 'gaussian', \\",
            f"     '{name}' every ::1 using 1:4 with linespoints dashtype 3 title 'semicircle'",
        ]
    else:
        script += [
            "set logscale x",
            "set xlabel 'T'",
            "set ylabel 'Re'",
            f"plot '{name}' every ::1 using 1:2 with linespoints title 'estimate', \\",
            f"     '{name}' every ::1 using 1:4 with lines dashtype 2 title 'prediction'",
        ]
    out = Path(output) if output else csv_path.with_suffix(".gp")
    out.write_text("\n".join(script) + "\n")
    return out


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="freecorr", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--output", help="write to this file instead of stdout")
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap (default: FREECORR_THREADS or CPU count)")

    p = sub.add_parser("expect", help="expectation of a timed word e(t1) e(t2) ...")
    p.add_argument("--word", required=True)
    p.add_argument("--stream", required=True)
    common(p)

    p = sub.add_parser("cesaro", help="time-averaged shift correlation along a horizon ladder")
    p.add_argument("--pattern", required=True)
    p.add_argument("--stream", required=True)
    p.add_argument("--horizons", required=True)
    p.add_argument("--min-gap", type=int, default=0)
    p.add_argument("--schedule", choices=["equal", "staircase"], default="equal")
    common(p)

    p = sub.add_parser("law", help="asymptotic expectation under tensor/free/koopman law")
    p.add_argument("--law", required=True, choices=sorted(laws.LAWS))
    p.add_argument("--word", required=True)
    p.add_argument("--marginals", required=True, help="file of 'A C = 0.7' lines, or 'symbolic'")
    common(p)

    p = sub.add_parser("koopman", help="doubling-map correlations vs koopman prediction")
    p.add_argument("--pattern", required=True)
    p.add_argument("--ops", required=True, help="comma separated operator files, one per slot")
    p.add_argument("--horizons", required=True)
    p.add_argument("--min-gap", type=int, default=None)
    p.add_argument("--center", action="store_true", help="center every operator")
    common(p)

    p = sub.add_parser("fluct", help="moments of normalized fluctuation sums")
    p.add_argument("--law", required=True, help="tensor | free | koopman | shift:<stream> | shift:free")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--max-moment", type=int, default=8)
    p.add_argument("--marginals", default=None, help="moments of the generator (default: +-1 variable)")
    p.add_argument("--horizons", default=None, help="averaging horizon for shift:<stream>")
    p.add_argument("--min-gap", type=int, default=0)
    p.add_argument("--mode", choices=["combinatorial", "brute"], default="combinatorial")
    common(p)

    p = sub.add_parser("verify", help="cross-check shift reduction against the Pauli oracle")
    p.add_argument("--words", type=int, default=10000)
    p.add_argument("--seed", type=int, default=7)
    common(p)

    p = sub.add_parser("plot", help="emit a gnuplot script for a cesaro/fluct/koopman CSV")
    p.add_argument("csv")
    p.add_argument("--output", default=None)
    return ap


COMMANDS = {
    "expect": cmd_expect, "cesaro": cmd_cesaro, "law": cmd_law, "koopman": cmd_koopman,
    "fluct": cmd_fluct, "verify": cmd_verify, "plot": cmd_plot,
}


def resolve_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig(command=args.command)
    for name in ("word", "pattern", "stream", "law", "marginals", "N", "max_moment",
                 "min_gap", "words", "seed", "mode", "format", "schedule", "center"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "horizons", None):
        cfg.horizons = _horizons(args.horizons)
    if getattr(args, "ops", None):
        cfg.ops = [p.strip() for p in args.ops.split(",") if p.strip()]
    if args.command != "plot" and getattr(args, "output", None):
        cfg.output = args.output
    return cfg


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("freecorr: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        config = resolve_config(args)
        kind, result = COMMANDS[args.command](args, config)
    except (ParseError, StreamError, UsageError, laws.MissingMomentError,
            koopman.ObservableFileError, fluctuations.FluctuationError, cesaro.AveragingError) as exc:
        print(f"freecorr: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - reported as a runtime failure
        print(f"freecorr: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    to_file = bool(config.output) and args.command != "plot"
    status = 0
    if kind == "table":
        text = render_table(config, *result)
    elif kind == "scalar":
        text = render_scalar(config, result, to_file)
    elif kind == "verify":
        matches, total, _ = result
        status = 0 if matches == total else 1
        if config.format == "json":
            text = json.dumps({"config": asdict(config), "matches": matches, "total": total},
                              sort_keys=True) + "\n"
        else:
            text = (config.header() + "\n" if to_file else "") + f"{matches}/{total} oracle matches\n"
    else:
        text = result + "\n"
    if to_file:
        Path(config.output).write_text(text)
    else:
        stdout.write(text)
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
