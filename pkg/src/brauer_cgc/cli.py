"""Command-line interface: relation checks, IDCs, ISF tables and fixture verification.

Exit codes: 0 success, 1 verification difference, 2 precondition violation,
3 internal consistency error.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click

from . import __version__
from . import brauerdiag, induction, soncgc
from .exactnum import ReconstructionError
from .tensorspace import DegenerateSpectrumError

EXIT_OK, EXIT_DIFF, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 1, 2, 3

_COMMAND_KEYS = {
    "idc": {"coupling": "coupling", "n": "n", "cfg": "cfg_policy", "format": "fmt"},
    "isf": {"coupling": "coupling", "samples": "samples", "n_min": "n_min", "format": "fmt",
            "cache_dir": "cache_dir", "workers": "workers"},
    "verify": {"samples": "samples", "n_min": "n_min", "workers": "workers"},
}
_CONFIG_KEYS = set().union(*_COMMAND_KEYS.values())


def read_config(path: str | os.PathLike) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.BadParameter(f"line {lineno}: expected key = value", param_hint="--config")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise click.BadParameter(f"line {lineno}: unknown key {key!r}", param_hint="--config")
        out[key] = value
    return out


def _fail(code: int, message: str):
    click.echo(message, err=True)
    sys.exit(code)


# ---------------------------------------------------------------------------
# result cache


@dataclass(frozen=True)
class RunConfig:
    command: str
    coupling: str
    samples: int = 12
    n_min: int | None = None
    fmt: str = "json"

    def digest(self) -> str:
        payload = json.dumps({"version": __version__, **asdict(self)}, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()


def resolve_cache_dir(option: str | None) -> Path | None:
    where = option or os.environ.get("BRAUER_CGC_CACHE")
    return Path(where) if where else None


class ResultCache:
    """Content-addressed artifact store; entries carry a checksum of their payload."""

    def __init__(self, root: Path):
        self.root = root

    def _path(self, cfg: RunConfig) -> Path:
        return self.root / f"{cfg.digest()}.json"

    def get(self, cfg: RunConfig) -> str | None:
        p = self._path(cfg)
        if not p.exists():
            return None
        try:
            entry = json.loads(p.read_text())
            text = entry["artifact"]
        except (ValueError, KeyError, TypeError):
            return None
        if hashlib.sha256(text.encode()).hexdigest() != entry.get("sha256"):
            return None
        return text

    def put(self, cfg: RunConfig, text: str):
        self.root.mkdir(parents=True, exist_ok=True)
        p = self._path(cfg)
        if self.get(cfg) == text:
            return
        entry = {"config": asdict(cfg), "sha256": hashlib.sha256(text.encode()).hexdigest(), "artifact": text}
        tmp = p.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(json.dumps(entry, sort_keys=True))
        tmp.replace(p)


# ---------------------------------------------------------------------------
# verification


@dataclass
class TableResult:
    table: int
    coupling: str
    passed: bool
    diffs: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    sign_conflicts: list = field(default_factory=list)
    orthogonality: list = field(default_factory=list)
    seconds: float = 0.0
    error: str | None = None


@dataclass
class VerificationReport:
    tables: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.tables)

    def to_json(self) -> dict:
        return {"passed": self.passed, "tables": [asdict(t) for t in self.tables]}

    def lines(self) -> list[str]:
        out = []
        for t in self.tables:
            state = "PASS" if t.passed else "FAIL"
            out.append(f"table {t.table} {t.coupling}: {state} ({t.seconds:.1f}s)")
            if t.error:
                out.append(f"  error: {t.error}")
            out += [f"  diff {d}" for d in t.diffs]
            out += [f"  sign conflict {c}" for c in t.sign_conflicts]
            out += [f"  orthogonality {o}" for o in t.orthogonality]
            out += [f"  skipped {s}" for s in t.skipped]
        return out


def verify_table(table: int, samples: int = 12, workers: int | None = None, start: int | None = None) -> TableResult:
    fx = soncgc.load_fixture(table)
    t0 = time.perf_counter()
    coupling = f"{fx.l1.compact()}x{fx.l2.compact()}"
    try:
        computed = soncgc.reconstruct_table(table, samples=samples, workers=workers, start=start)
    except (ReconstructionError, ArithmeticError) as exc:
        return TableResult(table, coupling, False, seconds=time.perf_counter() - t0, error=str(exc))
    anchored = soncgc.anchor_signs(computed, fx)
    diffs, skipped = soncgc.compare_with_fixture(anchored, fx)
    ortho = soncgc.orthogonality_failures(anchored)
    return TableResult(
        table,
        coupling,
        not (diffs or ortho or anchored.sign_conflicts),
        diffs=[str(d) for d in diffs],
        skipped=skipped,
        sign_conflicts=list(anchored.sign_conflicts),
        orthogonality=ortho,
        seconds=time.perf_counter() - t0,
    )


def parse_table_selection(text: str) -> list[int]:
    if text.strip().lower() == "all":
        return list(soncgc.TABLES)
    out = []
    for part in text.replace(" ", "").split(","):
        if "-" in part:
            a, b = part.split("-")
            out += range(int(a), int(b) + 1)
        elif part:
            out.append(int(part))
    bad = [t for t in out if t not in soncgc.TABLES]
    if bad:
        raise click.BadParameter(f"unknown tables {bad}")
    return out


# ---------------------------------------------------------------------------
# commands


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="File of key = value defaults.")
@click.pass_context
def main(ctx, config_path):
    """Exact Brauer-algebra induction coefficients and SO(n) isoscalar factors."""
    if config_path:
        values = read_config(config_path)
        ctx.default_map = {
            cmd: {param: values[key] for key, param in keys.items() if key in values}
            for cmd, keys in _COMMAND_KEYS.items()
        }


@main.command()
@click.option("--f", "f", type=int, default=4, show_default=True, help="Number of strands (2-5).")
def relations(f):
    """Check the defining relations and the star operation with symbolic n."""
    if not 2 <= f <= 5:
        _fail(EXIT_PRECONDITION, "f must lie between 2 and 5")
    failures = brauerdiag.relation_suite(f)
    total = brauerdiag.relation_count(f)
    for name in failures:
        click.echo(f"FAIL {name}")
    click.echo(f"D_{f}(n): {total - len(failures)}/{total} relations hold")
    sys.exit(EXIT_DIFF if failures else EXIT_OK)


@main.command()
@click.option("--coupling", required=True, help='Coupling such as "[2]x[1]".')
@click.option("--n", "n", type=int, default=9, show_default=True)
@click.option("--cfg", "cfg_policy", default="generic", show_default=True,
              help="generic, distinct, paired or explicit:<labels>.")
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
def idc(coupling, n, cfg_policy, fmt):
    """Coupled basis vectors of an induced module with their IDCs."""
    try:
        l1, l2 = soncgc.parse_coupling(coupling)
    except ValueError as exc:
        _fail(EXIT_PRECONDITION, str(exc))
    f = l1.weight + l2.weight
    if f > 4 or not l1.weight or not l2.weight:
        _fail(EXIT_PRECONDITION, "supported couplings have 2 <= f <= 4 boxes")
    if n < f - 1:
        _fail(EXIT_PRECONDITION, f"n={n} is below the semisimple range n >= {f - 1}")
    try:
        cfg = induction.ComponentConfig.from_policy(cfg_policy, l1.weight, l2.weight, n)
        cfg.check(n)
        coupled = induction.derive_coupled(l1, l2, cfg, n)
    except (ValueError, DegenerateSpectrumError) as exc:
        _fail(EXIT_PRECONDITION, str(exc))
    except induction.ConsistencyError as exc:
        _fail(EXIT_INTERNAL, str(exc))
    report = induction.verify_intertwining(coupled)
    gram = induction.norm_matrix(induction.uncoupled_basis(l1, l2, cfg, n))
    live = [c for c in coupled if not c.null]
    orthogonal = all(
        induction.ts.inner(a.realized, b.realized) == 0 for i, a in enumerate(live) for b in live[i + 1:]
    )
    doc = {
        "coupling": f"{l1}x{l2}",
        "n": n,
        "cfg": cfg.describe(),
        "cfg_policy": cfg.policy,
        "norm_matrix": {"size": gram.size, "rank": gram.rank(), "null_dimension": gram.null_dimension},
        "vectors": [c.to_json() for c in coupled],
        "orthogonal": orthogonal,
        "complete": len(live) == gram.rank(),
        "intertwining": report.to_json(),
    }
    click.echo(json.dumps(doc, indent=1))
    if not (report.ok and orthogonal and doc["complete"]):
        sys.exit(EXIT_INTERNAL)


_EMITTERS = {
    "json": lambda t: json.dumps(soncgc.to_json(t), indent=1, sort_keys=True),
    "csv": soncgc.to_csv,
    "latex": soncgc.to_latex,
}


@main.command()
@click.option("--coupling", required=True, help='Coupling such as "[21]x[1]" or a table number.')
@click.option("--format", "fmt", type=click.Choice(sorted(_EMITTERS)), default="json", show_default=True)
@click.option("--samples", type=int, default=12, show_default=True, help="Ranks per row, including 2 holdouts.")
@click.option("--n-min", type=int, default=None, help="Lowest rank to sample.")
@click.option("--cache-dir", default=None, help="Result cache (default: $BRAUER_CGC_CACHE).")
@click.option("--workers", type=int, default=None)
@click.option("--verify/--no-verify", default=False, help="Also diff against the bundled table.")
def isf(coupling, fmt, samples, n_min, cache_dir, workers, verify):
    """Reconstruct an SO(n) > SO(n-1) isoscalar factor table as functions of n."""
    if samples < 8:
        _fail(EXIT_PRECONDITION, "at least 8 samples are needed (6 fitted, 2 holdouts)")
    try:
        table_no = int(coupling) if coupling.isdigit() else soncgc.table_for(*soncgc.parse_coupling(coupling))
        fx = soncgc.load_fixture(table_no)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        _fail(EXIT_PRECONDITION, f"unsupported coupling {coupling!r}: {exc}")
    if n_min is not None and n_min < fx.n_min:
        _fail(EXIT_PRECONDITION, f"table {table_no} is valid only for n >= {fx.n_min}")
    cfg = RunConfig("isf", f"table{table_no}", samples, n_min, fmt)
    root = resolve_cache_dir(cache_dir)
    store = ResultCache(root) if root else None
    text = store.get(cfg) if store else None
    if text is None:
        try:
            table = soncgc.reconstruct_table(table_no, samples=samples, workers=workers, start=n_min)
        except (ReconstructionError, ArithmeticError) as exc:
            _fail(EXIT_INTERNAL, f"reconstruction failed: {exc}")
        table = soncgc.anchor_signs(table, fx)
        ortho = soncgc.orthogonality_failures(table)
        if ortho:
            _fail(EXIT_INTERNAL, "orthogonality failures:\n" + "\n".join(ortho))
        text = _EMITTERS[fmt](table)
        if store:
            store.put(cfg, text)
    click.echo(text.rstrip("\n"))
    if verify:
        res = verify_table(table_no, samples, workers, n_min)
        for line in VerificationReport([res]).lines():
            click.echo(line, err=True)
        if not res.passed:
            sys.exit(EXIT_DIFF)


@main.command()
@click.argument("tables", default="all")
@click.option("--samples", type=int, default=12, show_default=True)
@click.option("--n-min", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
def verify(tables, samples, n_min, workers, as_json):
    """Recompute tables (ids such as 1,3-5 or all) and diff them against the bundled fixtures."""
    try:
        ids = parse_table_selection(tables)
    except (click.BadParameter, ValueError) as exc:
        _fail(EXIT_PRECONDITION, str(exc))
    report = VerificationReport([verify_table(t, samples, workers, n_min) for t in ids])
    if as_json:
        click.echo(json.dumps(report.to_json(), indent=1))
    else:
        for line in report.lines():
            click.echo(line)
        click.echo("all tables pass" if report.passed else "verification failed")
    sys.exit(EXIT_OK if report.passed else EXIT_DIFF)


if __name__ == "__main__":
    main()
