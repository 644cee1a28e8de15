"""Command-line front end: reproducible runs with cached zeros, CSV/JSON
artifacts and a ``manifest.json``.

Exit codes: 0 success, 2 validation failure, 3 accuracy failure,
4 cache corruption.  Failures print one line naming module and operation.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import algebra, gram, hermitian_form, special, zeros
from .errors import (
    AccuracyError,
    CacheFormatError,
    CacheStaleError,
    ConvergenceError,
    CritlineError,
)

COMMANDS = ("zeros", "form", "gram", "scan", "algebra", "all")
SCAN_KINDS = ("hermiticity", "almost-zeros", "gaussian")
CACHE_ENV = "CRITLINE_CACHE"
EXIT_VALIDATION, EXIT_ACCURACY, EXIT_CACHE = 2, 3, 4


@dataclass
class RunProfile:
    command: str
    t_max: float = 100.0
    n_zeros: int = 10
    K: float = 1.0
    seed: int = 42
    out_dir: Path = Path("critline-out")
    cache_path: Path | None = None
    tol: float = 1e-10
    z12: complex = complex(1.5, 2.0)
    scan: str = "almost-zeros"
    sums: bool = False
    triples: int = 200
    variant: str = "paper"

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        if self.cache_path is None:
            self.cache_path = self.out_dir / "zeros.cache"
        self.cache_path = Path(self.cache_path)

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 0 < self.t_max <= zeros.T_MAX_LIMIT:
            raise ValueError(f"t_max must lie in (0, {zeros.T_MAX_LIMIT:g}]")
        if self.n_zeros < 1:
            raise ValueError("n_zeros must be >= 1")
        if self.K == 0:
            raise ValueError("K must be nonzero")
        if self.scan not in SCAN_KINDS:
            raise ValueError(f"unknown scan {self.scan!r}")
        if self.variant not in algebra.VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.triples < 0:
            raise ValueError("triples must be >= 0")
        self.out_dir.mkdir(parents=True, exist_ok=True)
        if not os.access(self.out_dir, os.W_OK):
            raise ValueError(f"output directory {self.out_dir} is not writable")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["out_dir"] = str(self.out_dir)
        d["cache_path"] = str(self.cache_path)
        d["z12"] = [self.z12.real, self.z12.imag]
        return d


class StepError(Exception):
    """Failure wrapped with the module and operation it came from."""

    def __init__(self, where: str, exc: Exception):
        super().__init__(f"{where}: {exc}")
        self.where = where
        self.exc = exc


class _Run:
    def __init__(self, profile: RunProfile):
        self.p = profile
        self.files: list[Path] = []
        self.cfg = None
        self.notes: dict = {}
        self._zt = None

    def step(self, where: str, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except StepError:
            raise
        except Exception as exc:
            raise StepError(where, exc) from exc

    # -- output helpers -------------------------------------------------
    def write_text(self, name: str, text: str) -> Path:
        path = self.p.out_dir / name
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
        self.files.append(path)
        return path

    def write_json(self, name: str, obj) -> Path:
        return self.write_text(name, json.dumps(_jsonable(obj), indent=1, sort_keys=True) + "\n")

    def write_csv(self, name: str, header: list[str], rows: list[dict]) -> Path:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(r.get(h, "")) for h in header])
        return self.write_text(name, buf.getvalue())

    # -- shared state ---------------------------------------------------
    def config(self):
        if self.cfg is None:
            self.cfg = self.step(
                "hermitian_form.FormConfig", hermitian_form.FormConfig, self.p.K
            )
        return self.cfg

    def zero_table(self, need: int = 1, t_max: float | None = None) -> zeros.ZeroTable:
        t_max = t_max or self.p.t_max
        zt = self._zt
        if zt is None and self.p.cache_path.exists():
            zt = self.step("cli_runner.validate_cache", validate_cache, self.p.cache_path)
        while zt is None or zt.t_max < t_max or len(zt) < need:
            if zt is not None and zt.t_max >= t_max:
                if t_max >= zeros.T_MAX_LIMIT:
                    raise StepError(
                        "zero_finder.find_zeros_upto",
                        ValueError(f"fewer than {need} zeros below {zeros.T_MAX_LIMIT:g}"),
                    )
                t_max = min(zeros.T_MAX_LIMIT, 2 * t_max)
            zt = self.step(
                "zero_finder.find_zeros_upto", zeros.find_zeros_upto, t_max, self.p.tol
            )
            self.step("zero_finder.write_cache", zeros.write_cache, zt, self.p.cache_path)
            self.notes["zeros_computed_to"] = t_max
        if zt.t_max > t_max and len(zt) >= need:
            keep = tuple(y for y in zt.ordinates if y < t_max)
            if len(keep) >= need:
                zt = zeros.ZeroTable(keep, t_max, zt.tol)
        self._zt = zt
        if self.p.cache_path not in self.files:
            self.files.append(self.p.cache_path)
        return zt

    # -- pipelines ------------------------------------------------------
    def cmd_zeros(self):
        zt = self.zero_table()
        stats = None
        if len(zt) >= 2:
            stats = self.step("zero_finder.gap_statistics", zeros.gap_statistics, zt)
        heights = [T for T in (50.0, 100.0, 200.0, 500.0) if T <= zt.t_max]
        out = {
            "t_max": zt.t_max,
            "tol": zt.tol,
            "count": len(zt),
            "count_estimate": zeros.riemann_count_estimate(zt.t_max),
            "count_profile": zeros.count_profile(zt, heights),
        }
        if zt.t_max > zeros.TWO_PI * np.e:
            out["min_gap_bound"] = zeros.min_gap_bound(zt.t_max)
        if stats is not None:
            out.update(
                min_gap=stats.min_gap,
                max_gap=stats.max_gap,
                mean_gap=stats.mean_gap,
                density_profile=stats.density_profile,
            )
        self.notes["zero_count"] = len(zt)
        self.write_json("zeros.json", out)

    def cmd_form(self):
        cfg = self.config()
        z = self.p.z12
        out = {
            "z12": [z.real, z.imag],
            "g_closed": self.step("hermitian_form.g_closed", hermitian_form.g_closed, z, cfg),
            "hermiticity_residual": self.step(
                "hermitian_form.hermiticity_residual", hermitian_form.hermiticity_residual, z, cfg
            ),
            "reflection_residual": self.step(
                "hermitian_form.reflection_residual", hermitian_form.reflection_residual, z, cfg
            ),
        }
        if z.real > 0:
            out["g_quadrature"] = self.step(
                "hermitian_form.g_quadrature", hermitian_form.g_quadrature, z, cfg
            )
        self.write_json("form.json", out)

    def cmd_gram(self):
        cfg = self.config()
        zt = self.zero_table(need=self.p.n_zeros)
        gm = self.step("gram_analysis.build_gram", gram.build_gram, zt, cfg, self.p.n_zeros)
        rep = self.step("gram_analysis.positivity_report", gram.positivity_report, gm)
        self.write_json("gram.json", gram.gram_to_dict(gm, rep))

    def cmd_scan(self, kind: str | None = None):
        kind = kind or self.p.scan
        cfg = self.config()
        if kind == "almost-zeros":
            zt = self.zero_table()
            rows = self.step(
                "gram_analysis.almost_zero_scan", gram.almost_zero_scan, zt, cfg, self.p.sums
            )
            header = ["y12", "abs_zeta", "abs_G", "exp_bound"]
            if self.p.sums:
                header += ["y_sum", "abs_zeta_sum", "abs_G_sum"]
            self.write_csv("scan_almost_zeros.csv", header, rows)
        elif kind == "gaussian":
            rows = self.step("gram_analysis.gaussian_profile", gram.gaussian_profile, cfg)
            header = ["y", "model_re", "model_im", "closed_re", "closed_im", "rel_dev"]
            self.write_csv("scan_gaussian.csv", header, rows)
        else:
            rows = self.step("hermitian_form.hermiticity_residual", hermiticity_rows, cfg)
            header = ["x12", "y12", "abs_residual", "abs_reflection", "abs_G"]
            self.write_csv("scan_hermiticity.csv", header, rows)

    def cmd_algebra(self):
        cfg = self.config()
        metric = self.step(
            "superconformal_algebra.MetricOracle", algebra.MetricOracle.from_config, cfg
        )
        zt = self.zero_table(need=3)
        labels = zt.labels()[:3]
        rep = self.step(
            "superconformal_algebra.algebra_report",
            algebra.algebra_report,
            metric,
            self.p.triples,
            self.p.seed,
            self.p.variant,
            sugawara_labels=labels,
            probe_labels=[0j] + labels,
        )
        self.write_json("algebra.json", rep)

    def cmd_all(self):
        self.cmd_zeros()
        self.cmd_form()
        self.cmd_gram()
        for kind in SCAN_KINDS:
            self.cmd_scan(kind)
        self.cmd_algebra()

    def manifest(self, wall: float) -> Path:
        files = []
        for f in sorted(set(self.files), key=str):
            data = Path(f).read_bytes()
            files.append(
                {"path": str(f), "bytes": len(data), "sha256": hashlib.sha256(data).hexdigest()}
            )
        cfg = self.cfg or hermitian_form.FormConfig(self.p.K)
        man = {
            "tool": "critline",
            "version": __version__,
            "profile": self.p.to_dict(),
            "calibration": cfg.metadata(),
            "wall_time_s": wall,
            "files": files,
            "notes": self.notes,
        }
        path = self.p.out_dir / "manifest.json"
        path.write_text(json.dumps(_jsonable(man), indent=1, sort_keys=True) + "\n")
        return path


def hermiticity_rows(cfg, xs=None, ys=None) -> list[dict]:
    """Residual grid over the strip, including the integer lines x12 = 1, 2."""
    xs = xs if xs is not None else [round(0.1 * k, 10) for k in range(1, 21)]
    ys = ys if ys is not None else [round(0.5 * k, 10) for k in range(0, 61)]
    rows = []
    for x in xs:
        for y in ys:
            z = complex(x, y)
            if z == 1:
                continue
            rows.append(
                {
                    "x12": x,
                    "y12": y,
                    "abs_residual": abs(hermitian_form.hermiticity_residual(z, cfg)),
                    "abs_reflection": abs(hermitian_form.reflection_residual(z, cfg)),
                    "abs_G": abs(hermitian_form.g_closed(z, cfg)),
                }
            )
    return rows


def validate_cache(path, acc=special.DEFAULT_ACCURACY) -> zeros.ZeroTable:
    """Parse a zero cache and re-verify each ordinate by bracketing."""
    return zeros.validate_cache(path, acc)


def _fmt(v) -> str:
    if isinstance(v, float) or isinstance(v, np.floating):
        return f"{float(v):.15g}"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj


# ---------------------------------------------------------------------------
# argument handling

_PROFILE_KEYS = {
    "t_max": float,
    "n_zeros": int,
    "K": float,
    "seed": int,
    "out_dir": Path,
    "cache_path": Path,
    "tol": float,
    "triples": int,
    "variant": str,
}


def read_profile_file(path) -> dict:
    """Plain ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _PROFILE_KEYS:
            raise ValueError(f"{path}:{n}: unknown key {key!r}")
        out[key] = _PROFILE_KEYS[key](value)
    return out


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected re,im")
    return complex(float(parts[0]), float(parts[1]))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", type=Path, default=None)
    common.add_argument("--cache", dest="cache_path", type=Path, default=None)
    common.add_argument("--profile", type=Path, default=None, help="key=value profile file")
    common.add_argument("--K", type=float, default=None)
    common.add_argument("--t-max", dest="t_max", type=float, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=None)

    p = argparse.ArgumentParser(prog="critline", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"critline {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("zeros", parents=[common], help="locate critical-line zeros")
    f = sub.add_parser("form", parents=[common], help="evaluate G(z12) both ways")
    f.add_argument("--z12", type=_parse_complex, default=None, metavar="RE,IM")
    g = sub.add_parser("gram", parents=[common], help="Gram matrix audit")
    g.add_argument("--n", dest="n_zeros", type=int, default=None)
    s = sub.add_parser("scan", parents=[common], help="data scans")
    s.add_argument("scan", choices=SCAN_KINDS)
    s.add_argument("--sums", action="store_true", default=None, help="add y_i + y_j columns")
    a = sub.add_parser("algebra", parents=[common], help="bracket engine audit")
    a.add_argument("--triples", type=int, default=None)
    a.add_argument("--variant", choices=sorted(algebra.VARIANTS), default=None)
    al = sub.add_parser("all", parents=[common], help="every pipeline")
    al.add_argument("--n", dest="n_zeros", type=int, default=None)
    al.add_argument("--triples", type=int, default=None)
    al.add_argument("--variant", choices=sorted(algebra.VARIANTS), default=None)
    return p


def profile_from_args(args: argparse.Namespace, environ=os.environ) -> RunProfile:
    """Defaults, then profile file, then ``CRITLINE_CACHE``, then flags."""
    values: dict = {}
    if args.profile is not None:
        values.update(read_profile_file(args.profile))
    if environ.get(CACHE_ENV):
        values["cache_path"] = Path(environ[CACHE_ENV])
    for key in (
        "out_dir", "cache_path", "K", "t_max", "tol", "seed",
        "z12", "n_zeros", "scan", "sums", "triples", "variant",
    ):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return RunProfile(command=args.command, **values)


def run(profile: RunProfile) -> int:
    """Execute a profile; returns the process exit status."""
    t0 = time.perf_counter()
    try:
        profile.validate()
    except (ValueError, OSError) as exc:
        _diag("cli_runner.run", exc)
        return EXIT_VALIDATION
    r = _Run(profile)
    try:
        getattr(r, f"cmd_{profile.command}")()
        r.manifest(time.perf_counter() - t0)
    except StepError as err:
        _diag(err.where, err.exc)
        return _exit_code(err.exc)
    return 0


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, (CacheFormatError, CacheStaleError)):
        return EXIT_CACHE
    if isinstance(exc, (AccuracyError, ConvergenceError)):
        return EXIT_ACCURACY
    if isinstance(exc, (ValueError, CritlineError, OSError)):
        return EXIT_VALIDATION
    raise exc


def _diag(where: str, exc: Exception):
    msg = " ".join(str(exc).split())
    print(f"critline: {where}: {type(exc).__name__}: {msg}", file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        profile = profile_from_args(args)
    except (ValueError, OSError) as exc:
        _diag("cli_runner.profile", exc)
        return EXIT_VALIDATION
    return run(profile)


if __name__ == "__main__":
    sys.exit(main())
