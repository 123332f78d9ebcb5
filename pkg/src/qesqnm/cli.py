"""Command-line front end: catalog, solve, potential, verify, spectrum."""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .catalog import PresetError, get_preset, list_presets
from .coordinates import canonicalize
from .model import ModelError, ModelSpec, UnsupportedModelError, complex_to_json, require_generated, validate_model
from .prepotential import endpoint_analysis
from .spectrum import assemble_potential, exact_spectrum, grid_csv_rows, spectral_document, spectral_levels
from .verifier import VerifyConfig, default_window, verify_model

EXIT_OK, EXIT_INVALID, EXIT_VERIFY, EXIT_UNSUPPORTED = 0, 2, 3, 4

# family parameter flags -> preset parameter names
_PARAM_FLAGS = {"alpha": "alpha", "c": "c", "d": "d", "a": "a", "b": "b", "gamma_param": "gamma",
                "A0": "A0", "A1": "A1", "A2": "A2"}


@dataclass
class RunConfig:
    command: str
    preset: str | None = None
    params: dict[str, float] = field(default_factory=dict)
    spec_file: str | None = None
    spec_json: str | None = None
    N: int | None = None
    grid_points: int | None = None
    x_lo: float | None = None
    x_hi: float | None = None
    tol: float | None = None
    out: str | None = None
    level: int = 0
    n_max: int = 10

    def model(self) -> ModelSpec:
        sources = [s for s in (self.preset, self.spec_file, self.spec_json) if s is not None]
        if len(sources) != 1:
            raise ModelError("give exactly one of --preset, --spec-file, --spec")
        if self.preset is not None:
            return get_preset(self.preset).instantiate(self.params, 0 if self.N is None else self.N)
        if self.params:
            raise ModelError(f"family parameters {sorted(self.params)} only apply to --preset")
        if self.spec_file is not None:
            try:
                with open(self.spec_file) as fh:
                    text = fh.read()
            except OSError as exc:
                raise ModelError(f"cannot read {self.spec_file}: {exc}") from exc
        else:
            text = self.spec_json
        spec = ModelSpec.from_json(text)
        return spec if self.N is None else spec.with_N(self.N)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _checked(cfg: RunConfig) -> ModelSpec:
    spec = cfg.model()
    require_generated(spec)
    report = validate_model(spec)
    if not report.valid:
        msgs = "; ".join(f"{d.code}: {d.message}" for d in report.diagnostics if d.severity == "error")
        raise ModelError(f"invalid model: {msgs}")
    return spec


def cmd_catalog(cfg: RunConfig) -> int:
    _emit(cfg, "".join(json.dumps(p.to_dict()) + "\n" for p in list_presets()))
    return EXIT_OK


def cmd_solve(cfg: RunConfig) -> int:
    spec = _checked(cfg)
    cls = require_generated(spec)
    levels = spectral_levels(spec)
    doc = {
        "spec": spec.to_dict(),
        "solvability": {"class": cls.kind.value, "m": cls.m, "n": cls.n},
        "validation": validate_model(spec).to_dict(),
        "verdict": endpoint_analysis(spec).verdict.value,
        **spectral_document(spec, levels),
    }
    _emit(cfg, _dumps(doc))
    return EXIT_OK


def cmd_potential(cfg: RunConfig) -> int:
    spec = _checked(cfg)
    form, _ = canonicalize(spec)
    levels = spectral_levels(spec)
    if not 0 <= cfg.level < len(levels):
        raise ModelError(f"--level must lie in 0..{len(levels) - 1}")
    lo, hi = default_window(form)
    lo = lo if cfg.x_lo is None else cfg.x_lo
    hi = hi if cfg.x_hi is None else cfg.x_hi
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ModelError(f"bad window [{lo}, {hi}]")
    x = np.linspace(lo, hi, cfg.grid_points or 401)
    asm = assemble_potential(spec, levels[cfg.level].level)
    rows = grid_csv_rows(spec, levels[cfg.level], x)
    buf = io.StringIO()
    terms = {"terms": {k: complex_to_json(v) for k, v in asm.terms.items()},
             "constant": complex_to_json(asm.constant), "level": levels[cfg.level].n,
             "E": complex_to_json(levels[cfg.level].energy)}
    buf.write("# " + json.dumps(terms) + "\n")
    np.savetxt(buf, rows, fmt="%.17g", delimiter=",", header="x,V,re_phi,im_phi", comments="")
    _emit(cfg, buf.getvalue())
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    spec = _checked(cfg)
    vc = VerifyConfig()
    kw = {}
    if cfg.grid_points:
        kw["grid_points"] = cfg.grid_points
    if cfg.tol is not None:
        kw["bae_tol"] = cfg.tol
    vc = VerifyConfig(**{**vc.__dict__, **kw, "x_lo": cfg.x_lo, "x_hi": cfg.x_hi})
    report = verify_model(spec, vc)
    _emit(cfg, _dumps(report.to_dict()))
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_spectrum(cfg: RunConfig) -> int:
    spec = _checked(cfg)
    ladder = exact_spectrum(spec, cfg.n_max)
    buf = io.StringIO()
    for note in ladder.notes:
        buf.write(f"# {note}\n")
    buf.write("n,re_E,im_E,beyond_turnover\n")
    for n, (E, b) in enumerate(zip(ladder.energies, ladder.beyond_turnover)):
        buf.write(f"{n},{E.real:.17g},{E.imag:.17g},{int(b)}\n")
    _emit(cfg, buf.getvalue())
    return EXIT_OK


COMMANDS = {"catalog": cmd_catalog, "solve": cmd_solve, "potential": cmd_potential,
            "verify": cmd_verify, "spectrum": cmd_spectrum}


def _kv(text: str) -> tuple[str, float]:
    k, sep, v = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    return k.strip(), float(v)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qesqnm", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", help="list presets as JSON lines").add_argument("--out")
    for name, hlp in (("solve", "levels, roots, energies and mode classes as JSON"),
                      ("potential", "CSV of x, V(x) and one eigenfunction"),
                      ("verify", "run the verification checks; exit 3 on failure"),
                      ("spectrum", "closed-form ladder for A2 = 0 models")):
        p = sub.add_parser(name, help=hlp)
        src = p.add_argument_group("model input")
        src.add_argument("--preset")
        src.add_argument("--spec-file")
        src.add_argument("--spec", dest="spec_json", help="inline JSON model")
        src.add_argument("--N", type=int)
        fam = p.add_argument_group("family parameters")
        for flag in ("alpha", "c", "d", "a", "b", "A0", "A1", "A2"):
            fam.add_argument(f"--{flag}", type=float)
        fam.add_argument("--gamma-param", type=float)
        fam.add_argument("--param", type=_kv, action="append", default=[], metavar="NAME=VALUE")
        p.add_argument("--grid-points", type=int)
        p.add_argument("--x-lo", type=float)
        p.add_argument("--x-hi", type=float)
        p.add_argument("--tol", type=float)
        p.add_argument("--out")
        if name == "potential":
            p.add_argument("--level", type=int, default=0)
        if name == "spectrum":
            p.add_argument("--n-max", type=int, default=10)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {name: getattr(ns, flag) for flag, name in _PARAM_FLAGS.items()
              if getattr(ns, flag, None) is not None}
    params.update(dict(getattr(ns, "param", [])))
    fields = {k: getattr(ns, k) for k in ("preset", "spec_file", "spec_json", "N", "grid_points", "x_lo",
                                          "x_hi", "tol", "out", "level", "n_max") if hasattr(ns, k)}
    return RunConfig(ns.command, params=params, **fields)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    cfg = config_from_args(ns)
    try:
        return COMMANDS[cfg.command](cfg)
    except UnsupportedModelError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ModelError, PresetError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
