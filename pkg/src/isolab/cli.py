"""Command-line interface.

Subcommands: verify, spectrum, focal, tight, taut-focal, totally-focal,
export-mesh, export-curves.  All reports are JSON (deterministic given
--seed: configuration echo included, no timestamps).  Exit codes: 0 when all
asserted checks pass, 1 on verification failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import (FamilyRejectedError, InputContractError, IsolabError,
                     MeshExportError)
from .families import catalog, family_from_json_obj, verify_munzner
from .focal import exp_param_check, focal_dimension_estimate
from .levelset import sample_points
from .morse import focal_tautness_report, tightness_report, totally_focal_probe
from .shape import isoparametric_check, spectrum_at
from .sphere import SpherePoint
from . import export as export_mod

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="isolab",
        description="Verification laboratory for isoparametric hypersurfaces "
                    "in spheres.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, level=True):
        p.add_argument("--family", required=True,
                       help="great-sphere | clifford | cartan-cubic | "
                            "nomizu-quartic | user-polynomial")
        p.add_argument("--params", default="{}",
                       help="family parameters as JSON, e.g. "
                            "'{\"k\": 1, \"n\": 2}'")
        if level:
            p.add_argument("--level", type=float, default=0.3)
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--poles", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out", default=None, help="write the JSON report here")
        p.add_argument("--format", choices=("json", "csv", "obj"),
                       default="json")

    for name in ("verify", "spectrum", "focal", "tight", "taut-focal",
                 "totally-focal", "export-mesh", "export-curves"):
        p = sub.add_parser(name)
        add_common(p)
        if name == "taut-focal":
            p.add_argument("--side", type=int, choices=(1, -1), default=1)
        if name == "export-mesh":
            p.add_argument("--resolution", type=int, default=64)
            p.add_argument("--pole", default=None,
                           help="projection pole as a JSON list of ambient "
                                "coordinates")
    return parser


def _load_family(args):
    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise _UsageError(f"malformed --params JSON: {exc}") from exc
    if not isinstance(params, dict):
        raise _UsageError("--params must be a JSON object")
    if args.family == "user-polynomial":
        path = params.pop("file", None)
        if path is not None:
            with open(path) as fh:
                obj = json.load(fh)
            return family_from_json_obj(obj)
        return catalog("user-polynomial", **params)
    try:
        return catalog(args.family, **params)
    except TypeError as exc:
        raise _UsageError(f"bad parameters for {args.family}: {exc}") from exc


def _emit(args, payload):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _echo(args, fam):
    return {
        "family": fam.label,
        "params": json.loads(args.params),
        "g": fam.g, "m1": fam.m1, "m2": fam.m2,
        "ambient_dim": fam.ambient_dim,
        "seed": args.seed,
    }


def _cmd_verify(args, fam):
    report = verify_munzner(fam, seed=args.seed + 1234,
                            tol_scale=args.tol or 1e-9)
    payload = {"command": "verify", "config": _echo(args, fam),
               **report.to_dict()}
    _emit(args, payload)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_spectrum(args, fam):
    if args.format == "csv":
        if not args.out:
            raise _UsageError("--format csv needs --out")
        export_mod.export_spectrum_csv(fam, args.level, args.samples,
                                       args.seed, args.out)
        report = isoparametric_check(fam, args.level, args.samples, args.seed,
                                     tol=args.tol or 1e-7)
        return EXIT_PASS if report.passed else EXIT_FAIL
    report = isoparametric_check(fam, args.level, args.samples, args.seed,
                                 tol=args.tol or 1e-7)
    _emit(args, {"command": "spectrum", "config": _echo(args, fam),
                 **report.to_dict()})
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_focal(args, fam):
    pts = sample_points(fam, args.level, max(1, args.samples // 10), args.seed)
    worst_exp = max(exp_param_check(fam, p) for p in pts)
    spacing = []
    for p in pts:
        spec = spectrum_at(p)
        params = sorted(spec.focal_parameters())
        both = params + [t - np.pi for t in params]
        both.sort()
        gaps = np.diff(both + [both[0] + 2 * np.pi])
        spacing.append(float(np.abs(gaps - np.pi / fam.g).max()))
    dims = {"+1": focal_dimension_estimate(fam, 1, seed=args.seed),
            "-1": focal_dimension_estimate(fam, -1, seed=args.seed)}
    tol = args.tol or 1e-7
    passed = worst_exp < 1e-8 and max(spacing) < tol
    _emit(args, {"command": "focal", "config": _echo(args, fam),
                 "worst_profile_error": worst_exp,
                 "worst_spacing_error": max(spacing),
                 "focal_dimensions": dims,
                 "pass": passed})
    return EXIT_PASS if passed else EXIT_FAIL


def _cmd_tight(args, fam):
    report = tightness_report(fam, args.level, num_poles=args.poles,
                              seed=args.seed)
    _emit(args, {"command": "tight", "config": _echo(args, fam),
                 **report.to_dict()})
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_taut_focal(args, fam):
    report = focal_tautness_report(fam, args.side, num_poles=args.poles,
                                   seed=args.seed)
    _emit(args, {"command": "taut-focal", "config": _echo(args, fam),
                 "side": args.side, **report.to_dict()})
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_totally_focal(args, fam):
    probe = totally_focal_probe(fam, args.level, seed=args.seed,
                                num_nonfocal=max(1, args.poles // 2),
                                num_focal=max(1, args.poles // 10))
    _emit(args, {"command": "totally-focal", "config": _echo(args, fam),
                 **probe})
    return EXIT_PASS if probe["pass"] else EXIT_FAIL


def _default_pole(fam, seed):
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0xB0B)))
    for _ in range(100):
        raw = rng.normal(size=fam.ambient_dim)
        p = raw / np.linalg.norm(raw)
        if abs(float(fam.polynomial.value(p))) < 0.9:
            return SpherePoint(p)
    raise InputContractError("no usable projection pole found")


def _cmd_export_mesh(args, fam):
    if not args.out:
        raise _UsageError("export-mesh needs --out")
    if args.pole is not None:
        pole = SpherePoint(np.asarray(json.loads(args.pole), dtype=float))
    else:
        pole = _default_pole(fam, args.seed)
    if fam.ambient_dim != 4:
        export_mod.export_point_cloud_csv(fam, args.level, args.samples,
                                          args.seed, pole, args.out)
        print(f"ambient dimension {fam.ambient_dim} > 4: wrote a CSV point "
              f"cloud to {args.out}")
        return EXIT_PASS
    mesh = export_mod.export_mesh(fam, args.level, pole,
                                  resolution=args.resolution, path=args.out)
    for note in mesh.warnings:
        print(f"warning: {note}")
    print(f"wrote {len(mesh.vertices)} vertices, {len(mesh.faces)} faces "
          f"to {args.out}")
    return EXIT_PASS


def _cmd_export_curves(args, fam):
    if not args.out:
        raise _UsageError("export-curves needs --out")
    export_mod.export_focal_circle_csv(fam, args.level, args.seed, args.out)
    print(f"wrote the normal-circle profile to {args.out}")
    return EXIT_PASS


_COMMANDS = {
    "verify": _cmd_verify,
    "spectrum": _cmd_spectrum,
    "focal": _cmd_focal,
    "tight": _cmd_tight,
    "taut-focal": _cmd_taut_focal,
    "totally-focal": _cmd_totally_focal,
    "export-mesh": _cmd_export_mesh,
    "export-curves": _cmd_export_curves,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        fam = _load_family(args)
        return _COMMANDS[args.command](args, fam)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FamilyRejectedError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except InputContractError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MeshExportError, IsolabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
