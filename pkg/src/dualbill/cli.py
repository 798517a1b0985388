"""Command-line front end: orbits, checks, curve data and period
computations, emitted as JSON lines or RFC-4180 CSV.

Exit codes: 0 success / all checks pass, 1 check failure, 2 usage error,
3 dynamic singularity at the requested start.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass

from .billiards import ALL_FAMILY_TAGS, BilliardFamily, SingularTangencyError, orbit
from .curves import (
    branch_points,
    critical_fiber_components,
    curve_parameter,
    elliptic_model,
    is_regular,
    lattice_closure_residual,
    lift_fiber,
    parametrize_level,
    point_on_level,
)
from .geometry import PhasePoint, conic_point
from .integrals import (
    IndeterminacyError,
    critical_values,
    eval_integral,
    indeterminacy_set,
)
from .numerics import INF, SphereValue, Tolerance, principal_sqrt
from .verify import (
    check_abel_translation,
    check_area_form,
    check_conservation,
    check_equivalences,
    check_involution,
    check_jacobian,
    check_tables,
    check_translation,
    default_suite,
    run_suite,
)

USAGE_ERROR = 2
SINGULAR_ERROR = 3


def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, complex):
        return '{"re":%s,"im":%s}' % (_fmt_float(v.real), _fmt_float(v.imag))
    if isinstance(v, SphereValue):
        return '"inf"' if v.is_inf else _json_value(v.value)
    if isinstance(v, str):
        out = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(v, dict):
        inner = ",".join(f"{_json_value(str(k))}:{_json_value(x)}" for k, x in v.items())
        return "{%s}" % inner
    if isinstance(v, (list, tuple)):
        return "[%s]" % ",".join(_json_value(x) for x in v)
    return _json_value(str(v))


def _flatten_csv(v, key: str, row: dict) -> None:
    if isinstance(v, complex):
        row[f"{key}_re"] = _fmt_float(v.real)
        row[f"{key}_im"] = _fmt_float(v.imag)
    elif isinstance(v, SphereValue):
        if v.is_inf:
            row[f"{key}_re"] = "inf"
            row[f"{key}_im"] = "inf"
        else:
            _flatten_csv(v.value, key, row)
    elif isinstance(v, float):
        row[key] = _fmt_float(v)
    elif isinstance(v, (dict, list, tuple)):
        row[key] = _json_value(v)
    elif v is None:
        row[key] = ""
    else:
        row[key] = str(v)


class RecordWriter:
    """Streams records as JSON lines or CSV with identical numeric payloads."""

    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream
        self._csv = None
        self._fields: list[str] | None = None

    def write(self, record: dict) -> None:
        if self.fmt == "json":
            inner = ",".join(
                f"{_json_value(str(k))}:{_json_value(v)}" for k, v in record.items()
            )
            self.stream.write("{%s}\n" % inner)
            return
        row: dict = {}
        for k, v in record.items():
            _flatten_csv(v, k, row)
        if self._csv is None:
            self._fields = list(row)
            self._csv = csv.DictWriter(
                self.stream, fieldnames=self._fields, lineterminator="\r\n"
            )
            self._csv.writeheader()
        self._csv.writerow(row)


def _parse_lambda(text: str) -> SphereValue:
    text = text.strip().lower()
    if text == "inf":
        return INF
    parts = text.split(",")
    try:
        re_part = float(parts[0])
        im_part = float(parts[1]) if len(parts) > 1 else 0.0
    except (ValueError, IndexError) as exc:
        raise argparse.ArgumentTypeError(
            "lambda must be RE, RE,IM, or the token 'inf'"
        ) from exc
    return SphereValue(complex(re_part, im_part))


def _family_from(args) -> BilliardFamily:
    return BilliardFamily.parse(args.family, args.n)


def _tolerance_from(args) -> Tolerance:
    return Tolerance(args.abs_eps, args.rel_eps, args.inf_threshold)


@dataclass
class RunConfig:
    """Parsed command configuration; values round-trip through the record
    serialization (complex as re/im pairs, infinity as the string 'inf')."""

    family: str
    n: int | None
    lam: SphereValue | None
    seed: int
    steps: int
    fmt: str
    output: str | None
    tolerance: Tolerance

    @staticmethod
    def from_args(args) -> "RunConfig":
        return RunConfig(
            family=getattr(args, "family", None),
            n=getattr(args, "n", None),
            lam=getattr(args, "lam", None),
            seed=_seed_of(args),
            steps=getattr(args, "steps", 0),
            fmt=args.format,
            output=args.output,
            tolerance=_tolerance_from(args),
        )


def _writer_for(args):
    if args.output:
        stream = open(args.output, "w", encoding="utf-8", newline="")
    else:
        stream = sys.stdout
    return RecordWriter(args.format, stream), stream


def _add_common(sub):
    sub.add_argument("--family", choices=ALL_FAMILY_TAGS, required=True)
    sub.add_argument("--n", type=int, default=None, help="N for the a-families")
    sub.add_argument(
        "--lambda", dest="lam", type=_parse_lambda, default=None,
        help="level value: RE, RE,IM or 'inf'",
    )
    _add_output(sub)


def _add_output(sub):
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--output", default=None, help="path (default: stdout)")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--abs-eps", type=float, default=1e-10)
    sub.add_argument("--rel-eps", type=float, default=1e-9)
    sub.add_argument("--inf-threshold", type=float, default=1e12)


def _seed_of(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DUALBILL_SEED")
    return int(env) if env else 42


def cmd_orbit(args) -> int:
    import random

    config = RunConfig.from_args(args)
    family = _family_from(args)
    if config.lam is None or config.lam.is_inf:
        print("orbit needs a finite --lambda", file=sys.stderr)
        return USAGE_ERROR
    lam = config.lam.value
    tol = config.tolerance
    rng = random.Random(config.seed)
    try:
        if args.start_tau is not None:
            x0 = lift_fiber(family, lam, args.start_tau, args.branch)
        elif family.tag in ("c1", "c2"):
            q = point_on_level(family, lam, rng)
            z, w = q.affine_pair()
            s = principal_sqrt(z * z - w)
            x0 = PhasePoint(q, conic_point(z + s if args.branch == "+" else z - s))
        else:
            x0 = lift_fiber(family, lam, 1.7 if family.is_a else 2.7, args.branch)
    except SingularTangencyError as exc:
        print(f"start point is singular: {exc}", file=sys.stderr)
        return SINGULAR_ERROR
    except (ValueError, RuntimeError) as exc:
        print(f"cannot build the start point: {exc}", file=sys.stderr)
        return USAGE_ERROR
    rec = orbit(family, x0, config.steps, tol)
    if rec.reason == "hit-singularity" and rec.steps_taken == 0:
        print(f"start point is singular: {rec.detail}", file=sys.stderr)
        return SINGULAR_ERROR
    writer, stream = _writer_for(args)
    try:
        for k, x in enumerate(rec.points):
            record: dict = {"index": k}
            record["q_z"] = x.q.z_sphere()
            record["q_w"] = (
                SphereValue(x.q.w / x.q.t) if x.q.t != 0 else INF
            )
            record["p_z"] = x.p.z_sphere()
            try:
                record["integral"] = eval_integral(family, x.q)
            except IndeterminacyError:
                record["integral"] = None
            try:
                record["parameter"] = curve_parameter(family, x)
            except ValueError:
                record["parameter"] = None
            writer.write(record)
        if rec.reason != "completed":
            if args.format == "json":
                writer.write(
                    {"index": "termination", "reason": rec.reason, "detail": rec.detail}
                )
            else:
                # CSV rows share one schema; report the early stop on stderr
                print(
                    f"orbit stopped early: {rec.reason} ({rec.detail})",
                    file=sys.stderr,
                )
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


def _named_check(name: str, args, seed: int):
    family = BilliardFamily.parse(args.family, args.n) if args.family else None
    lam = args.lam.value if args.lam is not None and not args.lam.is_inf else None
    corrupt = getattr(args, "corrupt", False)
    if name != "equivalences" and family is None:
        raise ValueError(
            f"check {name!r} needs --family (or use --all for the full suite)"
        )
    if name == "involution":
        return [check_involution(family, 1000, seed, corrupt=corrupt)]
    if name == "conservation":
        from .verify import CONSERVATION_CASES

        cases = (
            [(lam, None, "+")]
            if lam is not None
            else CONSERVATION_CASES[family.tag]
        )
        out = []
        for cl, ct, cb in cases:
            out.append(
                check_conservation(
                    family, cl, 500, seed, start=ct, branch=cb, corrupt=corrupt
                )
            )
        return out
    if name == "translation":
        return [check_translation(family, lam if lam is not None else 1.0, 50, seed, corrupt=corrupt)]
    if name == "abel":
        lamv = lam if lam is not None else (1.0 if family.tag == "d" else 2.0)
        start = 1.3 if family.tag == "d" else 2.7
        return [check_abel_translation(family, lamv, 20, seed, start=start, corrupt=corrupt)]
    if name == "area":
        return [check_area_form(family, 200, seed, corrupt=corrupt)]
    if name == "jacobian":
        return [check_jacobian(family, 200, seed, corrupt=corrupt)]
    if name == "tables":
        return [check_tables(family, seed, corrupt=corrupt)]
    if name == "equivalences":
        return [check_equivalences(seed, corrupt=corrupt)]
    raise ValueError(f"unknown check {name!r}")


def cmd_check(args) -> int:
    seed = _seed_of(args)
    if args.all or not args.names:
        suite = default_suite(seed)
        names = args.names or None
        reports = run_suite(suite, names)
    else:
        try:
            reports = []
            for name in args.names:
                reports.extend(_named_check(name, args, seed))
        except (ValueError, RuntimeError, AttributeError, TypeError) as exc:
            print(str(exc), file=sys.stderr)
            return USAGE_ERROR
    writer, stream = _writer_for(args)
    try:
        for r in reports:
            writer.write(r.to_dict())
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0 if all(r.status == "pass" for r in reports) else 1


def cmd_curve(args) -> int:
    family = _family_from(args)
    if args.lam is None:
        print("curve needs --lambda", file=sys.stderr)
        return USAGE_ERROR
    lam = args.lam
    writer, stream = _writer_for(args)
    try:
        if args.branch_points:
            try:
                pts = branch_points(family, lam.value if not lam.is_inf else lam)
            except ValueError as exc:
                print(str(exc), file=sys.stderr)
                return USAGE_ERROR
            for k, b in enumerate(pts):
                writer.write({"kind": "branch-point", "index": k, "parameter": b})
        if args.components:
            try:
                comps = critical_fiber_components(family, lam)
            except ValueError as exc:
                print(str(exc), file=sys.stderr)
                return USAGE_ERROR
            for k, comp in enumerate(comps):
                writer.write(
                    {
                        "kind": "component",
                        "index": k,
                        "name": comp.name,
                        "degree": comp.degree,
                        "multiplicity": comp.multiplicity,
                        "parametrized": comp.parametrize is not None,
                    }
                )
        if args.periods:
            if family.tag not in ("b1", "b2", "d") or lam.is_inf or not is_regular(family, lam):
                print("periods need a b/d family at a regular value", file=sys.stderr)
                return USAGE_ERROR
            model = elliptic_model(family, lam.value)
            w1, w2 = model.periods
            closure = lattice_closure_residual(model)
            writer.write(
                {
                    "kind": "periods",
                    "period1": w1,
                    "period2": w2,
                    "lattice_closure_residual": closure,
                }
            )
        if args.parametrize:
            if family.tag in ("c1", "c2"):
                print(
                    "c-family level curves are elliptic: no rational parametrization",
                    file=sys.stderr,
                )
                return USAGE_ERROR
            if lam.is_inf or not is_regular(family, lam):
                print("--parametrize needs a regular value", file=sys.stderr)
                return USAGE_ERROR
            import random

            rng = random.Random(_seed_of(args))
            for k in range(args.parametrize):
                t = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
                pt = parametrize_level(family, lam.value, t)
                writer.write(
                    {
                        "kind": "point",
                        "index": k,
                        "t": t,
                        "z": pt.z_sphere(),
                        "w": SphereValue(pt.w / pt.t) if pt.t != 0 else INF,
                    }
                )
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


def cmd_families(args) -> int:
    writer, stream = _writer_for(args)
    try:
        for tag in ALL_FAMILY_TAGS:
            fam = BilliardFamily.parse(tag, 1 if tag in ("a1", "a2") else None)
            record = {
                "family": tag,
                "takes_n": tag in ("a1", "a2"),
                "base_points": [
                    {"z": p.coords[0], "w": p.coords[1], "t": p.coords[2]}
                    for p in indeterminacy_set(fam)
                ],
                "critical_values": list(critical_values(fam)),
            }
            writer.write(record)
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualbill",
        description="Rationally integrable dual billiards on the parabola: "
        "orbits, invariants, curve data and property checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_orbit = sub.add_parser("orbit", help="iterate the billiard map")
    _add_common(p_orbit)
    p_orbit.add_argument("--steps", type=int, default=100)
    p_orbit.add_argument(
        "--start-tau", "--start-t", dest="start_tau", type=complex, default=None,
        help="start parameter on the level curve",
    )
    p_orbit.add_argument("--branch", choices=("+", "-"), default="+")
    p_orbit.set_defaults(func=cmd_orbit)

    p_check = sub.add_parser("check", help="run property checks")
    p_check.add_argument("names", nargs="*", help="check kinds or name prefixes")
    p_check.add_argument("--all", action="store_true")
    p_check.add_argument("--family", choices=ALL_FAMILY_TAGS, default=None)
    p_check.add_argument("--n", type=int, default=None)
    p_check.add_argument("--lambda", dest="lam", type=_parse_lambda, default=None)
    p_check.add_argument(
        "--corrupt", action="store_true",
        help="harness self-test: run the named checks with corrupted inputs "
        "(they must fail and the exit code must be 1)",
    )
    _add_output(p_check)
    p_check.set_defaults(func=cmd_check)

    p_curve = sub.add_parser("curve", help="level-curve data")
    _add_common(p_curve)
    p_curve.add_argument("--branch-points", action="store_true")
    p_curve.add_argument("--components", action="store_true")
    p_curve.add_argument("--periods", action="store_true")
    p_curve.add_argument(
        "--parametrize", type=int, default=0, metavar="N",
        help="emit N sampled curve points",
    )
    p_curve.set_defaults(func=cmd_curve)

    p_fam = sub.add_parser("families", help="list the seven families")
    _add_output(p_fam)
    p_fam.set_defaults(func=cmd_families)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
