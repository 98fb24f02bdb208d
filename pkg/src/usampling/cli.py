"""``usampling`` command line.

Subcommands::

    usampling analyze      --scenario S.json [--out DIR] [--tolerance T]
    usampling design       --scenario S.json --out DIR [--format json|csv]
    usampling sample       --scenario S.json [--input F.json | --seed N] --out DIR
    usampling reconstruct  --kit DIR/kit.json --samples DIR/samples.json [--reference F.json] --out DIR
    usampling demo NAME    [--out DIR] [--seed N]
    usampling scenario NAME [--out FILE]

Exit codes: 0 success, 1 usage or input error, 2 not recoverable.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import (
    ContractError,
    DegenerateGeneratorsError,
    DomainError,
    InvalidSpecError,
    NotRecoverableError,
    ReconstructionMismatchError,
)
from .frames import frame_analysis
from .hmodels import riesz_check
from .sampler import consistency_residual, reconstruct
from .scenario import (
    DEMOS,
    bundled_names,
    bundled_scenario,
    kit_from_json,
    kit_to_json,
    load_scenario,
    random_test_vector,
    samples_from_json,
    samples_to_json,
    vector_from_json,
    vector_to_json,
)
from .serialize import bundle_to_json, complex_to_json, dump_json, load_json, read_csv, write_csv

EXIT_OK, EXIT_INPUT, EXIT_UNRECOVERABLE = 0, 1, 2
WARN_RESIDUAL = 1e-9


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    return f"{v:.12g}"


def _xi(xi) -> str:
    return "(" + ",".join(str(int(c)) for c in xi) + ")"


def _open_scenario(args):
    path = Path(args.scenario)
    if not path.is_file():
        raise InvalidSpecError(f"scenario file not found: {path}")
    return load_scenario(load_json(path), tolerance=args.tolerance)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _read_samples(path) -> np.ndarray:
    path = Path(path)
    if path.suffix == ".csv":
        cols = read_csv(path)
        return np.stack([cols[k] for k in sorted(cols, key=lambda s: int(s[1:]))])
    return samples_from_json(load_json(path))


def _read_vector(path, scenario=None) -> np.ndarray:
    path = Path(path)
    if path.suffix == ".csv":
        return read_csv(path)["f"]
    return vector_from_json(load_json(path), scenario)


def _sample_columns(samples) -> dict:
    return {f"L{m + 1}": row for m, row in enumerate(samples)}


# ---------------------------------------------------------------- commands


def cmd_analyze(args) -> int:
    sc = _open_scenario(args)
    report = frame_analysis(sc.system, tol=sc.tolerance)
    riesz = riesz_check(sc.generators, tol=sc.tolerance)
    M, N = sc.system.rows, sc.system.cols
    print(f"M={M} N={N} group={list(sc.group.orders)}")
    print(f"alpha_A={_fmt(report.alpha)} beta_A={_fmt(report.beta)} delta_A={_fmt(report.delta)} worst_xi={_xi(report.worst_xi)}")
    print(f"alpha_Phi={_fmt(riesz.alpha)} beta_Phi={_fmt(riesz.beta)} riesz={riesz.is_riesz}")
    ok = report.is_frame and riesz.is_riesz
    print("recoverable" if ok else f"not recoverable (threshold {_fmt(report.threshold)})")
    if args.out:
        dump_json({"schema": "usampling.report/1", "system": report.to_json(), "riesz": riesz.to_json(), "recoverable": ok}, _outdir(args) / "report.json")
    return EXIT_OK if ok else EXIT_UNRECOVERABLE


def cmd_design(args) -> int:
    sc = _open_scenario(args)
    kit = sc.design()  # raises before anything is written
    out = _outdir(args)
    dump_json(kit_to_json(kit, sc), out / "kit.json")
    if args.format == "csv":
        write_csv(out / "S.csv", {f"S{m + 1}": s for m, s in enumerate(kit.S)})
    r = kit.report
    print(f"designed kit: M={kit.A.rows} N={kit.A.cols} delta_A={_fmt(r.delta)} duality_deviation={_fmt(kit.duality_deviation)}")
    print(f"noise_amplification={_fmt(kit.noise_amplification)} ill_conditioned={kit.ill_conditioned}")
    print(f"wrote {out / 'kit.json'}")
    return EXIT_OK


def cmd_sample(args) -> int:
    sc = _open_scenario(args)
    f = _read_vector(args.input, sc) if args.input else random_test_vector(sc, args.seed)
    samples = sc.sample(f)
    out = _outdir(args)
    if args.format == "csv":
        write_csv(out / "samples.csv", _sample_columns(samples))
        write_csv(out / "f.csv", {"f": f})
    else:
        dump_json(samples_to_json(samples, sc.group), out / "samples.json")
        dump_json(vector_to_json(f), out / "f.json")
    print(f"sampled M={samples.shape[0]} channels over {samples.shape[1]} group elements; wrote {out}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    kit, sc = kit_from_json(load_json(args.kit))
    samples = _read_samples(args.samples)
    x, f = reconstruct(kit, samples)
    out = _outdir(args)
    if args.format == "csv":
        write_csv(out / "reconstruction.csv", {"f": f})
    else:
        dump_json(
            {"schema": "usampling.reconstruction/1", "f": complex_to_json(f), "coefficients": bundle_to_json(sc.full_coefficients(x))},
            out / "reconstruction.json",
        )
    res = consistency_residual(kit, samples)
    print(f"consistency_residual={_fmt(res)}")
    if res > WARN_RESIDUAL:
        print(f"warning: samples are not consistent with the kit (residual {res:.3e}); output is a least-squares fit", file=sys.stderr)
    if args.reference:
        ref = _read_vector(args.reference, sc)
        if ref.shape != f.shape:
            raise ContractError(f"reference has length {ref.size}, reconstruction has {f.size}")
        n = np.linalg.norm(ref)
        err = np.linalg.norm(f - ref) / n if n > 0 else np.linalg.norm(f)
        print(f"relative_error={_fmt(err)}")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        print(f"unknown demo {args.name!r}; available: {', '.join(DEMOS)}", file=sys.stderr)
        return EXIT_INPUT
    sc = load_scenario(bundled_scenario(args.name), tolerance=args.tolerance)
    kit = sc.design()
    f = random_test_vector(sc, args.seed)
    samples = sc.sample(f)
    _, f_rec = reconstruct(kit, samples)
    err = np.linalg.norm(f_rec - f) / np.linalg.norm(f)
    out = Path(args.out) if args.out else Path(args.name)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "f.csv", {"f": f, "f_rec": f_rec})
    write_csv(out / "samples.csv", _sample_columns(samples))
    write_csv(out / "S.csv", {f"S{m + 1}": s for m, s in enumerate(kit.S)})
    r = kit.report
    M, N = kit.A.rows, kit.A.cols
    if sc.decomposition is not None:
        L = sc.decomposition.index
        n0 = sc.base_generators.N
        print(f"M={M} >= N*L={n0}*{L}={n0 * L} enforced (index-{L} subgroup)")
    if sc.model.kind == "crystallographic":
        print(f"point group of order {len(sc.model.point_action)} gives N={N} generators")
    print(
        f"demo {args.name}: M={M} N={N} delta_A={_fmt(r.delta)} alpha_A={_fmt(r.alpha)} "
        f"beta_A={_fmt(r.beta)} round_trip_error={err:.3e}"
    )
    return EXIT_OK


def cmd_scenario(args) -> int:
    try:
        doc = bundled_scenario(args.name)
    except KeyError:
        print(f"unknown scenario {args.name!r}; available: {', '.join(bundled_names())}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        dump_json(doc, args.out)
    else:
        import json

        print(json.dumps(doc, indent=2, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="usampling", description="Regular sampling and reconstruction in U-invariant subspaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, scenario=True, out_required=False):
        if scenario:
            sp.add_argument("--scenario", required=True, metavar="PATH", help="scenario JSON file")
        sp.add_argument("--out", required=out_required, metavar="DIR", help="output directory")
        sp.add_argument("--tolerance", type=float, default=None, help="rank tolerance (default 1e-12 or the scenario's)")
        sp.add_argument("--seed", type=int, default=0, help="seed for generated inputs")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("analyze", help="frame and Riesz bounds; exit 2 if not recoverable")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("design", help="write a reconstruction kit")
    common(sp, out_required=True)
    sp.set_defaults(func=cmd_design)

    sp = sub.add_parser("sample", help="sample a vector (or a random element of V_Phi)")
    common(sp, out_required=True)
    sp.add_argument("--input", metavar="PATH", help="vector JSON {'f': ...} or {'coefficients': ...}, or CSV with column f")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("reconstruct", help="recover f from samples with a kit")
    common(sp, scenario=False, out_required=True)
    sp.add_argument("--kit", required=True, metavar="PATH")
    sp.add_argument("--samples", required=True, metavar="PATH")
    sp.add_argument("--reference", metavar="PATH", help="true f, to report the relative error")
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("demo", help=f"run a bundled end-to-end scenario ({', '.join(DEMOS)})")
    sp.add_argument("name")
    common(sp, scenario=False)
    sp.set_defaults(func=cmd_demo)

    sp = sub.add_parser("scenario", help="print or write a bundled scenario file")
    sp.add_argument("name")
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_scenario)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NotRecoverableError, DegenerateGeneratorsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNRECOVERABLE
    except (InvalidSpecError, ContractError, DomainError, ReconstructionMismatchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
