"""Command-line sweeps, verification suite, and property calculators.

Subcommands: estimate (cost sweep CSV/JSON), lambda (norm table),
qubits (width and qubit table), verify (simulation check suite), props
(voltage / diffusivity / stability calculators). Exit codes: 0 on
success, 1 when a verification check fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources

from .constants import HARTREE_TO_EV
from .costing import cost_params_for, select_bit_widths, toffoli_cost_full
from .crystal import GeometryError, PlaneWaveGrid, SchemaError, parse_material
from .hamiltonian.lcu import lcu_norms
from .properties import (
    DiffusionInputs,
    EnergySet,
    StabilityInputs,
    cell_voltage,
    diffusivity,
    stability_temperature,
)

CSV_COLUMNS = [
    "n_p",
    "N",
    "lambda_T",
    "lambda_U",
    "lambda_V",
    "lambda_nu",
    "lambda_total",
    "calls",
    "toffoli_per_call",
    "toffoli_total",
    "qubits",
    "runtime_s",
]
NP_RANGE_LIMITS = (2, 12)
SIMULATOR_ETA_CAP = 3


def _parse_np_range(text: str) -> list[int]:
    try:
        if ":" in text:
            lo_text, hi_text = text.split(":", 1)
            lo, hi = int(lo_text), int(hi_text)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty n_p range {text!r}")
    if lo < NP_RANGE_LIMITS[0] or hi > NP_RANGE_LIMITS[1]:
        raise argparse.ArgumentTypeError(
            f"n_p range must lie within [{NP_RANGE_LIMITS[0]}, {NP_RANGE_LIMITS[1]}]"
        )
    return list(range(lo, hi + 1))


def _load_material(path: str | None):
    if path is None:
        document = resources.files("pwqpe").joinpath("data/li2fesio4.json").read_text()
    else:
        with open(path, "r", encoding="utf-8") as handle:
            document = handle.read()
    return parse_material(document)


def _norm_fields(grid: PlaneWaveGrid, norms) -> dict:
    return {
        "n_p": grid.n_p,
        "N": grid.size,
        "lambda_T": norms.lambda_T,
        "lambda_U": norms.lambda_U,
        "lambda_V": norms.lambda_V,
        "lambda_nu": norms.lambda_nu,
        "lambda_total": norms.lambda_total,
    }


def _write_csv(rows: list[dict], columns: list[str], path: str | None) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    text = buffer.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _write_json(document: dict, path: str | None) -> None:
    text = json.dumps(document, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def cmd_estimate(args: argparse.Namespace) -> int:
    material = _load_material(args.material)
    cell = material.cell
    aa = "auto" if args.aa == "auto" else int(args.aa)
    rows = []
    for n_p in args.np_range:
        grid = PlaneWaveGrid(n_p)
        norms = lcu_norms(
            material, cell, grid, aa_rounds=aa, convention=args.lambda_nu_convention
        )
        aa_flag = 3 if norms.aa_rounds == 1 else 1
        for eps_ev in args.eps_total:
            eps_ha = eps_ev / HARTREE_TO_EV
            widths = select_bit_widths(eps_ha, norms)
            params = cost_params_for(material, cell, grid, widths, aa_flag)
            for d in args.d:
                for clock_hz in args.clock_hz:
                    report = toffoli_cost_full(params, norms, d=d, clock_hz=clock_hz)
                    row = _norm_fields(grid, norms)
                    row.update(
                        {
                            "calls": report.calls,
                            "toffoli_per_call": report.toffoli_per_call,
                            "toffoli_total": report.toffoli_total,
                            "qubits": report.qubits,
                            "runtime_s": report.runtime_seconds,
                            "itemized": report.itemized,
                            "eps_total_ev": eps_ev,
                            "d": d,
                            "clock_hz": clock_hz,
                            "aa_rounds": norms.aa_rounds,
                            "lambda_nu_convention": args.lambda_nu_convention,
                        }
                    )
                    rows.append(row)
    _write_csv(rows, CSV_COLUMNS, args.csv_out)
    if args.json_out is not None:
        _write_json({"rows": rows}, args.json_out)
    return 0


def cmd_lambda(args: argparse.Namespace) -> int:
    material = _load_material(args.material)
    cell = material.cell
    aa = "auto" if args.aa == "auto" else int(args.aa)
    columns = CSV_COLUMNS[:7] + ["aa_rounds", "p_nu"]
    rows = []
    for n_p in args.np_range:
        grid = PlaneWaveGrid(n_p)
        norms = lcu_norms(
            material, cell, grid, aa_rounds=aa, convention=args.lambda_nu_convention
        )
        row = _norm_fields(grid, norms)
        row.update({"aa_rounds": norms.aa_rounds, "p_nu": norms.p_nu})
        rows.append(row)
    _write_csv(rows, columns, args.csv_out)
    if args.json_out is not None:
        _write_json({"rows": rows}, args.json_out)
    return 0


def cmd_qubits(args: argparse.Namespace) -> int:
    material = _load_material(args.material)
    cell = material.cell
    aa = "auto" if args.aa == "auto" else int(args.aa)
    columns = ["n_p", "N", "eps_total_ev", "n_M", "n_R", "n_T", "b_r", "qubits", "leading"]
    rows = []
    for n_p in args.np_range:
        grid = PlaneWaveGrid(n_p)
        norms = lcu_norms(
            material, cell, grid, aa_rounds=aa, convention=args.lambda_nu_convention
        )
        aa_flag = 3 if norms.aa_rounds == 1 else 1
        for eps_ev in args.eps_total:
            eps_ha = eps_ev / HARTREE_TO_EV
            widths = select_bit_widths(eps_ha, norms)
            params = cost_params_for(material, cell, grid, widths, aa_flag)
            report = toffoli_cost_full(params, norms)
            rows.append(
                {
                    "n_p": n_p,
                    "N": grid.size,
                    "eps_total_ev": eps_ev,
                    "n_M": widths.n_M,
                    "n_R": widths.n_R,
                    "n_T": widths.n_T,
                    "b_r": widths.b_r,
                    "qubits": report.qubits,
                    "leading": 3 * material.eta * n_p,
                }
            )
    _write_csv(rows, columns, args.csv_out)
    if args.json_out is not None:
        _write_json({"rows": rows}, args.json_out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    from .statesim.verify import reference_instances, run_verification_suite, verification_report

    if args.eta_cap > SIMULATOR_ETA_CAP:
        sys.stderr.write(
            f"error: --eta-cap {args.eta_cap} exceeds the simulator limit {SIMULATOR_ETA_CAP}\n"
        )
        return 2
    kept = [i for i in reference_instances() if i["material"].eta <= args.eta_cap]
    if not kept:
        sys.stderr.write("error: --eta-cap excludes every reference instance\n")
        return 2
    results = run_verification_suite(seed=args.seed, instances=kept)
    report = verification_report(results)
    _write_json(report, args.json_out)
    return 0 if report["all_passed"] else 1


def cmd_props(args: argparse.Namespace) -> int:
    inputs = {}
    if args.energies_json is not None:
        with open(args.energies_json, "r", encoding="utf-8") as handle:
            inputs = json.load(handle)
    records = []

    voltage_args = args.voltage or inputs.get("voltage")
    if voltage_args is not None:
        if isinstance(voltage_args, dict):
            energy_set = EnergySet(**voltage_args)
        else:
            energy_set = EnergySet(
                e_lithiated=voltage_args[0],
                e_delithiated=voltage_args[1],
                e_lithium=voltage_args[2],
                delta_x=args.delta_x,
                n=args.n,
            )
        records.append({"property": "voltage", "volts": cell_voltage(energy_set)})

    diffusion_args = args.diffusivity or inputs.get("diffusivity")
    if diffusion_args is not None:
        if isinstance(diffusion_args, dict):
            diff = DiffusionInputs(**diffusion_args)
        else:
            diff = DiffusionInputs(
                hop_distance_m=diffusion_args[0],
                attempt_frequency_hz=diffusion_args[1],
                e_transition_ev=diffusion_args[2],
                e_initial_ev=diffusion_args[3],
                temperature_k=diffusion_args[4],
            )
        records.append({"property": "diffusivity", "m2_per_s": diffusivity(diff)})

    stability_args = args.stability or inputs.get("stability")
    if stability_args is not None:
        if isinstance(stability_args, dict):
            stab = StabilityInputs(**stability_args)
        else:
            stab = StabilityInputs(
                e_rich=stability_args[0],
                e_poor=stability_args[1],
                e_o2=stability_args[2],
                z_prime=stability_args[3],
            )
            if args.s_o2 is not None:
                stab = StabilityInputs(
                    e_rich=stab.e_rich,
                    e_poor=stab.e_poor,
                    e_o2=stab.e_o2,
                    z_prime=stab.z_prime,
                    s_o2_ev_per_k=args.s_o2,
                )
        records.append(
            {"property": "stability_temperature", "kelvin": stability_temperature(stab)}
        )

    if not records:
        sys.stderr.write("error: no property requested; pass --voltage, --diffusivity or --stability\n")
        return 2
    for record in records:
        sys.stdout.write(json.dumps(record) + "\n")
    return 0


def _add_sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--material", default=None, help="material JSON path (default: bundled Li2FeSiO4)")
    parser.add_argument("--np-range", dest="np_range", type=_parse_np_range, default=_parse_np_range("3:4"), help="N or LO:HI, inclusive")
    parser.add_argument("--eps-total", dest="eps_total", type=float, action="append", help="total error budget in eV (repeatable; default 0.043)")
    parser.add_argument("--aa", choices=("auto", "0", "1"), default="auto", help="amplitude-amplification rounds")
    parser.add_argument("--lambda-nu-convention", dest="lambda_nu_convention", choices=("generalized", "cubic"), default="generalized")
    parser.add_argument("--csv-out", dest="csv_out", default=None, help="CSV path (default stdout)")
    parser.add_argument("--json-out", dest="json_out", default=None, help="JSON report path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pwqpe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    estimate = sub.add_parser("estimate", help="Toffoli/qubit/runtime sweep")
    _add_sweep_flags(estimate)
    estimate.add_argument("--d", type=int, action="append", help="surface-code distance (repeatable; default 32)")
    estimate.add_argument("--clock-hz", dest="clock_hz", type=float, action="append", help="logical clock rate (repeatable; default 1e8)")
    estimate.set_defaults(func=cmd_estimate)

    lam = sub.add_parser("lambda", help="LCU norm table")
    _add_sweep_flags(lam)
    lam.set_defaults(func=cmd_lambda)

    qubits = sub.add_parser("qubits", help="bit-width and qubit table")
    _add_sweep_flags(qubits)
    qubits.set_defaults(func=cmd_qubits)

    verify = sub.add_parser("verify", help="run the simulation check suite")
    verify.add_argument("--seed", type=int, default=11)
    verify.add_argument("--eta-cap", dest="eta_cap", type=int, default=2, help="largest encoding instance to run")
    verify.add_argument("--json-out", dest="json_out", default=None)
    verify.set_defaults(func=cmd_verify)

    props = sub.add_parser("props", help="battery property calculators")
    props.add_argument("--voltage", nargs=3, type=float, metavar=("E_LITH", "E_DELITH", "E_LI"), help="energies in hartree")
    props.add_argument("--delta-x", dest="delta_x", type=float, default=1.0)
    props.add_argument("--n", type=int, default=1)
    props.add_argument("--diffusivity", nargs=5, type=float, metavar=("A_M", "NU_HZ", "E_T_EV", "E_I_EV", "T_K"))
    props.add_argument("--stability", nargs=4, type=float, metavar=("E_RICH", "E_POOR", "E_O2", "Z_PRIME"), help="energies in hartree")
    props.add_argument("--s-o2", dest="s_o2", type=float, default=None, help="O2 entropy per molecule in eV/K")
    props.add_argument("--energies-json", dest="energies_json", default=None)
    props.set_defaults(func=cmd_props)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "eps_total") and args.eps_total is None:
        args.eps_total = [0.043]
    if hasattr(args, "d") and args.d is None:
        args.d = [32]
    if hasattr(args, "clock_hz") and args.clock_hz is None:
        args.clock_hz = [1.0e8]
    try:
        return args.func(args)
    except (SchemaError, GeometryError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
