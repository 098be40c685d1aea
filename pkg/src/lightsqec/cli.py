"""Command-line interface: one binary, one subcommand per pipeline stage.

Exit codes: 0 success, 1 usage error, 2 runtime error. Every randomized
subcommand prints the effective seed. Outputs are deterministic functions
of (flags, seed): repeating an invocation reproduces files byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional, Sequence

from . import analysis, code as code_mod, decoder, lightsout, maxsat, sim
from .gf2 import BitMatrix, BitVec
from .maxsat import SolveStatus


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        raise _UsageError(message)


def _parse_distances(text: str) -> List[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError as exc:
        raise _UsageError(f"bad distance list {text!r}") from exc


def _parse_probabilities(text: str) -> List[float]:
    """Either a comma list '0.01,0.02' or a range 'start:stop:step' (inclusive)."""
    try:
        if ":" in text:
            start_s, stop_s, step_s = text.split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
            if step <= 0:
                raise ValueError("step must be positive")
            values = []
            k = 0
            while True:
                value = round(start + k * step, 12)
                if value > stop + 1e-12:
                    break
                values.append(value)
                k += 1
            return values
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError as exc:
        raise _UsageError(f"bad probability grid {text!r}") from exc


def _load_code(path: str) -> code_mod.ColorCode:
    with open(path, "r", encoding="utf-8") as handle:
        return code_mod.from_json_dict(json.load(handle))


def _load_check_matrix(path: str) -> BitMatrix:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    return BitMatrix.from_bitvecs(
        [BitVec.from_string(row) for row in data["H"]], cols=int(data["n_qubits"])
    )


def _timeout_seconds(args: argparse.Namespace) -> Optional[float]:
    if getattr(args, "timeout_ms", None) is None:
        return None
    return args.timeout_ms / 1000.0


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_generate_code(args: argparse.Namespace) -> int:
    built = code_mod.build_triangular_code(args.d)
    _emit(
        json.dumps(code_mod.to_json_dict(built), indent=2, sort_keys=True) + "\n",
        args.out,
    )
    return 0


def _decode_result_json(result: decoder.DecodeResult) -> str:
    payload = {
        "estimate": result.estimate.to_string(),
        "weight": result.weight,
        "status": result.status.value,
        "time_us": round(result.solve_time * 1e6, 3),
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _cmd_decode(args: argparse.Namespace) -> int:
    timeout = _timeout_seconds(args)
    if args.puzzle is not None:
        with open(args.puzzle, "r", encoding="utf-8") as handle:
            puzzle = lightsout.from_text(handle.read())
        solver = decoder.PuzzleSolver(puzzle)
        outcome, seconds = solver.solve(puzzle.init, timeout)
        if outcome.status is SolveStatus.UNSATISFIABLE:
            raise ValueError("puzzle has no solution")
        if outcome.status is SolveStatus.OPTIMAL:
            switches = solver.switches_of(outcome)
            result = decoder.DecodeResult(
                switches, outcome.assignment.objective, outcome.status, seconds
            )
        else:
            result = decoder.DecodeResult(
                BitVec.zeros(puzzle.n_switches), 0, outcome.status, seconds
            )
        _emit(_decode_result_json(result), args.out)
        return 0

    syndrome = BitVec.from_string(args.syndrome)
    if args.oracle:
        built = _load_code(args.code)
        start = time.perf_counter()
        estimate = decoder.decode_oracle(built, syndrome)
        seconds = time.perf_counter() - start
        result = decoder.DecodeResult(
            estimate, estimate.weight, SolveStatus.OPTIMAL, seconds
        )
    else:
        try:
            built = _load_code(args.code)
        except ValueError:
            matrix = _load_check_matrix(args.code)
            result = decoder.decode_check_matrix(matrix, syndrome, timeout)
        else:
            result = decoder.decode(built, syndrome, timeout)
    _emit(_decode_result_json(result), args.out)
    return 0


def _cmd_distance(args: argparse.Namespace) -> int:
    built = _load_code(args.code)
    value = decoder.estimate_distance(built, _timeout_seconds(args))
    _emit(json.dumps({"distance": value}, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_export_wcnf(args: argparse.Namespace) -> int:
    built = _load_code(args.code)
    syndrome = BitVec.from_string(args.syndrome)
    instance = maxsat.encode(
        lightsout.from_color_code(built, BitVec.zeros(built.n_faces))
    )
    maxsat.export_wcnf(instance, syndrome, args.out, legacy_top=args.legacy_top)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    distances = _parse_distances(args.d)
    probabilities = _parse_probabilities(args.p)
    print(f"seed={args.seed}")
    records = []
    for d in distances:
        built = code_mod.build_triangular_code(d)
        for p in probabilities:
            if args.noise == "bitflip":
                noise: sim.NoiseModel = sim.BitFlipNoise(p)
            else:
                noise = sim.PhenomenologicalNoise(p=p, rounds=args.rounds)
            record = sim.run_batch(
                built,
                noise,
                samples=args.samples,
                max_logical=args.max_logical,
                seed=args.seed,
                workers=args.workers,
                timeout=_timeout_seconds(args),
            )
            records.append(record)
            print(
                f"d={record.distance} p={record.p} samples={record.samples} "
                f"ler={record.ler:.6g} non_converged={record.non_converged}"
            )
    sim.write_csv(args.out, records)
    return 0


def _cmd_threshold_fit(args: argparse.Namespace) -> int:
    records = sim.read_csv(args.input)
    fit = analysis.fit_threshold(records)
    payload = {
        "p_th": fit.p_th,
        "nu": fit.nu,
        "A": fit.coeffs[0],
        "B": fit.coeffs[1],
        "C": fit.coeffs[2],
        "residual": fit.residual,
        "n_points": fit.n_points,
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="lightsqec",
        description="Exact MaxSAT decoding toolkit for triangular color codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate-code", help="emit a code description as JSON")
    p_gen.add_argument("--d", type=int, required=True, help="odd code distance >= 3")
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=_cmd_generate_code)

    p_dec = sub.add_parser("decode", help="decode one syndrome")
    source = p_dec.add_mutually_exclusive_group(required=True)
    source.add_argument("--code", help="code JSON from generate-code")
    source.add_argument("--puzzle", help="generic switch/light puzzle in text form")
    p_dec.add_argument(
        "--syndrome",
        default=None,
        help="bit string, face index 0 leftmost (e.g. 100 lights face 0)",
    )
    p_dec.add_argument("--timeout-ms", type=float, default=None)
    p_dec.add_argument(
        "--oracle", action="store_true", help="use the brute-force coset oracle"
    )
    p_dec.add_argument("--out", default=None)
    p_dec.set_defaults(func=_cmd_decode)

    p_dist = sub.add_parser("distance", help="estimate the code distance exactly")
    p_dist.add_argument("--code", required=True)
    p_dist.add_argument("--timeout-ms", type=float, default=None)
    p_dist.add_argument("--out", default=None)
    p_dist.set_defaults(func=_cmd_distance)

    p_wcnf = sub.add_parser("export-wcnf", help="write the instance as WCNF")
    p_wcnf.add_argument("--code", required=True)
    p_wcnf.add_argument("--syndrome", required=True)
    p_wcnf.add_argument("--out", required=True)
    p_wcnf.add_argument(
        "--legacy-top",
        action="store_true",
        help="use the legacy 'p wcnf' header instead of the 2022 format",
    )
    p_wcnf.set_defaults(func=_cmd_export_wcnf)

    p_sim = sub.add_parser("simulate", help="Monte-Carlo logical error rates")
    p_sim.add_argument("--d", required=True, help="comma list of distances, e.g. 3,5,7")
    p_sim.add_argument(
        "--p", required=True, help="probabilities: comma list or start:stop:step"
    )
    p_sim.add_argument("--samples", type=int, required=True)
    p_sim.add_argument("--noise", choices=("bitflip", "pheno"), default="bitflip")
    p_sim.add_argument("--rounds", type=int, default=1, help="pheno detector layers")
    p_sim.add_argument("--max-logical", type=int, default=None)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument("--timeout-ms", type=float, default=None)
    p_sim.add_argument("--out", required=True)
    p_sim.set_defaults(func=_cmd_simulate)

    p_fit = sub.add_parser("threshold-fit", help="critical-exponent threshold fit")
    p_fit.add_argument("--in", dest="input", required=True)
    p_fit.add_argument("--out", default=None)
    p_fit.set_defaults(func=_cmd_threshold_fit)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "decode" and args.puzzle is None and args.syndrome is None:
            raise _UsageError("decode --code requires --syndrome")
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
