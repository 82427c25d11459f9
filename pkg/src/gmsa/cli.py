"""Command-line interface: ``gmsa {validate,run,sweep,gen-traces}``.

Exit status: 0 success, 1 validation or simulation failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .generators import SpecError, generate_observations, trace_from_profile
from .scenario import Scenario, ScenarioError, load_scenario, validate_scenario
from .schedulers import SCHEDULERS, make_scheduler
from .simulation import SimulationError, run_simulation, run_sweep, write_record, write_sweep
from .traces import TraceError, write_trace

OUTPUT_ROOT_ENV = "GMSA_OUTPUT_ROOT"
EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _name_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _output_dir(args, scenario: Scenario) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get(OUTPUT_ROOT_ENV) or scenario.output_dir)


def _apply_common(args, scenario: Scenario) -> Scenario:
    if args.seed is not None:
        scenario.generator.seed = args.seed
    if args.horizon is not None:
        scenario.horizon = args.horizon
    return scenario


def _load_valid(args):
    scenario = _apply_common(args, load_scenario(args.config))
    if getattr(args, "tie_break", None):
        scenario.tie_break = args.tie_break
    config, report = validate_scenario(scenario)
    if not report.ok:
        for msg in report.messages():
            print(f"  {msg}", file=sys.stderr)
        raise ScenarioError(f"{args.config}: scenario is invalid ({len(report.violations)} violations)")
    return scenario, config


def _echo_config(scenario: Scenario, config, out_dir: Path):
    doc = scenario.to_dict()
    doc["system"] = config.to_dict()
    doc["generator"]["ratio"] = {}
    (out_dir / "effective_config.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def cmd_validate(args) -> int:
    scenario = _apply_common(args, load_scenario(args.config))
    _, report = validate_scenario(scenario)
    if report.ok:
        print("OK")
        return EXIT_OK
    print(f"INVALID: {len(report.violations)} violation(s)")
    for msg in report.messages():
        print(f"  {msg}")
    return EXIT_INVALID


def cmd_run(args) -> int:
    scenario, config = _load_valid(args)
    name = args.scheduler or scenario.schedulers[0]
    if name not in SCHEDULERS:
        raise ScenarioError(f"unknown scheduler {name!r}")
    if args.v is not None:
        if name == "gmsa":
            scenario.v_values = [args.v]
        else:
            print(f"warning: --v is ignored for scheduler {name!r} (its decisions do not depend on V)",
                  file=sys.stderr)
    scenario.schedulers = [name]
    v = scenario.v_values[0]
    seed = scenario.generator.seed

    observations = generate_observations(scenario.generator, config, scenario.horizon)
    est = make_scheduler(name, v=v, tie_break=scenario.tie_break)
    record = run_simulation(config, observations, est, seed=seed)

    out_dir = _output_dir(args, scenario)
    paths = write_record(record, out_dir)
    _echo_config(scenario, config, out_dir)
    print(f"scheduler={record.scheduler_name} v={record.v!r} seed={seed} horizon={record.horizon} "
          f"time_average_cost={record.time_average_cost!r} time_average_backlog={record.time_average_backlog!r}")
    print(f"wrote {paths['per_slot']}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario, config = _load_valid(args)
    if args.v is not None:
        scenario.v_values = args.v
    if args.schedulers is not None:
        scenario.schedulers = args.schedulers
    if args.replications is not None:
        scenario.replications = args.replications
    if not scenario.v_values:
        raise ScenarioError("sweep needs at least one V value")
    unknown = [s for s in scenario.schedulers if s not in SCHEDULERS]
    if unknown:
        raise ScenarioError(f"unknown scheduler(s): {', '.join(unknown)}")

    result = run_sweep(config, scenario.generator, scenario.horizon, scenario.v_values,
                       scenario.schedulers, replications=scenario.replications,
                       tie_break=scenario.tie_break)
    out_dir = _output_dir(args, scenario)
    paths = write_sweep(result, out_dir)
    _echo_config(scenario, config, out_dir)
    for e in result.entries:
        print(f"{e.scheduler:8s} v={e.v:<8g} cost={e.time_average_cost:.6g} backlog={e.time_average_backlog:.6g}")
    print(f"wrote {paths['csv']}")
    return EXIT_OK


def cmd_gen_traces(args) -> int:
    scenario, config = _load_valid(args)
    out_dir = _output_dir(args, scenario)
    out_dir.mkdir(parents=True, exist_ok=True)
    for kind, section in (("pue", scenario.generator.pue), ("price_weight", scenario.generator.price)):
        series = trace_from_profile(section, kind, config, scenario.horizon)
        path = write_trace(series, out_dir / f"{kind}.csv")
        print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gmsa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--config", required=True, help="scenario file (JSON or YAML)")
        p.add_argument("--seed", type=int, help="override generator.seed")
        p.add_argument("--horizon", type=int, help="override horizon (slots)")
        if out:
            p.add_argument("--out", help=f"output directory (default: ${OUTPUT_ROOT_ENV} or scenario output_dir)")

    p = sub.add_parser("validate", help="check a scenario file")
    common(p, out=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="simulate one scheduler")
    common(p)
    p.add_argument("--scheduler", choices=sorted(SCHEDULERS))
    p.add_argument("--v", type=float, help="GMSA tradeoff parameter")
    p.add_argument("--tie-break", dest="tie_break", choices=["lowest_index", "lowest_unit_cost"])
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run schedulers over a list of V values")
    common(p)
    p.add_argument("--v", type=_float_list, help="comma-separated V values, e.g. 0.001,0.1,10")
    p.add_argument("--schedulers", "--scheduler", dest="schedulers", type=_name_list,
                   help="comma-separated scheduler names")
    p.add_argument("--replications", type=int, help="runs per cell with seeds seed, seed+1, ...")
    p.add_argument("--tie-break", dest="tie_break", choices=["lowest_index", "lowest_unit_cost"])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen-traces", help="write the synthetic PUE and price series as CSV")
    common(p)
    p.set_defaults(func=cmd_gen_traces)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ScenarioError, SpecError, TraceError, SimulationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
