"""Command-line front end: one subcommand per experiment kind, plus presets
and dataset summaries. Flag values mirror ExperimentSpec fields; a JSON
config file in the sidecar format can stand in for flags."""

from __future__ import annotations

import argparse
import json
import sys

from .harness import ExperimentKind, ExperimentSpec, run_experiment, summarize
from .presets import PRESETS, get_preset

_KIND_BY_COMMAND = {kind.value: kind for kind in ExperimentKind}


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON sidecar file supplying spec fields")
    parser.add_argument("--densities", type=_float_list, help="links per m^2, comma separated")
    parser.add_argument("--beamwidths-deg", type=_float_list, help="comma separated degrees")
    parser.add_argument("--p-grid", type=_float_list, help="ALOHA transmission probabilities")
    parser.add_argument("--blockage-probs", type=_float_list)
    parser.add_argument("--payload-bytes", type=_int_list, dest="payload_sizes")
    parser.add_argument("--transmit-probability", type=float)
    parser.add_argument("--n-devices", type=int)
    parser.add_argument("--obstacle-density", type=float)
    parser.add_argument("--link-length-max", type=float)
    parser.add_argument("--duration-s", type=float)
    parser.add_argument("--replications", type=int)
    parser.add_argument("--mac-replications-per-point", type=int)
    parser.add_argument("--seed", type=int, dest="master_seed")
    parser.add_argument("--out", dest="output_path", help="output path stem")
    parser.add_argument("--exact-timings", action="store_true",
                        help="use exact 802.11ad control-time arithmetic instead "
                             "of the printed rounded constants")


_SPEC_FIELDS = (
    "densities", "beamwidths_deg", "p_grid", "blockage_probs", "payload_sizes",
    "transmit_probability", "n_devices", "obstacle_density", "link_length_max",
    "duration_s", "replications", "mac_replications_per_point", "master_seed",
    "output_path",
)


def _spec_from_args(kind: ExperimentKind, args: argparse.Namespace) -> ExperimentSpec:
    fields: dict = {}
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
        doc.pop("resolved", None)
        doc.pop("code_version", None)
        doc_kind = doc.pop("kind", kind.value)
        if doc_kind != kind.value:
            raise ValueError(
                f"config file is for kind {doc_kind!r}, not {kind.value!r}"
            )
        for k, v in doc.items():
            if isinstance(v, list):
                v = tuple(v)
            fields[k] = v
    for name in _SPEC_FIELDS:
        v = getattr(args, name, None)
        if v is not None:
            fields[name] = v
    if getattr(args, "exact_timings", False):
        fields["rounded_timings"] = False
    fields["kind"] = kind
    return ExperimentSpec(**fields)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmwmac",
        description="Short-range mmWave MAC simulator: figure-class experiments "
                    "emit tidy CSV datasets with JSON config sidecars.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for command, kind in _KIND_BY_COMMAND.items():
        p = sub.add_parser(command, help=f"run a {kind.value} experiment")
        _add_common(p)

    p = sub.add_parser("preset", help="run a named figure-class preset")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--replications", type=int)
    p.add_argument("--seed", type=int, dest="master_seed")
    p.add_argument("--out", dest="output_path")

    p = sub.add_parser("list-presets", help="list available presets")

    p = sub.add_parser("summarize", help="group a dataset and attach 95%% CIs")
    p.add_argument("dataset", help="CSV file emitted by an experiment")
    p.add_argument("--group-by", required=True, help="comma separated columns")
    p.add_argument("--value", required=True, help="numeric column to summarize")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-presets":
            for name, spec in sorted(PRESETS.items()):
                print(f"{name}: {spec.kind.value}")
            return 0

        if args.command == "summarize":
            records = summarize(args.dataset, args.group_by.split(","), args.value)
            print("group,mean,std,ci_low,ci_high,n")
            for r in records:
                key = "/".join(str(k) for k in r.group)
                print(f"{key},{r.mean!r},{r.std!r},{r.ci_low!r},{r.ci_high!r},{r.n}")
            return 0

        if args.command == "preset":
            overrides = {
                k: v
                for k, v in (
                    ("replications", args.replications),
                    ("master_seed", args.master_seed),
                    ("output_path", args.output_path),
                )
                if v is not None
            }
            spec = get_preset(args.name, **overrides)
        else:
            spec = _spec_from_args(_KIND_BY_COMMAND[args.command], args)

        csv_path, json_path = run_experiment(spec)
        print(f"wrote {csv_path}")
        print(f"wrote {json_path}")
        return 0
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
