"""Command line: ``fr3net simulate | compare | beams``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys

from . import engine
from .beamforming import DIAGRAM_COLUMNS, beam_diagram_rows, csirs_codebook, ssb_codebook
from .errors import CatalogMissError, Fr3NetError, ScenarioError
from .link import MODES
from .radio_catalog import catalog_lookup


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fr3net", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run one scenario and write result files")
    s.add_argument("--scenario", required=True,
                   help="named scenario or path to a JSON config; names: " + "; ".join(engine.SCENARIO_NAMES))
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--drops", type=int, default=None)
    s.add_argument("--mode", choices=MODES, default=None, help="scheduling mode")
    s.add_argument("--no-reselection", action="store_true", help="associate to the strongest cell only")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out", required=True, help="output directory")

    c = sub.add_parser("compare", help="tabulate medians, 95th percentiles and power of result directories")
    c.add_argument("dirs", nargs="+")
    c.add_argument("--baseline", type=int, default=0, help="index of the baseline directory")

    b = sub.add_parser("beams", help="write SSB and CSI-RS beam diagrams of a radio as CSV")
    b.add_argument("--radio", required=True)
    b.add_argument("--tech", default=None, help="technology of a multiband radio (default: all)")
    b.add_argument("--step", type=float, default=1.0, help="angular step in degrees")
    b.add_argument("--out", required=True)
    return p


def _simulate(a) -> int:
    cfg = engine.load_config(a.scenario)
    if a.seed is not None:
        cfg.seed = a.seed
    if a.drops is not None:
        cfg.n_drops = a.drops
    if a.mode is not None:
        cfg.scheduling_mode = a.mode
    if a.no_reselection:
        cfg.reselection.enabled = False
    engine.validate(cfg)
    res = engine.run(cfg, threads=a.threads)
    engine.emit(res, a.out)
    pct = res.percentiles()
    print(f"{res.scenario}: median {pct['p50']:.2f} Mbps, p95 {pct['p95']:.2f} Mbps, "
          f"power {res.total_power_w / 1e3:.2f} kW -> {a.out}")
    check = res.metadata.get("plausibility")
    if check and not check["within_band"]:
        print(f"warning: {check['note']}", file=sys.stderr)
    return 0


def _compare(a) -> int:
    results = [engine.load_results(d) for d in a.dirs]
    print(engine.format_table(engine.compare(results, a.baseline)))
    return 0


def _beams(a) -> int:
    rt = catalog_lookup(a.radio)
    techs = [rt.tech(a.tech).technology] if a.tech else list(rt.technologies)
    n = 0
    with open(a.out, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(("technology", "kind", *DIAGRAM_COLUMNS))
        for t in techs:
            for cb in (ssb_codebook(rt, t), csirs_codebook(rt, t)):
                for row in beam_diagram_rows(cb, a.step):
                    wr.writerow((t, cb.kind, *row))
                    n += 1
    print(f"{rt.name}: {n} rows -> {a.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    a = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return {"simulate": _simulate, "compare": _compare, "beams": _beams}[a.command](a)
    except (ScenarioError, CatalogMissError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (Fr3NetError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
