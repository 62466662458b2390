import argparse
import json
import logging
import os
import sys
from datetime import datetime, timezone

import pandas as pd

import config
from algebra.parsing import parse
from algebra.poly import gradient_at_origin, rational_str, render
from errors import AnalysisError
from geometry.adapt import adapt, check_critical_point, height
from geometry.classify import classify
from geometry.newton import bisectrix_locus, newton_distance, newton_polygon, polygon_frame
from geometry.slivers import check_bounds, coverage_check, decompose
from utils import calculate_avg_std, summarize_report, write_csv, write_json
from verification.damping import damping_integrability_scan
from verification.decay import damped_measure, estimate_decay
from verification.metrics import Verdict, combine
from verification.sublevel import estimate_sublevel_exponent

logger = logging.getLogger("sliverlab")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3


def timestamp():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if not epoch:
        return None
    return datetime.fromtimestamp(int(epoch), tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def envelope(command, cfg, body, source=None, p=None):
    out = {
        "schemaVersion": config.SCHEMA_VERSION,
        "toolVersion": config.TOOL_VERSION,
        "command": command,
        "seed": cfg.seed,
        "timestamp": timestamp(),
        "config": cfg.to_dict(),
    }
    if p is not None:
        out["input"] = {"source": source, "canonical": render(p), "terms": p.to_json()}
    out.update(body)
    return out


def exit_code(verdicts):
    verdicts = list(verdicts)
    if not verdicts:
        return EXIT_OK
    return {Verdict.PASS: EXIT_OK, Verdict.FAIL: EXIT_FAIL, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[combine(verdicts)]


def build_config(args):
    cfg = config.VerificationConfig().with_overrides(
        seed=args.seed, samples=args.samples, radius=args.radius,
        precision_bits=args.precision, workers=args.workers,
        s_grid=tuple(args.s_grid) if args.s_grid else None,
    )
    if args.lambda_min or args.lambda_max or args.lambda_count:
        grid = cfg.lambda_grid
        cfg = cfg.with_overrides(lambda_grid=config.GeometricGrid(
            args.lambda_min or grid.min, args.lambda_max or grid.max, args.lambda_count or grid.count))
    return cfg


def comparability_summary(reports):
    return {
        "verdict": combine(r.verdict for r in reports),
        "margin": min((r.margin for r in reports), default=None),
        "checks": [r.to_dict() for r in reports],
    }


def comparability_frame(reports):
    return pd.DataFrame([{"bound": r.bound.name, "quantity": r.bound.quantity, "comparator": r.bound.comparator,
                          "region": r.region.get("type"), "side": r.side, "margin": r.margin, "verdict": r.verdict}
                         for r in reports])


class Runner:
    def __init__(self, args):
        self.args = args
        self.cfg = build_config(args)
        self.max_steps = args.max_steps
        self.frame = None

    def polynomial(self):
        p = parse(self.args.polynomial)
        check_critical_point(p)
        return p

    def decomposition(self, ar):
        return decompose(ar, radius=self.args.radius, seed=self.cfg.seed)

    def analyze(self):
        p = self.polynomial()
        np_ = newton_polygon(p)
        report = classify(p, transform_samples=self.args.transform_samples, workers=self.cfg.workers,
                          max_steps=self.max_steps)
        body = {
            "originChecks": {"value": rational_str(p.coefficient(0, 0)),
                             "gradient": [rational_str(g) for g in gradient_at_origin(p)]},
            "newtonPolygon": np_.to_dict(),
            "d": rational_str(newton_distance(np_)),
            "bisectrixLocus": bisectrix_locus(np_).to_dict(),
            "adaptation": report.adaptation.to_dict(),
            "height": rational_str(report.height.h),
            "dStar": rational_str(report.height.d_star),
            "pCritical": rational_str(report.p_critical),
            "exceptional": {k: v for k, v in report.to_dict().items()
                            if k in ("exceptionalA", "exceptionalB", "witnessB", "sampledTransforms",
                                     "skippedTransforms", "mixedHomogeneous", "directHeight", "genericTransform")},
        }
        dec = None
        try:
            dec = self.decomposition(report.adaptation)
            body["slivers"] = dec.to_dict()
        except AnalysisError as err:
            logger.warning("no sliver decomposition: %s", err.message)
            body["slivers"] = {"error": err.to_dict()}
        verifications = {}
        if not self.args.skip_verify:
            verifications["sublevel"] = estimate_sublevel_exponent(
                p, self.cfg, self.args.target_slope, self.args.tolerance).to_dict()
            if dec is not None:
                verifications["comparability"] = comparability_summary(check_bounds(dec, seed=self.cfg.seed))
            verifications["damping"] = damping_integrability_scan(report.adaptation.F, cfg=self.cfg).to_dict()
            if self.args.with_decay:
                verifications["decay"] = self._decay(p).to_dict()
        body["verifications"] = verifications
        out = envelope("analyze", self.cfg, body, self.args.polynomial, p)
        self.frame = summarize_report(out)
        return out, [v["verdict"] for v in verifications.values()]

    def adapt(self):
        p = self.polynomial()
        ar = adapt(p, self.max_steps)
        body = {"adaptation": ar.to_dict(), "height": height(p, max_steps=self.max_steps).to_dict()}
        self.frame = polygon_frame(newton_polygon(ar.F))
        return envelope("adapt", self.cfg, body, self.args.polynomial, p), []

    def slivers(self):
        p = self.polynomial()
        ar = classify(p, transform_samples=0, workers=1, max_steps=self.max_steps).adaptation
        dec = self.decomposition(ar)
        coverage_check(dec, seed=self.cfg.seed)
        body = {"adaptation": ar.to_dict(), "slivers": dec.to_dict(), "coverage": True}
        self.frame = pd.DataFrame([{"kind": s.kind, "side": s.side, "index": s.index,
                                    "damping": s.damping.form} for s in dec])
        return envelope("slivers", self.cfg, body, self.args.polynomial, p), []

    def _decay(self, p):
        s = 0.0 if self.args.undamped else self.args.s
        measure = damped_measure(p, s, self.args.delta, self.cfg.radius, self.cfg.seed)
        direction = self.args.direction or (1.0, 0.0, 0.0)
        return estimate_decay(measure, direction, self.cfg, self.args.target_slope, self.args.tolerance,
                              self.args.epsilon)

    def verify(self):
        p = self.polynomial()
        what = self.args.what
        if what == "sublevel":
            result = estimate_sublevel_exponent(p, self.cfg, self.args.target_slope, self.args.tolerance)
            self.frame = result.curve()
            body = {"verification": what, "result": result.to_dict()}
            verdicts = [result.verdict]
        elif what == "decay":
            result = self._decay(p)
            self.frame = result.curve()
            body = {"verification": what, "result": result.to_dict()}
            verdicts = [result.verdict]
        elif what == "damping":
            ar = classify(p, transform_samples=0, workers=1, max_steps=self.max_steps).adaptation
            result = damping_integrability_scan(ar.F, cfg=self.cfg)
            self.frame = result.frame()
            body = {"verification": what, "result": result.to_dict()}
            verdicts = [result.verdict]
        else:
            ar = classify(p, transform_samples=0, workers=1, max_steps=self.max_steps).adaptation
            reports = check_bounds(self.decomposition(ar), seed=self.cfg.seed)
            self.frame = comparability_frame(reports)
            summary = comparability_summary(reports)
            body = {"verification": what, "result": summary}
            verdicts = [summary["verdict"]]
        return envelope("verify", self.cfg, body, self.args.polynomial, p), verdicts

    def report(self):
        with open(self.args.path, encoding="utf-8") as f:
            saved = json.load(f)
        table = summarize_report(saved)
        self.frame = table
        if not table.empty:
            print(table.to_string(index=False))
            print(calculate_avg_std(table).to_string())
        return None, list(table["verdict"]) if not table.empty else []

    def run(self):
        out, verdicts = getattr(self, self.args.command)()
        if out is not None:
            write_json(out, self.args.json)
        if self.args.csv and self.frame is not None:
            write_csv(self.frame, self.args.csv)
        return exit_code(verdicts)


def add_common(parser):
    parser.add_argument("--radius", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--lambda-min", type=float)
    parser.add_argument("--lambda-max", type=float)
    parser.add_argument("--lambda-count", type=int)
    parser.add_argument("--s", type=float, default=config.DEFAULT_S)
    parser.add_argument("--delta", type=float, default=config.DEFAULT_DELTA)
    parser.add_argument("--s-grid", type=float, nargs="+")
    parser.add_argument("--direction", type=float, nargs=3)
    parser.add_argument("--undamped", action="store_true")
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--tolerance", type=float)
    parser.add_argument("--target-slope", type=float)
    parser.add_argument("--json")
    parser.add_argument("--csv")
    parser.add_argument("--precision", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--max-steps", type=int)
    parser.add_argument("--transform-samples", type=int)
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="sliverlab")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "adapt", "slivers"):
        p = sub.add_parser(name)
        p.add_argument("polynomial")
        add_common(p)
        if name == "analyze":
            p.add_argument("--skip-verify", action="store_true")
            p.add_argument("--with-decay", action="store_true")
    p = sub.add_parser("verify")
    p.add_argument("what", choices=["sublevel", "decay", "comparability", "damping"])
    p.add_argument("polynomial")
    add_common(p)
    p = sub.add_parser("report")
    p.add_argument("path")
    add_common(p)
    return parser


def run(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s", stream=sys.stderr)
    try:
        return Runner(args).run()
    except AnalysisError as err:
        sys.stderr.write(json.dumps(err.to_dict(), sort_keys=True) + "\n")
        return EXIT_ERROR
    except (ValueError, OSError) as err:
        sys.stderr.write(json.dumps({"code": "INVALID_ARGUMENT", "message": str(err)}, sort_keys=True) + "\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(run())
