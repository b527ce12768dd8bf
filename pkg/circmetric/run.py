import argparse
import logging
import os
import sys
from typing import Any, Callable, Optional

import numpy as np
from dotenv import load_dotenv

from circmetric.angles import (
    angle_pair,
    angles_in_radians,
    check_angle_input,
    direct_trace,
    gram_triple,
    limit_cos_q,
    limit_estimate,
    predicted_steps,
    recurrence_trace,
    transform_angle_pair,
)
from circmetric.circulant import (
    MetricRole,
    PositivityMode,
    SymCirc4,
    Vector4,
    det_closed_form,
    eigenvalues,
    is_indefinite,
    is_positive_definite,
    make_metric,
)
from circmetric.circulant.oracles import cofactor_det, full_matrix, minors_positive_definite
from circmetric.config import OUTPUT_FORMATS, SUBCOMMANDS, RunConfig, build_config, load_config
from circmetric.errors import BoundaryFixedPoint, CircmetricError, ConfigError
from circmetric.fields import (
    DEFAULT_FD_STEP,
    builtin_families,
    check_13star,
    check_14,
    check_15,
    check_ur,
    nabla_q_residual,
)
from circmetric.metric import conformal_combine, ordering_chain, pullback_f
from circmetric.report import TRACE_COLUMNS, Report, render
from circmetric.service.sweep import run_sweep, sweep_grid

load_dotenv()

logger = logging.getLogger(__name__)

TRACE_AGREEMENT_TOL = 1e-10
# field-condition residual and nabla q residual thresholds
FIELD_COND_TOL = 1e-6
PARALLEL_TOL = 1e-5
SAMPLE_SEED = 0


def _floats(count: int) -> Callable[[str], tuple[float, ...]]:
    def parse(text: str) -> tuple[float, ...]:
        try:
            values = tuple(float(v) for v in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers, got '{text}'") from None
        if len(values) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers, got {len(values)}")
        return values

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='JSON file with RunConfig fields; flags override it')
    common.add_argument('--metric', type=_floats(3), help='Metric coefficients a,b,c (default: 3,1,2)')
    common.add_argument('--alpha', type=float, help='Conformal parameter alpha (default: 2)')
    common.add_argument('--beta', type=float, help='Conformal parameter beta (default: 1)')
    common.add_argument('--w', dest='vector', type=_floats(4), help='Vector x,y,z,u (default: 1,0,0,0)')
    common.add_argument('--n', dest='steps', type=int, help='Number of iterations (default: 40)')
    common.add_argument('--tol', dest='tolerance', type=float, help='Convergence tolerance (default: 1e-9)')
    common.add_argument('--format', dest='output_format', choices=OUTPUT_FORMATS, help='Output format (default: table)')
    common.add_argument('--family', dest='field_family', type=str, help='Named field family for check-fields')
    common.add_argument('--point', type=_floats(4), help='Evaluation point x1,x2,x3,x4')
    common.add_argument('--fd-step', type=float, help='Finite-difference step (default: 1e-4)')
    common.add_argument('--samples', type=int, help='check-fields: maximise residuals over N random points')
    common.add_argument('--renormalize', action=argparse.BooleanOptionalAction, default=None, help='Trace-normalise g_n while iterating')
    common.add_argument('--sweep-alpha', type=_floats(3), help='Sweep grid lo,hi,count for alpha')
    common.add_argument('--sweep-beta', type=_floats(3), help='Sweep grid lo,hi,count for beta')
    common.add_argument('--workers', type=int, help='Sweep worker threads (default: 4)')
    common.add_argument('--out', type=str, help='Write the report here instead of stdout')
    common.add_argument(
        '--log-level',
        type=str,
        default=os.getenv("CIRCMETRIC_LOG_LEVEL", "WARNING"),
        help='Logging level (default: $CIRCMETRIC_LOG_LEVEL or WARNING)',
    )

    parser = argparse.ArgumentParser(description="Circulant metrics, almost conformal transformations and angle dynamics")
    subparsers = parser.add_subparsers(dest='subcommand', required=True)
    helps = {
        "det": "Determinant, closed form and cofactor oracle",
        "posdef": "Positive definiteness in both modes, with eigenvalues",
        "angles": "cos of the angles between w, qw and q^2 w",
        "transform": "Angle transformation under alpha*g + beta*f, formula and direct",
        "iterate": "Angle trace along g_{n+1} = alpha*g_n + beta*f_n",
        "check-fields": "Field conditions and nabla q on a named family",
        "sweep": "Limit cosines over an (alpha, beta) grid",
    }
    for name in SUBCOMMANDS:
        subparsers.add_parser(name, parents=[common], help=helps[name], description=helps[name])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    file_values = load_config(args.config) if args.config else {}
    overrides: dict[str, Any] = {
        key: getattr(args, key)
        for key in (
            "metric", "vector", "steps", "tolerance", "output_format", "field_family", "point",
            "fd_step", "renormalize", "samples", "sweep_alpha", "sweep_beta", "workers", "out",
        )
    }
    if args.alpha is not None or args.beta is not None:
        base = RunConfig.from_dict(file_values).params
        overrides["params"] = (
            args.alpha if args.alpha is not None else base[0],
            args.beta if args.beta is not None else base[1],
        )
    return build_config(file_values, overrides)


def _metric(cfg: RunConfig) -> SymCirc4:
    # ordering is not required here; each command checks what it needs
    return make_metric(*cfg.metric, role=MetricRole.RAW)


def _vector(cfg: RunConfig) -> Vector4:
    return Vector4.of(cfg.vector)


def _inputs(cfg: RunConfig) -> dict[str, Any]:
    inputs = cfg.to_dict()
    inputs.pop("out")
    return inputs


def _det(cfg: RunConfig) -> Report:
    m = _metric(cfg)
    det = det_closed_form(m)
    oracle = cofactor_det(full_matrix(m))
    f = pullback_f(m)
    return Report("det", _inputs(cfg), {
        "det": det,
        "det_oracle": oracle,
        "abs_dev": abs(det - oracle),
        "det_pullback": det_closed_form(f),
        "pullback_indefinite": is_indefinite(f),
    })


def _posdef(cfg: RunConfig) -> Report:
    m = _metric(cfg)
    top, middle, bottom = eigenvalues(m)
    return Report("posdef", _inputs(cfg), {
        "sufficient": is_positive_definite(m, PositivityMode.SUFFICIENT),
        "exact": is_positive_definite(m, PositivityMode.EXACT),
        "minors_oracle": minors_positive_definite(m),
        "lambda_0": top,
        "lambda_1": middle,
        "lambda_2": middle,
        "lambda_3": bottom,
    })


def _angles(cfg: RunConfig) -> Report:
    m, w = _metric(cfg), _vector(cfg)
    pair = angle_pair(m, w)
    phi, varphi = angles_in_radians(pair)
    g_ww, g_wqw, g_wq2w = gram_triple(m, w)
    return Report("angles", _inputs(cfg), {
        "cos_q": pair.cos_q,
        "cos_q2": pair.cos_q2,
        "phi_rad": phi,
        "varphi_rad": varphi,
        "g_ww": g_ww,
        "g_wqw": g_wqw,
        "g_wq2w": g_wq2w,
    })


def _transform(cfg: RunConfig) -> Report:
    m, w, cp = _metric(cfg), _vector(cfg), cfg.conformal
    p0 = angle_pair(m, w)
    g_t = conformal_combine(m, cp)
    formula = transform_angle_pair(p0, cp)
    direct = angle_pair(g_t, w)
    deviation = max(abs(formula.cos_q - direct.cos_q), abs(formula.cos_q2 - direct.cos_q2))
    return Report("transform", _inputs(cfg), {
        "cos_q_0": p0.cos_q,
        "cos_q2_0": p0.cos_q2,
        "cos_q_formula": formula.cos_q,
        "cos_q2_formula": formula.cos_q2,
        "cos_q_direct": direct.cos_q,
        "cos_q2_direct": direct.cos_q2,
        "max_deviation": deviation,
        "a_t": g_t.a,
        "b_t": g_t.b,
        "c_t": g_t.c,
        "ordering_chain_holds": ordering_chain(m, cp).holds,
    })


def _iterate(cfg: RunConfig) -> Report:
    m, w, cp = _metric(cfg), _vector(cfg), cfg.conformal
    steps = int(cfg.steps)
    p0 = angle_pair(m, w)
    recurrence = recurrence_trace(p0, cp, steps)
    direct = direct_trace(m, w, cp, steps, renormalize=cfg.renormalize)

    rows = []
    for rec, dirc in zip(recurrence, direct):
        rows.append({
            "n": rec.n,
            "cos_q_rec": rec.cos_q,
            "cos_q2_rec": rec.cos_q2,
            "cos_q_dir": dirc.cos_q,
            "cos_q2_dir": dirc.cos_q2,
            "abs_dev": max(abs(rec.cos_q - dirc.cos_q), abs(rec.cos_q2 - dirc.cos_q2)),
        })
    max_dev = max(row["abs_dev"] for row in rows)
    estimate = limit_estimate(direct, cfg.tolerance)

    try:
        exact_limit: Optional[float] = limit_cos_q(p0)
        steps_needed: Optional[int] = predicted_steps(p0.cos_q2, cp, cfg.tolerance)
    except BoundaryFixedPoint:
        logger.warning(f"cos phi_0 = {p0.cos_q2}: sequence sits on the repelling fixed point")
        exact_limit, steps_needed = None, None
    if exact_limit is not None and abs(exact_limit - 1.0) > cfg.tolerance:
        logger.warning(f"cos(q-angle) tends to {exact_limit:.6g}, not 1: the q-angle does not vanish in the limit")

    relation = "<" if max_dev < TRACE_AGREEMENT_TOL else ">="
    footer = [
        f"max |recurrence - direct| = {max_dev:.3e} {relation} {TRACE_AGREEMENT_TOL:g}",
        f"limit cos_q = {estimate.limit_cos_q:.17g}, limit cos_q2 = {estimate.limit_cos_q2:.17g}, "
        f"converged = {str(estimate.converged).lower()}",
    ]
    if exact_limit is not None:
        footer.append(f"exact limit cos_q = {exact_limit:.17g}, predicted steps to tol = {steps_needed}")

    return Report(
        "iterate",
        _inputs(cfg),
        {
            "limit_cos_q": estimate.limit_cos_q,
            "limit_cos_q2": estimate.limit_cos_q2,
            "converged": estimate.converged,
            "exact_limit_cos_q": exact_limit,
            "predicted_steps": steps_needed,
            "max_abs_dev": max_dev,
        },
        columns=list(TRACE_COLUMNS),
        rows=rows,
        footer=footer,
    )


def _check_fields(cfg: RunConfig) -> Report:
    bundle = builtin_families(cfg.field_family, cfg.fd_step or DEFAULT_FD_STEP)
    points = []
    if cfg.point is not None:
        points.append(np.asarray(cfg.point, dtype=float))
    if cfg.samples > 0:
        rng = np.random.default_rng(SAMPLE_SEED)
        points.extend(bundle.sample_points(cfg.samples, rng))

    rows = []
    for i, p in enumerate(points):
        row: dict[str, Any] = {"i": i, "x1": p[0], "x2": p[1], "x3": p[2], "x4": p[3]}
        row["r13star"] = check_13star(bundle, p).worst
        if bundle.has_params:
            row["r14"] = check_14(bundle.alpha, bundle.beta, p).worst
            row["r15"] = check_15(bundle, p).worst
            row["r_ur"] = check_ur(bundle, p).worst
        else:
            row["r14"] = row["r15"] = row["r_ur"] = None
        row["nabla_q"] = nabla_q_residual(bundle, p)
        rows.append(row)
        logger.debug(f"check-fields {bundle.name} point {i}: {row}")

    def worst(key: str) -> Optional[float]:
        values = [row[key] for row in rows if row[key] is not None]
        return max(values) if values else None

    cond = worst("r13star")
    parallel = worst("nabla_q")
    results = {
        "family": bundle.name,
        "fd_step": bundle.fd_step,
        "points": len(rows),
        "max_r13star": cond,
        "max_r14": worst("r14"),
        "max_r15": worst("r15"),
        "max_r_ur": worst("r_ur"),
        "max_nabla_q": parallel,
        "conditions_hold": cond < FIELD_COND_TOL,
        "q_parallel": parallel < PARALLEL_TOL,
    }
    results["equivalence_consistent"] = results["conditions_hold"] == results["q_parallel"]
    if not results["equivalence_consistent"]:
        logger.warning(f"'{bundle.name}': field conditions and nabla q = 0 disagree at h = {bundle.fd_step:g}")
    return Report(
        "check-fields",
        _inputs(cfg),
        results,
        columns=["i", "x1", "x2", "x3", "x4", "r13star", "r14", "r15", "r_ur", "nabla_q"],
        rows=rows,
        footer=[f"{bundle.name}: {bundle.description}"],
    )


def _sweep(cfg: RunConfig) -> Report:
    m, w = _metric(cfg), _vector(cfg)
    # fail once on bad (g0, w) instead of once per cell
    check_angle_input(m, w)
    cells = sweep_grid(cfg.sweep_alpha, cfg.sweep_beta)
    logger.info(f"Sweeping {len(cells)} cells on {cfg.workers} worker(s)")
    results = run_sweep(m, w, cells, int(cfg.steps), cfg.tolerance, cfg.workers)
    columns = ["index", "alpha", "beta", "status", "limit_cos_q", "limit_cos_q2", "converged", "exact_limit_cos_q"]
    rows = [{key: getattr(result, key) for key in columns} for result in results]
    failed = sum(1 for result in results if result.status != "ok")
    return Report(
        "sweep",
        _inputs(cfg),
        {"cells": len(rows), "failed": failed},
        columns=columns,
        rows=rows,
        footer=[f"{len(rows)} cells, {failed} not ok"],
    )


_HANDLERS: dict[str, Callable[[RunConfig], Report]] = {
    "det": _det,
    "posdef": _posdef,
    "angles": _angles,
    "transform": _transform,
    "iterate": _iterate,
    "check-fields": _check_fields,
    "sweep": _sweep,
}


def run(subcommand: str, cfg: RunConfig) -> Report:
    cfg.validate(subcommand)
    logger.info(f"Running {subcommand}")
    report = _HANDLERS[subcommand](cfg)
    logger.info(f"{subcommand} finished")
    return report


def _setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _write_report(path: str, text: str) -> None:
    try:
        with open(path, "w") as f:
            f.write(text)
    except OSError as e:
        raise ConfigError(f"could not write report to {path}: {e}") from None
    logger.info(f"Report written to {path}")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    _setup_logging(args.log_level)

    try:
        cfg = config_from_args(args)
        text = render(run(args.subcommand, cfg), cfg.output_format)
        if cfg.out:
            _write_report(cfg.out, text)
    except CircmetricError as e:
        logger.error(f"{args.subcommand} failed ({type(e).__name__})")
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code

    if not cfg.out:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
