"""Command-line front end: ``obstate <command> [flags]``.

Output is JSON by default, CSV with ``--format csv`` (or an ``--out`` path
ending in ``.csv``). Exit codes: 0 success, 1 domain error, 2 usage error.
An optional ``--config`` file holds flat ``key = value`` lines; explicit
flags override it.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import coefficients, delta, kinematics, resummation, rgflow, states
from .errors import ObstateError
from .laurent import LaurentSeries

COMMANDS = ("coeffs", "trace", "project", "factor", "rgflow", "resum", "delta-demo")


class UsageError(Exception):
    pass


# -- number parsing -----------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi, "e": math.e, "j": 1j, "i": 1j}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return node.value
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval_node(node.operand))
    raise ValueError("unsupported expression")


def parse_number(text: str) -> complex:
    """Parse a numeric literal or a small arithmetic expression (``2*pi``, ``1+2j``)."""
    try:
        value = _eval_node(ast.parse(str(text).strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def real_number(text: str) -> float:
    z = parse_number(text)
    if z.imag != 0:
        raise argparse.ArgumentTypeError(f"expected a real number, got {text!r}")
    return z.real


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def parse_factors(text: str) -> list[states.LoopFactor]:
    """``"rho_D,rho_ND;rho_D,rho_ND;..."``."""
    out = []
    for chunk in text.split(";"):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"loop factor needs two entries, got {chunk!r}")
        out.append(states.LoopFactor(parse_number(parts[0]), parse_number(parts[1])))
    return out


def parse_number_list(text: str) -> list[complex]:
    return [parse_number(t) for t in text.split(",") if t.strip()]


def parse_momenta(text: str) -> list[kinematics.FourVector]:
    try:
        return [kinematics.FourVector.parse(chunk) for chunk in text.split(";")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _cnum(z: complex):
    z = complex(z)
    return [z.real, z.imag]


def load_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


# -- command handlers ---------------------------------------------------------


@dataclass
class Output:
    payload: object
    rows: list[dict] = field(default_factory=list)
    text: str | None = None


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"missing required flag --{name.replace('_', '-')}")


def cmd_coeffs(args) -> Output:
    _require(args, "n", "p", "m0sq", "mu")
    params = coefficients.PhysParams(args.m0sq, args.mu)
    mandel = None
    if args.momenta is not None:
        if len(args.momenta) != 4:
            raise UsageError("--momenta needs four quadruples p1;p2;p3;p4")
        mandel = tuple(kinematics.mandelstam(*args.momenta))
    elif (args.n, args.p) == (4, 2):
        _require(args, "s", "t", "u")
        mandel = (args.s, args.t, args.u)
    table = coefficients.beta_table(args.n, args.p, params, mandel)
    payload = table.to_json()
    if mandel is not None:
        payload["mandelstam"] = {"s": mandel[0], "t": mandel[1], "u": mandel[2]}
    row = {k: v for k, v in table.to_json().items()}
    return Output(payload, [row])


def _series_rows(series: LaurentSeries) -> list[dict]:
    return [{"order": k, "re": c.real, "im": c.imag} for k, c in series.terms()]


def _state_output(state: states.InternalState, extra: dict | None = None) -> Output:
    series = states.trace_internal(state)
    payload = {
        "state": state.to_json(),
        "trace": series.to_json(),
        "gammas": [_cnum(g) for g in states.gammas(state).gammas],
        "text": series.to_text(),
    }
    payload.update(extra or {})
    return Output(payload, _series_rows(series), series.to_text())


def cmd_trace(args) -> Output:
    _require(args, "factors")
    state = states.InternalState.from_factors(args.factors, n=args.n)
    return _state_output(state)


def cmd_project(args) -> Output:
    _require(args, "factors")
    state = states.InternalState.from_factors(args.factors, n=args.n)
    return _state_output(states.project(state))


def cmd_factor(args) -> Output:
    _require(args, "gammas")
    g = states.GammaVector(tuple(args.gammas))
    state = states.factor_from_gammas(g, states.GaugeChoice(args.gauge), n=args.n, method=args.root_method)
    rebuilt = states.gammas(state).gammas
    err = max(abs(a - b) for a, b in zip(rebuilt, g.gammas))
    return _state_output(state, {"max_abs_error": err})


def cmd_rgflow(args) -> Output:
    _require(args, "lambda_s", "mu_s", "m_s_sq", "mu_end")
    cfg = rgflow.RGConfig(args.mu_s, args.m_s_sq, args.lambda_s, args.steps, rgflow.Method(args.method))
    rows = rgflow.trajectory_rows(cfg, rgflow.flow_integrate(cfg, args.mu_end))
    pole = rgflow.landau_pole_scale(cfg)
    payload = {"mu_landau": pole if math.isfinite(pole) else None, "points": rows}
    return Output(payload, rows)


def cmd_resum(args) -> Output:
    kind = args.kind
    if kind == "propagator":
        _require(args, "p_sq", "m0sq", "M")
        res = resummation.dressed_propagator(args.p_sq, args.m0sq, args.M, args.K if args.K is not None else 40)
        payload = res.to_json()
        payload["pole_p_sq"] = _cnum(resummation.dressed_pole(args.m0sq, args.M))
    elif kind == "vacuum":
        _require(args, "R1", "two_tv")
        res = resummation.vacuum_exponentiate(args.R1, args.two_tv, args.K if args.K is not None else 20)
        payload = res.to_json()
        payload["energy_density"] = _cnum(resummation.vacuum_energy_density(args.R1))
    elif kind == "coupling":
        _require(args, "lambda0", "betas")
        payload = {"lambda": _cnum(resummation.coupling(args.lambda0, args.betas))}
    else:
        _require(args, "lambda0", "betas")
        payload = {"mass_shift": _cnum(resummation.mass_shift(args.lambda0, args.betas))}
    row = {k: (json.dumps(v) if isinstance(v, list) else v) for k, v in payload.items()}
    return Output(payload, [row])


def cmd_delta_demo(args) -> Output:
    _require(args, "eps")
    if args.kernel != "gaussian":
        raise UsageError(f"unknown kernel {args.kernel!r}")
    quad = delta.QuadratureConfig(window=args.window, rtol=args.rtol)
    kernels = delta.gaussian_kernels()
    rho_D, rho_ND = delta.integrated_normalizations(kernels, quad)
    exact = math.sqrt(math.pi)
    closed = delta.trace_closed_form(exact, exact, args.eps)
    numeric = delta.trace_regularized(kernels, args.eps, quad)
    payload = {
        "eps": args.eps,
        "kernel": args.kernel,
        "rho_D": rho_D,
        "rho_ND": rho_ND,
        "closed_form": closed,
        "quadrature": numeric,
        "rel_error": abs(numeric - closed) / abs(closed),
        "pole_delta_at_zero": delta.lorentzian_delta(0.0, args.eps),
    }
    return Output(payload, [payload])


HANDLERS = {
    "coeffs": cmd_coeffs,
    "trace": cmd_trace,
    "project": cmd_project,
    "factor": cmd_factor,
    "rgflow": cmd_rgflow,
    "resum": cmd_resum,
    "delta-demo": cmd_delta_demo,
}


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--out", default=None, help="write output to this path instead of stdout")
    common.add_argument("--config", default=None, help="flat key = value file; flags override it")

    parser = argparse.ArgumentParser(prog="obstate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="closed-form beta coefficients")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--m0sq", type=real_number)
    p.add_argument("--mu", type=real_number)
    p.add_argument("--s", type=real_number)
    p.add_argument("--t", type=real_number)
    p.add_argument("--u", type=real_number)
    p.add_argument("--momenta", type=parse_momenta, help='"E,px,py,pz;..." for p1..p4')

    for name, help_ in (("trace", "trace of a loop-factor product"), ("project", "finite-part projection")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--factors", type=parse_factors, help='"rho_D,rho_ND;..." (pi allowed)')
        p.add_argument("--n", type=int, default=0)

    p = sub.add_parser("factor", parents=[common], help="loop factors from gamma coefficients")
    p.add_argument("--gammas", type=parse_number_list, help='"g0,g1,...,gL" (coefficient of eps^-k)')
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--gauge", choices=[g.value for g in states.GaugeChoice], default="unit_nd")
    p.add_argument("--root-method", choices=("companion", "durand-kerner"), default="companion")

    p = sub.add_parser("rgflow", parents=[common], help="one-loop RG trajectory")
    p.add_argument("--lambda-s", type=real_number)
    p.add_argument("--mu-s", type=real_number)
    p.add_argument("--m-s-sq", type=real_number)
    p.add_argument("--mu-end", type=real_number)
    p.add_argument("--steps", type=positive_int, default=1000)
    p.add_argument("--method", choices=[m.value for m in rgflow.Method], default="rk4")

    p = sub.add_parser("resum", parents=[common], help="series resummations")
    p.add_argument("kind", choices=("propagator", "vacuum", "coupling", "mass"))
    p.add_argument("--p-sq", type=real_number)
    p.add_argument("--m0sq", type=real_number)
    p.add_argument("--M", type=parse_number)
    p.add_argument("--K", type=int)
    p.add_argument("--R1", type=parse_number)
    p.add_argument("--two-tv", type=real_number, help="spacetime volume 2TV")
    p.add_argument("--lambda0", type=real_number)
    p.add_argument("--betas", type=parse_number_list, help="beta_0 values, lowest order first")

    p = sub.add_parser("delta-demo", parents=[common], help="Lorentzian delta trace by quadrature")
    p.add_argument("--eps", type=real_number)
    p.add_argument("--kernel", default="gaussian")
    p.add_argument("--window", type=real_number, default=50.0)
    p.add_argument("--rtol", type=real_number, default=1e-8)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        values = load_config(known.config)
    except OSError as exc:
        raise UsageError(f"--config: {exc}") from exc
    command = next((a for a in argv if a in COMMANDS), None)
    if command is None:
        return
    subparser = parser._subparsers._group_actions[0].choices[command]  # noqa: SLF001
    dests = {a.dest for a in subparser._actions}  # noqa: SLF001
    unknown = sorted(set(values) - dests)
    if unknown:
        raise UsageError(f"--config: unknown key(s) for {command}: {', '.join(unknown)}")
    # argparse applies `type` to string defaults, so the raw strings are fine here
    subparser.set_defaults(**values)


# -- output -------------------------------------------------------------------


def _to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in row.items()})
    return buf.getvalue()


def render(out: Output, fmt: str) -> str:
    if fmt == "csv":
        return _to_csv(out.rows)
    if fmt == "text":
        if out.text is not None:
            return out.text + "\n"
        return "".join(f"{k} = {v}\n" for row in out.rows for k, v in row.items())
    return json.dumps(out.payload, indent=2) + "\n"


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"obstate: usage error: {exc}", file=stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        out = HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"obstate: usage error: {exc}", file=stderr)
        return 2
    except (ObstateError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 1

    fmt = args.format
    if fmt is None:
        fmt = "csv" if args.out and args.out.endswith(".csv") else "json"
    text = render(out, fmt)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
