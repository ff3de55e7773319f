"""Command-line entry point: ``qorbifold <verb> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or validation error.
Instance arguments accept a path or the name of a shipped instance
(``qorbifold list`` shows them).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

import numpy as np

from qorbifold.crossed import commuting_deformation_compare
from qorbifold.errors import NumericalFailure, QorbifoldError
from qorbifold.projections import BumpSpec, flip_orbit, is_self_adjoint, projection_residuals
from qorbifold.symmetry import check_compatibility, equivariance_residual
from qorbifold.theta_sphere import GENERATOR_NAMES, relation_report
from qorbifold.weight_algebra import (
    DEFAULT_SCHEDULE,
    AlgebraElement,
    DeformationForm,
    STANDARD_J0,
    oscillatory_check,
    phase,
    skew_pairing,
)
from qorbifold.workbench.instance import (
    generate_sphere_instance,
    generate_torus_instance,
    instance_to_dict,
    load_instance,
    save_instance,
    shipped_instances,
    validation_report,
)

DEFAULT_SEED = 20240917

OK, FAIL, USAGE = 0, 1, 2


def _emit(args, payload: dict, lines: list[str]):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=1, default=str))
    else:
        print("\n".join(lines))


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _real(text: str) -> float:
    """Float, fraction ``a/b``, or ``sqrt(n)[+-k]`` such as ``sqrt(2)-1``."""
    t = text.replace(" ", "")
    try:
        return float(Fraction(t))
    except ValueError:
        pass
    if t.startswith("sqrt(") and ")" in t:
        head, _, tail = t.partition(")")
        try:
            return math.sqrt(float(head[5:])) + (float(tail) if tail else 0.0)
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"cannot read {text!r} as a number")


# --- verbs ------------------------------------------------------------------------


def cmd_list(args) -> int:
    names = shipped_instances()
    _emit(args, {"instances": names}, names)
    return OK


def cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    rep = validation_report(inst)
    lines = [f"{inst.name}: " + ("valid" if rep.ok else "INVALID")]
    lines += [f"  {'ok ' if ok else 'BAD'} {path:32s} {detail}" for path, ok, detail in rep.checks]
    _emit(args, {"name": inst.name, "ok": rep.ok,
                 "checks": [{"field": p, "ok": ok, "detail": d} for p, ok, d in rep.checks]}, lines)
    return OK if rep.ok else USAGE


def cmd_check_compat(args) -> int:
    inst = load_instance(args.instance)
    rep = check_compatibility(inst.action, inst.deformation)
    lines = [f"{inst.name}: order {inst.action.order}, generator {inst.action.generator}",
             f"  preserves J0   : {rep.symplectic_ok}",
             f"  det = 1        : {rep.det_ok}",
             f"  exact order    : {rep.order_ok}",
             f"  compatible     : {rep.ok}"]
    lines += [f"  witness: {w}" for w in rep.witnesses]
    _emit(args, {"name": inst.name, "compatible": rep.ok, "symplectic_ok": rep.symplectic_ok,
                 "det_ok": rep.det_ok, "order_ok": rep.order_ok, "witnesses": rep.witnesses}, lines)
    return OK if rep.ok else FAIL


def cmd_product(args) -> int:
    J0 = json.loads(args.j0) if args.j0 else STANDARD_J0
    D = DeformationForm(J0, args.theta)
    m = skew_pairing(args.p, args.q, D.J0)
    value = phase(m, D.theta)
    weight = tuple(a + b for a, b in zip(args.p, args.q))
    payload = {"p": args.p, "q": args.q, "theta": D.theta, "weight": weight, "m": m,
               "coefficient": [value.real, value.imag]}
    lines = [f"e{list(args.p)} x_J e{list(args.q)} = exp(-2 pi i theta * {m}) e{list(weight)}",
             f"  coefficient at theta={D.theta}: {value:.15g}"]
    status = OK
    if args.oracle:
        t0 = time.perf_counter()
        est = oscillatory_check(args.p, args.q, D, args.schedule or DEFAULT_SCHEDULE, args.method)
        diff = abs(est - value)
        payload.update(oracle=[est.real, est.imag], oracle_difference=diff, tolerance=args.tol)
        lines.append(f"  oscillatory integral ({args.method}): {est:.12g}  |diff| = {diff:.3e}"
                     f"  ({time.perf_counter() - t0:.2f}s)")
        status = OK if diff <= args.tol else FAIL
    _emit(args, payload, lines)
    return status


def cmd_equivariance(args) -> int:
    inst = load_instance(args.instance)
    D, act = inst.deformation, inst.action
    compat = check_compatibility(act, D).ok
    box = args.box if args.box is not None else (3 if D.rank <= 2 else 1)
    rng = np.random.default_rng(args.seed)
    grid = np.array(np.meshgrid(*[range(-box, box + 1)] * D.rank, indexing="ij")).reshape(D.rank, -1).T
    # two independent elements: a x a alone is blind to J -> -J
    full_a, full_b = (AlgebraElement({tuple(int(x) for x in w): complex(rng.normal(), rng.normal())
                                      for w in grid}, D.rank) for _ in range(2))
    rows, worst, mismatches = [], 0.0, 0
    for g in range(1, act.order):
        res = equivariance_residual(act, g, full_a, full_b, D, allow_incompatible=True)
        sample_worst = 0.0
        for _ in range(args.samples):
            a = AlgebraElement.random(rng, D.rank, box=args.sample_box)
            b = AlgebraElement.random(rng, D.rank, box=args.sample_box)
            sample_worst = max(sample_worst, equivariance_residual(act, g, a, b, D, True).residual)
        worst = max(worst, res.residual, sample_worst)
        mismatches += len(res.mismatches)
        rows.append({"g": g, "box_residual": res.residual, "sample_residual": sample_worst,
                     "mismatches": len(res.mismatches),
                     "first_mismatch": list(res.mismatches[0]) if res.mismatches else None})
    ok = worst == 0.0 and mismatches == 0
    lines = [f"{inst.name}: compatible={compat}, box |p|,|q| <= {box}, "
             f"{args.samples} random pairs per g, seed {args.seed}"]
    for r in rows:
        lines.append(f"  g={r['g']}: box residual {r['box_residual']:.3e}, samples {r['sample_residual']:.3e}, "
                     f"phase mismatches {r['mismatches']}"
                     + (f" e.g. (p, q, m, m') = {tuple(r['first_mismatch'])}" if r["first_mismatch"] else ""))
    lines.append("equivariant" if ok else "NOT equivariant")
    _emit(args, {"name": inst.name, "compatible": compat, "box": box, "seed": args.seed,
                 "ok": ok, "elements": rows}, lines)
    return OK if ok else FAIL


def cmd_crossed_iso(args) -> int:
    inst = load_instance(args.instance)
    if inst.translation is None:
        raise QorbifoldError(f"{inst.name} has no translation block; "
                             "the commuting-case comparison needs one (see torus_z2)")
    thetas = args.theta if args.theta else [0.0, 0.1, 1 / 3]
    rows, ok = [], True
    lines = [f"{inst.name}: translation by {tuple(str(t) for t in inst.translation.shift)}, box {args.box}"]
    for th in thetas:
        t0 = time.perf_counter()
        rep = commuting_deformation_compare(inst.translation, inst.translation.order,
                                            inst.deformation.with_theta(th), args.box)
        ok &= rep.ok
        rows.append({"theta": th, "pairs": rep.pairs, "exact_mismatches": len(rep.exact_mismatches),
                     "max_abs_difference": rep.max_abs_difference})
        lines.append(f"  theta={th:.6g}: {rep.pairs} pairs, exact mismatches {len(rep.exact_mismatches)}, "
                     f"max |difference| {rep.max_abs_difference:.3e} ({time.perf_counter() - t0:.2f}s)")
    lines.append("isomorphic on the box" if ok else "MISMATCH")
    _emit(args, {"name": inst.name, "ok": ok, "results": rows}, lines)
    return OK if ok else FAIL


def cmd_ktheory(args) -> int:
    from qorbifold.equiv_k.homology import equivariant_k_ranks

    inst = load_instance(args.instance)
    t0 = time.perf_counter()
    rep = equivariant_k_ranks(inst.gcomplex(), method=args.method, audit=args.audit)
    elapsed = time.perf_counter() - t0
    payload = rep.as_dict()
    payload.update(name=inst.name, seconds=round(elapsed, 3))
    expected = args.expect or (tuple(inst.metadata["expected_k_ranks"])
                               if "expected_k_ranks" in inst.metadata else None)
    ok = expected is None or tuple(expected) == rep.totals
    if expected is not None:
        payload.update(expected=list(expected), ok=ok)
    lines = [f"{inst.name}: G = Z/{rep.order}, method {rep.method}, "
             f"subdivisions {rep.regularity_level}, {elapsed:.2f}s",
             f"  {'g':>3} {'|X^g|':>7} {'betti(X^g/G)':24} {'even':>5} {'odd':>4}"]
    for s in rep.strata:
        lines.append(f"  {s.g:>3} {s.fixed_size:>7} {str(s.betti):24} {s.even:>5} {s.odd:>4}")
    lines.append(f"  rank K^0_G = {rep.k0_rank}, rank K^1_G = {rep.k1_rank}")
    if expected is not None:
        lines.append(f"  expected {tuple(expected)}: {'match' if ok else 'MISMATCH'}")
    _emit(args, payload, lines)
    return OK if ok else FAIL


def cmd_projection(args) -> int:
    spec = BumpSpec(args.theta_prime, args.eps, args.grid)
    t0 = time.perf_counter()
    rep = projection_residuals(spec)
    p, fp = flip_orbit(spec)
    adj = is_self_adjoint(p) and is_self_adjoint(fp)
    trace_ok = rep.trace == spec.theta_prime
    ok = rep.max_residual <= args.tol and trace_ok and adj
    payload = {"theta_prime": spec.theta_prime, "eps": spec.ramp_width, "grid": rep.grid_size,
               "cond_orthogonality": rep.cond_orthogonality, "cond_partition": rep.cond_partition,
               "cond_square": rep.cond_square, "square_residual": rep.square_residual,
               "trace": rep.trace, "self_adjoint": adj, "tolerance": args.tol, "ok": ok}
    lines = [f"theta'={spec.theta_prime:.15g}, eps={spec.ramp_width:g}, grid {rep.grid_size} "
             f"({time.perf_counter() - t0:.2f}s)",
             f"  g(t) g(t - theta')                    {rep.cond_orthogonality:.3e}",
             f"  g(t) (f(t) + f(t - theta') - 1)       {rep.cond_partition:.3e}",
             f"  f - f^2 - g^2 - g(t + theta')^2       {rep.cond_square:.3e}",
             f"  max |p x p - p| (componentwise)       {rep.square_residual:.3e}",
             f"  trace = int f = {rep.trace!r}",
             f"  p and flip(p) self-adjoint: {adj}",
             "projection" if ok else "NOT a projection within tolerance"]
    _emit(args, payload, lines)
    return OK if ok else FAIL


def cmd_sphere_relations(args) -> int:
    D = DeformationForm(STANDARD_J0, args.theta)
    rep = relation_report(D)
    ok = rep.radius_central and rep.x5_central and rep.action_residual == 0
    lines = [f"theta = {rep.theta}"]
    order = {n: i for i, n in enumerate(GENERATOR_NAMES)}
    lines += [f"  {e.describe()}" for e in rep.entries if order[e.left] < order[e.right]]
    lines += [f"  radius element central: {rep.radius_central}",
              f"  x5 central: {rep.x5_central}",
              f"  reflection equivariance residual: {rep.action_residual:.3e}"]
    _emit(args, {"theta": rep.theta, "ok": ok, "radius_central": rep.radius_central,
                 "x5_central": rep.x5_central, "action_residual": rep.action_residual,
                 "relations": [{"left": e.left, "right": e.right, "exponent": e.exponent,
                                "pi_theta_exponent": e.pi_theta_exponent} for e in rep.entries]}, lines)
    return OK if ok else FAIL


def cmd_gen(args) -> int:
    if args.kind == "torus":
        if args.order is None:
            raise QorbifoldError("gen torus needs --order (2, 3, 4 or 6)")
        inst = generate_torus_instance(args.order, args.N, args.theta)
    else:
        inst = generate_sphere_instance(args.theta)
    if args.output:
        save_instance(inst, args.output)
        print(f"wrote {inst.name} to {args.output}", file=sys.stderr)
    else:
        print(json.dumps(instance_to_dict(inst), indent=1))
    return OK


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qorbifold", description="Quantum orbifold workbench")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_, instance=True):
        sp = sub.add_parser(name, help=help_)
        if instance:
            sp.add_argument("instance", help="instance file or shipped instance name")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=fn)
        return sp

    verb("list", cmd_list, "list shipped instances", instance=False)
    verb("validate", cmd_validate, "validate an instance file")
    verb("check-compat", cmd_check_compat, "does the action preserve J?")

    sp = verb("product", cmd_product, "deformed product of two characters", instance=False)
    sp.add_argument("--p", type=_int_list, required=True)
    sp.add_argument("--q", type=_int_list, required=True)
    sp.add_argument("--theta", type=_real, required=True)
    sp.add_argument("--j0", help="integer skew matrix as JSON (default [[0,1],[-1,0]])")
    sp.add_argument("--oracle", action="store_true", help="also evaluate the oscillatory integral")
    sp.add_argument("--method", choices=("closed", "quadrature"), default="closed")
    sp.add_argument("--schedule", type=float, nargs="+")
    sp.add_argument("--tol", type=float, default=1e-3)

    sp = verb("equivariance", cmd_equivariance, "beta_g(a x b) = beta_g(a) x beta_g(b)?")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--box", type=int, help="exhaustive weight box (default 3, or 1 above rank 2)")
    sp.add_argument("--sample-box", type=int, default=4)

    sp = verb("crossed-iso", cmd_crossed_iso, "commuting-case crossed product comparison")
    sp.add_argument("--box", type=int, default=2)
    sp.add_argument("--theta", type=_real, nargs="*")

    sp = verb("ktheory", cmd_ktheory, "rational equivariant K-ranks")
    sp.add_argument("--method", choices=("exact", "modular"), default="modular")
    sp.add_argument("--audit", action="store_true", help="cross-check exact against modular ranks")
    sp.add_argument("--expect", type=_int_list, help="K0,K1 to compare against")

    sp = verb("projection", cmd_projection, "bump-function projection residuals", instance=False)
    sp.add_argument("--theta-prime", type=_real, required=True)
    sp.add_argument("--eps", type=_real, required=True)
    sp.add_argument("--grid", type=int, default=100_000)
    sp.add_argument("--tol", type=float, default=1e-12)

    sp = verb("sphere-relations", cmd_sphere_relations, "commutation relations on the deformed 4-sphere",
              instance=False)
    sp.add_argument("--theta", type=_real, required=True)

    sp = sub.add_parser("gen", help="generate an instance file")
    sp.add_argument("kind", choices=("torus", "sphere"))
    sp.add_argument("--order", "-i", type=int)
    sp.add_argument("--N", type=int, default=6)
    sp.add_argument("--theta", type=_real, default=0.1)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except (QorbifoldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
