"""Command-line front end.

Exit codes: 0 when a check passes, 1 when a verified property fails, 2 for
usage errors and malformed configs.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Callable

import click
import jsonschema
from joblib import Memory

from . import __version__
from .cosim_algebra import (
    alt,
    axiom_failures,
    cohomology,
    homomorphism_failures,
    hodge_top,
    in_span,
    is_coboundary,
    operator_identity_check,
    symmetry_failures,
    verify_n_commutativity,
)
from .formula_gen import Formula, bracket_formula, compile, cup_formula
from .instances import (
    LieAlgebraSpec,
    alt_project,
    build_uea,
    complex_from_spec,
    forgetful_complex,
    invariant_complex,
    lambda_embed,
    multivector_text,
    schouten,
)
from .lattice_ops import complexity, enumerate_normal, enumerate_smooth_lp, project_to_m, sign
from .paths_m import enumerate_delannoy, enumerate_smooth, linking_number
from .simplicial_core import OrdinalMap, parity_sign

FAIL_EXIT = 1
USAGE_EXIT = 2


def _memory() -> Memory:
    return Memory(location=os.environ.get("OPAD_CACHE_DIR") or None, verbose=0)


# cached enumerations; plain data so joblib can hash and store them


def _smooth_rows(p: int, q: int, n: int) -> list[str]:
    return [str(phi) for phi in enumerate_smooth(p, q, n)]


def _normal_rows(p: int, q: int, n: int) -> list[dict]:
    even, odd = enumerate_normal(p, q, n)
    rows = []
    for psi in even + odd:
        rows.append(
            {
                "path": psi.text(),
                "parity": "even" if psi in even else "odd",
                "sign": sign(psi),
                "complexity": complexity(psi),
                "smooth": psi in set(sum(enumerate_smooth_lp(p, q, n), ())),
                "projection": str(project_to_m(psi)),
            }
        )
    return rows


def _formula_json(kind: str, p: int, q: int, k: int) -> dict:
    F = cup_formula(p, q, k) if kind == "cup" else bracket_formula(p, q, k)
    return F.to_json()


def _cached(fn: Callable) -> Callable:
    return _memory().cache(fn)


# helpers


def parse_map_literal(text: str, cod: int | None = None) -> OrdinalMap:
    """``"0,1,2"`` -> the map with those values."""
    try:
        values = [int(v) for v in text.split(",") if v.strip() != ""]
        if not values:
            raise ValueError("empty map")
        return OrdinalMap.from_values(values, cod)
    except ValueError as exc:
        raise click.BadParameter(f"{text!r}: {exc}") from exc


def load_config(path: str) -> LieAlgebraSpec:
    """Load and validate; schema problems exit with code 2 naming the field."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(USAGE_EXIT)
    try:
        return LieAlgebraSpec.from_config(data)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        click.echo(f"error: {path}: {where}: {exc.message}", err=True)
        sys.exit(USAGE_EXIT)
    except ValueError as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(USAGE_EXIT)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    lines: list[str] = field(default_factory=list)

    def report(self) -> str:
        return "\n".join(self.lines + [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"])


class SuiteUnavailable(ValueError):
    """The config cannot host this suite (wrong characteristic, missing structure)."""


# verification suites


def suite_commutativity(spec: LieAlgebraSpec) -> SuiteResult:
    uea = build_uea(spec)
    N = spec.max_degree
    res = SuiteResult("commutativity", True)
    for inst, n, label in ((forgetful_complex(uea, N), 1, "forgetful"), (invariant_complex(uea, N), 2, "invariant")):
        rep = verify_n_commutativity(inst, n, N)
        res.lines.append(f"{label} complex {n}-commutative up to degree {N}: {bool(rep)} ({rep.checked} pairs)")
        res.passed &= bool(rep)
    return res


def suite_symmetry(spec: LieAlgebraSpec) -> SuiteResult:
    inst = complex_from_spec(spec, "forgetful")
    res = SuiteResult("symmetry", True)
    for label, fn in (
        ("cosimplicial identities", axiom_failures),
        ("multiplicativity", homomorphism_failures),
        ("symmetric action", symmetry_failures),
    ):
        bad = fn(inst)
        res.lines.append(f"{label}: {len(bad)} failures" + (f", first {bad[0]}" if bad else ""))
        res.passed &= not bad
    return res


def suite_pac(spec: LieAlgebraSpec) -> SuiteResult:
    N = spec.max_degree
    if spec.field.divides_factorial(N):
        raise SuiteUnavailable(f"pac needs {N}! invertible in {spec.field.name}")
    uea = build_uea(spec)
    F = forgetful_complex(uea, N)
    res = SuiteResult("pac", True)
    ok = all(
        not alt(F, n + 1, F.differential(n, {k: F.field.one}))
        for n in range(1, N)
        for k in F.basis(n)
    )
    res.lines.append(f"alt after the differential vanishes: {ok}")
    res.passed &= ok
    ok = operator_identity_check(F, 2)
    res.lines.append(f"operator identity, n = 2: {ok}")
    res.passed &= ok
    inv = invariant_complex(uea, N)
    tops = {n: hodge_top(inv, n) for n in range(1, N)}
    bad = checked = 0
    for p, q in ((p, q) for p in tops for q in tops):
        out = p + q - 2
        if out < 1:
            continue
        B = compile(bracket_formula(p, q, 2), inv)
        for a in tops[p]:
            for b in tops[q]:
                checked += 1
                bad += bool(alt(inv, out, B(a, b)))
    res.lines.append(f"alt of the degree 2 bracket on antisymmetric poly-primitives: {checked - bad}/{checked} vanish")
    res.passed &= bad == 0
    return res


def _central_pair(spec: LieAlgebraSpec) -> tuple[int, int, int]:
    """``(i, j, k)`` with ``[e_i, e_j]`` a nonzero multiple of a central ``e_k``."""
    for i, j in combinations(range(spec.dim), 2):
        br = spec.bracket(i, j)
        if len(br) != 1:
            continue
        (k,) = br
        if k in (i, j):
            continue
        if all(not spec.bracket(k, t) for t in range(spec.dim)):
            return i, j, k
    raise SuiteUnavailable("nte needs [x,y] = c*z with z central")


def nte_data(spec: LieAlgebraSpec) -> dict:
    """Degree 2 bracket of ``x^z`` and ``y^z`` in the invariant complex, with its coboundary test."""
    if spec.field.characteristic == 0:
        raise SuiteUnavailable("nte needs a prime characteristic")
    if spec.max_degree < 2:
        raise SuiteUnavailable("nte needs max_degree >= 2")
    i, j, k = _central_pair(spec)
    x, y, z = (spec.names[t] for t in (i, j, k))
    inv = invariant_complex(build_uea(spec), spec.max_degree)
    a = inv.element({(x, z): 1, (z, x): -1})
    b = inv.element({(y, z): 1, (z, y): -1})
    br = compile(bracket_formula(2, 2, 2), inv)(a, b)
    target = inv.element({(z, f"{z}^2"): 1, (f"{z}^2", z): 1})
    ratio = None
    if br and set(br) == set(target):
        cs = {br[key] / target[key] for key in br}
        ratio = cs.pop() if len(cs) == 1 else None
    center = inv.subspace(1)
    exact = in_span([inv.differential(1, v) for v in center], br, inv.field) if br else True
    return {
        "instance": inv,
        "bracket": br,
        "target": target,
        "ratio": ratio,
        "in_image_of_center": exact,
        "coboundary": is_coboundary(inv, 2, br),
        "center_dim": len(center),
    }


def suite_nte(spec: LieAlgebraSpec) -> SuiteResult:
    d = nte_data(spec)
    inv = d["instance"]
    res = SuiteResult("nte", bool(d["bracket"]) and not d["in_image_of_center"])
    res.lines.append(f"bracket = {inv.text(d['bracket'])}")
    if d["ratio"] is not None:
        res.lines.append(f"        = {inv.field.to_text(d['ratio'])} * ({inv.text(d['target'])})")
    res.lines.append(f"in the image of the {d['center_dim']}-dimensional center: {d['in_image_of_center']}")
    res.lines.append(f"nonzero class in truncated H^2: {not d['coboundary']}")
    return res


def schouten_pairs(spec: LieAlgebraSpec) -> list[tuple[tuple[int, ...], tuple[int, ...], dict, dict]]:
    """``(a, b, alt-projected bracket, Schouten bracket)`` over basis pairs from degrees one and two."""
    if spec.field.characteristic:
        raise SuiteUnavailable("schouten needs characteristic 0")
    F = forgetful_complex(build_uea(spec), spec.max_degree)
    basis = {p: list(combinations(range(spec.dim), p)) for p in (1, 2)}
    out = []
    for p in (1, 2):
        for q in (1, 2):
            n = p + q - 1
            if n > spec.max_degree:
                continue
            B = compile(bracket_formula(p, q, 1), F)
            for a in basis[p]:
                for b in basis[q]:
                    x = B(lambda_embed({a: Fraction(1)}, F), lambda_embed({b: Fraction(1)}, F))
                    out.append((a, b, alt_project(x, n, F), schouten({a: Fraction(1)}, {b: Fraction(1)}, spec)))
    return out


def schouten_sign(p: int, q: int) -> int:
    """Sign relating the alt-projected bracket to the Schouten bracket."""
    return parity_sign(p * (q - 1))


def suite_schouten(spec: LieAlgebraSpec) -> SuiteResult:
    rows = schouten_pairs(spec)
    bad = []
    for a, b, lhs, rhs in rows:
        s = schouten_sign(len(a), len(b))
        if lhs != {k: s * c for k, c in rhs.items() if c}:
            bad.append((a, b, lhs, rhs))
    res = SuiteResult("schouten", not bad)
    res.lines.append(f"basis pairs checked: {len(rows)}, mismatches: {len(bad)}")
    for a, b, lhs, rhs in bad[:3]:
        res.lines.append(f"  {a} {b}: {multivector_text(lhs, spec)} vs {multivector_text(rhs, spec)}")
    return res


SUITES: dict[str, Callable[[LieAlgebraSpec], SuiteResult]] = {
    "commutativity": suite_commutativity,
    "symmetry": suite_symmetry,
    "pac": suite_pac,
    "nte": suite_nte,
    "schouten": suite_schouten,
}


def run_suite(name: str, spec: LieAlgebraSpec) -> SuiteResult:
    return SUITES[name](spec)


# commands


@click.group()
@click.version_option(__version__, prog_name="opad")
def main() -> None:
    """Lattice paths, cup_i and bracket formulas, and their evaluation on instances."""


@main.group()
def paths() -> None:
    """Paths operad: linking numbers, Delannoy and smooth paths."""


@paths.command("lk")
@click.option("--tau", required=True, help="values of the first map, comma separated")
@click.option("--pi", "pi_", required=True, help="values of the second map, comma separated")
@click.option("--m", "m", type=int, default=None, help="common codomain [m]; default: largest value")
def paths_lk(tau: str, pi_: str, m: int | None) -> None:
    """Linking number of a pair of maps into [m]."""
    if m is None:
        m = max(parse_map_literal(tau).cod, parse_map_literal(pi_).cod)
    click.echo(linking_number(parse_map_literal(tau, m), parse_map_literal(pi_, m)))


@paths.command("delannoy")
@click.option("-p", type=click.IntRange(0), required=True)
@click.option("-q", type=click.IntRange(0), required=True)
@click.option("--list", "show", is_flag=True, help="print the paths as well")
def paths_delannoy(p: int, q: int, show: bool) -> None:
    """Delannoy paths to (p+1, q+1)."""
    found = enumerate_delannoy(p, q)
    if show:
        for phi in found:
            click.echo(str(phi))
    click.echo(len(found))


@paths.command("smooth")
@click.option("-p", type=click.IntRange(0), required=True)
@click.option("-q", type=click.IntRange(0), required=True)
@click.option("-n", type=click.IntRange(0), required=True, help="linking number")
def paths_smooth(p: int, q: int, n: int) -> None:
    """Smooth paths with linking number exactly n."""
    rows = _cached(_smooth_rows)(p, q, n)
    for r in rows:
        click.echo(r)
    click.echo(f"{len(rows)} paths")


@main.group()
def lattice() -> None:
    """Lattice paths operad."""


@lattice.command("normal")
@click.option("-p", type=click.IntRange(0), required=True)
@click.option("-q", type=click.IntRange(0), required=True)
@click.option("-n", type=click.IntRange(0), required=True, help="complexity")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def lattice_normal(p: int, q: int, n: int, fmt: str) -> None:
    """Normal binary lattice paths of complexity exactly n."""
    rows = _cached(_normal_rows)(p, q, n)
    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
        return
    for r in rows:
        flag = " smooth" if r["smooth"] else ""
        click.echo(f"{r['path']}  {r['parity']} sign {r['sign']:+d}{flag}  {r['projection']}")
    smooth = sum(r["smooth"] for r in rows)
    click.echo(f"{len(rows)} normal, {smooth} smooth")


@main.group()
def formula() -> None:
    """Signed formulas for cup_i products and brackets."""


def _emit_formula(data: dict, fmt: str) -> None:
    F = Formula.from_json(data)
    click.echo(F.dumps() if fmt == "json" else F.text())


@formula.command("cup")
@click.option("-p", type=click.IntRange(0), required=True)
@click.option("-q", type=click.IntRange(0), required=True)
@click.option("-i", "i", type=click.IntRange(0), required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def formula_cup(p: int, q: int, i: int, fmt: str) -> None:
    """a cup_i b on degrees p, q."""
    _emit_formula(_cached(_formula_json)("cup", p, q, i), fmt)


@formula.command("bracket")
@click.option("-p", type=click.IntRange(0), required=True)
@click.option("-q", type=click.IntRange(0), required=True)
@click.option("-n", type=click.IntRange(1), required=True, help="bracket degree: the operation lowers degree by n")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def formula_bracket(p: int, q: int, n: int, fmt: str) -> None:
    """Degree n bracket on degrees p, q."""
    _emit_formula(_cached(_formula_json)("bracket", p, q, n), fmt)


@main.group()
def instance() -> None:
    """Instances from a Lie algebra config."""


_config_opt = click.option("--config", "config", required=True, type=click.Path(dir_okay=False))


@instance.command("cohomology")
@_config_opt
@click.option("--degree", type=click.IntRange(1), required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def instance_cohomology(config: str, degree: int, fmt: str) -> None:
    """Dimension and representatives of truncated cohomology."""
    spec = load_config(config)
    if degree >= spec.max_degree:
        raise click.BadParameter(f"degree must stay below max_degree {spec.max_degree}", param_hint="--degree")
    inst = complex_from_spec(spec)
    H = cohomology(inst, degree)
    reps = [inst.text(r) for r in H.representatives]
    if fmt == "json":
        click.echo(json.dumps({"degree": degree, "dim": H.dimension, "representatives": reps}, ensure_ascii=False))
        return
    click.echo(f"dim H^{degree} = {H.dimension}")
    for r in reps:
        click.echo(f"  {r}")


@instance.command("bracket")
@_config_opt
@click.option("--deg-a", type=click.IntRange(1), required=True)
@click.option("--deg-b", type=click.IntRange(1), required=True)
@click.option("--n", "n", type=click.IntRange(1), required=True, help="bracket degree")
def instance_bracket(config: str, deg_a: int, deg_b: int, n: int) -> None:
    """Brackets of cohomology representatives, with a coboundary test."""
    spec = load_config(config)
    out = deg_a + deg_b - n
    top = spec.max_degree
    if max(deg_a, deg_b) >= top or not 1 <= out < top:
        raise click.BadParameter(f"degrees {deg_a}, {deg_b} -> {out} must stay in 1..{top - 1}")
    inst = complex_from_spec(spec)
    A = cohomology(inst, deg_a).representatives
    B = cohomology(inst, deg_b).representatives
    op = compile(bracket_formula(deg_a, deg_b, n), inst)
    for s, a in enumerate(A):
        for t, b in enumerate(B):
            x = op(a, b)
            kind = "exact" if is_coboundary(inst, out, x) else "nontrivial"
            click.echo(f"[{s},{t}] {kind}: {inst.text(x)}")
    click.echo(f"{len(A) * len(B)} pairs")


@instance.command("verify")
@_config_opt
@click.option("--suite", type=click.Choice(sorted(SUITES)), required=True)
def instance_verify(config: str, suite: str) -> None:
    """Run a verification suite; exit code 1 when it fails."""
    spec = load_config(config)
    try:
        res = run_suite(suite, spec)
    except SuiteUnavailable as exc:
        click.echo(f"error: {Path(config).name}: {exc}", err=True)
        sys.exit(USAGE_EXIT)
    click.echo(res.report())
    if not res.passed:
        sys.exit(FAIL_EXIT)
