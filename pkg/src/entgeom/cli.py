"""Command-line interface.

Exit codes: 0 success or Disjoint, 1 usage or parse error, 2 Inconclusive,
3 verification failure (an estimate or check disagreeing with the exact value).
"""

from __future__ import annotations

import random
import sys
from functools import reduce

import click

from . import entropy as ent
from .disjoint import (
    Disjoint,
    DisjointnessError,
    certificate_text,
    disjoint_auto,
    disjoint_corank_one,
    disjoint_rank_one,
    parse_certificate,
    recheck_certificate,
)
from .factor import DEFAULT_EFFORT
from .fpsolve import CountReport, WindowError, brute_force_count, build_system, kernel_dim
from .laurent import LaurentPoly, is_monomial, mul, render
from .polytope import (
    ConeComplex,
    FiniteDirections,
    GeometryError,
    newton_polytope,
    nonexpansive_set,
    primitive,
)
from .report import Report, vec_text
from .shiftsys import Presentation, PresentationError, higher_block, principal_factors, region_box
from .svg import polygon_svg
from .values import EntropyValue
from .sysfile import SystemFileError, load_system

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_VERIFY = 0, 1, 2, 3

AR_DIRECTIONS = ((1, 1), (0, 1), (-1, 0))


class CliError(click.ClickException):
    exit_code = EXIT_USAGE


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        v = tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise CliError(f"bad vector {text!r}; expected e.g. 1,1") from None
    if not any(v):
        raise CliError("the zero vector is not a direction")
    return v


def parse_schedule(text: str | None, default):
    """``L,D;L,D;...`` with every window at least as large as the previous one in both entries."""
    if not text:
        return tuple(default)
    wins = []
    for part in text.split(";"):
        try:
            a, b = (int(x) for x in part.split(","))
        except ValueError:
            raise CliError(f"bad window {part!r}; expected L,D") from None
        if a < 0 or b < 1:
            raise CliError(f"window {part!r} needs L >= 0 and D >= 1")
        wins.append((a, b))
    for w0, w1 in zip(wins, wins[1:]):
        if not (w1[0] >= w0[0] and w1[1] >= w0[1] and w1 != w0):
            raise CliError("window schedule must be strictly increasing")
    return tuple(wins)


def _load(path: str) -> Presentation:
    try:
        return load_system(path)
    except SystemFileError as exc:
        raise CliError(str(exc)) from None


def _emit(ctx: click.Context, rep: Report) -> None:
    fmt = ctx.obj["format"]
    click.echo(rep.structured() if fmt == "structured" else rep.text(), nl=False)


def _relation_poly(pres: Presentation) -> LaurentPoly:
    """The annihilating polynomial: f itself, or the product of the factors' polynomials."""
    try:
        facs = principal_factors(pres)
    except PresentationError as exc:
        raise CliError(str(exc)) from None
    if len({p for p, _ in facs}) != 1:
        raise CliError("factors over different primes have no single annihilating polynomial")
    return reduce(mul, (f for _, f in facs))


def _entropy_errors(fn):
    try:
        return fn()
    except (ent.EntropyError, GeometryError, WindowError, PresentationError) as exc:
        raise CliError(str(exc)) from None


@click.group()
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]), default="text", help="Report format.")
@click.option("--window", default=None, help="Window schedule 'L,D;L,D;...'.")
@click.option("--effort", type=int, default=DEFAULT_EFFORT, show_default=True, help="Irreducibility search bound.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized suites.")
@click.option("--workers", type=int, default=1, show_default=True, help="Threads for window computations.")
@click.pass_context
def cli(ctx, fmt, window, effort, seed, workers):
    """Expansive geometry, entropy and disjointness of algebraic Z^d-actions."""
    ctx.ensure_object(dict)
    ctx.obj.update(format=fmt, window=window, effort=effort, seed=seed, workers=workers)


@cli.command()
@click.argument("files", nargs=-1, required=True)
@click.option("--svg", "svg_path", default=None, help="Write the polygon (d=2) as SVG.")
@click.pass_context
def newton(ctx, files, svg_path):
    """Newton polygon / polytope of each system's annihilating polynomial."""
    rep = Report("newton")
    for path in files:
        pres = _load(path)
        f = _relation_poly(pres)
        rep.add("system", pres.name or path)
        rep.add("polynomial", render(f))
        if is_monomial(f):
            rep.add("notice", "degenerate polytope: monomial relation, single point")
            continue
        try:
            poly = newton_polytope(f)
        except GeometryError as exc:
            raise CliError(str(exc)) from None
        rep.add("affine_dim", poly.affine_dim)
        for v in poly.vertices:
            rep.add("vertex", vec_text(v))
        if poly.dim == 2:
            for e in poly.edges:
                rep.add("edge", f"{vec_text(e.start)}-{vec_text(e.end)} normal {vec_text(e.normal)} length {e.lattice_length}")
        else:
            for fc in poly.faces:
                rep.add("face", f"normal {vec_text(fc.normal)} vertices {' '.join(vec_text(v) for v in fc.vertices)}")
            for e in poly.edges:
                rep.add("edge", f"{vec_text(e.start)}-{vec_text(e.end)} faces {' '.join(vec_text(n) for n in e.face_normals)}")
        if svg_path:
            if poly.dim != 2:
                raise CliError("--svg draws d=2 polygons only")
            with open(svg_path, "w", encoding="utf-8") as fh:
                fh.write(polygon_svg(poly, f"N({render(f)})"))
            rep.add("svg", svg_path)
    _emit(ctx, rep)
    return EXIT_OK


@cli.command()
@click.argument("files", nargs=-1, required=True)
@click.pass_context
def nonexp(ctx, files):
    """Non-expansive directions N(alpha) of principal systems."""
    rep = Report("nonexp")
    for path in files:
        pres = _load(path)
        rep.add("system", pres.name or path)
        try:
            geom = nonexpansive_set(pres)
        except (GeometryError, PresentationError) as exc:
            raise CliError(f"{path}: {exc}") from None
        if isinstance(geom, FiniteDirections):
            for v in geom.sorted():
                rep.add("direction", vec_text(v))
        else:
            assert isinstance(geom, ConeComplex)
            for c in geom.sorted():
                rep.add("ray" if len(c) == 1 else "cone", " ".join(vec_text(g) for g in c))
    _emit(ctx, rep)
    return EXIT_OK


def _series_items(rep: Report, series: ent.EstimateSeries) -> None:
    for w, e in zip(series.windows, series.estimates):
        rep.add("estimate", f"window {w[0]},{w[1]}: {EntropyValue(e, series.p).exact()}")
    rep.add("stabilized", "yes" if series.stabilized else "no")


@cli.command()
@click.argument("file")
@click.option("--dir", "direction", required=True, help="Direction n, e.g. 1,1.")
@click.option("--estimate", is_flag=True, help="Also estimate from band counts.")
@click.option("--band-width", type=int, default=4, show_default=True)
@click.pass_context
def entropy(ctx, file, direction, estimate, band_width):
    """Directional entropy h(alpha^n) of Haar measure."""
    pres = _load(file)
    n = parse_vector(direction)
    exact = _entropy_errors(lambda: ent.haar_directional_entropy(pres, n))
    rep = Report("entropy").add("system", pres.name or file).add("direction", vec_text(n)).add("exact", exact)
    rc = EXIT_OK
    if estimate:
        series = _entropy_errors(lambda: ent.estimate_directional_entropy(pres, n, band_width, [2, 4, 6, 8]))
        _series_items(rep, series)
        agree = series.estimates[-1] == exact.coefficient
        rep.add("agreement", "yes" if agree else "no")
        rc = EXIT_OK if agree else EXIT_VERIFY
    _emit(ctx, rep)
    return rc


@cli.command()
@click.argument("file")
@click.option("--v", "direction", required=True, help="Primitive direction v, e.g. 1,1.")
@click.option("--estimate", is_flag=True, help="Also run the window estimator.")
@click.pass_context
def halfspace(ctx, file, direction, estimate):
    """Half-space entropy h(v) of Haar measure."""
    pres = _load(file)
    v = parse_vector(direction)
    if primitive(v) != v:
        click.echo(f"note: {vec_text(v)} normalized to {vec_text(primitive(v))}", err=True)
        v = primitive(v)
    exact = _entropy_errors(lambda: ent.haar_halfspace_entropy(pres, v))
    rep = Report("halfspace").add("system", pres.name or file).add("v", vec_text(v)).add("exact", exact)
    rc = EXIT_OK
    if estimate:
        sched = parse_schedule(ctx.obj["window"], ent.DEFAULT_SCHEDULE_2D)
        series = _entropy_errors(
            lambda: ent.estimate_halfspace_entropy(pres, v, sched, workers=ctx.obj["workers"])
        )
        _series_items(rep, series)
        rep.add("final", series.final)
        agree = series.estimates[-1] == exact.coefficient
        rep.add("agreement", "yes" if agree else "no")
        rc = EXIT_OK if agree else EXIT_VERIFY
    _emit(ctx, rep)
    return rc


@cli.command()
@click.argument("file")
@click.option("--ell", type=int, default=1, show_default=True, help="Block size for S_ell.")
@click.pass_context
def lex(ctx, file, ell):
    """Lexicographic half-space entropy estimate (d=3)."""
    pres = _load(file)
    sched = parse_schedule(ctx.obj["window"], ent.DEFAULT_SCHEDULE_LEX)
    series = _entropy_errors(
        lambda: ent.lex_halfspace_entropy_estimate(pres, sched, ell, workers=ctx.obj["workers"])
    )
    rep = Report("lex").add("system", pres.name or file).add("ell", ell)
    _series_items(rep, series)
    rep.add("final", series.final)
    rep.add("sign", "positive" if series.estimates[-1] > 0 else "zero")
    _emit(ctx, rep)
    return EXIT_OK


@cli.command()
@click.argument("files", nargs=-1, required=True)
@click.option("--theorem", type=click.Choice(["auto", "rank1", "corank1"]), default="auto", show_default=True)
@click.option("--out", "out_path", default=None, help="Also write the certificate to this file.")
@click.pass_context
def disjoint(ctx, files, theorem, out_path):
    """Certify mutual disjointness (Disjoint) or report why not (Inconclusive)."""
    if len(files) < 2:
        raise CliError("disjoint needs at least two system files")
    systems = [_load(p) for p in files]
    effort = ctx.obj["effort"]
    try:
        if theorem == "rank1":
            res = disjoint_rank_one(systems, effort, ctx.obj["workers"])
        elif theorem == "corank1":
            if len(systems) != 2:
                raise CliError("--theorem corank1 compares exactly two systems")
            res = disjoint_corank_one(systems[0], systems[1], effort)
        else:
            res = disjoint_auto(systems, effort, ctx.obj["workers"])
    except DisjointnessError as exc:
        raise CliError(str(exc)) from None
    if isinstance(res, Disjoint):
        text = certificate_text(res.certificate)
        if out_path:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        if ctx.obj["format"] == "structured":
            click.echo(text, nl=False)
        else:
            cert = res.certificate
            click.echo(f"verdict: Disjoint ({cert.theorem})")
            click.echo("ordering: " + " ".join(str(i) for i in cert.ordering))
            click.echo("witnesses: " + " ".join(vec_text(w) for w in cert.witnesses))
            for i, sc in enumerate(cert.hypothesis_log, 1):
                click.echo(f"system {i} ({sc.name}): {sc.entropy_rank_class}; irreducible {sc.irreducible}; prime {sc.prime_action}")
        return EXIT_OK
    rep = Report("disjoint").add("verdict", "Inconclusive").add("reason", res.reason)
    for i, sc in enumerate(res.hypothesis_log, 1):
        rep.add("hypothesis", f"system {i} ({sc.name}): {sc.entropy_rank_class}; irreducible {sc.irreducible}; prime {sc.prime_action}")
    _emit(ctx, rep)
    return EXIT_INCONCLUSIVE


# -- verify ----------------------------------------------------------------------------

def _suite_formula(ctx, systems, rep: Report) -> bool:
    ok = True
    sched = parse_schedule(ctx.obj["window"], ent.DEFAULT_SCHEDULE_2D)
    for pres in systems:
        if pres.dim != 2:
            raise CliError("the formula suite is for d=2 systems")
        normals = set()
        for _, f in _entropy_errors(lambda: principal_factors(pres)):
            normals |= {e.normal for e in newton_polytope(f).edges}
        dirs = sorted(normals | {v for v in ((1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1))})
        for v in dirs:
            exact = ent.haar_halfspace_entropy(pres, v)
            series = ent.estimate_halfspace_entropy(pres, v, sched, workers=ctx.obj["workers"])
            res = series.estimates[-1] - exact.coefficient
            good = res == 0 and series.stabilized
            ok &= good
            rep.add("halfspace", f"{pres.name} v={vec_text(v)} exact {exact.coefficient} estimate {series.estimates[-1]} residual {res} {'ok' if good else 'FAIL'}")
        for n in ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1)):
            exact = ent.haar_directional_entropy(pres, n)
            series = ent.estimate_directional_entropy(pres, n, 4, [2, 4, 6, 8])
            res = series.estimates[-1] - exact.coefficient
            ok &= res == 0
            rep.add("directional", f"{pres.name} n={vec_text(n)} exact {exact.coefficient} estimate {series.estimates[-1]} residual {res} {'ok' if res == 0 else 'FAIL'}")
    return ok


def _suite_ar(ctx, systems, rep: Report) -> bool:
    if len(systems) != 2:
        raise CliError("the ar suite takes exactly two systems Y Z")
    y, z = systems
    sched = parse_schedule(ctx.obj["window"], ent.DEFAULT_SCHEDULE_2D)
    ok = True
    for v in AR_DIRECTIONS:
        r = _entropy_errors(lambda: ent.verify_abramov_rokhlin(y, z, v, sched, ctx.obj["workers"]))
        for row in r.rows:
            rep.add(
                "residual",
                f"v={vec_text(v)} window {row.window[0]},{row.window[1]}: total {row.total} = factor {row.factor} + conditional {row.conditional}; residual {row.residual}",
            )
        ok &= r.ok
    return ok


def _suite_invariance(ctx, systems, rep: Report) -> bool:
    sched = parse_schedule(ctx.obj["window"], ent.DEFAULT_SCHEDULE_2D)
    ok = True
    for pres in systems:
        if pres.dim != 2:
            raise CliError("the invariance suite is for d=2 systems")
        rec = higher_block(pres, 1)
        base_n = nonexpansive_set(pres)
        rec_n = nonexpansive_set(rec)
        same_n = base_n == rec_n
        ok &= same_n
        rep.add("nonexp", f"{pres.name} r=1 {'equal' if same_n else 'DIFFERENT'}")
        normals = {e.normal for _, f in principal_factors(pres) for e in newton_polytope(f).edges}
        for v in sorted(normals | {(0, 1), (1, 0)}):
            a = ent.estimate_halfspace_entropy(pres, v, sched, workers=ctx.obj["workers"])
            b = ent.estimate_halfspace_entropy(rec, v, sched, workers=ctx.obj["workers"])
            good = a.estimates == b.estimates
            ok &= good
            rep.add(
                "estimate",
                f"{pres.name} v={vec_text(v)} base {[str(x) for x in a.estimates]} recoded {[str(x) for x in b.estimates]} {'equal' if good else 'DIFFERENT'}",
            )
    return ok


def _suite_oracle(ctx, systems, rep: Report) -> bool:
    rng = random.Random(ctx.obj["seed"])
    ok = True
    for pres in systems:
        shapes = [(n,) * pres.dim for n in (1, 2, 3)] if pres.dim > 1 else [(k,) for k in range(1, 8)]
        for _ in range(10):
            sides = tuple(rng.randint(1, 4) for _ in range(pres.dim))
            shapes.append(sides)
        for sides in shapes:
            sys_ = build_system(pres, region_box(sides))
            free = sys_.nvars
            if free > 20 or pres.modulus ** free > 2 ** 22:
                continue
            kd = kernel_dim(sys_)
            assert isinstance(kd, CountReport)
            bf = brute_force_count(sys_)
            good = bf == pres.modulus ** kd.log_p_count
            ok &= good
            rep.add("box", f"{pres.name} sides {vec_text(sides)}: p^dim = {pres.modulus ** kd.log_p_count}, brute force = {bf} {'ok' if good else 'FAIL'}")
    return ok


def _suite_certificate(ctx, files, rep: Report) -> bool:
    ok = True
    for path in files:
        try:
            with open(path, encoding="utf-8") as fh:
                cert = parse_certificate(fh.read())
        except (OSError, ValueError, KeyError) as exc:
            raise CliError(f"{path}: cannot read certificate: {exc}") from None
        r = recheck_certificate(cert)
        for line in r.lines:
            rep.add("check", line)
        ok &= r.ok
    return ok


@cli.command()
@click.argument("files", nargs=-1, required=True)
@click.option("--suite", type=click.Choice(["formula", "ar", "invariance", "oracle", "certificate"]), required=True)
@click.pass_context
def verify(ctx, files, suite):
    """Run an exact property suite and report every residual."""
    rep = Report("verify").add("suite", suite)
    if suite == "certificate":
        ok = _suite_certificate(ctx, files, rep)
    else:
        systems = [_load(p) for p in files]
        fn = {"formula": _suite_formula, "ar": _suite_ar, "invariance": _suite_invariance, "oracle": _suite_oracle}[suite]
        ok = _entropy_errors(lambda: fn(ctx, systems, rep))
    rep.add("result", "pass" if ok else "FAIL")
    _emit(ctx, rep)
    return EXIT_OK if ok else EXIT_VERIFY


def main(argv=None) -> int:
    try:
        rc = cli.main(args=argv, prog_name="entgeom", standalone_mode=False)
    except click.exceptions.NoArgsIsHelpError as exc:  # pragma: no cover - click >= 8.2
        click.echo(exc.ctx.get_help())
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    return rc if isinstance(rc, int) else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
