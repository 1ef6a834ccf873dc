"""
absarith command-line interface.

Every library module is exposed as a subcommand group; results print as text,
compact JSON, CSV, SVG or DOT depending on --format.
"""

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from absarith import config, setup_logging
from absarith.errors import AbsArithError, DomainError, UsageError
from absarith.exact_arith import poly_from_coefficients
from absarith import smirnov_cover as smirnov
from absarith import habiro_topology as habiro
from absarith import habiro_ring as hring
from absarith import witt_burnside as witt
from absarith import big_picture as bigpicture
from absarith import nimber_field as nimber
from absarith import adams_rep as adams

logger = logging.getLogger("absarith.cli")

FORMATS = ("text", "json", "csv", "svg", "dot")


class _Parser(argparse.ArgumentParser):
    """Raise UsageError instead of exiting so dispatch can map it to a code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# Argument types

def _typed(parse: Callable, what: str) -> Callable:
    def convert(text: str):
        try:
            return parse(text)
        except (ValueError, ZeroDivisionError, DomainError) as e:
            raise argparse.ArgumentTypeError(f"invalid {what} {text!r}: {e}")
    convert.__name__ = what
    return convert


def _int_list(text: str) -> List[int]:
    return [int(x, 0) for x in text.split(",") if x.strip()]


def _fraction_list(text: str) -> List[Fraction]:
    return [Fraction(x.strip()) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _spec_z_point(text: str) -> smirnov.SpecZPoint:
    if text.strip().lower() in ("inf", "infinity", "oo", "∞"):
        return smirnov.ARCHIMEDEAN
    return smirnov.SpecZPoint.prime(int(text, 0))


rational = _typed(Fraction, "rational")
integer = _typed(lambda s: int(s, 0), "integer")
int_list = _typed(_int_list, "integer list")
fraction_list = _typed(_fraction_list, "rational list")
float_list = _typed(_float_list, "float list")
spec_z_point = _typed(_spec_z_point, "prime")
rational_map = _typed(smirnov.RationalMap.parse, "rational map")
p1_point = _typed(smirnov.P1Point.parse, "point")
root = _typed(habiro.RootOfUnity.parse, "root of unity")
lattice = _typed(bigpicture.parse_lattice, "lattice")
generator = _typed(bigpicture.parse_generator, "generator")
f2_poly = _typed(nimber.F2Polynomial.parse, "F_2 polynomial")


# Output

def _dumps(data) -> str:
    return json.dumps(data, separators=config['cli'].JSON_SEPARATORS, ensure_ascii=False)


def _csv(header: Sequence[str], rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator=config['cli'].CSV_LINE_TERMINATOR)
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _float(x: float) -> str:
    return format(x, f".{config['smirnov'].FLOAT_DIGITS}g")


def _emit(args, text: Optional[Callable[[], str]] = None, data: Optional[Callable] = None,
          table: Optional[Callable] = None, svg: Optional[Callable[[], str]] = None,
          dot: Optional[Callable[[], str]] = None, default: Optional[str] = None) -> None:
    """Render the requested format; each renderer runs only when chosen"""
    from absarith.file_utils import write_output

    renderers = {"text": text, "json": data and (lambda: _dumps(data())),
                 "csv": table and (lambda: _csv(*table())), "svg": svg, "dot": dot}
    available = [name for name in FORMATS if renderers[name] is not None]
    fmt = args.format or default or available[0]
    if fmt not in available:
        raise UsageError(f"{args.command}: --format {fmt} not supported (choose from {', '.join(available)})")
    write_output(renderers[fmt](), args.out)


def _points_text(points) -> str:
    return " ".join(str(x) for x in smirnov.sorted_points(points)) or "∅"


# smirnov

def _smirnov_target(args) -> smirnov.P1Point:
    return smirnov.P1Point.finite(args.n) if args.n is not None else args.point


def cmd_smirnov_eval(args):
    x = args.p
    pt = smirnov.evaluate(args.q, x)
    _emit(args, text=lambda: str(pt),
          data=lambda: {"q": str(args.q), "p": str(x), "point": pt.to_json()})


def cmd_smirnov_fiber(args):
    points = smirnov.fiber(args.q, _smirnov_target(args), args.budget)
    primes = [x.p for x in smirnov.sorted_points(points) if x.is_prime]

    def data():
        payload = {"primes": primes}
        if smirnov.ARCHIMEDEAN in points:
            payload["archimedean"] = True
        return payload

    _emit(args, text=lambda: _points_text(points), data=data)


def cmd_smirnov_graph(args):
    bound = args.bound or config['cli'].DEFAULT_BOUND
    points = smirnov.graph_scan(args.q, bound)

    def svg():
        from absarith.plotting import render_smirnov_svg
        return render_smirnov_svg(points, title=f"q = {args.q}")

    _emit(args, svg=svg, default="svg",
          data=lambda: [{"p": p, "point": pt.to_json()} for p, pt in points],
          table=lambda: (("p", "point"), [(p, pt.to_json()) for p, pt in points]))


def cmd_smirnov_divisor(args):
    d = smirnov.divisor_of(args.q)
    degree = smirnov.degree_of(d)
    text = " + ".join(f"{c}·[{p}]" for p, c in d.points.items()) or "0"
    _emit(args, text=lambda: f"{text} + ({d.infinity})·[∞]\ndegree: {degree}",
          data=lambda: dict(d.to_json(), degree=degree.to_json()))


def cmd_smirnov_defect(args):
    if args.p is not None:
        ratio = smirnov.defect_exact(args.q, args.p)
    else:
        ratio = smirnov.fiber_defect_exact(args.q, _smirnov_target(args), args.budget)
    value = ratio.value()
    _emit(args, text=lambda: f"({ratio.numerator}) / ({ratio.denominator}) = {_float(value)}",
          data=lambda: {"numerator": ratio.numerator.to_json(),
                        "denominator": ratio.denominator.to_json(), "value": _float(value)})


def cmd_smirnov_abc(args):
    report = smirnov.abc_report(args.A, args.B, args.C)
    data = report.to_json()

    def text():
        d = data["defects"]
        return "\n".join([
            f"{args.A} + {args.B} = {args.C}, rad = {report.radical}, C/rad = {report.ratio}",
            f"q = {report.q}: δ[0] = {d['zero']}, δ[1] = {d['one']}, δ[∞] = {d['infinity']}",
            f"total defect {d['total']}, quality {data['quality']}",
        ])

    _emit(args, text=text, data=lambda: data)


# habiro

def cmd_habiro_open(args):
    if args.excluded is not None:
        U = habiro.HabiroOpenDescriptor.cofinite(args.excluded, args.zero, args.infinity)
    else:
        U = habiro.HabiroOpenDescriptor.basic(args.m, args.zero, args.infinity)

    if args.point is not None:
        member = habiro.in_open(U, args.point)
        _emit(args, text=lambda: "yes" if member else "no",
              data=lambda: {"open": U.to_json(), "point": args.point.to_json(), "member": member})
        return

    bound = args.bound or config['cli'].DEFAULT_BOUND
    members = [n for n in range(1, bound + 1) if U.contains_index(n)]
    _emit(args, text=lambda: f"{U}: " + " ".join(str(n) for n in members),
          data=lambda: {"open": U.to_json(), "bound": bound, "members": members})


def cmd_habiro_wheel(args):
    edges = habiro.adjacency_wheel(args.N)

    def svg():
        from absarith.plotting import render_wheel_svg
        return render_wheel_svg(args.N)

    _emit(args, svg=svg, default="svg",
          data=lambda: {"N": args.N,
                        "vertices": [str(x) for x in habiro.wheel_vertices(args.N)],
                        "edges": [{"x": str(e.x), "y": str(e.y), "p": e.prime} for e in edges]},
          table=lambda: (("x", "y", "p"), [(str(e.x), str(e.y), e.prime) for e in edges]))


def cmd_habiro_witness(args):
    n = habiro.noncompactness_witness(args.primes)
    _emit(args, text=lambda: f"[{n}]", data=lambda: {"primes": args.primes, "witness": n})


# hring

def _level_for(degree: int) -> int:
    N = 1
    while N * (N + 1) // 2 <= degree:
        N += 1
    return N


def cmd_hring_eval(args):
    z = args.root
    if args.poly is not None:
        f = poly_from_coefficients(args.poly)
        element = hring.to_factorial_basis(f, _level_for(max(len(args.poly) - 1, 0)))
    else:
        element = hring.kontsevich_element(z.order)
    value = hring.evaluate_at_root(element, z)
    _emit(args, text=lambda: str(value),
          data=lambda: {"root": str(z), "element": element.to_json(), "value": value.to_json()})


def cmd_hring_zagier(args):
    rows = hring.radial_table(args.root, args.radii)
    header = ("r", "rhs_re", "rhs_im", "lhs_re", "lhs_im", "error", "terms")

    def cells(row):
        return (_float(row.r), _float(row.rhs.real), _float(row.rhs.imag),
                _float(row.lhs.real), _float(row.lhs.imag), _float(row.error), row.terms)

    _emit(args,
          text=lambda: "\n".join(f"r = {_float(r.r)}: |RHS - F| = {_float(r.error)} ({r.terms} terms)"
                                 for r in rows),
          data=lambda: [dict(zip(header, cells(r))) for r in rows],
          table=lambda: (header, [cells(r) for r in rows]))


# witt / burnside

def _witt(args, coeffs) -> witt.WittVector:
    u = witt.WittVector(args.ring, tuple(coeffs))
    if args.precision is not None and args.precision < u.N:
        u = u.truncate(args.precision)
    return u


def _emit_witt(args, u: witt.WittVector):
    _emit(args, text=lambda: str(u), data=u.to_json)


def cmd_witt_add(args):
    _emit_witt(args, witt.witt_add(_witt(args, args.u), _witt(args, args.v)))


def cmd_witt_mul(args):
    _emit_witt(args, witt.witt_mul(_witt(args, args.u), _witt(args, args.v)))


def cmd_witt_ghost(args):
    g = witt.ghost(_witt(args, args.u))
    values = [str(x) for x in g.components]
    _emit(args, text=lambda: " ".join(values), data=lambda: {"ring": g.ring, "ghost": values})


def cmd_witt_frob(args):
    _emit_witt(args, witt.frobenius(args.n, _witt(args, args.u)))


def cmd_witt_versch(args):
    _emit_witt(args, witt.verschiebung(args.n, _witt(args, args.u)))


def cmd_witt_sigma(args):
    N = args.precision or config['cli'].DEFAULT_PRECISION
    if args.toric is not None:
        a = witt.AdamsSequence.toric(args.toric, N)
    elif args.trivial is not None:
        a = witt.AdamsSequence.trivial(args.trivial, N)
    else:
        values = tuple(args.values)
        ring_tag = witt.RATIONALS if any(v.denominator != 1 for v in values) else witt.INTEGERS
        a = witt.AdamsSequence(ring_tag, values)
    _emit_witt(args, witt.sigma_t(a))


def _emit_burnside(args, b: witt.BurnsideVector):
    _emit(args, text=lambda: " ".join(str(x) for x in b.entries), data=b.to_json)


def cmd_burnside_tau(args):
    _emit_burnside(args, witt.tau(args.q))


def cmd_burnside_convert(args):
    if args.to == "witt":
        _emit_witt(args, witt.burnside_to_witt(witt.BurnsideVector(tuple(args.values))))
    else:
        _emit_burnside(args, witt.witt_to_burnside(witt.WittVector(witt.INTEGERS, tuple(args.values))))


def cmd_burnside_necklace(args):
    _emit_burnside(args, witt.necklace_numbers(args.m, args.precision or config['cli'].DEFAULT_PRECISION))


# bigpicture

def _emit_lattices(args, lattices):
    ordered = sorted(lattices)
    _emit(args, text=lambda: "\n".join(str(L) for L in ordered),
          data=lambda: [L.to_json() for L in ordered])


def _emit_sum(args, s: bigpicture.LatticeSum):
    _emit(args, text=lambda: str(s), data=s.to_json)


def cmd_bigpicture_dist(args):
    d = bigpicture.hyperdistance(args.L, args.K)
    _emit(args, text=lambda: str(d), data=lambda: {"L": args.L.to_json(), "K": args.K.to_json(), "distance": d})


def cmd_bigpicture_neighbors(args):
    _emit_lattices(args, bigpicture.neighbors(args.L, args.p))


def cmd_bigpicture_ball(args):
    _emit_lattices(args, bigpicture.ball(args.L, args.n, args.budget))


def cmd_bigpicture_hecke(args):
    operator = bigpicture.hecke_classical if args.classical else bigpicture.hecke
    _emit_sum(args, operator(args.n, bigpicture.LatticeSum.of(args.L)))


def cmd_bigpicture_bc(args):
    _emit_sum(args, bigpicture.bost_connes_apply(args.generator, bigpicture.LatticeSum.of(args.L)))


def cmd_bigpicture_tree(args):
    edges = bigpicture.p_tree(args.L, args.p, args.depth)

    def dot():
        from absarith.plotting import render_tree_dot
        return render_tree_dot(edges, args.L, args.p)

    _emit(args, dot=dot, default="dot",
          data=lambda: {"root": args.L.to_json(), "p": args.p,
                        "edges": [{"parent": e.parent.to_json(), "child": e.child.to_json()} for e in edges]})


# nimber

def _emit_value(args, value, key: str = "value"):
    _emit(args, text=lambda: str(value), data=lambda: {key: value})


def cmd_nimber_mul(args):
    _emit_value(args, nimber.nim_mul(args.a, args.b))


def cmd_nimber_pow(args):
    _emit_value(args, nimber.nim_pow(args.a, args.e))


def cmd_nimber_order(args):
    _emit_value(args, nimber.nim_order(args.a), "order")


def cmd_nimber_root(args):
    z = nimber.nimber_to_root(args.a, args.level)
    _emit(args, text=lambda: str(z), data=lambda: {"nimber": args.a, "root": str(z)})


def cmd_nimber_orbit(args):
    orbit = nimber.frobenius_orbit(args.a)
    f = nimber.orbit_to_polynomial(orbit)
    _emit(args, text=lambda: "{" + ", ".join(str(x) for x in orbit) + "} ↦ " + str(f),
          data=lambda: {"orbit": list(orbit), "polynomial": str(f), "mask": f.mask})


def cmd_nimber_poly(args):
    roots = nimber.polynomial_roots(args.f)
    z = nimber.polynomial_to_root(args.f)
    _emit(args, text=lambda: f"{args.f}: roots {{{', '.join(str(x) for x in roots)}}} ↦ {z}",
          data=lambda: {"polynomial": str(args.f), "mask": args.f.mask, "roots": list(roots), "root": str(z)})


def cmd_nimber_tower(args):
    _emit_value(args, nimber.tower_generator(args.k), "generator")


def cmd_nimber_dict(args):
    rows = nimber.field_dictionary(args.level)

    def cells(row):
        return (row.nimber, " ".join(str(x) for x in row.orbit), row.polynomial.mask, str(row.root))

    _emit(args,
          text=lambda: "\n".join(f"{{{', '.join(str(x) for x in r.orbit)}}}  {r.polynomial}  {r.root}" for r in rows),
          data=lambda: [{"nimber": r.nimber, "orbit": list(r.orbit), "polynomial": r.polynomial.mask,
                         "root": str(r.root)} for r in rows],
          table=lambda: (("nimber", "orbit", "polynomial", "root"), [cells(r) for r in rows]))


# adams

def _table(args) -> adams.CharacterTable:
    if args.table.upper().startswith("C") and args.table[1:].isdigit():
        return adams.cyclic_table(int(args.table[1:]))
    return adams.load_character_table(args.table)


def cmd_adams_apply(args):
    T = _table(args)
    if args.coords is not None:
        chi = adams.VirtualCharacter(tuple(args.coords))
    else:
        chi = adams.VirtualCharacter.irreducible(args.chi, T.class_count)
    result = adams.adams(args.n, chi, T)
    _emit(args, text=lambda: str(result), data=lambda: {"n": args.n, "chi": chi.to_json(), "result": result.to_json()})


def cmd_adams_action(args):
    T = _table(args)
    action = adams.monoid_action(args.n, T)
    image = sorted(set(action.values()), key=T.index)
    _emit(args,
          text=lambda: "  ".join(f"[{x}]↦[{y}]" for x, y in action.items())
          + f"\n{args.n}.S = {{{', '.join(f'[{x}]' for x in image)}}}",
          data=lambda: {"n": args.n, "action": action, "image": image})


def cmd_adams_disc(args):
    delta = adams.discriminant(_table(args))
    _emit_value(args, str(delta), "discriminant")


def cmd_adams_conductor(args):
    T = _table(args)
    data = adams.conductor_data(T)

    def labels(s):
        return sorted(s, key=T.index)

    _emit(args,
          text=lambda: f"r0 = {data.r0}\n" + "\n".join(
              f"{d}.S = {{{', '.join(f'[{x}]' for x in labels(s))}}}" for d, s in data.stable_sets.items()),
          data=lambda: {"r0": data.r0, "exponents": {str(p): a for p, a in data.exponents.items()},
                        "stable_sets": {str(d): labels(s) for d, s in data.stable_sets.items()}})


# Parser

def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, help="Output format (default: first the command supports)")
    common.add_argument("--out", help="Write output to this file instead of stdout")
    common.add_argument("--bound", type=integer, help="Scan bound (primes, indices)")
    common.add_argument("--precision", type=integer, help="Truncation precision N")
    common.add_argument("--budget", type=integer, help="Effort budget: factorization steps or ball size")
    common.add_argument("--verbose", action="store_true", help="Log progress at INFO level")
    common.add_argument("--log-file", help="Also write logs to this file")
    return common


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments"""
    common = _common()
    parser = _Parser(
        prog="absarith",
        description="Exact arithmetic for geometry over the field with one element",
        epilog="""
Examples:
  %(prog)s smirnov fiber --q 2/1 --n 11 --format json
  %(prog)s habiro wheel --N 60 --format svg --out wheel.svg
  %(prog)s nimber pow 4 5
  %(prog)s bigpicture dist 1 2
  %(prog)s adams apply --table S3 --n 2 --chi 3
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    groups = parser.add_subparsers(dest="group", required=True, metavar="GROUP")

    def group(name: str, help_text: str):
        g = groups.add_parser(name, help=help_text)
        return g.add_subparsers(dest="action", required=True, metavar="ACTION")

    def command(actions, name: str, handler, help_text: str):
        p = actions.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(handler=handler)
        return p

    # smirnov
    actions = group("smirnov", "Smirnov covers q = a/b")
    p = command(actions, "eval", cmd_smirnov_eval, "Image of a prime (or inf)")
    p.add_argument("--q", type=rational_map, required=True)
    p.add_argument("--p", type=spec_z_point, required=True, help="A prime or 'inf'")
    for name, handler, help_text in (("fiber", cmd_smirnov_fiber, "Fiber over a point"),
                                     ("defect", cmd_smirnov_defect, "Defect at a prime or over a fiber")):
        p = command(actions, name, handler, help_text)
        p.add_argument("--q", type=rational_map, required=True)
        target = p.add_mutually_exclusive_group(required=True)
        target.add_argument("--n", type=integer, help="The finite point [n]")
        target.add_argument("--point", type=p1_point, help="0, inf or n")
        if name == "defect":
            target.add_argument("--p", type=integer, help="A single prime")
    p = command(actions, "graph", cmd_smirnov_graph, "Images of all primes up to --bound")
    p.add_argument("--q", type=rational_map, required=True)
    p = command(actions, "divisor", cmd_smirnov_divisor, "Principal divisor and its degree")
    p.add_argument("--q", type=rational_map, required=True)
    p = command(actions, "abc", cmd_smirnov_abc, "Defect report for an abc triple")
    p.add_argument("--A", type=integer, required=True)
    p.add_argument("--B", type=integer, required=True)
    p.add_argument("--C", type=integer, required=True)

    # habiro
    actions = group("habiro", "Habiro topology on roots of unity")
    p = command(actions, "open", cmd_habiro_open, "Members of U_m or of a cofinite open")
    shape = p.add_mutually_exclusive_group(required=True)
    shape.add_argument("--m", type=integer)
    shape.add_argument("--excluded", type=int_list, help="Comma-separated excluded indices")
    p.add_argument("--zero", action="store_true", help="Include [0]")
    p.add_argument("--infinity", action="store_true", help="Include [∞]")
    p.add_argument("--point", type=p1_point, help="Test a single point")
    p = command(actions, "wheel", cmd_habiro_wheel, "Adjacency wheel on N-th roots of unity")
    p.add_argument("--N", type=integer, required=True)
    p = command(actions, "witness", cmd_habiro_witness, "A point outside every U_p")
    p.add_argument("--primes", type=int_list, required=True)

    # hring
    actions = group("hring", "Habiro ring elements")
    p = command(actions, "eval", cmd_hring_eval, "Evaluate at a root of unity (Kontsevich series by default)")
    p.add_argument("--root", type=root, required=True)
    p.add_argument("--poly", type=int_list, help="Integer polynomial coefficients, constant first")
    p = command(actions, "zagier", cmd_hring_zagier, "Radial check of the Zagier identity")
    p.add_argument("--root", type=root, required=True)
    p.add_argument("--radii", type=float_list, help="Comma-separated radii in (0, 1)")

    # witt
    actions = group("witt", "Big Witt vectors 1 + a_1 t + ... + a_N t^N")
    for name, handler, arity, help_text in (
        ("add", cmd_witt_add, 2, "Witt sum (series product)"),
        ("mul", cmd_witt_mul, 2, "Witt product"),
        ("ghost", cmd_witt_ghost, 1, "Ghost components"),
        ("frob", cmd_witt_frob, 1, "Frobenius F_n"),
        ("versch", cmd_witt_versch, 1, "Verschiebung V_n"),
    ):
        p = command(actions, name, handler, help_text)
        p.add_argument("--ring", default=witt.INTEGERS, help="Z, Q or F<p>")
        if name in ("frob", "versch"):
            p.add_argument("--n", type=integer, required=True)
        p.add_argument("u", type=fraction_list, help="Coefficients a_1,...,a_N")
        if arity == 2:
            p.add_argument("v", type=fraction_list)
    p = command(actions, "sigma", cmd_witt_sigma, "s_t of an Adams sequence")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--values", type=fraction_list, help="Psi^1(a),...,Psi^N(a)")
    source.add_argument("--toric", type=rational, help="Psi^n(x) = x^n at x = c")
    source.add_argument("--trivial", type=rational, help="Psi^n = id at a")

    # burnside
    actions = group("burnside", "Burnside ring of the infinite cyclic group")
    p = command(actions, "tau", cmd_burnside_tau, "Burnside vector of classical Witt coordinates")
    p.add_argument("q", type=int_list)
    p = command(actions, "convert", cmd_burnside_convert, "Burnside <-> Witt")
    p.add_argument("--to", choices=("witt", "burnside"), required=True)
    p.add_argument("values", type=int_list)
    p = command(actions, "necklace", cmd_burnside_necklace, "Necklace numbers m^(C)")
    p.add_argument("--m", type=integer, required=True)

    # bigpicture
    actions = group("bigpicture", "Lattices L_{M,g/h} up to scaling")
    p = command(actions, "dist", cmd_bigpicture_dist, "Hyperdistance")
    p.add_argument("L", type=lattice)
    p.add_argument("K", type=lattice)
    p = command(actions, "neighbors", cmd_bigpicture_neighbors, "Lattices at hyperdistance p")
    p.add_argument("L", type=lattice)
    p.add_argument("--p", type=integer, required=True)
    p = command(actions, "ball", cmd_bigpicture_ball, "Lattices at hyperdistance n")
    p.add_argument("L", type=lattice)
    p.add_argument("--n", type=integer, required=True)
    p = command(actions, "hecke", cmd_bigpicture_hecke, "Hecke operator T_n")
    p.add_argument("L", type=lattice)
    p.add_argument("--n", type=integer, required=True)
    p.add_argument("--classical", action="store_true", help="Sum over all index-n sublattices")
    p = command(actions, "bc", cmd_bigpicture_bc, "Bost-Connes generator e_n, e*_n or e(a/b)")
    p.add_argument("generator", type=generator)
    p.add_argument("L", type=lattice)
    p = command(actions, "tree", cmd_bigpicture_tree, "p-tree around a lattice")
    p.add_argument("L", type=lattice)
    p.add_argument("--p", type=integer, required=True)
    p.add_argument("--depth", type=integer, default=2)

    # nimber
    actions = group("nimber", "Nimber field arithmetic")
    p = command(actions, "mul", cmd_nimber_mul, "Nim product")
    p.add_argument("a", type=integer)
    p.add_argument("b", type=integer)
    p = command(actions, "pow", cmd_nimber_pow, "Nim power")
    p.add_argument("a", type=integer)
    p.add_argument("e", type=integer)
    for name, handler, help_text in (("order", cmd_nimber_order, "Multiplicative order"),
                                     ("root", cmd_nimber_root, "Matching root of unity"),
                                     ("orbit", cmd_nimber_orbit, "Frobenius orbit and its polynomial")):
        p = command(actions, name, handler, help_text)
        p.add_argument("a", type=integer)
        if name == "root":
            p.add_argument("--level", type=integer)
    p = command(actions, "poly", cmd_nimber_poly, "Roots of an irreducible F_2 polynomial")
    p.add_argument("f", type=f2_poly)
    p = command(actions, "tower", cmd_nimber_tower, "Tower generator at level k")
    p.add_argument("k", type=integer)
    p = command(actions, "dict", cmd_nimber_dict, "Orbit / polynomial / root dictionary")
    p.add_argument("--level", type=integer, default=2)

    # adams
    actions = group("adams", "Adams operations on representation rings")
    for name, handler, help_text in (("apply", cmd_adams_apply, "Psi^n of a virtual character"),
                                     ("action", cmd_adams_action, "Monoid action n.S on classes"),
                                     ("disc", cmd_adams_disc, "Discriminant of R(G)"),
                                     ("conductor", cmd_adams_conductor, "r_0 and the stable sets")):
        p = command(actions, name, handler, help_text)
        p.add_argument("--table", default="S3", help="Bundled name, JSON path, or C<n>")
        if name in ("apply", "action"):
            p.add_argument("--n", type=integer, required=True)
        if name == "apply":
            which = p.add_mutually_exclusive_group(required=True)
            which.add_argument("--chi", type=integer, help="Irreducible character index")
            which.add_argument("--coords", type=int_list, help="Virtual character coordinates")

    args = parser.parse_args(argv)
    args.command = f"{args.group} {args.action}"
    return args


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the process exit code"""
    try:
        args = parse_arguments(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0

    setup_logging(logging.INFO if args.verbose else None, args.log_file)

    try:
        args.handler(args)
        return 0
    except AbsArithError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"absarith {args.command}: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"❌ Unexpected failure in {args.command}: {e}", exc_info=True)
        return 1


def main():
    """Main function"""
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
