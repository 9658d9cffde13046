"""Command line front end: verdict-oriented batch commands over .map/.kform
files, with deterministic structured reports.

Exit codes: 0 positive verdict / success, 1 negative verdict, 2 error.
"""

from __future__ import annotations

import argparse
import sys

from . import audit
from .cyclo import CycloElement, format_element
from .errors import ModuliError
from .parser import parse_element, parse_input
from .polys import Poly
from .projline import MoebiusMap
from .ratmap import KForm, RationalMap
from .actions import (
    ActionTag,
    apply_action,
    aut_group,
    equiv_chi_inf,
    equiv_chi_k,
    equiv_proj_chi_k,
    identify_group_type,
)
from .flatmod import (
    flat_signature,
    four_point_moduli,
    j_invariant,
    three_point_normal_form,
)
from .galois import (
    FomReport,
    QuadExtDescriptor,
    build_cocycle,
    compute_U,
    field_of_moduli,
    fod_fom_report,
    verify_cocycle,
)
from .realdef import RealVerdict, real_definability_check, real_moduli_check


def fmt_poly(p: Poly, var="z") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for i, c in enumerate(p.coeffs):
        if c.is_zero():
            continue
        cs = format_element(c)
        if i == 0:
            terms.append(cs)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if cs == "1" else f"({cs})*{mono}")
    return " + ".join(terms)


def fmt_map(R: RationalMap) -> str:
    return f"({fmt_poly(R.P)}) / ({fmt_poly(R.Q)})"


def fmt_moebius(T: MoebiusMap) -> str:
    a, b, c, d = (format_element(e) for e in T.entries())
    return f"[({a})*z + ({b})] / [({c})*z + ({d})]"


def fmt_divisor(D) -> str:
    parts = []
    for p, m in D:
        pt = "inf" if p.is_inf else format_element(p.x)
        parts.append(f"({pt}, {m})")
    return "div { " + ", ".join(parts) + " }"


def fmt_subfield(f) -> str:
    if isinstance(f, QuadExtDescriptor):
        return (f"quadratic extension of {fmt_subfield(f.base)} "
                f"by sqrt({format_element(f.d)})")
    mp = " + ".join(
        (f"({c})" if i == 0 else (f"({c})*t^{i}" if c != 1 else f"t^{i}"))
        for i, c in enumerate(f.minpoly) if c != 0)
    stab = ", ".join(map(str, f.subgroup))
    return (f"Q(theta), theta = {format_element(f.theta)}, min poly {mp}, "
            f"degree {f.degree}, stabilizer {{{stab}}} mod {f.n}")


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_input(fh.read())


def _as_form(obj, k, where):
    if isinstance(obj, KForm):
        return obj
    if k is None:
        raise ModuliError(f"{where}: chi_k needs --k or a form input")
    return KForm(obj, k)


def _action(args):
    if args.action == "chi_inf":
        return ActionTag.chi_inf()
    if args.k is None:
        raise ModuliError("--k is required for the pull-back actions")
    if args.action == "chi_k":
        return ActionTag.chi_k(args.k)
    return ActionTag.proj_chi_k(args.k)


def _unify(a, b):
    import math

    m = a.conductor * b.conductor // math.gcd(a.conductor, b.conductor)
    return a.embed(m), b.embed(m)


def cmd_act(args, out):
    obj = _load(args.input)
    R = obj.R if isinstance(obj, KForm) else obj
    k = obj.k if isinstance(obj, KForm) else args.k
    chi = ActionTag.chi_inf() if args.action == "chi_inf" else (
        ActionTag.chi_k(k) if args.action == "chi_k" else ActionTag.proj_chi_k(k))
    entries = [parse_element(t.strip(), R.conductor) for t in args.transform.split(",")]
    if len(entries) != 4:
        raise ModuliError("--transform needs four comma-separated entries a,b,c,d")
    T = MoebiusMap(*entries)
    result = apply_action(chi, T, R)
    out(f"action: {chi!r}")
    out(f"transform: {fmt_moebius(T)}")
    out(f"result: {fmt_map(result)}")
    if result.has_factored():
        out(f"divisor: {fmt_divisor(result.map_divisor())}")
    return 0


def cmd_equiv(args, out):
    chi = _action(args)
    a = _load(args.left)
    b = _load(args.right)
    if chi.kind == "chi_inf":
        Ra = a.R if isinstance(a, KForm) else a
        Rb = b.R if isinstance(b, KForm) else b
        Ra, Rb = _unify(Ra, Rb)
        w = equiv_chi_inf(Ra, Rb)
    else:
        wa = _as_form(a, args.k, "equiv")
        wb = _as_form(b, args.k, "equiv")
        if chi.kind == "chi_k":
            w = equiv_chi_k(wa, wb)
        else:
            w = equiv_proj_chi_k(wa, wb)
    out(f"action: {chi!r}")
    if w is None:
        out("verdict: not equivalent")
        return 1
    out("verdict: equivalent")
    if w.extension is None and w.in_field:
        out(f"witness: {fmt_moebius(w.t)}")
        a_, b_, c_, d_ = (format_element(e) for e in w.t.entries())
        out(f"witness entries: {a_} ; {b_} ; {c_} ; {d_}")
    else:
        out(f"witness: {w!r}")
    if w.scalar is not None:
        out(f"scalar: {format_element(w.scalar)}")
    return 0


def cmd_aut(args, out):
    chi = _action(args)
    obj = _load(args.input)
    R = obj.R if isinstance(obj, KForm) else obj
    G = aut_group(chi, R)
    out(f"action: {chi!r}")
    if G.is_finite:
        out(f"order: {len(G.elements)}")
        kind, param = identify_group_type(G)
        label = f"{kind}({param})" if param is not None else kind
        out(f"type: {label}")
        for T in G.elements:
            out(f"element: {fmt_moebius(T)}")
    else:
        out("order: infinite")
        out("type: OneParameter")
        out(f"family: {G.one_parameter}")
    return 0


def cmd_fom(args, out):
    chi = _action(args)
    obj = _load(args.input)
    R = obj.R if isinstance(obj, KForm) else obj
    fom, urec = field_of_moduli(chi, R)
    out(f"action: {chi!r}")
    out(f"U: {{{', '.join(map(str, urec.members))}}} in (Z/{urec.conductor})^x")
    out(f"field of moduli: {fmt_subfield(fom)}")
    return 0


def cmd_report(args, out):
    chi = _action(args)
    obj = _load(args.input)
    R = obj.R if isinstance(obj, KForm) else obj
    extra = []
    if args.quadratic:
        extra = [parse_element(t, R.conductor) for t in args.quadratic]
    rep = fod_fom_report(chi, R, seed=args.seed, extra_d=tuple(extra))
    out(f"action: {chi!r}")
    out(f"seed: {args.seed}")
    if rep.u_record is not None:
        out(f"U: {{{', '.join(map(str, rep.u_record.members))}}} "
            f"in (Z/{rep.u_record.conductor})^x")
    out(f"field of moduli: {fmt_subfield(rep.fom)}")
    if rep.shortcut_polynomial:
        out("shortcut: polynomial (single pole at infinity)")
    if rep.shortcut_odd_poles:
        out("shortcut: pole divisor of odd degree")
    if rep.obstructed:
        out("verdict: OBSTRUCTED (inconsistent with the <= 2 bound; see notes)")
        for note in rep.notes:
            out(f"note: {note}")
        return 1
    out(f"field of definition: {fmt_subfield(rep.fod)}")
    out(f"FOD/FOM parameter: {rep.parameter}")
    if rep.witness_t is not None:
        out(f"descent witness: {fmt_moebius(rep.witness_t)}")
    if rep.model is not None:
        out(f"model: {fmt_map(rep.model)}")
    for note in rep.notes:
        out(f"note: {note}")
    counters = audit.snapshot()
    out(f"audit: coboundary {counters['coboundary_verified']}/"
        f"{counters['coboundary_emitted']} verified, descent "
        f"{counters['descent_verified']}/{counters['descent_emitted']} verified")
    return 0


def cmd_real_check(args, out):
    obj = _load(args.input)
    if not isinstance(obj, KForm):
        raise ModuliError("real-check expects a form input (.kform)")
    moduli_real = real_moduli_check(obj)
    out(f"field of moduli real-embeddable: {'yes' if moduli_real else 'no'}")
    verdict = real_definability_check(obj)
    out(f"verdict: {verdict.verdict}")
    if verdict.witness is not None:
        out(f"reflection: {fmt_moebius(verdict.witness.M)} . conj")
    if verdict.note:
        out(f"note: {verdict.note}")
    return 0 if verdict.verdict == RealVerdict.DEFINABLE else 1


def cmd_cocycle_verify(args, out):
    chi = _action(args)
    obj = _load(args.input)
    R = obj.R if isinstance(obj, KForm) else obj
    from .galois import _sigma_lifts, saturate_aut_conductor

    fom, urec = field_of_moduli(chi, R)
    R = saturate_aut_conductor(chi, R)
    gamma = _sigma_lifts(urec.conductor, urec.members, R.conductor)
    witnesses = {}
    from .galois import _decide

    for a in gamma:
        w = _decide(chi, R, R.galois(a))
        if w is None or w.extension is not None or not w.in_field:
            raise ModuliError("no in-field witness family over the stabilizer")
        witnesses[a] = w
    out(f"group: {{{', '.join(map(str, gamma))}}} in (Z/{R.conductor})^x")
    c = build_cocycle(chi, R, witnesses, gamma)
    if c is None:
        out("cocycle: none (no automorphism correction satisfies the "
            "composition rule in-field)")
        return 1
    check = verify_cocycle(c)
    out(f"cocycle: {'ok' if check.ok else f'failing pair {check.failing_pair}'}")
    for a in c.group:
        out(f"T_{a}: {fmt_moebius(c.maps[a])}")
    return 0 if check.ok else 1


def cmd_flat(args, out):
    obj = _load(args.input)
    if not isinstance(obj, KForm):
        raise ModuliError("flat expects a form input (.kform)")
    sig = flat_signature(obj)
    out(f"punctures: {sig.support_size}")
    out(f"orders: {list(sig.orders)}")
    out(f"integrable: {'yes' if sig.simple_poles else 'no'}")
    if sig.support_size == 3:
        nf = three_point_normal_form(obj)
        out(f"normal form: z^{nf.a} (z-1)^{nf.b} dz^2")
        out("moduli field: Q")
        return 0
    if sig.support_size == 4:
        D = obj.divisor()
        from .projline import INF, ProjPoint

        one = obj.R.one()
        zero = one.zero_like()
        wanted = {INF, ProjPoint(zero), ProjPoint(one)}
        supp = set(D.support())
        if wanted <= supp:
            (mu_pt,) = supp - wanted
            fp = four_point_moduli(D.multiplicity(ProjPoint(zero)),
                                   D.multiplicity(ProjPoint(one)),
                                   D.multiplicity(mu_pt), mu_pt.x)
            out(f"mu: {format_element(mu_pt.x)}")
            out(f"j(mu): {format_element(j_invariant(mu_pt.x))}")
            out(f"moduli field: {fmt_subfield(fp.resolved)}")
            out(f"index of Q(mu) over it: {fp.index_over_resolved}")
        else:
            out("note: four punctures away from (inf, 0, 1); transport first")
    return 0


def cmd_jinv(args, out):
    mu = parse_element(args.mu, args.conductor)
    value = j_invariant(mu)
    out(format_element(value))
    return 0


def build_argparser():
    ap = argparse.ArgumentParser(
        prog="moduli",
        description="Exact Moebius-action equivalence, automorphisms, fields of "
                    "moduli and Weil descent over cyclotomic fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_action(p, required=True):
        p.add_argument("--action", choices=["chi_inf", "chi_k", "proj_chi_k"],
                       required=required)
        p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("act", help="apply chi(T) to a map")
    add_action(p)
    p.add_argument("--transform", required=True, help="a,b,c,d entries of T")
    p.add_argument("input")
    p.set_defaults(fn=cmd_act)

    p = sub.add_parser("equiv", help="decide equivalence of two inputs")
    add_action(p)
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("aut", help="automorphism group")
    add_action(p)
    p.add_argument("input")
    p.set_defaults(fn=cmd_aut)

    p = sub.add_parser("fom", help="field of moduli")
    add_action(p)
    p.add_argument("input")
    p.set_defaults(fn=cmd_fom)

    p = sub.add_parser("report", help="full FOD/FOM report")
    add_action(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quadratic", action="append", default=None,
                   help="extra quadratic-extension candidates (element exprs)")
    p.add_argument("input")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("real-check", help="real moduli and real definability")
    p.add_argument("input")
    p.set_defaults(fn=cmd_real_check)

    p = sub.add_parser("cocycle-verify", help="build and verify a cocycle")
    add_action(p)
    p.add_argument("input")
    p.set_defaults(fn=cmd_cocycle_verify)

    p = sub.add_parser("flat", help="flat-structure signature of a quadratic form")
    p.add_argument("input")
    p.set_defaults(fn=cmd_flat)

    p = sub.add_parser("jinv", help="elliptic j-invariant of mu")
    p.add_argument("--mu", required=True)
    p.add_argument("--conductor", type=int, default=1)
    p.set_defaults(fn=cmd_jinv)

    return ap


def main(argv=None) -> int:
    ap = build_argparser()
    args = ap.parse_args(argv)
    lines = []

    def out(line):
        lines.append(line)

    try:
        code = args.fn(args, out)
    except ModuliError as e:
        sys.stdout.write("\n".join(lines) + ("\n" if lines else ""))
        sys.stderr.write(f"error: {e}\n")
        return 2
    sys.stdout.write("\n".join(lines) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
