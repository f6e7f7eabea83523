"""Command-line front end.

Exit codes: 0 the property holds or the construction succeeded, 1 the
property is verified false, 2 usage or input error, 3 inconclusive.
"""
from __future__ import annotations

import argparse
import sys

from . import catalog, filiform, serialize, structures
from .errors import FormatError, NilcontactError
from .exactla import format_rational, parse_rational
from .exterior import betti_number, closed_forms, format_form
from .lie import (LieAlgebra, associated_graded, center, derivation_algebra, is_filiform,
                  lower_central_series, verify_jacobi)

OK, FALSE, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class _Out:
    """Collects human-readable lines and a JSON payload; prints one of them."""

    def __init__(self, args):
        self.as_json = args.json
        self.lines = []
        self.data = {}

    def line(self, text=""):
        self.lines.append(text)

    def emit(self, stream=sys.stdout):
        if self.as_json:
            stream.write(serialize.dump_json(self.data))
        else:
            stream.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def _fr(x) -> str:
    return format_rational(x)


def _load_algebra(path, check=True) -> LieAlgebra:
    """Accept a bare algebra document or any document with an ``algebra`` field."""
    obj = serialize.load_json(path)
    if isinstance(obj, dict) and "algebra" in obj and "dimension" not in obj:
        return serialize.algebra_from_json(obj["algebra"], f"{path}.algebra", check=check)
    return serialize.algebra_from_json(obj, str(path), check=check)


def _load_form(path, dim) -> object:
    obj = serialize.load_json(path)
    if isinstance(obj, dict) and "form" in obj and "degree" not in obj:
        return serialize.form_from_json(obj["form"], dim, f"{path}.form")
    return serialize.form_from_json(obj, dim, str(path))


def _pretty(form, g) -> str:
    return format_form(form, g.label_base)


def cmd_check(args, out):
    g = _load_algebra(args.algebra, check=False)
    bad = verify_jacobi(g)
    out.data["jacobi"] = not bad
    if bad:
        out.line(f"jacobi: FAILS ({len(bad)} violating triples)")
        for v in bad[:10]:
            out.line(f"  {v}")
        out.data["violations"] = [{"i": v.i, "j": v.j, "k": v.k,
                                   "residual": [_fr(x) for x in v.residual]} for v in bad]
        return FALSE
    rep = lower_central_series(g)
    out.data.update({"dimension": g.dim, "nilpotent": rep.is_nilpotent, "nilindex": rep.nilindex,
                     "lower_central_dims": list(rep.dims), "filiform": rep.is_filiform,
                     "center_dim": center(g).dim})
    out.line(f"algebra: {g.name or args.algebra} (dim {g.dim})")
    out.line("jacobi: ok")
    out.line(f"lower central series dims: {rep.dims}")
    out.line(f"nilpotent: {'yes' if rep.is_nilpotent else 'no'}"
             + (f", nilindex {rep.nilindex}" if rep.is_nilpotent else ""))
    out.line(f"filiform: {'yes' if rep.is_filiform else 'no'}")
    out.line(f"centre dimension: {center(g).dim}")
    return OK


def _existence_exit(res):
    return {"yes": OK, "no": FALSE, "inconclusive": INCONCLUSIVE}[res.answer]


def cmd_contact(args, out):
    g = _load_algebra(args.algebra)
    if args.form:
        alpha = _load_form(args.form, g.dim)
        cert = structures.is_contact(g, alpha)
        out.data = serialize.contact_cert_to_json(cert)
        out.line(f"α = {_pretty(alpha, g)}")
        if cert:
            out.line(f"contact: yes, α∧(dα)^{g.dim // 2} = {_fr(cert.top_coefficient)} · top form")
            return OK
        out.line(f"contact: no ({cert.reason})")
        return FALSE
    mode = "random" if args.random else "exact"
    res = structures.exists_contact(g, mode=mode, trials=args.random or 0, seed=args.seed,
                                    bound=args.bound, short_circuit=not args.no_short_circuit)
    out.data = {"answer": res.answer, "method": res.method,
                "witness": serialize.form_to_json(res.witness) if res.witness else None}
    if res.answer == "yes":
        out.line(f"left-invariant contact form exists (via {res.method}): α = {_pretty(res.witness, g)}")
    elif res.answer == "no":
        msg = "no left-invariant contact form"
        if res.method == "criterion":
            rep = filiform.contact_criterion(g)
            zero = [j for j, v in enumerate(rep.values, 1) if not v]
            msg += ("; all A_j = 0" if len(zero) == len(rep.values)
                    else f"; A_j = 0 for j in {zero}")
        out.line(msg)
    else:
        out.line(f"inconclusive: no witness in {args.random} random trials (seed {args.seed})")
    return _existence_exit(res)


def cmd_symplectic(args, out):
    g = _load_algebra(args.algebra)
    omega = _load_form(args.form, g.dim)
    cert = structures.is_symplectic(g, omega)
    out.data = serialize.symplectic_cert_to_json(cert)
    out.line(f"ω = {_pretty(omega, g)}")
    if cert:
        out.line(f"symplectic: yes, ω^{g.dim // 2} = {_fr(cert.top_coefficient)} · top form")
        return OK
    if cert.reason == "not-closed":
        out.line(f"symplectic: no (not closed, dω = {_pretty(cert.d_omega, g)})")
    else:
        out.line("symplectic: no (degenerate)")
    return FALSE


def cmd_exists_symplectic(args, out):
    g = _load_algebra(args.algebra)
    mode = "random" if args.random else "exact"
    res = structures.exists_symplectic(g, mode=mode, trials=args.random or 0, seed=args.seed,
                                       bound=args.bound)
    out.data = {"answer": res.answer, "method": res.method,
                "witness": serialize.form_to_json(res.witness) if res.witness else None}
    if res.answer == "yes":
        out.line(f"symplectic form exists: ω = {_pretty(res.witness, g)}")
    elif res.answer == "no":
        out.line("no symplectic form")
    else:
        out.line(f"inconclusive: no witness in {args.random} random trials (seed {args.seed})")
    return _existence_exit(res)


def _write(args, obj):
    if args.output:
        serialize.dump_json(obj, args.output)


def cmd_contactize(args, out):
    g = _load_algebra(args.algebra)
    omega = _load_form(args.form, g.dim)
    c = structures.contactize(g, omega)
    doc = serialize.contact_cert_to_json(c.certificate)
    _write(args, doc)
    out.data = doc
    out.line(f"contactization: dim {c.algebra.dim}, filiform: {'yes' if is_filiform(c.algebra) else 'no'}")
    out.line(f"α = {_pretty(c.alpha, c.algebra)}, top coefficient {_fr(c.certificate.top_coefficient)}")
    out.line("π*ω = −dα verified")
    if args.output:
        out.line(f"written to {args.output}")
    return OK


def cmd_reduce(args, out):
    g = _load_algebra(args.algebra)
    alpha = _load_form(args.form, g.dim)
    red = structures.reduce(g, alpha)
    doc = serialize.symplectic_cert_to_json(red.certificate)
    _write(args, doc)
    out.data = doc
    out.line(f"reduction: dim {red.algebra.dim}, filiform: {'yes' if is_filiform(red.algebra) else 'no'}")
    out.line(f"ω = {_pretty(red.omega, red.algebra)}")
    out.line("π*ω = −dα verified")
    if args.output:
        out.line(f"written to {args.output}")
    return OK


def cmd_normal_form(args, out):
    g = _load_algebra(args.algebra)
    alpha = _load_form(args.form, g.dim)
    res = filiform.normal_form(g, alpha)
    out.data = {"automorphism": serialize.map_to_json(res.automorphism),
                "beta": serialize.form_to_json(res.beta),
                "steps": [{"target": s.target + 1, "generator": s.generator + 1,
                           "scalar": _fr(s.scalar)} for s in res.steps]}
    out.line(f"α = {_pretty(alpha, g)}")
    for s in res.steps:
        base = g.label_base
        out.line(f"  exp({_fr(s.scalar)} · ad X{s.generator + base}) clears α{s.target + base}")
    out.line(f"φ*α = {_pretty(res.beta, g)}")
    out.line("φ verified as an automorphism")
    return OK


def cmd_criterion(args, out):
    if args.coeffs:
        n, coeffs = serialize.coeffs_from_json(serialize.load_json(args.coeffs), str(args.coeffs))
        law = filiform.assemble(n, coeffs)
    else:
        law = filiform.law_of(_load_algebra(args.algebra))
    rep = filiform.contact_criterion(law)
    out.data = {"p": rep.p, "A": [_fr(v) for v in rep.values], "verdict": rep.verdict,
                "coefficients": serialize.coeffs_to_json(law.n, law.coefficient_map)["coeffs"]}
    out.line(f"p = {rep.p}")
    for j, v in enumerate(rep.values, 1):
        out.line(f"  A_{j} = {_fr(v)}")
    out.line(f"contact form exists: {'yes' if rep.verdict else 'no'}")
    return OK if rep.verdict else FALSE


def cmd_catalog_build(args, out):
    params = tuple(parse_rational(p) for p in (args.params or ()))
    fam = args.family.upper()
    if args.basis:
        builders = {"Q": catalog.family_Q, "W": catalog.family_W}
        if fam not in builders:
            raise ValueError("--basis is only meaningful for families Q and W")
        g = builders[fam](args.n, args.basis)
    else:
        g = catalog.build(catalog.FamilySpec(fam, args.n, args.r, params))
    doc = serialize.algebra_to_json(g)
    _write(args, doc)
    out.data = doc
    if not args.output:
        out.lines.append(serialize.dump_json(doc).rstrip())
    else:
        out.line(f"{g.name}: dim {g.dim}, written to {args.output}")
    return OK


def cmd_catalog_list(args, out):
    out.data = {"families": list(catalog.FAMILIES), "table": []}
    out.line("families: " + ", ".join(catalog.FAMILIES))
    for dim in (2, 4, 6):
        for e in catalog.table(dim):
            labels = [f.label for f in e.forms]
            out.data["table"].append({"dim": dim, "index": e.index, "forms": labels})
            brs = ", ".join(f"[X{i},X{j}]=" + " + ".join(
                (f"{_fr(c)}·" if c != 1 else "") + f"X{k}" for k, c in v.items())
                for (i, j), v in e.algebra.structure_constants().items()) or "abelian"
            out.line(f"dim {dim} #{e.index}: {brs}; forms {', '.join(labels)}")
    return OK


def cmd_verify_table(args, out):
    dims = (args.dim,) if args.dim else (2, 4, 6)
    rep = catalog.verify_table(dims)
    out.data = {
        "ok": rep.ok,
        "entries": [{"dim": d, "index": i, "jacobi": j, "nilpotent": n} for d, i, j, n in rep.entries],
        "forms": [{"dim": f.dim, "index": f.index, "label": f.label,
                   "sample": {k: _fr(v) for k, v in f.sample.items()},
                   "closed": f.closed, "nondegenerate": f.nondegenerate,
                   "obstruction": f.obstruction} for f in rep.forms],
        "not_distinguished_by_implemented_invariants": rep.undistinguished,
        "notes": rep.notes}
    for d, i, j, n in rep.entries:
        forms = [f for f in rep.forms if f.dim == d and f.index == i]
        good = sum(f.ok for f in forms)
        status = "pass" if j and n and good == len(forms) else "FAIL"
        out.line(f"dim {d} #{i:>2}: {status}  jacobi {'ok' if j else 'FAIL'}, "
                 f"nilpotent {'yes' if n else 'no'}, forms {good}/{len(forms)}")
        for f in forms:
            if not f.ok:
                sample = ", ".join(f"{k}={_fr(v)}" for k, v in f.sample.items())
                out.line(f"    {f.label}({sample}): {f.obstruction}")
    for grp in rep.undistinguished:
        out.line("not distinguished by implemented invariants: "
                 + ", ".join(f"dim {d} #{i}" for d, i in grp))
    for note in rep.notes:
        out.line(f"note: {note}")
    out.line(f"result: {'all checks pass' if rep.ok else f'{len(rep.failures())} failures'}")
    return OK if rep.ok else FALSE


def cmd_cohomology(args, out):
    g = _load_algebra(args.algebra)
    k = args.degree
    b = betti_number(g, k)
    z = closed_forms(g, k) if 0 <= k <= g.dim else []
    out.data = {"degree": k, "betti": b, "closed_basis": [serialize.form_to_json(f) for f in z]}
    out.line(f"b_{k} = {b}")
    out.line(f"dim Z^{k} = {len(z)}")
    for f in z:
        out.line(f"  {_pretty(f, g)}")
    return OK


def cmd_derivations(args, out):
    g = _load_algebra(args.algebra)
    rep = derivation_algebra(g)
    out.data = {"dimension": rep.dim, "solvable": rep.solvable, "derived_dims": list(rep.derived_dims),
                "basis": [serialize.map_to_json(d) for d in rep.basis]}
    out.line(f"dim Der = {rep.dim}")
    out.line(f"derived series dims: {rep.derived_dims}")
    out.line(f"solvable: {'yes' if rep.solvable else 'no'}")
    return OK


def cmd_graded(args, out):
    g = _load_algebra(args.algebra)
    res = associated_graded(g)
    out.data = {"kind": res.kind, "degrees": list(res.degrees),
                "algebra": serialize.algebra_to_json(res.algebra)}
    out.line(f"associated graded: {res.kind}" + ("-type" if res.kind != "not-filiform" else ""))
    out.line(f"degrees: {res.degrees}")
    return OK


def cmd_fingerprint(args, out):
    g = _load_algebra(args.algebra)
    fp = catalog.fingerprint(g)
    out.data = {k: list(v) if isinstance(v, tuple) else v for k, v in fp._asdict().items()}
    for k, v in fp._asdict().items():
        out.line(f"{k}: {v}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for random modes")

    search = argparse.ArgumentParser(add_help=False)
    grp = search.add_mutually_exclusive_group()
    grp.add_argument("--exact", action="store_true", help="exact polynomial expansion (default)")
    grp.add_argument("--random", type=int, metavar="N", help="random search with N trials")
    search.add_argument("--bound", type=int, default=structures.DEFAULT_BOUND,
                        help="random coordinates are drawn from [-B, B]")

    p = argparse.ArgumentParser(prog="nilcontact", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, parents=(common,)):
        sp = sub.add_parser(name, help=help_, parents=list(parents))
        sp.set_defaults(func=func)
        return sp

    sp = add("check", cmd_check, "Jacobi, series, nilpotency and filiform checks")
    sp.add_argument("algebra")

    sp = add("contact", cmd_contact, "test a contact form or search for one", (common, search))
    sp.add_argument("algebra")
    sp.add_argument("--form")
    sp.add_argument("--no-short-circuit", action="store_true",
                    help="do not use the filiform criterion as a shortcut")

    sp = add("symplectic", cmd_symplectic, "test a symplectic form")
    sp.add_argument("algebra")
    sp.add_argument("--form", required=True)

    sp = add("exists-symplectic", cmd_exists_symplectic, "search for a symplectic form",
             (common, search))
    sp.add_argument("algebra")

    for name, func, what in (("contactize", cmd_contactize, "central extension by a symplectic form"),
                             ("reduce", cmd_reduce, "quotient of a contact algebra by its centre")):
        sp = add(name, func, what)
        sp.add_argument("algebra")
        sp.add_argument("--form", required=True)
        sp.add_argument("-o", "--output")

    sp = add("normal-form", cmd_normal_form, "normal form of a contact form on a filiform algebra")
    sp.add_argument("algebra")
    sp.add_argument("--form", required=True)

    sp = add("criterion", cmd_criterion, "contact criterion report for a filiform law")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("algebra", nargs="?")
    src.add_argument("--coeffs", help="coefficient-map file instead of an algebra")

    cat = sub.add_parser("catalog", help="named families and the classification table")
    csub = cat.add_subparsers(dest="catalog_command", required=True)
    sp = csub.add_parser("build", parents=[common], help="build a family member")
    sp.set_defaults(func=cmd_catalog_build)
    sp.add_argument("family", choices=list(catalog.FAMILIES) + [f.lower() for f in catalog.FAMILIES])
    sp.add_argument("n", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--params", nargs="+")
    sp.add_argument("--basis", choices=["X", "Y", "Z"])
    sp.add_argument("-o", "--output")
    sp = csub.add_parser("list", parents=[common], help="list families and table entries")
    sp.set_defaults(func=cmd_catalog_list)

    sp = add("verify-table", cmd_verify_table, "verify the classification table")
    sp.add_argument("--dim", type=int, choices=[2, 4, 6])

    sp = add("cohomology", cmd_cohomology, "Betti number and closed forms in one degree")
    sp.add_argument("algebra")
    sp.add_argument("--degree", type=int, required=True)

    for name, func, what in (("derivations", cmd_derivations, "derivation algebra and solvability"),
                             ("graded", cmd_graded, "associated graded algebra"),
                             ("fingerprint", cmd_fingerprint, "isomorphism invariants")):
        sp = add(name, func, what)
        sp.add_argument("algebra")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    out = _Out(args)
    try:
        code = args.func(args, out)
    except (FormatError, NilcontactError, ValueError, KeyError) as exc:
        stderr.write(f"error: {exc}\n")
        return USAGE
    out.emit(stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
