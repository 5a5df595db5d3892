"""Command-line front end.

    curvehunt [--json] [--jobs N] [--config FILE] <subcommand> ...

Subcommands: count, lpoly, classgroup, aj, cover (as | fibre | subgroup |
extend), enumerate, hunt, records (lookup | classify), verify-paper.

Exit status: 0 on success, 1 on domain errors (singular curve,
non-principal divisor, inconsistent data, a failing verification), 2 on
usage errors (bad flags, unparsable input).  Results go to stdout (human
text, or one JSON object per line with --json); progress and errors go to
stderr.  Every error message names the module and operation that raised it.
"""

from __future__ import annotations

import argparse
import configparser
import contextlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .expr import ParseError

CONFIG_KEYS = {"jobs": int, "budget": int, "limit": int, "stride": int, "max_coeff": int,
               "fibre": int, "top": int, "snapshot": str, "stretch": bool}


class CliError(Exception):
    def __init__(self, operation: str, message: str, status: int):
        super().__init__(message)
        self.operation = operation
        self.status = status


class UsageError(CliError):
    def __init__(self, operation: str, message: str):
        super().__init__(operation, message, 2)


@contextlib.contextmanager
def _op(name: str):
    """Map library exceptions raised inside the block to exit statuses,
    tagging them with the operation name."""
    from .covers import CoverError
    from .curves import CurveError
    from .ff import FieldError
    from .jacobian import JacobianError
    from .records import RecordsError
    from .rr import RRError
    from .search import SearchError
    from .zeta import ZetaError
    try:
        yield
    except CliError:
        raise
    except ParseError as e:
        raise CliError(name, f"parse error: {e}", 2) from None
    except (FieldError, CurveError, JacobianError, CoverError, ZetaError, SearchError,
            RecordsError, RRError) as e:
        raise CliError(name, str(e), 1) from None


# ----------------------------------------------------------------------------------
# output
# ----------------------------------------------------------------------------------

class Output:
    def __init__(self, json_mode: bool, stream=None):
        self.json = json_mode
        self.stream = stream or sys.stdout

    def emit(self, kind: str, record: dict, human: str | None):
        if self.json:
            self.stream.write(json.dumps({"type": kind, **record}, sort_keys=True) + "\n")
        elif human is not None:
            self.stream.write(human + "\n")

    def text(self, human: str):
        """Human-only text (suppressed in json mode)."""
        if not self.json:
            self.stream.write(human + "\n")


def progress(msg: str):
    print(msg, file=sys.stderr, flush=True)


# ----------------------------------------------------------------------------------
# shared argument helpers
# ----------------------------------------------------------------------------------

def _field(q: str):
    from .ff import FieldError, field_of_size
    try:
        n = int(q)
    except ValueError:
        raise UsageError("ff.field_of_size", f"field size must be an integer, got {q!r}") from None
    try:
        return field_of_size(n)
    except FieldError as e:
        raise UsageError("ff.field_of_size", str(e)) from None


def _curve(args):
    from .curves import parse_curve
    F = _field(args.field)
    with _op("curves.parse_curve"):
        return parse_curve(args.curve, F)


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError:
        raise UsageError("cli.run", f"{what} must be comma-separated integers, got {text!r}") \
            from None


def _curve_args(p, ext=False):
    p.add_argument("--curve", required=True, help="curve equation, e.g. 'y^2+y=x^3+x'")
    p.add_argument("--field", required=True, help="field size q (a prime power)")


# ----------------------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------------------

def cmd_count(args, out, cfg):
    from .curves import count_points
    C = _curve(args)
    exts = _ints(args.ext, "--ext")
    if not exts or min(exts) < 1:
        raise UsageError("cli.count", "--ext needs positive integers")
    for n in exts:
        with _op("curves.count_points"):
            N = count_points(C, n)
        out.emit("count", {"curve": C.text, "q": C.field.q, "n": n, "N": N},
                 str(N) if len(exts) == 1 else f"N_{n} = {N}")
    return 0


def cmd_lpoly(args, out, cfg):
    from .search import curve_l_polynomial
    from .zeta import class_number
    C = _curve(args)
    with _op("zeta.l_from_counts"):
        L = curve_l_polynomial(C)
    text = L.descending() if args.descending else L.ascending()
    out.emit("lpoly", {"curve": C.text, "q": C.field.q, "g": C.genus, "coeffs": list(L.coeffs),
                       "ascending": L.ascending(), "descending": L.descending(),
                       "class_number": class_number(L)}, text)
    return 0


def _places_upto(C, degree):
    from .curves import enumerate_places
    out = []
    for d in range(1, degree + 1):
        with _op("curves.enumerate_places"):
            out += enumerate_places(C, d)
    return out


def cmd_classgroup(args, out, cfg):
    from .curves import place_label
    from .jacobian import class_group_structure
    C = _curve(args)
    with _op("jacobian.class_group_structure"):
        st = class_group_structure(C)
    base = place_label(st.base) if st.base is not None else "none"
    out.emit("classgroup", {"curve": C.text, "q": C.field.q, "invariants": list(st.invariants),
                            "order": st.order, "base": base},
             f"class group {st} (order {st.order}), base point {base}")
    if st.base is None:
        return 0
    for i, pl in enumerate(_places_upto(C, args.degree)):
        with _op("jacobian.abel_jacobi"):
            img = list(st.place_class(pl))
        label = place_label(pl)
        out.emit("place", {"index": i, "label": label, "degree": pl.degree, "image": img},
                 f"{i:4d} {label:24s} {img}")
    return 0


def cmd_aj(args, out, cfg):
    from .curves import Divisor, rational_places
    from .jacobian import class_group_structure, function_with_divisor, is_principal
    C = _curve(args)
    places = _places_upto(C, args.degree)
    vec = _ints(args.vector, "--vector")
    if len(vec) > len(places):
        raise UsageError("cli.aj", f"--vector has {len(vec)} entries but only {len(places)} "
                                   f"places of degree <= {args.degree} exist")
    vec += [0] * (len(places) - len(vec))
    D = Divisor.from_vector(places, vec)
    if D.degree != 0:
        raise CliError("jacobian.abel_jacobi", f"divisor has degree {D.degree}, not 0", 1)
    with _op("jacobian.class_group_structure"):
        st = class_group_structure(C)
    with _op("jacobian.abel_jacobi"):
        cls = list(st.divisor_class(D).residues)
    with _op("jacobian.is_principal"):
        principal = is_principal(C, D)
    fn = None
    if args.function:
        if not principal:
            raise CliError("jacobian.function_with_divisor",
                           "divisor is not principal (its class is "
                           f"{cls} in {st})", 1)
        with _op("jacobian.function_with_divisor"):
            fn = function_with_divisor(C, D).text
    human = f"class {cls} in {st}; {'principal' if principal else 'not principal'}"
    if fn is not None:
        human += f"\nfunction {fn}"
    out.emit("aj", {"curve": C.text, "vector": vec, "class": cls, "principal": principal,
                    "function": fn}, human)
    return 0


def _emit_cover(out, rep):
    flag = "lower" if rep.lower_bound else "exact"
    block = [f"cover: {rep.kind}", f"  base: {rep.base}", f"  degree: {rep.degree}",
             f"  field: F_{rep.q}", f"  genus: {rep.genus}",
             f"  points: {rep.points} ({flag})"]
    for chi, cond in rep.conductors.items():
        block.append(f"  conductor {list(chi)}: {cond}")
    for k, v in rep.extra.items():
        block.append(f"  {k}: {v}")
    out.emit("cover", {"kind": rep.kind, "q": rep.q, "g": rep.genus, "N": rep.points,
                       "bound_flag": flag, "degree": rep.degree, "base": rep.base,
                       "line": rep.line()},
             "\n".join(block + [rep.line()]))


def cmd_cover(args, out, cfg):
    from .covers import (ASCoverSpec, SubgroupCoverSpec, as_cover_report, best_subgroup_cover,
                         extension_cover_report, Subgroup, subgroup_cover_report)
    from .curves import parse_function, rational_places
    from .jacobian import class_group_structure
    C = _curve(args)
    if args.kind in ("as", "fibre"):
        fns = args.function or []
        if args.kind == "as" and len(fns) != 1:
            raise UsageError("cli.cover", "cover as needs exactly one --function")
        if args.kind == "fibre" and len(fns) < 1:
            raise UsageError("cli.cover", "cover fibre needs at least one --function")
        with _op("curves.parse_function"):
            fs = [parse_function(C, t) for t in fns]
        with _op("covers.as_cover_report"):
            rep = as_cover_report(ASCoverSpec(C, fs))
    elif args.kind == "subgroup":
        if args.index is None:
            raise UsageError("cli.cover", "cover subgroup needs --index")
        with _op("jacobian.class_group_structure"):
            st = class_group_structure(C)
        with _op("covers.subgroup_cover_report"):
            if args.congruence:
                rows = []
                for text in args.congruence:
                    if ":" not in text:
                        raise UsageError("cli.cover", "--congruence is 'c1,c2,...:m'")
                    c, m = text.split(":", 1)
                    rows.append((_ints(c, "--congruence"), int(m)))
                H = Subgroup.from_congruences(st.invariants, rows)
                rat = rational_places(C)
                base = rat[args.base] if args.base is not None else st.base
                rep = subgroup_cover_report(SubgroupCoverSpec(st, H, base, args.index))
            else:
                best = best_subgroup_cover(st, args.index)
                if best is None:
                    raise CliError("covers.best_subgroup_cover",
                                   f"the class group {st} has no subgroup of index "
                                   f"{args.index}", 1)
                _, H, base = best
                rep = subgroup_cover_report(SubgroupCoverSpec(st, H, base, args.index))
    else:  # extend
        if args.n is None:
            raise UsageError("cli.cover", "cover extend needs --n")
        with _op("covers.extension_cover_report"):
            rep = extension_cover_report(C, args.n)
    _emit_cover(out, rep)
    return 0


def _family(args, cfg):
    from .search import FamilyDescriptor
    F = _field(args.field)
    b = {}
    if args.family == "hyperelliptic":
        if args.genus is None:
            raise UsageError("cli.enumerate", "hyperelliptic families need --genus")
        b["genus"] = args.genus
        b["h_degree"] = args.h_degree if args.h_degree is not None else args.genus + 1
        b["f_degree"] = args.f_degree if args.f_degree is not None else 2 * args.genus + 2
    elif args.family == "plane4":
        if args.m_range:
            lo, hi = _ints(args.m_range.replace(":", ","), "--m-range")
            b["m_range"] = (lo, hi)
        elif args.m:
            b["m_values"] = _ints(args.m, "--m")
        else:
            raise UsageError("cli.enumerate", "plane4 families need --m or --m-range")
    else:
        if not args.curves:
            raise UsageError("cli.enumerate", "explicit families need --curves")
        b["curves"] = list(args.curves)
    limit = args.limit if args.limit is not None else cfg.get("limit")
    if limit is not None:
        b["limit"] = limit
    stride = args.stride if args.stride is not None else cfg.get("stride")
    if stride:
        b["stride"] = True
    dedup = None if args.dedup == "none" else args.dedup
    with _op("search.enumerate_family"):
        return FamilyDescriptor(args.family, F, b, dedup=dedup)


def _curve_info(item):
    """Worker: counts and L-polynomial of one curve given by (q, text)."""
    from .curves import parse_curve
    from .ff import field_of_size
    from .search import curve_counts, curve_l_polynomial
    q, text = item
    C = parse_curve(text, field_of_size(q))
    return C.genus, list(curve_counts(C)), list(curve_l_polynomial(C).coeffs)


def _pmap(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def cmd_enumerate(args, out, cfg):
    from .search import enumerate_family
    desc = _family(args, cfg)
    curves = []
    with _op("search.enumerate_family"):
        for i, C in enumerate(enumerate_family(desc)):
            curves.append(C)
            if (i + 1) % 50 == 0:
                progress(f"enumerate: {i + 1} curves")
            if args.max is not None and len(curves) >= args.max:
                break
    with _op("search.curve_counts"):
        infos = _pmap(_curve_info, [(C.field.q, C.text) for C in curves], cfg["jobs"])
    for i, (C, (g, counts, L)) in enumerate(zip(curves, infos)):
        out.emit("curve", {"index": i, "curve": C.text, "q": C.field.q, "g": g,
                           "counts": counts, "lpoly": L},
                 f"{i:5d} g={g} N={counts} L={L} {C.text}")
    return 0


def _strategies(args, cfg):
    names = [s for s in args.strategies.split(",") if s]
    known = {"relations", "subgroups", "extensions"}
    bad = [s for s in names if s not in known]
    if bad:
        raise UsageError("cli.hunt", f"unknown strategies {bad}; known: {sorted(known)}")
    strat = {}
    if "relations" in names:
        mc = args.max_coeff if args.max_coeff is not None else cfg.get("max_coeff", 2)
        strat["relations"] = {"max_coeff": mc,
                              "fibre": args.fibre if args.fibre is not None else cfg.get("fibre", 1),
                              "top": args.top if args.top is not None else cfg.get("top", 50)}
    if "subgroups" in names:
        strat["subgroups"] = {"indices": _ints(args.indices or "2,3", "--indices")}
    if "extensions" in names:
        strat["extensions"] = {"n": _ints(args.n or "2", "--n")}
    return strat


def _hunt_one(item):
    """Worker: hunt over one base curve."""
    from .curves import parse_curve
    from .ff import field_of_size
    from .search import hunt
    q, text, strategies = item
    rep = hunt([parse_curve(text, field_of_size(q))], strategies)
    return [e.as_dict() for e in rep.entries]


def cmd_hunt(args, out, cfg):
    from . import records as rec
    from .search import SearchError, enumerate_family
    desc = _family(args, cfg)
    strategies = _strategies(args, cfg)
    table = None
    if args.records:
        with _op("records.load"):
            table = rec.load(args.records)
    budget = args.budget if args.budget is not None else cfg.get("budget")
    bases = []
    with _op("search.enumerate_family"):
        for C in enumerate_family(desc):
            if budget is not None and len(bases) >= budget:
                progress(f"hunt: budget of {budget} base curves reached; report is partial")
                break
            bases.append(C)
    progress(f"hunt: {len(bases)} base curves")
    with _op("search.hunt"):
        chunks = _pmap(_hunt_one, [(C.field.q, C.text, strategies) for C in bases], cfg["jobs"])
    entries = [e for ch in chunks for e in ch]
    for e in entries:
        if table is not None:
            with _op("records.classify"):
                e["classification"] = rec.classify(table, e["q"], e["g"], e["N"])
            if e["classification"] == rec.EXCEEDS:
                raise CliError("search.hunt", f"({e['q']}, {e['g']}, {e['N']}) exceeds a "
                               f"proved upper bound; certificate {e['certificate']}", 1)
    sink = open(args.out, "w") if args.out else None
    try:
        for e in entries:
            if sink is not None:
                sink.write(json.dumps(e, sort_keys=True) + "\n")
            cls = f" [{e['classification']}]" if e["classification"] else ""
            out.emit("hunt", e, f"q={e['q']} g={e['g']} N={e['N']} ({e['bound_flag']})"
                                f"{cls} {e['certificate']}")
    finally:
        if sink is not None:
            sink.close()
    return 0


def cmd_records(args, out, cfg):
    from . import records as rec
    snap = args.snapshot or cfg.get("snapshot", "post")
    with _op("records.load"):
        table = rec.load(snap)
    if args.action == "lookup":
        e = table.lookup(args.q, args.g)
        if e is None:
            out.emit("record", {"q": args.q, "g": args.g, "lower": None, "upper": None,
                                "flags": None, "found": False},
                     f"q={args.q} g={args.g}: no entry")
        else:
            out.emit("record", {"q": e.q, "g": e.g, "lower": e.lower, "upper": e.upper,
                                "flags": e.flags, "found": True},
                     f"q={e.q} g={e.g}: {e.interval()} {e.flags}")
        return 0
    if args.N is None:
        raise UsageError("cli.records", "records classify needs q g N")
    with _op("records.classify"):
        c = rec.classify(table, args.q, args.g, args.N)
    out.emit("classification", {"q": args.q, "g": args.g, "N": args.N, "classification": c}, c)
    return 0


def _verify_scope(item):
    from .reproduce import verify
    name, stretch = item
    return verify([name], stretch=stretch, progress=progress)


def cmd_verify(args, out, cfg):
    from .reproduce import DEFAULT_ORDER, VerificationReport, scope_names, verify_records
    stretch = args.stretch or cfg.get("stretch", False)
    if args.scope is None or args.scope == ["all"]:
        names = scope_names(stretch)
    else:
        names = [s for s in args.scope if s]
    bad = [s for s in names if s not in DEFAULT_ORDER]
    if bad:
        raise UsageError("reproduce.verify", f"unknown scope(s) {bad}; known: "
                                             f"{', '.join(DEFAULT_ORDER)}")
    work = [n for n in names if n != "records"]
    with _op("reproduce.verify"):
        parts = _pmap(_verify_scope, [(n, stretch) for n in work], cfg["jobs"])
    report = VerificationReport()
    for p in parts:
        report.merge(p)
    if "records" in names:
        results = report.results
        if not results:
            with _op("reproduce.verify"):
                for p in _pmap(_verify_scope, [(n, False) for n in scope_names(False)
                                               if n != "records"], cfg["jobs"]):
                    results += p.results
        with _op("reproduce.verify"):
            report.merge(verify_records(results))
    for c in report.checks:
        human = None
        if not c.ok or args.verbose:
            human = (f"{'PASS' if c.ok else 'FAIL'} [{c.scope}] {c.item}"
                     + ("" if c.ok else f": expected {c.expected}, observed {c.observed}"))
        out.emit("check", c.as_dict(), human)
    for d in report.discrepancies:
        out.emit("discrepancy", d.as_dict(),
                 f"DISCREPANCY [{d.scope}] {d.item}: printed {d.printed}, computed "
                 f"{d.computed} -- {d.explanation}")
    for t in report.tensions:
        out.emit("tension", {"text": t}, f"TENSION {t}")
    n_fail = len(report.failures)
    out.emit("summary", {"scopes": report.scopes, "checks": len(report.checks),
                         "failures": n_fail, "discrepancies": len(report.discrepancies),
                         "tensions": len(report.tensions)},
             f"{len(report.checks)} checks, {n_fail} failing, "
             f"{len(report.discrepancies)} documented discrepancies, "
             f"{len(report.tensions)} tensions ({', '.join(report.scopes) or 'no scopes'})")
    return 1 if n_fail else 0


# ----------------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("cli.parse_args", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="curvehunt", description="Curves over finite fields with many points.")
    p.add_argument("--json", action="store_true", help="emit json-lines records on stdout")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default 1)")
    p.add_argument("--config", help="config file of 'key = value' lines")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("count", help="number of F_{q^n}-rational points")
    _curve_args(s)
    s.add_argument("--ext", default="1", help="extension degree(s) n, comma-separated")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("lpoly", help="L-polynomial")
    _curve_args(s)
    s.add_argument("--descending", action="store_true", help="print 4t^4+...+1 style")
    s.set_defaults(func=cmd_lpoly)

    s = sub.add_parser("classgroup", help="class group and Abel-Jacobi table")
    _curve_args(s)
    s.add_argument("--degree", type=int, default=1, help="tabulate places up to this degree")
    s.set_defaults(func=cmd_classgroup)

    s = sub.add_parser("aj", help="class of a degree-0 divisor sum a_i P_i")
    _curve_args(s)
    s.add_argument("--vector", required=True,
                   help="coefficients a_i over the places in classgroup order")
    s.add_argument("--degree", type=int, default=1, help="places up to this degree")
    s.add_argument("--function", action="store_true",
                   help="also print a function with this divisor (exit 1 if none)")
    s.set_defaults(func=cmd_aj)

    s = sub.add_parser("cover", help="genus and point count of a cover")
    s.add_argument("kind", choices=["as", "fibre", "subgroup", "extend"])
    _curve_args(s)
    s.add_argument("--function", action="append", help="Artin-Schreier function (repeatable)")
    s.add_argument("--index", type=int, help="subgroup index d")
    s.add_argument("--congruence", action="append",
                   help="subgroup congruence 'c1,...,ck:m' (repeatable); default: best subgroup")
    s.add_argument("--base", type=int, help="rational base point index for --congruence")
    s.add_argument("--n", type=int, help="extension degree for cover extend")
    s.set_defaults(func=cmd_cover)

    for name, func, hlp in (("enumerate", cmd_enumerate, "enumerate a curve family"),
                            ("hunt", cmd_hunt, "search a family for good covers")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--family", required=True, choices=["hyperelliptic", "plane4", "explicit"])
        s.add_argument("--field", required=True)
        s.add_argument("--genus", type=int)
        s.add_argument("--h-degree", type=int)
        s.add_argument("--f-degree", type=int)
        s.add_argument("--m", help="plane4: comma-separated encodings")
        s.add_argument("--m-range", help="plane4: lo:hi")
        s.add_argument("--curves", nargs="*", help="explicit: equations")
        s.add_argument("--limit", type=int)
        s.add_argument("--stride", action="store_true", default=None)
        s.add_argument("--dedup", choices=["L", "counts", "none"], default="L")
        if name == "enumerate":
            s.add_argument("--max", type=int, help="stop after this many curves")
        else:
            s.add_argument("--strategies", default="relations,subgroups,extensions")
            s.add_argument("--max-coeff", type=int)
            s.add_argument("--fibre", type=int)
            s.add_argument("--top", type=int)
            s.add_argument("--indices", help="subgroup indices, comma-separated")
            s.add_argument("--n", help="extension degrees, comma-separated")
            s.add_argument("--records", help="'pre', 'post' or a records file")
            s.add_argument("--budget", type=int, help="maximum number of base curves")
            s.add_argument("--out", help="also write the report as json lines to this file")
        s.set_defaults(func=func)

    s = sub.add_parser("records", help="record tables")
    s.add_argument("action", choices=["lookup", "classify"])
    s.add_argument("q", type=int)
    s.add_argument("g", type=int)
    s.add_argument("N", type=int, nargs="?")
    s.add_argument("--snapshot", help="'post' (default), 'pre' or a file")
    s.set_defaults(func=cmd_records)

    s = sub.add_parser("verify-paper", help="reproduce the published tables")
    s.add_argument("--scope", action="append",
                   help="scope name (repeatable; default all; '' for none)")
    s.add_argument("--stretch", action="store_true", help="include the long stretch scopes")
    s.add_argument("--verbose", action="store_true", help="list passing checks too")
    s.set_defaults(func=cmd_verify)
    return p


def load_config(path: str | None) -> dict:
    cfg = {}
    if path is None:
        return cfg
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_string("[curvehunt]\n" + fh.read())
    except OSError as e:
        raise UsageError("cli.load_config", f"cannot read {path}: {e.strerror}") from None
    except configparser.Error as e:
        raise UsageError("cli.load_config", f"{path}: {e}") from None
    for key, value in cp["curvehunt"].items():
        if key not in CONFIG_KEYS:
            raise UsageError("cli.load_config", f"{path}: unknown key {key!r}")
        typ = CONFIG_KEYS[key]
        try:
            cfg[key] = cp["curvehunt"].getboolean(key) if typ is bool else typ(value)
        except ValueError:
            raise UsageError("cli.load_config", f"{path}: bad value for {key!r}") from None
    return cfg


#: options whose values may start with '-' (e.g. a relation vector)
_SIGNED_OPTIONS = ("--vector", "--congruence", "--function")


def _glue_values(argv: list) -> list:
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _SIGNED_OPTIONS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    json_mode = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        json_mode = args.json
        if args.command is None:
            raise UsageError("cli.parse_args", "a subcommand is required")
        cfg = load_config(args.config)
        jobs = args.jobs if args.jobs is not None else cfg.get("jobs", 1)
        if jobs < 1:
            raise UsageError("cli.parse_args", "--jobs must be positive")
        cfg["jobs"] = jobs
        return args.func(args, Output(args.json, stdout), cfg)
    except CliError as e:
        print(f"curvehunt: {e.operation}: {e}", file=stderr)
        if json_mode:
            stdout.write(json.dumps({"type": "error", "operation": e.operation,
                                     "message": str(e), "exit": e.status}, sort_keys=True)
                         + "\n")
        return e.status


def main(argv=None) -> int:
    status = run(argv)
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
