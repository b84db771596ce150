"""Command-line interface.

Every verb reads a JSON document (a file argument or stdin) and writes JSON to
stdout.  Exit status: 0 success, 1 domain or input error, 2 anomaly finding.
"""

import argparse
import json
import os
import sys

from .conjecture import has_findings, load_tested, verify_conjecture
from .errors import AnomalyError, ConsistencyError, ShapeLociError
from .matroid import Matroid
from .oracle import DEFAULT_PRIME, matroid_from_matrix, random_evaluation
from .pivot import gale_minimal, pivot_targets
from .positroid import (
    IntervalRankMatrix,
    crossings,
    ec_by_components,
    ec_closed_form,
    expected_codimension,
    interval_envelope,
    interval_rank_matrix,
    is_noncrossing,
    is_positroid,
    is_transversal,
    positroid_envelope,
)
from .transversal import (
    SetSystem,
    is_minimal_presentation,
    locus_dimension,
    nmd,
    reduce_to_minimal,
    transversal_matroid,
)
from .wilson import (
    WilsonLoopDiagram,
    is_admissible,
    noncrossing_exact_count,
    to_set_system,
    uncross,
    wld_equivalent,
    wld_properties,
)


class InputError(ShapeLociError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _read_json(path):
    if path in (None, "-"):
        text = sys.stdin.read()
        name = "<stdin>"
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as err:
            raise InputError(f"cannot read {path}: {err.strerror}") from None
        name = path
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(
            f"malformed JSON in {name} at line {err.lineno} column {err.colno} "
            f"(char {err.pos}): {err.msg}"
        ) from None


def _system(data):
    if not isinstance(data, dict) or "sets" not in data:
        raise InputError('expected a set system {"n": ..., "sets": [...]}')
    return SetSystem.from_json(data)


def _matroid_or_system(data):
    """A matroid given directly, or the transversal matroid of a set system."""
    if isinstance(data, dict) and "bases" in data:
        return Matroid.from_json(data), None
    sys_ = _system(data)
    return transversal_matroid(sys_), sys_


def _diagram(data):
    if not isinstance(data, dict) or "propagators" not in data:
        raise InputError('expected a diagram {"n": ..., "propagators": [...]}')
    return WilsonLoopDiagram.from_json(data)


def cmd_matroid(args):
    return transversal_matroid(_system(_read_json(args.input))).to_json()


def cmd_minimal(args):
    s = _system(_read_json(args.input))
    res = is_minimal_presentation(s)
    return {
        "minimal": res.minimal,
        "violator": None if res.violator is None else [i + 1 for i in res.violator],
        "reduced": reduce_to_minimal(s).to_json(),
    }


def cmd_dim(args):
    return {"dimension": locus_dimension(_system(_read_json(args.input)))}


def cmd_is_positroid(args):
    m, _ = _matroid_or_system(_read_json(args.input))
    return {"positroid": is_positroid(m)}


def cmd_crossings(args):
    s = _system(_read_json(args.input))
    return {"noncrossing": is_noncrossing(s), "crossings": [w.to_json() for w in crossings(s)]}


def cmd_envelope(args):
    m, _ = _matroid_or_system(_read_json(args.input))
    env = positroid_envelope(m)
    return {"envelope": env.to_json(), "positroid": env == m}


def cmd_interval_rank(args):
    return interval_rank_matrix(_system(_read_json(args.input))).to_json()


def cmd_interval_envelope(args):
    data = _read_json(args.input)
    if not isinstance(data, dict) or "rows" not in data:
        raise InputError('expected an interval rank matrix {"n": ..., "rows": [...]}')
    r = IntervalRankMatrix.from_json(data)
    k = args.k if args.k is not None else data.get("k", r(1, r.n) if r.n else 0)
    return interval_envelope(r, k).to_json()


def cmd_ec(args):
    m, s = _matroid_or_system(_read_json(args.input))
    out = {"ec": expected_codimension(m, presentation=s)}
    if s is not None:
        out["closed_form"] = ec_closed_form(s)
        if m.n <= 16:
            out["restricted"] = ec_by_components(s)
        out["nmd"] = nmd(reduce_to_minimal(s))
    return out


def cmd_is_transversal(args):
    m, _ = _matroid_or_system(_read_json(args.input))
    res = is_transversal(m)
    return {
        "transversal": res.transversal,
        "presentation": None if res.presentation is None else res.presentation.to_json(),
    }


def cmd_pivot_targets(args):
    s = _system(_read_json(args.input))
    if args.set is None:
        top = max(len(x) for x in s.sets)
        index = next(i for i, x in enumerate(s.sets) if len(x) == top)
    else:
        index = args.set - 1
        if not 0 <= index < s.k:
            raise InputError(f"--set {args.set} outside 1..{s.k}")
    return {"set": index + 1, "targets": [list(t) for t in pivot_targets(s, index)]}


def cmd_gale_minimal(args):
    s = _system(_read_json(args.input))
    g = gale_minimal(s, args.a)
    return {"a": args.a, "presentation": g.to_json(), "noncrossing": is_noncrossing(g)}


def cmd_verify_conjecture(args):
    skip = ()
    if args.resume:
        with open(args.resume) as fh:
            skip = load_tested(fh)
    out = open(args.out, "a" if args.resume == args.out else "w") if args.out else sys.stdout
    try:
        kwargs = dict(
            workers=args.threads or os.cpu_count() or 1,
            out=out,
            skip=skip,
            ec=not args.no_ec,
            lemma=args.check_lemma,
            budget=args.budget,
        )
        if args.random:
            seed, trials = args.random
            summary = verify_conjecture(
                args.max_n, args.max_k, mode="random", seed=seed, trials=trials, **kwargs
            )
        else:
            summary = verify_conjecture(args.max_n, args.max_k, **kwargs)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.out:
        _emit(summary, args.pretty)
    return 2 if has_findings(summary) else 0


def cmd_wld(args):
    if args.action == "catalan":
        if args.vertices is None:
            raise InputError("wld catalan needs a vertex count")
        return {"vertices": args.vertices, "count": noncrossing_exact_count(args.vertices)}
    data = _read_json(args.input)
    if args.action == "equiv":
        if args.other is not None:
            pair = [data, _read_json(args.other)]
        elif isinstance(data, list) and len(data) == 2:
            pair = data
        else:
            raise InputError("wld equiv needs two diagrams (two files or a JSON array)")
        w1, w2 = (_diagram(d) for d in pair)
        return {"equivalent": wld_equivalent(w1, w2)}
    w = _diagram(data)
    if args.action == "convert":
        return to_set_system(w).to_json()
    if args.action == "uncross":
        return uncross(w).to_json()
    res = is_admissible(w).to_json()
    if res["admissible"]:
        res.update(wld_properties(w))
    return res


def cmd_oracle(args):
    s = _system(_read_json(args.input))
    fm = random_evaluation(s, args.seed, args.prime)
    m = matroid_from_matrix(fm)
    out = fm.to_json()
    out["bases"] = [list(b) for b in m.bases]
    out["agrees"] = m == transversal_matroid(s)
    return out


def _emit(obj, pretty):
    if pretty:
        print(json.dumps(obj, indent=2))
    else:
        print(json.dumps(obj))


def build_parser():
    p = _Parser(prog="shapeloci", description="Basis shape loci of set systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indented output")
    common.add_argument("--threads", type=int, default=None)
    sub = p.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    sub.required = True

    def verb(name, func, help_text, takes_input=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if takes_input:
            sp.add_argument("input", nargs="?", help="JSON file (default: stdin)")
        sp.set_defaults(func=func)
        return sp

    verb("matroid", cmd_matroid, "bases of the transversal matroid")
    verb("minimal", cmd_minimal, "minimality test and reduction")
    verb("dim", cmd_dim, "dimension of the basis shape locus")
    verb("is-positroid", cmd_is_positroid, "positroid test")
    verb("crossings", cmd_crossings, "crossing pairs with witnesses")
    verb("envelope", cmd_envelope, "positroid envelope")
    verb("interval-rank", cmd_interval_rank, "interval rank matrix")
    ie = verb("interval-envelope", cmd_interval_envelope, "bases allowed by an interval rank matrix")
    ie.add_argument("--k", type=int, default=None)
    verb("ec", cmd_ec, "expected codimension")
    verb("is-transversal", cmd_is_transversal, "search for a transversal presentation")
    pt = verb("pivot-targets", cmd_pivot_targets, "pivot targets of a largest set")
    pt.add_argument("--set", type=int, default=None, help="1-based set index")
    gm = verb("gale-minimal", cmd_gale_minimal, "a-Gale minimal presentation")
    gm.add_argument("--a", type=int, default=1)
    vc = verb("verify-conjecture", cmd_verify_conjecture, "sweep minimal systems", False)
    vc.add_argument("--max-n", type=int, required=True)
    vc.add_argument("--max-k", type=int, required=True)
    vc.add_argument("--random", type=int, nargs=2, metavar=("SEED", "TRIALS"))
    vc.add_argument("--out", help="write JSON lines here instead of stdout")
    vc.add_argument("--resume", help="skip systems already recorded in this report")
    vc.add_argument("--budget", type=int, default=None)
    vc.add_argument("--no-ec", action="store_true", help="skip the codimension checks")
    vc.add_argument("--check-lemma", action="store_true", help="also look for uncrossing exact subsystems")
    w = verb("wld", cmd_wld, "Wilson loop diagrams", False)
    w.add_argument("action", choices=["check", "convert", "equiv", "uncross", "catalan"])
    w.add_argument("input", nargs="?")
    w.add_argument("other", nargs="?")
    w.add_argument("--vertices", type=int, default=None)
    o = verb("oracle", cmd_oracle, "random prime-field evaluation")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "wld" and args.action == "catalan" and args.vertices is None and args.input:
        try:
            args.vertices = int(args.input)
        except ValueError:
            pass
    try:
        result = args.func(args)
    except AnomalyError as err:
        _emit({"anomaly": str(err), "details": err.details}, args.pretty)
        return 2
    except ConsistencyError as err:
        print(f"internal consistency failure: {err}", file=sys.stderr)
        return 2
    except (ShapeLociError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if isinstance(result, int):
        return result
    _emit(result, args.pretty)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
