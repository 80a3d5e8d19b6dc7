"""Command-line entry point: ``rainbowlab <command> ...``.

Reports go to stdout and are byte-for-byte reproducible for a given input
file and seed; timings go to stderr.  Exit codes: 0 success, 2 bad input
or a rejected certificate, 3 an internal invariant failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .chains import SetFamily, close_family, extract_chain, span_dimension
from .collapse import (
    certificate_from_dict,
    enumerate_faces_independent,
    greedy_collapsibility_probe,
    run_collapse,
    verify_certificate,
    write_certificate,
)
from .errors import InputError, InvariantError
from .instances import Instance, fmt, load_instance, parse_subset, to_text
from .matroids import check_rank_axioms, elements_of
from .polytopes import nu_star, tau_star
from .rainbow import CATALOG, find_rainbow, load_catalog_instance, random_instance
from .setfunctions import check_pds, check_product_submodular

log = logging.getLogger("rainbowlab")


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _resolve(source: str, validate: bool = True) -> tuple[Instance, str]:
    path = Path(source)
    if path.exists():
        return load_instance(path, validate), _digest(path.read_bytes())
    if source in CATALOG:
        inst = load_catalog_instance(source)
        return inst, _digest(to_text(inst.raw).encode())
    raise InputError(f"{source}: no such file or catalog instance")


def _cap(inst: Instance, cap: int | None) -> None:
    if cap is not None and inst.n > cap:
        raise InputError(f"ground set has {inst.n} elements, above --cap {cap}")


def _vector(values) -> list[str]:
    return [fmt(x) for x in values]


def _emit(args, command: str, digest: str, results: dict) -> None:
    if args.format == "terse":
        for key, value in results.items():
            if isinstance(value, (list, dict)):
                value = to_text(value).replace("\n", "").replace(" ", "")
            print(f"{key}={value}")
        return
    report = {"command": command, "inputs": digest, "seed": args.seed, "results": results}
    sys.stdout.write(to_text(report))


def cmd_nustar(args) -> int:
    inst, digest = _resolve(args.instance)
    _cap(inst, args.cap)
    system = inst.system()
    W = inst.ground.full if args.subset is None else parse_subset(_subset_arg(args.subset), inst.ground)
    a = inst.a
    if args.weights is not None:
        a = tuple(args.weights.split(","))
    nu = nu_star(system, W, a)
    tau, h = tau_star(system, W, a)
    if nu.value != tau:
        raise InvariantError(f"nu* = {nu.value} but tau* = {tau}")
    _emit(args, "nustar", digest, {
        "W": elements_of(W),
        "nu_star": fmt(nu.value),
        "tau_star": fmt(tau),
        "f": _vector(nu.f),
        "h": [{"matroid": i, "A": elements_of(A), "value": fmt(x)} for (i, A), x in h.h],
    })
    return 0


def _subset_arg(text: str):
    if text.startswith("0x"):
        return text
    if not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"subset must be a comma list or a hex mask, got {text!r}") from None


def cmd_rainbow(args) -> int:
    if args.random:
        try:
            r, k, n = args.random.split(",")
            r, n = int(r), int(n)
        except ValueError:
            raise InputError("--random expects r,k,n") from None
        ri = random_instance(args.seed, r, k, n)
        digest = _digest(f"random:{args.random}:{args.seed}".encode())
    else:
        if args.instance is None:
            raise InputError("rainbow needs an instance or --random r,k,n")
        inst, digest = _resolve(args.instance)
        _cap(inst, args.cap)
        ri = inst.rainbow_instance()
    res = find_rainbow(ri)
    _emit(args, "rainbow", digest, {
        "k": fmt(ri.k),
        "d": ri.d,
        "R": res.elements,
        "choice": [[j, x] for j, x in res.choice],
        "nu_star": fmt(res.value),
        "f": _vector(res.f),
    })
    return 0


def cmd_collapse(args) -> int:
    inst, digest = _resolve(args.instance)
    _cap(inst, args.cap if args.cap is not None else 12)
    spec = inst.complex_spec()
    faces = enumerate_faces_independent(spec, inst.hypergraph)
    if args.verify:
        path = Path(args.verify)
        try:
            cert, _ = certificate_from_dict(json.loads(path.read_text()))
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read certificate {path}: {exc}") from None
        verdict = verify_certificate(faces, cert)
        _emit(args, "collapse-verify", digest, {
            "certificate": _digest(path.read_bytes()),
            "accepted": verdict.ok,
            "bad_step": verdict.bad_step,
            "reason": verdict.reason,
        })
        return 0 if verdict.ok else 2
    start = time.perf_counter()
    cert = run_collapse(spec, seed=args.seed)
    log.info("collapse took %.2fs", time.perf_counter() - start)
    out = write_certificate(cert, args.out, inst.hypergraph)
    verdict = verify_certificate(faces, cert)
    if not verdict:
        raise InvariantError(f"engine certificate rejected at step {verdict.bad_step}: {verdict.reason}")
    _emit(args, "collapse", digest, {
        "faces": len(faces),
        "dimension_bound": cert.d,
        "steps": len(cert.steps),
        "max_collapsor": cert.max_collapsor,
        "accepted": verdict.ok,
        "greedy_probe": greedy_collapsibility_probe(faces, cert.d) if len(faces) <= 1 << 12 else None,
        "certificate": out.name,
    })
    return 0


def cmd_check(args) -> int:
    inst, digest = _resolve(args.instance, validate=False)
    _cap(inst, args.cap)
    results: dict = {}
    ok = True
    for i, m in enumerate(inst.matroids):
        rep = check_rank_axioms(m)
        ok &= rep.ok
        results[f"matroid_{i}"] = "rank axioms hold" if rep else f"{rep.axiom} fails at {list(rep.witness)}"
    if inst.b is not None:
        for i, f in enumerate(inst.b):
            rep = check_pds(f)
            ok &= rep.is_pds
            results[f"b_{i}"] = rep.lines()
            if i < len(inst.matroids):
                prod = check_product_submodular(f, inst.matroids[i])
                results[f"b_{i}_times_rank"] = (
                    "submodular" if prod.submodular else f"not submodular at {list(prod.witness)}"
                ) + ("" if prod.preconditions_ok else f" (precondition failed: {prod.failed_precondition})")
    if inst.family:
        fam = SetFamily.of(inst.family)
        ok &= fam.closed
        results["family"] = {"union_closed": fam.union_closed, "intersection_closed": fam.intersection_closed}
    if not results:
        raise InputError("nothing to check: the file has no matroids, b blocks or family")
    results["all_ok"] = bool(ok)
    _emit(args, "check", digest, results)
    return 0


def cmd_chain(args) -> int:
    inst, digest = _resolve(args.instance)
    _cap(inst, args.cap)
    if not inst.family:
        raise InputError("chain needs a family block")
    fam = close_family(inst.family) if args.close else SetFamily.of(inst.family)
    if not fam.closed:
        raise InputError("family is not closed under unions and intersections (use --close)")
    chain = extract_chain(fam)
    dim = span_dimension(fam)
    if len(chain) != dim:
        raise InvariantError(f"chain of length {len(chain)} but span dimension {dim}")
    _emit(args, "chain", digest, {
        "members": len(fam),
        "dimension": dim,
        "chain": [elements_of(s) for s in chain.sets],
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for perturbations and random instances")
    common.add_argument("--cap", type=int, default=None, help="refuse ground sets larger than this")
    common.add_argument("--format", choices=("report", "terse"), default="report")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="rainbowlab", description="Rainbow fractional matchings in matroid intersections.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("nustar", parents=[common], help="nu* and tau* of a subset, with optimizers")
    s.add_argument("instance", help="instance file or catalog name")
    s.add_argument("-W", "--subset", help="subset as '0,2,5' or a hex mask (default: everything)")
    s.add_argument("-a", "--weights", help="objective as 'p/q,p/q,...' (default: from the instance)")
    s.set_defaults(func=cmd_nustar)

    s = sub.add_parser("rainbow", parents=[common], help="search for a rainbow support")
    s.add_argument("instance", nargs="?", help="instance file or catalog name")
    s.add_argument("--random", metavar="R,K,N", help="use a seeded random instance instead")
    s.set_defaults(func=cmd_rainbow)

    s = sub.add_parser("collapse", parents=[common], help="build or verify a collapse certificate")
    s.add_argument("instance", help="instance file or catalog name")
    s.add_argument("--verify", metavar="CERT", help="replay CERT against the instance instead of building one")
    s.add_argument("--out", default=".", help="directory for the certificate file")
    s.set_defaults(func=cmd_collapse)

    s = sub.add_parser("check", parents=[common], help="rank axioms, PDS reports and family closure")
    s.add_argument("instance", help="instance or function file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("chain", parents=[common], help="extract a chain from a closed family")
    s.add_argument("instance", help="file with a family block")
    s.add_argument("--close", action="store_true", help="close the family under unions and intersections first")
    s.set_defaults(func=cmd_chain)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"internal invariant failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
