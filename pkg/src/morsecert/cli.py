"""``morsecert`` command line.

Exit codes: 0 success / certified, 1 checked and failed (a witness is
printed), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import free_aut as FA
from . import group_models as GM
from .builders import build_example, hexagon_link_matches
from .complex_core import (
    ProductComplex,
    SimplicialComplex,
    homology,
    link_to_dict,
    validate_complex,
    validate_product,
)
from .curvature import EUCLIDEAN, angle_text, certify_2complex, certify_product, is_flag
from .morse import (
    ascending_link,
    descending_link,
    finiteness_report,
    morse_image_index,
    morse_link,
    validate_morse,
)
from .pingpong import PHI1_ABEL, PSI1_ABEL, freeness_chain, pingpong_search, replay
from .symmetry import certify_model_situation

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.format == "text" and text is not None:
        print(text)
    else:
        print(json.dumps(payload, indent=2, ensure_ascii=False))


def _example(args):
    if not args.example:
        raise UsageError("--example is required")
    return build_example(args.example)


def _curvature(ex):
    C = ex.complex
    if isinstance(C, ProductComplex):
        geoms = ex.geometry if isinstance(ex.geometry, (list, tuple)) else [ex.geometry] * len(C.factors)
        return certify_product(C, [certify_2complex(F, None, g) for F, g in zip(C.factors, geoms)])
    return certify_2complex(C, None, ex.geometry or EUCLIDEAN)


def cmd_build(args) -> int:
    ex = _example(args)
    C = ex.complex
    problems = validate_product(C) if isinstance(C, ProductComplex) else validate_complex(C)
    payload = ex.to_dict()
    text = json.dumps(payload, indent=2, ensure_ascii=False)
    if args.out:
        Path(args.out).write_text(text + "\n")
    if ex.name == "hexagon":
        problems += hexagon_link_matches(C)
    payload_out = {"example": ex.name, "valid": not problems, "problems": problems}
    if args.out:
        payload_out["written"] = args.out
        _emit(args, payload_out, f"{ex.name}: {'valid' if not problems else problems}; written to {args.out}")
    else:
        print(text)
    return OK if not problems else FAILED


def cmd_check(args) -> int:
    ex = _example(args)
    if args.what == "npc":
        cert = _curvature(ex)
        payload = cert.to_dict()
        if isinstance(ex.complex, ProductComplex) and all(F.faces == {} for F in ex.complex.factors):
            from .complex_core import product_link

            flag, clique = is_flag(product_link(ex.complex, ex.vertex).base)
            payload["link_flag"] = {"flag": flag, "witness": None if clique is None else sorted(map(str, clique))}
        text = f"{ex.name}: {cert.verdict} via {cert.rule} (min link cycle angle {angle_text(cert.min_cycle_angle)})"
        if cert.witness is not None:
            text += f"\nwitness: {json.dumps(payload['witness'])}"
        _emit(args, payload, text)
        return OK if cert.nonpositively_curved else FAILED
    problems = validate_morse(ex.complex, ex.weighting)
    index = morse_image_index(ex.complex, ex.weighting)
    payload = {"valid": not problems, "diagnostics": problems, "image_index": index, "epimorphism": index == 1}
    text = f"{ex.name}: Morse data {'valid' if not problems else 'INVALID'}; image index {index}"
    if problems:
        text += "\n" + "\n".join(f"  {p}" for p in problems)
    _emit(args, payload, text)
    return OK if not problems and index == 1 else FAILED


def _which_link(args, ex):
    if args.ascending:
        return "ascending", ascending_link(ex.complex, ex.weighting, ex.vertex)
    if args.descending:
        return "descending", descending_link(ex.complex, ex.weighting, ex.vertex)
    return "full", morse_link(ex.complex, ex.weighting, ex.vertex)


def cmd_link(args) -> int:
    ex = _example(args)
    part, L = _which_link(args, ex)
    payload = {"example": ex.name, "part": part, "link": link_to_dict(L)}
    text = f"{ex.name} {part} link: {len(L.vertices)} vertices, f-vector {list(L.base.f_vector)}"
    _emit(args, payload, text)
    return OK


def cmd_homology(args) -> int:
    if args.input:
        data = json.loads(Path(args.input).read_text())
        S = SimplicialComplex(data["vertices"], data.get("simplices", []))
        label = args.input
    else:
        ex = _example(args)
        part, L = _which_link(args, ex)
        S = L.base
        label = f"{ex.name} {part} link"
    h = homology(S)
    _emit(args, {"complex": label, "homology": h.to_dict(), "text": h.describe()}, f"{label}: {h.describe()}")
    return OK


def cmd_finiteness(args) -> int:
    ex = _example(args)
    rep = finiteness_report(
        ascending_link(ex.complex, ex.weighting, ex.vertex),
        descending_link(ex.complex, ex.weighting, ex.vertex),
    )
    _emit(args, rep.to_dict(), rep.render_text())
    return OK if rep.kind == "sharp" else FAILED


def cmd_certify(args) -> int:
    ex = _example(args)
    cert = certify_model_situation(ex.complex, ex.weighting, ex.automorphism, ex.vertex, ex.geometry)
    payload = {"example": ex.name, **cert.to_dict()}
    _emit(args, payload, cert.render_text())
    return OK if cert.success else FAILED


def cmd_witnesses(args) -> int:
    t = GM.DoubledFreeElement.from_dict(json.loads(args.t)) if args.t else GM.default_t(args.factors)
    rows = []
    for n in range(args.count):
        w = GM.witness(n, t)
        rows.append({
            "n": n,
            "element": w.to_dict(),
            "order": GM.element_order(w),
            "coordinate_degree": GM.morse_degree(w),
            "iota": GM.iota(w),
        })
    ok = all(r["order"] == 2 and r["iota"] == r["n"] for r in rows)
    text = "\n".join(f"n={r['n']}: {GM.DoubledFreeElement.from_dict(r['element'])}  order {r['order']}  iota {r['iota']}" for r in rows)
    _emit(args, {"t": t.to_dict(), "witnesses": rows, "iota_distinct": ok}, text)
    return OK if ok else FAILED


def _element(text: str | None, n: int, t) -> GM.DoubledFreeElement:
    if text is None:
        raise UsageError("both elements are required")
    if text.lstrip("-").isdigit():
        return GM.witness(int(text), t)
    return GM.DoubledFreeElement.from_dict(json.loads(text))


def cmd_oracle(args) -> int:
    t = GM.default_t(args.factors)
    g = _element(args.g, args.factors, t)
    h = _element(args.h, args.factors, t)
    try:
        verdict = GM.conjugacy_oracle(g, h, args.max_len, not args.all_elements)
    except ValueError as exc:
        raise UsageError(str(exc))
    payload = {"g": g.to_dict(), "h": h.to_dict(), **verdict.to_dict()}
    if verdict.conjugate:
        text = f"conjugate: c = {verdict.witness} (searched {verdict.examined} elements)"
    else:
        text = f"no conjugator of length <= {args.max_len} ({verdict.examined} elements exhausted)"
    _emit(args, payload, text)
    return OK if verdict.conjugate else FAILED


def _endo(text: str, k: int) -> FA.FreeGroupEndo:
    named = {"identity": lambda: FA.identity(k), "sigma": lambda: FA.sigma(k)}
    if text in named:
        return named[text]()
    for prefix, fn in (("phi", FA.phi), ("psi", FA.psi)):
        if text.startswith(prefix) and text[len(prefix):].isdigit():
            return fn(int(text[len(prefix):]), k)
    path = Path(text)
    data = json.loads(path.read_text()) if path.is_file() else json.loads(text)
    return FA.FreeGroupEndo.from_dict(data)


def cmd_aut(args) -> int:
    if args.action == "verify":
        rep = FA.verify_relations(args.rank)
        text = "\n".join(f"[{'ok' if c.holds else 'FAIL'}] {c.name} {c.detail}" for c in rep.checks)
        _emit(args, rep.to_dict(), text)
        return OK if rep.all_hold else FAILED
    if args.action == "abelianize":
        e = _endo(args.endo or "phi1", args.rank)
        M = FA.abelianization(e)
        _emit(args, {"endo": e.to_dict(), "matrix": [list(r) for r in M]}, "\n".join(" ".join(f"{x:3d}" for x in r) for r in M))
        return OK
    if args.action == "pingpong":
        cert = pingpong_search(PHI1_ABEL, PSI1_ABEL, args.max_N)
        if cert is None:
            _emit(args, {"certificate": None, "max_N": args.max_N}, f"no certificate with N <= {args.max_N}")
            return FAILED
        chain = freeness_chain(cert, args.rank)
        _emit(args, {"certificate": cert.to_dict(), "replay": replay(cert), "freeness_chain": chain}, "\n".join(chain))
        return OK
    e = _endo(args.endo or "identity", args.rank)
    inv = _endo(args.inverse, args.rank) if args.inverse else None
    res = FA.is_inner(e, inv)
    text = f"inner, conjugator {FA.W.format_word(res.conjugator, FA.gen_names(e.rank))}" if res.inner else "not inner"
    _emit(args, {"endo": e.to_dict(), **res.to_dict(e.rank)}, text)
    return OK if res.inner else FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--example", help="raag-N, hexagon, hexagon-product, or a JSON bundle path")

    p = argparse.ArgumentParser(prog="morsecert", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build an example and print its JSON bundle")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", parents=[common], help="curvature or Morse checks")
    c.add_argument("what", choices=("npc", "morse"))
    c.set_defaults(func=cmd_check)

    for name, func, helptext in (
        ("link", cmd_link, "vertex link with polarity"),
        ("homology", cmd_homology, "reduced integral homology of a link or a simplicial complex"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        g = s.add_mutually_exclusive_group()
        g.add_argument("--ascending", action="store_true")
        g.add_argument("--descending", action="store_true")
        if name == "homology":
            s.add_argument("--input", help='JSON {"vertices": [...], "simplices": [[...], ...]}')
        s.set_defaults(func=func)

    sub.add_parser("finiteness", parents=[common], help="finiteness report from the links").set_defaults(func=cmd_finiteness)
    sub.add_parser("certify", parents=[common], help="certify the model situation").set_defaults(func=cmd_certify)

    w = sub.add_parser("witnesses", parents=[common], help="t^n sigma t^-n in (F2)^n x| <sigma>")
    w.add_argument("--count", type=int, default=6)
    w.add_argument("--factors", type=int, default=2)
    w.add_argument("--t", help='element JSON, e.g. {"coords": ["a", "1"], "flip": false}')
    w.set_defaults(func=cmd_witnesses)

    o = sub.add_parser("oracle", parents=[common], help="bounded exhaustive conjugacy search")
    o.add_argument("kind", choices=("conjugacy",))
    o.add_argument("--max-len", type=int, default=6)
    o.add_argument("--factors", type=int, default=2)
    o.add_argument("--g", help="witness index n or element JSON")
    o.add_argument("--h", help="witness index n or element JSON")
    o.add_argument("--all-elements", action="store_true", help="search all of G x| <sigma>, not just the kernel")
    o.set_defaults(func=cmd_oracle)

    a = sub.add_parser("aut", parents=[common], help="automorphisms of free groups")
    a.add_argument("action", choices=("verify", "abelianize", "pingpong", "inner"))
    a.add_argument("--rank", type=int, default=2)
    a.add_argument("--endo", help="phiI, psiI, sigma, identity, or endomorphism JSON")
    a.add_argument("--inverse", help="inverse endomorphism (same forms as --endo)")
    a.add_argument("--max-N", dest="max_N", type=int, default=16)
    a.set_defaults(func=cmd_aut)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"morsecert: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
