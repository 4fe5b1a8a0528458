"""Command-line surface: verification subcommands emitting canonical JSON.

Every subcommand writes one canonical JSON report to stdout (and to
--output when given); human diagnostics go to stderr.  Exit codes
separate outcomes: 0 means the checked property holds, 1 means a
verified mathematical failure (a defect above epsilon, a falsified
claim, a CP violation), and 2 means an operational error (unknown
command, unreadable file, schema violation, precondition breach).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .certify import (COMPLEX_OP, NORM_MODES, FiniteSubset, lemma_audit,
                      nuclear_witness_verify, qd_complexify, qd_realify,
                      qd_verify, trace_qd_verify, trace_transport)
from .cpmaps import (COMPLEX, REAL, choi, complexify, compose, cp_defect,
                     cp_defect_real_report, doubled_units,
                     restrict_to_real_form)
from .io import (SchemaError, anti_from_json, algebra_from_json,
                 canonical_dumps, cert_from_json, cert_to_json,
                 ideal_from_json, load_json, map_from_json, map_to_json,
                 matrix_from_json, matrix_to_json, subset_from_json,
                 trace_from_json)
from .matrix import DEFAULT_TOL, hermitian_defect, op_norm
from .realform import (AntiAutomorphism, apply_phi, check_antiautomorphism,
                       real_decompose, real_form_residual)
from .tensorexact import exactness_check, fubini_check
from .transport import ThetaScale, transport_factorization

ENV_TOL = "STARLIFT_TOL"


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters: flag > environment > default."""

    tol: float = DEFAULT_TOL
    seed: int = 0
    theta_mode: str = "auto"
    norm_mode: str = COMPLEX_OP
    output_path: str | None = None

    def __post_init__(self) -> None:
        if not (self.tol > 0):
            raise ValueError("tolerance must be positive")


def _resolve_tol(args) -> float:
    if getattr(args, "tol", None) is not None:
        return float(args.tol)
    env = os.environ.get(ENV_TOL)
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise ValueError(f"bad {ENV_TOL} value {env!r}") from exc
    return DEFAULT_TOL


def _config(args) -> RunConfig:
    return RunConfig(
        tol=_resolve_tol(args),
        seed=int(getattr(args, "seed", 0) or 0),
        theta_mode=getattr(args, "theta_mode", "auto") or "auto",
        norm_mode=getattr(args, "norm_mode", COMPLEX_OP) or COMPLEX_OP,
        output_path=getattr(args, "output", None),
    )


def _emit(doc: dict, args) -> None:
    text = canonical_dumps(doc)
    sys.stdout.write(text)
    out = getattr(args, "output", None)
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)


def _theta_scale(cfg: RunConfig) -> ThetaScale | None:
    if cfg.theta_mode == "auto":
        return None
    return ThetaScale.parse(cfg.theta_mode)


# -- handlers -----------------------------------------------------------------


def _cmd_complexify(args) -> int:
    phi = map_from_json(load_json(args.map), "map")
    if phi.linearity != REAL:
        raise SchemaError("map.linearity", "complexify expects a real-linear map")
    if args.phi:
        anti = anti_from_json(load_json(args.phi))
    else:
        anti = AntiAutomorphism.transpose(phi.dom_dim)
    restricted = restrict_to_real_form(phi, anti)
    phic = complexify(restricted, anti)
    _emit({"map": map_to_json(phic), "provenance": _prov(_config(args))}, args)
    return 0


def _cmd_realform(args) -> int:
    cfg = _config(args)
    doc = load_json(args.phi)
    anti = anti_from_json(doc, validate=False)
    report = check_antiautomorphism(anti, samples=args.samples, seed=cfg.seed,
                                    tol=cfg.tol)
    out = {"check": report.to_json(), "provenance": _prov(cfg)}
    if args.matrix:
        x = matrix_from_json(load_json(args.matrix), "matrix").array
        r, s = real_decompose(anti, x)
        out["decomposition"] = {
            "phi_x": matrix_to_json(apply_phi(anti, x)),
            "r": matrix_to_json(r),
            "s": matrix_to_json(s),
            "recombine_residual": float(op_norm(x - (r + 1j * s))),
            "real_form_residual": float(real_form_residual(anti, x)),
        }
    _emit(out, args)
    return 0 if report.ok else 1


def _cmd_choi(args) -> int:
    phi = map_from_json(load_json(args.map), "map")
    cm = choi(phi).value
    sym = (cm + cm.conj().T) / 2.0
    _emit({
        "choi": matrix_to_json(cm),
        "hermitian_defect": float(hermitian_defect(cm)),
        "min_eigenvalue": float(np.linalg.eigvalsh(sym)[0]),
        "trace": [float(np.trace(cm).real), float(np.trace(cm).imag)],
    }, args)
    return 0


def _cmd_cp_check(args) -> int:
    cfg = _config(args)
    phi = map_from_json(load_json(args.map), "map")
    if phi.linearity == COMPLEX:
        defect = cp_defect(phi)
        ok = defect >= -cfg.tol
        _emit({"linearity": COMPLEX, "defect": float(defect),
               "completely_positive": bool(ok),
               "provenance": _prov(cfg)}, args)
        return 0 if ok else 1
    rep = cp_defect_real_report(phi, level=args.level, samples=args.samples,
                                seed=cfg.seed)
    ok = rep.defect >= -cfg.tol and rep.selfadj_defect <= cfg.tol
    doc = {
        "linearity": REAL,
        "level": rep.level,
        "defect": float(rep.defect),
        "selfadjointness_defect": float(rep.selfadj_defect),
        "completely_positive": bool(ok),
        "provenance": _prov(cfg, samples=rep.samples),
    }
    if rep.defect < -cfg.tol and rep.witness is not None:
        doc["witness"] = matrix_to_json(rep.witness)
    if rep.selfadj_defect > cfg.tol and rep.selfadj_witness is not None:
        doc["selfadjointness_witness"] = matrix_to_json(rep.selfadj_witness)
    _emit(doc, args)
    return 0 if ok else 1


def _cmd_transport(args) -> int:
    cfg = _config(args)
    phi = map_from_json(load_json(args.phi_map), "phi_map")
    psi = map_from_json(load_json(args.psi_map), "psi_map")
    phi_p, psi_p = transport_factorization(phi, psi)
    before = compose(psi, phi)
    after = compose(psi_p, phi_p)
    resid = max(op_norm(after.apply(b) - before.apply(b))
                for b in doubled_units(phi.dom_dim))
    _emit({
        "phi_prime": map_to_json(phi_p),
        "psi_prime": map_to_json(psi_p),
        "composition_residual": float(resid),
        "provenance": _prov(cfg),
    }, args)
    return 0 if resid <= cfg.tol else 1


def _cmd_qd_verify(args) -> int:
    cert = cert_from_json(load_json(args.cert))
    report = qd_verify(cert)
    _emit({"report": report.to_json()}, args)
    return 0 if report.passed else 1


def _cmd_qd_transport(args) -> int:
    cfg = _config(args)
    cert = cert_from_json(load_json(args.cert))
    if args.direction == "complexify":
        new_cert, report = qd_complexify(cert)
        ok = report.passed and report.extra.get("bounds_hold", False)
    else:
        anti = None
        if args.phi:
            anti = anti_from_json(load_json(args.phi))
        new_cert, report = qd_realify(cert, anti=anti, scale=_theta_scale(cfg))
        if report.extra.get("theta_mode") == "paper":
            ok = report.passed
        else:
            ok = report.passed and report.extra.get("bounds_hold", False)
    doc = {"report": report.to_json(), "provenance": _prov(cfg)}
    doc["certificate"] = cert_to_json(new_cert) if new_cert is not None else None
    _emit(doc, args)
    return 0 if ok else 1


def _cmd_trace_audit(args) -> int:
    cfg = _config(args)
    cert = cert_from_json(load_json(args.cert))
    witness = trace_from_json(load_json(args.trace))
    report = trace_qd_verify(cert, witness)
    doc = {"verify": report.to_json(), "provenance": _prov(cfg)}
    if args.phi:
        anti = anti_from_json(load_json(args.phi))
        chain_cert = cert if cert.phi.linearity == COMPLEX else None
        _, transport_report = trace_transport(
            witness, anti, scale=args.scale, cert=chain_cert,
            theta_scale=_theta_scale(cfg), seed=cfg.seed)
        doc["transport"] = transport_report
    _emit(doc, args)
    return 0 if report.passed else 1


def _cmd_nuclear_verify(args) -> int:
    cfg = _config(args)
    phi = map_from_json(load_json(args.phi_map), "phi_map")
    psi = map_from_json(load_json(args.psi_map), "psi_map")
    elements = subset_from_json(load_json(args.set), "F")
    subset = FiniteSubset(tuple(elements))
    target = None
    if args.target:
        target = map_from_json(load_json(args.target), "target")
    b_list = None
    if args.b_list:
        b_list = [m for m in subset_from_json(load_json(args.b_list), "b_list")]
    report = nuclear_witness_verify(phi, psi, subset, epsilon=args.epsilon,
                                    target=target, norm_mode=cfg.norm_mode,
                                    b_list=b_list)
    _emit({"report": report.to_json(), "provenance": _prov(cfg)}, args)
    return 0 if report.passed else 1


def _cmd_fubini(args) -> int:
    algebra = algebra_from_json(load_json(args.algebra))
    anti = anti_from_json(load_json(args.phi)) if args.phi \
        else AntiAutomorphism.transpose(algebra.n)
    pres = ideal_from_json(load_json(args.ideal))
    check = fubini_check(algebra, anti, pres)
    _emit({"fubini": check.to_json()}, args)
    return 0 if check.match else 1


def _cmd_exactness(args) -> int:
    algebra = algebra_from_json(load_json(args.algebra))
    anti = anti_from_json(load_json(args.phi)) if args.phi \
        else AntiAutomorphism.transpose(algebra.n)
    pres = ideal_from_json(load_json(args.ideal))
    report = exactness_check(algebra, anti, pres)
    _emit({"report": report.to_json()}, args)
    return 0 if report.ok else 1


def _cmd_lemma_audit(args) -> int:
    cfg = _config(args)
    report = lemma_audit(args.claim, samples=args.samples, seed=cfg.seed)
    _emit({"report": report.to_json(), "provenance": _prov(cfg)}, args)
    return 0 if report.holds else 1


def _prov(cfg: RunConfig, **extra) -> dict:
    doc = {"tool": "starlift", "version": __version__, "seed": cfg.seed,
           "tol": cfg.tol}
    doc.update(extra)
    return doc


# -- parser -------------------------------------------------------------------


def _add_common(sp, seed: bool = True) -> None:
    sp.add_argument("--tol", type=float, default=None,
                    help=f"tolerance (default: ${ENV_TOL} or {DEFAULT_TOL})")
    sp.add_argument("--output", help="also write the JSON report to this file")
    if seed:
        sp.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starlift",
        description="verify real-form transport, CP certificates, and tensor "
                    "exactness on finite-dimensional matrix algebras",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complexify", help="complexify a real-linear map on a real form")
    p.add_argument("--map", required=True)
    p.add_argument("--phi", help="antiautomorphism JSON (default: transpose)")
    _add_common(p, seed=False)
    p.set_defaults(handler=_cmd_complexify)

    p = sub.add_parser("realform", help="check an antiautomorphism and decompose a matrix")
    p.add_argument("--phi", required=True)
    p.add_argument("--matrix")
    p.add_argument("--samples", type=int, default=50)
    _add_common(p)
    p.set_defaults(handler=_cmd_realform)

    p = sub.add_parser("choi", help="emit the Choi matrix of a complex-linear map")
    p.add_argument("--map", required=True)
    _add_common(p, seed=False)
    p.set_defaults(handler=_cmd_choi)

    p = sub.add_parser("cp-check", help="complete-positivity defect of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--level", type=int, default=2,
                   help="amplification level for real-linear maps")
    p.add_argument("--samples", type=int, default=20)
    _add_common(p)
    p.set_defaults(handler=_cmd_cp_check)

    p = sub.add_parser("transport", help="rewrite a factorization through real matrices")
    p.add_argument("--phi-map", required=True)
    p.add_argument("--psi-map", required=True)
    _add_common(p, seed=False)
    p.set_defaults(handler=_cmd_transport)

    p = sub.add_parser("qd-verify", help="verify a quasidiagonality certificate")
    p.add_argument("--cert", required=True)
    _add_common(p, seed=False)
    p.set_defaults(handler=_cmd_qd_verify)

    p = sub.add_parser("qd-transport", help="transport a certificate across the real form")
    p.add_argument("--cert", required=True)
    p.add_argument("--direction", choices=("complexify", "realify"), required=True)
    p.add_argument("--phi", help="antiautomorphism JSON (default: certificate's)")
    p.add_argument("--theta-mode", default="auto",
                   help="paper | fixed:<value> | auto (per-certificate constant)")
    _add_common(p, seed=False)
    p.set_defaults(handler=_cmd_qd_transport)

    p = sub.add_parser("trace-audit", help="quasidiagonal-trace defects and transport chain")
    p.add_argument("--cert", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--phi", help="antiautomorphism JSON enabling the transport replay")
    p.add_argument("--scale", type=float, default=0.5)
    p.add_argument("--theta-mode", default="auto")
    _add_common(p)
    p.set_defaults(handler=_cmd_trace_audit)

    p = sub.add_parser("nuclear-verify", help="check a factorization against a target map")
    p.add_argument("--phi-map", required=True)
    p.add_argument("--psi-map", required=True)
    p.add_argument("--set", required=True, help="JSON list of matrices")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--target", help="target map JSON (default: identity)")
    p.add_argument("--b-list", help="JSON list of compression witnesses")
    p.add_argument("--norm-mode", choices=NORM_MODES, default=COMPLEX_OP)
    _add_common(p, seed=False)
    p.set_defaults(handler=_cmd_nuclear_verify)

    p = sub.add_parser("fubini", help="compare the Fubini product with the ideal span")
    p.add_argument("--algebra", required=True)
    p.add_argument("--ideal", required=True)
    p.add_argument("--phi", help="antiautomorphism JSON (default: transpose)")
    _add_common(p, seed=False)
    p.set_defaults(handler=_cmd_fubini)

    p = sub.add_parser("exactness", help="kernel identities for a quotient sequence")
    p.add_argument("--algebra", required=True)
    p.add_argument("--ideal", required=True)
    p.add_argument("--phi", help="antiautomorphism JSON (default: transpose)")
    _add_common(p, seed=False)
    p.set_defaults(handler=_cmd_exactness)

    p = sub.add_parser("lemma-audit", help="audit a documented claim on seeded samples")
    p.add_argument("--claim", required=True)
    p.add_argument("--samples", type=int, default=50)
    _add_common(p)
    p.set_defaults(handler=_cmd_lemma_audit)

    return parser


def cmd_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else (0 if code is None else 2)
    try:
        return args.handler(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cmd_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
