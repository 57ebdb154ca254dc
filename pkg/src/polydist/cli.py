"""Command line front end: problem files in, JSON reports and CSV sweeps out.

Problem files are JSON objects with "size", "degree", "coefficients"
(matrices of [re, im] entry pairs in ascending degree order) and an
optional "weights" field holding an explicit list, "coefficient-norms"
or "ones".  Reports are JSON with all floats written at 17 significant
digits so that reloading reproduces the stored numbers exactly.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from . import distance as dist
from . import perturbation as pert
from .errors import (
    ConstructionError,
    ConvergenceFailure,
    DegenerateTargets,
    PolyDistError,
    SingularLeadingCoefficient,
)
from .matpoly import MatrixPolynomial, WeightSet, check_targets

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_NUMERICAL = 4
EXIT_INFEASIBLE = 5

_COMPLEX_CHARS = set("0123456789.eE+-i")


class ProblemFormatError(Exception):
    """Input file or literal cannot be parsed into a valid problem."""


def parse_complex(text):
    """Parse a complex literal like 2+1i, -1, 0.5i, 2-i or i.

    Real part optional, imaginary part optional with an i suffix and an
    optional unit coefficient; exponents allowed; whitespace forbidden.
    """
    if not isinstance(text, str) or not text or not set(text) <= _COMPLEX_CHARS:
        raise ProblemFormatError(f"invalid complex literal {text!r}")
    try:
        if text.endswith("i"):
            body = text[:-1]
            re_part, im_part = "", body
            for k in range(len(body) - 1, 0, -1):
                if body[k] in "+-" and body[k - 1] not in "eE":
                    re_part, im_part = body[:k], body[k:]
                    break
            re_val = float(re_part) if re_part else 0.0
            if im_part in ("", "+"):
                im_val = 1.0
            elif im_part == "-":
                im_val = -1.0
            else:
                im_val = float(im_part)
            value = complex(re_val, im_val)
        else:
            value = complex(float(text), 0.0)
    except ValueError as exc:
        raise ProblemFormatError(f"invalid complex literal {text!r}") from exc
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise ProblemFormatError(f"non-finite complex literal {text!r}")
    return value


def _entry_to_complex(entry):
    if isinstance(entry, (int, float)):
        return complex(entry)
    if (
        isinstance(entry, (list, tuple))
        and len(entry) == 2
        and all(isinstance(x, (int, float)) for x in entry)
    ):
        return complex(entry[0], entry[1])
    raise ProblemFormatError(f"matrix entry {entry!r} is not a number or [re, im]")


def _matrix_from_json(rows, n):
    if not isinstance(rows, list) or len(rows) != n:
        raise ProblemFormatError("coefficient matrix has wrong row count")
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ProblemFormatError("coefficient matrix has wrong column count")
        for j, entry in enumerate(row):
            out[i, j] = _entry_to_complex(entry)
    return out


def _pair(z):
    return [float(np.real(z)), float(np.imag(z))]


def _matrix_to_json(M):
    return [[_pair(z) for z in row] for row in np.asarray(M)]


def _vector_to_json(v):
    return [_pair(z) for z in np.asarray(v)]


def load_problem(path, check_leading=True):
    """Read a problem file; returns (polynomial, weight spec or None)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemFormatError(f"cannot read problem file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProblemFormatError("problem file must hold a JSON object")
    try:
        n = int(doc["size"])
        m = int(doc["degree"])
        raw_coeffs = doc["coefficients"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemFormatError(f"missing or invalid problem fields: {exc}") from exc
    if not isinstance(raw_coeffs, list) or len(raw_coeffs) != m + 1:
        raise ProblemFormatError("coefficients must list degree+1 matrices")
    mats = [_matrix_from_json(rows, n) for rows in raw_coeffs]
    try:
        poly = MatrixPolynomial(mats, check_leading=check_leading)
    except PolyDistError as exc:
        raise ProblemFormatError(f"invalid polynomial: {exc}") from exc
    except ValueError as exc:
        raise ProblemFormatError(f"invalid polynomial: {exc}") from exc
    return poly, doc.get("weights")


def resolve_weights(poly, file_spec, flag_spec):
    """Weight selection: the --weights flag wins over the file field.

    Accepted forms: "coefficient-norms" (default), "ones", or an explicit
    comma-separated / JSON list of nonnegative numbers.
    """
    spec = flag_spec if flag_spec is not None else file_spec
    if spec is None:
        spec = "coefficient-norms"
    if isinstance(spec, str):
        if spec == "coefficient-norms":
            return WeightSet.coefficient_norms(poly)
        if spec == "ones":
            return WeightSet.ones(poly.degree)
        try:
            values = [float(tok) for tok in spec.split(",")]
        except ValueError as exc:
            raise ProblemFormatError(f"invalid weights {spec!r}") from exc
    elif isinstance(spec, list):
        values = spec
    else:
        raise ProblemFormatError(f"invalid weights {spec!r}")
    try:
        w = WeightSet(values)
    except (PolyDistError, ValueError) as exc:
        raise ProblemFormatError(f"invalid weights: {exc}") from exc
    if not w.matches(poly):
        raise ProblemFormatError(
            f"{len(values)} weights for a degree-{poly.degree} polynomial"
        )
    return w


def _fmt(value):
    """One JSON token at full round-trip precision."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return json.dumps(value)


def _json_text(value, indent=0):
    pad, pad_in = " " * indent, " " * (indent + 2)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = (
            f"{pad_in}{json.dumps(k)}: {_json_text(v, indent + 2)}"
            for k, v in value.items()
        )
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        seq = list(value)
        if not seq:
            return "[]"
        flat = all(not isinstance(x, (dict, list, tuple)) for x in seq)
        if flat:
            return "[" + ", ".join(_fmt(x) for x in seq) + "]"
        items = (f"{pad_in}{_json_text(x, indent + 2)}" for x in seq)
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _fmt(value)


def write_json(doc, out_path):
    text = _json_text(doc) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_report(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def poly_from_report(doc):
    """Rebuild the perturbed polynomial from a stored report."""
    mats = [_matrix_from_json(rows, int(doc["size"])) for rows in doc["q_coeffs"]]
    return MatrixPolynomial(mats, check_leading=False)


def _result_report(result, weights, mu1, mu2, elapsed, full):
    doc = {
        "tool": "polydist",
        "version": __version__,
        "size": result.q.n,
        "degree": result.q.degree,
        "mu1": _pair(mu1),
        "mu2": _pair(mu2),
        "weights": [float(w) for w in weights.weights],
        "branch": result.branch,
        "gamma_star": result.gamma_star,
        "s_star": result.s_star,
        "gamma_used": result.gamma_used,
        "beta_low": result.beta_low,
        "beta_up": result.beta_up,
    }
    if full:
        diag = result.pair_diagnostics
        doc.update(
            {
                "delta_coeffs": [_matrix_to_json(D) for D in result.delta_coeffs],
                "q_coeffs": [_matrix_to_json(A) for A in result.q.coeffs],
                "eigvec_mu1": _vector_to_json(result.eigvec_mu1),
                "eigvec_mu2": _vector_to_json(result.eigvec_mu2),
                "residual_mu1": result.residual_mu1,
                "residual_mu2": result.residual_mu2,
                "pair_diagnostics": None
                if diag is None
                else {
                    "coupling": diag.coupling,
                    "cross_gram": diag.cross_gram,
                    "gram_gap": diag.gram_gap,
                    "hat_gram_gap": diag.hat_gram_gap,
                    "scale": diag.scale,
                },
            }
        )
    doc["elapsed_seconds"] = elapsed
    return doc


def _partial_report(poly, weights, mu1, mu2, error, elapsed):
    """Bounds that survive a failed construction: profile plus beta_low."""
    profile = dist.profile_gamma(poly, mu1, mu2)
    gamma = profile.gamma_star
    return {
        "tool": "polydist",
        "version": __version__,
        "size": poly.n,
        "degree": poly.degree,
        "mu1": _pair(mu1),
        "mu2": _pair(mu2),
        "weights": [float(w) for w in weights.weights],
        "branch": pert.BRANCH_ZERO if profile.at_boundary else pert.BRANCH_POSITIVE,
        "gamma_star": profile.gamma_star,
        "s_star": profile.s_star,
        "beta_low": pert.lower_bound(poly, weights, mu1, mu2, gamma),
        "beta_up": None,
        "error": str(error),
        "elapsed_seconds": elapsed,
    }


def _summary(doc, digits, stream):
    d = max(int(digits), 1)
    lines = [
        f"branch      {doc['branch']}",
        f"gamma_star  {doc['gamma_star']:.{d}f}",
        f"s_star      {doc['s_star']:.{d}f}",
        f"beta_low    {doc['beta_low']:.{d}f}",
    ]
    if doc.get("beta_up") is not None:
        lines.append(f"beta_up     {doc['beta_up']:.{d}f}")
    if "error" in doc:
        lines.append(f"error       {doc['error']}")
    print("\n".join(lines), file=stream)


def _load_inputs(args, check_leading=True):
    poly, file_weights = load_problem(args.problem, check_leading=check_leading)
    weights = resolve_weights(poly, file_weights, args.weights)
    mu1 = parse_complex(args.mu1)
    mu2 = parse_complex(args.mu2)
    check_targets(mu1, mu2)
    return poly, weights, mu1, mu2


def cmd_bounds(args):
    poly, weights, mu1, mu2 = _load_inputs(args)
    started = time.perf_counter()
    try:
        result = pert.distance_bounds(
            poly, weights, mu1, mu2,
            gamma_max=args.gamma_max, grid_points=args.samples,
        )
        doc = _result_report(
            result, weights, mu1, mu2, time.perf_counter() - started, full=False
        )
        code = EXIT_OK
    except ConstructionError as exc:
        doc = _partial_report(
            poly, weights, mu1, mu2, exc, time.perf_counter() - started
        )
        code = EXIT_NUMERICAL
    write_json(doc, args.out)
    if args.out:
        _summary(doc, args.digits, sys.stdout)
    return code


def cmd_perturb(args):
    poly, weights, mu1, mu2 = _load_inputs(args)
    started = time.perf_counter()
    try:
        result = pert.distance_bounds(
            poly, weights, mu1, mu2,
            gamma_max=args.gamma_max, grid_points=args.samples,
            optimize_gamma=args.optimize_gamma,
        )
        doc = _result_report(
            result, weights, mu1, mu2, time.perf_counter() - started, full=True
        )
        code = EXIT_OK
    except ConstructionError as exc:
        doc = _partial_report(
            poly, weights, mu1, mu2, exc, time.perf_counter() - started
        )
        code = EXIT_INFEASIBLE
    write_json(doc, args.out)
    if args.out:
        _summary(doc, args.digits, sys.stdout)
    return code


def cmd_sweep(args):
    poly, weights, mu1, mu2 = _load_inputs(args)
    if args.gamma_min < 0 or args.gamma_max <= args.gamma_min:
        raise ProblemFormatError("need 0 <= gamma-min < gamma-max")
    if args.samples < 2:
        raise ProblemFormatError("need at least 2 samples")
    rows = []
    for g in np.linspace(args.gamma_min, args.gamma_max, args.samples):
        g = float(g)
        if g > 0:
            try:
                gb = pert.bounds_at(poly, weights, mu1, mu2, g)
                rows.append((g, gb.s_value, gb.beta_low, gb.beta_up))
                continue
            except (ConstructionError, ValueError):
                pass
        cm = dist.coupled_matrix(poly, mu1, mu2, g)
        s_val = float(np.linalg.svd(cm.matrix, compute_uv=False)[-2])
        rows.append((g, s_val, pert.lower_bound(poly, weights, mu1, mu2, g), None))

    lines = ["gamma,s_penultimate,beta_low,beta_up"]
    for g, s_val, blow, bup in rows:
        tail = "" if bup is None else f"{bup:.17g}"
        lines.append(f"{g:.17g},{s_val:.17g},{blow:.17g},{tail}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args):
    try:
        with open(args.qfile, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemFormatError(f"cannot read {args.qfile}: {exc}") from exc
    if isinstance(doc, dict) and "q_coeffs" in doc:
        poly = poly_from_report(doc)
    else:
        poly, _ = load_problem(args.qfile, check_leading=False)
    mu1 = parse_complex(args.mu1)
    mu2 = parse_complex(args.mu2)
    eigs = poly.eigenvalues()
    d1 = float(np.min(np.abs(eigs - mu1)))
    d2 = float(np.min(np.abs(eigs - mu2)))
    digits = max(int(args.digits), 1)
    ok1 = d1 <= 1e-6 * max(1.0, abs(mu1))
    ok2 = d2 <= 1e-6 * max(1.0, abs(mu2))
    print(f"nearest eigenvalue distance to mu1: {d1:.{digits}e}")
    print(f"nearest eigenvalue distance to mu2: {d2:.{digits}e}")
    print("verification " + ("PASSED" if ok1 and ok2 else "FAILED"))
    return EXIT_OK if ok1 and ok2 else EXIT_VERIFY_FAILED


def _add_common(sp, gamma_max_required=False):
    sp.add_argument("problem", help="path to the problem JSON file")
    sp.add_argument("--mu1", required=True, help="first target, e.g. 2+1i")
    sp.add_argument("--mu2", required=True, help="second target, e.g. -1")
    sp.add_argument(
        "--weights",
        default=None,
        help="coefficient-norms | ones | comma-separated list "
        "(default: file field, else coefficient-norms)",
    )
    sp.add_argument(
        "--gamma-max",
        type=float,
        default=None,
        required=gamma_max_required,
        help="cap for the coupling-parameter search",
    )
    sp.add_argument(
        "--samples", type=int, default=200, help="profile grid points"
    )
    sp.add_argument("--digits", type=int, default=4, help="display precision")
    sp.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="polydist",
        description="Spectral-norm distance bounds from a matrix polynomial "
        "to matrix polynomials with two prescribed eigenvalues, with an "
        "explicit perturbation attaining the upper bound.",
    )
    parser.add_argument(
        "--version", action="version", version=f"polydist {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bounds", help="distance interval only")
    _add_common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("perturb", help="full perturbation report")
    _add_common(sp)
    sp.add_argument(
        "--optimize-gamma",
        action="store_true",
        help="build at the gap-minimizing gamma instead of the profile maximizer",
    )
    sp.set_defaults(func=cmd_perturb)

    sp = sub.add_parser("sweep", help="CSV of s, beta_low, beta_up over gamma")
    _add_common(sp, gamma_max_required=True)
    sp.add_argument(
        "--gamma-min", type=float, default=0.0, help="left end of the sweep"
    )
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="check Q has both targets as eigenvalues")
    sp.add_argument("qfile", help="problem file or report holding Q")
    sp.add_argument("--mu1", required=True)
    sp.add_argument("--mu2", required=True)
    sp.add_argument("--digits", type=int, default=4)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateTargets as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConvergenceFailure, SingularLeadingCoefficient) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except np.linalg.LinAlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
