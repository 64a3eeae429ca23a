"""Command-line interface.

Exit codes: 0 non-entangled (or success), 1 entangled (or failed sweep
invariant), 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import oracle
from .decomposition import DecompositionKind, decompose, reconstruction_residual
from .entanglement import DEFAULT_RESTARTS, classify
from .errors import IdentEntError, ParseError
from .state import (
    Symmetry,
    antisymmetrize_product,
    basis_vector,
    dumps,
    load_state,
    save_state,
    schmidt_form,
    slater_form,
    symmetrize_product,
)

EXIT_NON_ENTANGLED = 0
EXIT_ENTANGLED = 1
EXIT_ERROR = 2

KINDS = (
    "antisym-product",
    "sym-product",
    "same-product",
    "random-fermion",
    "random-boson",
    "slater-form",
    "schmidt-form",
)


def _rank_label(symmetry):
    return "Slater number" if symmetry is Symmetry.FERMION else "Schmidt number"


def _coefficient_list(values):
    return [float(x) for x in values]


def classification_payload(c):
    return {
        "verdict": c.verdict.value,
        "entangled": c.entangled,
        "symmetry": c.symmetry.value,
        "dim": c.decomposition.dim,
        "rank_kind": "slater" if c.symmetry is Symmetry.FERMION else "schmidt",
        "rank": c.rank_count,
        "entropy": c.entropy,
        "coefficients": _coefficient_list(c.decomposition.coefficients),
        "near_threshold": c.near_threshold,
        "witness": None if c.witness is None else c.witness.to_dict(),
    }


def cmd_classify(args, out):
    state = load_state(args.path)
    c = classify(state, witness=args.witness, seed=args.seed, restarts=args.restarts)
    if args.json:
        print(dumps(classification_payload(c)), file=out)
    else:
        label = "entangled" if c.entangled else "non-entangled"
        print(f"{label} ({_rank_label(c.symmetry)} {c.rank_count}, S={c.entropy:.6f})",
              file=out)
        print(f"verdict: {c.verdict.value}", file=out)
        if c.near_threshold:
            print("warning: a coefficient lies near the rank threshold", file=out)
        if c.witness is not None:
            w = c.witness
            vec = " ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in w.vector)
            print(f"witness: <E_P>={w.expectation:.10f} v=[{vec}]", file=out)
    return EXIT_ENTANGLED if c.entangled else EXIT_NON_ENTANGLED


def cmd_decompose(args, out):
    state = load_state(args.path)
    result = decompose(state)
    residual = reconstruction_residual(state, result)
    if args.json:
        payload = {
            "kind": result.kind.value,
            "symmetry": state.symmetry.value,
            "dim": state.dim,
            "coefficients": _coefficient_list(result.coefficients),
            "effective_rank": result.effective_rank,
            "near_threshold": result.near_threshold,
            "residual": residual,
            "modes": [[[float(z.real), float(z.imag)] for z in row]
                      for row in result.modes],
        }
        print(dumps(payload), file=out)
    else:
        name = {
            DecompositionKind.SLATER: "Slater",
            DecompositionKind.SCHMIDT_BOSON: "bosonic Schmidt",
            DecompositionKind.SCHMIDT_DISTINGUISHABLE: "Schmidt",
        }[result.kind]
        coeffs = ", ".join(f"{x:.8f}" for x in result.coefficients)
        print(f"{name} coefficients: [{coeffs}]", file=out)
        print(f"{_rank_label(state.symmetry)}: {result.effective_rank}", file=out)
        print(f"reconstruction residual: {residual:.3e}", file=out)
    return 0


def _read_vectors(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    vectors = []
    for key in ("phi", "chi"):
        if key not in data:
            continue
        try:
            vectors.append(np.array([complex(re, im) for re, im in data[key]]))
        except (TypeError, ValueError):
            raise ParseError("expected a list of [re, im] pairs", key) from None
    return vectors


def _parse_floats(text):
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ValueError(f"cannot parse coefficient list {text!r}") from None


def build_state(args):
    kind, dim = args.kind, args.dim
    if kind in ("random-fermion", "random-boson"):
        if dim is None:
            raise ValueError(f"--dim is required for {kind}")
        symmetry = Symmetry.FERMION if kind == "random-fermion" else Symmetry.BOSON
        return oracle.random_state(symmetry, dim, args.seed)
    if kind in ("slater-form", "schmidt-form"):
        if args.coefficients is None:
            raise ValueError(f"--coefficients is required for {kind}")
        coeffs = _parse_floats(args.coefficients)
        make = slater_form if kind == "slater-form" else schmidt_form
        if dim is None:
            return make(coeffs)
        return make(coeffs, dim=dim)
    # product kinds
    if args.vectors is not None:
        vectors = _read_vectors(args.vectors)
    elif args.basis is not None:
        if dim is None:
            raise ValueError("--dim is required with --basis")
        vectors = [basis_vector(dim, i - 1) for i in args.basis]
    else:
        if dim is None:
            raise ValueError(f"--dim is required for {kind}")
        rng = oracle.make_rng(args.seed)
        vectors = [oracle.random_vector(rng, dim) for _ in range(2)]
    if kind == "same-product":
        return symmetrize_product(vectors[0], vectors[0])
    if len(vectors) < 2:
        raise ValueError(f"{kind} needs two vectors")
    phi, chi = vectors[:2]
    if kind == "antisym-product":
        return antisymmetrize_product(phi, chi)
    return symmetrize_product(phi, chi)


def cmd_generate(args, out):
    state = build_state(args)
    save_state(state, args.out)
    print(f"wrote {state.symmetry.value} state (dim {state.dim}) to {args.out}", file=out)
    return 0


def load_config(path):
    if path is None:
        return dict(oracle.DEFAULT_CONFIG)
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(data, dict):
        raise ParseError("config must be a JSON object")
    unknown = set(data) - set(oracle.DEFAULT_CONFIG)
    if unknown:
        raise ParseError(f"unknown config keys {sorted(unknown)}")
    return {**oracle.DEFAULT_CONFIG, **data}


def cmd_sweep(args, out):
    config = load_config(args.config)
    # build the whole corpus first so config errors surface before any output
    list(oracle.sweep_states(config))
    sink = open(args.out, "w") if args.out else out
    failed = 0
    try:
        for record in oracle.run_sweep(config):
            failed += bool(record["failures"])
            print(dumps(record), file=sink)
    finally:
        if args.out:
            sink.close()
    if failed:
        print(f"{failed} state(s) violated an invariant", file=sys.stderr)
        return 1
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="identent",
        description="Entanglement of pure two-particle states of identical fermions/bosons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="decide whether a state file is entangled")
    p.add_argument("path")
    p.add_argument("--witness", action="store_true", help="attach a witness certificate")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", help="print the Slater/Schmidt decomposition")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("generate", help="write a state file")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--dim", type=int)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--seed", type=int, default=0)
    src.add_argument("--vectors", help="JSON file with 'phi' and 'chi' as [re, im] lists")
    src.add_argument("--basis", type=int, nargs="+", metavar="I",
                     help="1-based basis indices for the product vectors")
    p.add_argument("--coefficients", help="comma separated list for slater-form/schmidt-form")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sweep", help="run the oracle property sweep, JSONL output")
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    try:
        return args.func(args, out)
    except (IdentEntError, ValueError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
