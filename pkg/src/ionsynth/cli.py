"""Command-line front end for compiling, verifying and counting circuits.

Subcommands: compile (lower one operator to a circuit file), verify (recheck
a circuit file against the generator recorded in its metadata), count / cost
(gate and duration reports), uccsd / trotter (application builders), and demo
(rebuild the bundled three-center-cation circuits and compare the computed MS
totals with the published reference numbers).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 input-format
error.  The IONSYNTH_TOL environment variable supplies the default tolerance
for verify and demo.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .circuit import CircuitError, ParseError, SchemaError, cost, count, deserialize, serialize
from .evolution import (
    AnsatzSpec,
    EvolutionError,
    TrotterConfig,
    build_trotter_step,
    build_uccsd_layer,
    fusion_groups,
    uccsd_excitations,
)
from .fermion import (
    FermionError,
    HamiltonianTerms,
    controlled_single,
    double,
    generator_pauli,
    higher_excitation,
    local_pauli,
    single,
)
from .integrals import IntegralError, h3plus_builtin, parse_integrals, term_list
from .pauli import PauliError, from_label
from .synth import (
    SynthesisError,
    compile_controlled_single,
    compile_coupled_exchange,
    compile_double_block,
    compile_higher_excitation,
    compile_mixed_cnot,
    compile_pauli_rotation,
    compile_single_excitation,
    compile_symmetrized,
)
from .verify import VerifyError, circuit_unitary, dense_sum, generator_unitary

# Published totals the demos reproduce for the bundled three-center cation.
REFERENCE_COUNTS = {
    "uccsd": 24,
    "uccsd_baseline": 80,
    "trotter": 26,
    "trotter_string_by_string": 56,
    "trotter_naive": 176,
}

DEMO_PARAMETERS = tuple(0.02 * (i + 1) for i in range(8))


class UsageError(Exception):
    """Bad flag combination or operand; exits 2."""


class InputError(Exception):
    """Unreadable or malformed input file; exits 3."""


def _ints(flag: str, text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated integers, got {text!r}")


def _floats(flag: str, text: str) -> tuple[float, ...]:
    if text == "":
        return ()
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated numbers, got {text!r}")


def _tolerance(args) -> float:
    if getattr(args, "tol", None) is not None:
        return args.tol
    raw = os.environ.get("IONSYNTH_TOL")
    if raw is None:
        return 1e-9
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"IONSYNTH_TOL: not a number: {raw!r}")


def _exact_exp(matrix: np.ndarray, angle: float) -> np.ndarray:
    evals, evecs = np.linalg.eigh(matrix)
    return (evecs * np.exp(-1j * angle * evals)) @ evecs.conj().T


def _increasing(flag: str, modes: tuple[int, ...], size: int) -> tuple[int, ...]:
    if len(modes) != size:
        raise UsageError(f"{flag}: expected {size} modes, got {len(modes)}")
    if list(modes) != sorted(set(modes)):
        raise UsageError(
            f"{flag}: modes must be strictly increasing, got {','.join(map(str, modes))}"
        )
    return modes


def _flag(value: bool) -> str:
    return "yes" if value else "no"


# --- compile ----------------------------------------------------------------------


def _build_circuit(args):
    op = args.op
    n = args.n_qubits
    theta = args.theta
    meta = {"cli_op": op, "symmetrized": _flag(args.symmetrized)}
    if op == "rotation":
        if args.string is None:
            raise UsageError("--string is required for --op rotation")
        p = from_label(args.string)
        c = compile_pauli_rotation(p, theta)
        meta.update({"string": args.string, "theta": repr(theta)})
    elif op == "single":
        p, q = _increasing("--orbitals", _orbitals(args), 2)
        term = single(p, q, symmetrized=args.symmetrized)
        if args.symmetrized:
            c = compile_symmetrized(term, theta, n_qubits=n)
        else:
            c = compile_single_excitation(term, theta, axis=args.axis, n_qubits=n)
        meta.update({"orbitals": f"{p},{q}", "theta": repr(theta), "axis": args.axis})
    elif op == "double":
        p, q, r, s = _increasing("--orbitals", _orbitals(args), 4)
        if args.symmetrized:
            c = compile_symmetrized(double(p, q, r, s, symmetrized=True), theta, n_qubits=n)
            meta.update({"orbitals": f"{p},{q},{r},{s}", "theta": repr(theta)})
        else:
            angles = _floats("--angles", args.angles) if args.angles else (theta, 0.0, 0.0)
            if len(angles) != 3:
                raise UsageError(f"--angles: expected three numbers, got {len(angles)}")
            c = compile_double_block(p, q, r, s, angles, n_qubits=n)
            meta.update(
                {
                    "orbitals": f"{p},{q},{r},{s}",
                    "angles": ",".join(repr(a) for a in angles),
                }
            )
    elif op == "coupled":
        p, q, r, s = _increasing("--orbitals", _orbitals(args), 4)
        c = compile_coupled_exchange(p, q, r, s, theta, n_qubits=n)
        meta.update({"orbitals": f"{p},{q},{r},{s}", "theta": repr(theta)})
    elif op == "controlled":
        p, q = _increasing("--orbitals", _orbitals(args), 2)
        if args.control is None:
            raise UsageError("--control is required for --op controlled")
        if args.symmetrized:
            term = controlled_single(p, q, args.control, symmetrized=True)
            c = compile_symmetrized(term, theta, n_qubits=n)
        else:
            c = compile_controlled_single(p, q, args.control, theta, variant=args.variant, n_qubits=n)
        meta.update(
            {
                "orbitals": f"{p},{q}",
                "control": str(args.control),
                "theta": repr(theta),
                "variant": args.variant,
            }
        )
    elif op == "higher":
        if not args.sub or not args.sup:
            raise UsageError("--sub and --sup are required for --op higher")
        sub = _ints("--sub", args.sub)
        sup = _ints("--sup", args.sup)
        term = higher_excitation(sub, sup, symmetrized=args.symmetrized)
        if args.symmetrized:
            c = compile_symmetrized(term, theta, n_qubits=n)
        else:
            c = compile_higher_excitation(term, theta, n_qubits=n)
        meta.update({"sub": args.sub, "sup": args.sup, "theta": repr(theta)})
    elif op == "mixed":
        p, q, r, s = _increasing("--orbitals", _orbitals(args), 4)
        c = compile_mixed_cnot(double(p, q, r, s), theta, n_qubits=n)
        meta.update({"orbitals": f"{p},{q},{r},{s}", "theta": repr(theta)})
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown op {op!r}")
    merged = dict(c.metadata)
    merged.update(meta)
    return type(c)(c.n_qubits, c.gates, merged)


def _orbitals(args) -> tuple[int, ...]:
    if not args.orbitals:
        raise UsageError("--orbitals is required for this op")
    return _ints("--orbitals", args.orbitals)


def _cmd_compile(args) -> int:
    c = _build_circuit(args)
    text = serialize(c)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.output} ({c.n_qubits} qubits, {len(c.gates)} gates)")
    else:
        sys.stdout.write(text)
    return 0


# --- verify -----------------------------------------------------------------------


def _read_circuit(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}")
    try:
        return deserialize(text)
    except (ParseError, SchemaError) as exc:
        raise InputError(f"{path}: {exc}")


def _meta(c, key: str) -> str:
    try:
        return c.metadata[key]
    except KeyError:
        raise InputError(f"circuit metadata lacks {key!r}; was it written by compile?")


def _meta_floats(c, key: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in _meta(c, key).split(","))
    except ValueError:
        raise InputError(f"circuit metadata {key!r} is not a number list")


def _meta_ints(c, key: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in _meta(c, key).split(","))
    except ValueError:
        raise InputError(f"circuit metadata {key!r} is not an integer list")


def _declared_unitary(c) -> np.ndarray:
    """Rebuild the generator exponential recorded in compile metadata."""
    op = _meta(c, "cli_op")
    n = c.n_qubits
    sym = c.metadata.get("symmetrized") == "yes"
    if op == "rotation":
        target = from_label(_meta(c, "string"))
        if target.width != n:
            raise InputError(
                f"metadata string width {target.width} does not match circuit width {n}"
            )
        theta = _meta_floats(c, "theta")[0]
        return generator_unitary(target, theta / 2.0).matrix
    if op == "single":
        p, q = _meta_ints(c, "orbitals")
        theta = _meta_floats(c, "theta")[0]
        g = generator_pauli(single(p, q, symmetrized=sym), n)
        return generator_unitary(g, theta).matrix
    if op == "double":
        modes = _meta_ints(c, "orbitals")
        if sym:
            theta = _meta_floats(c, "theta")[0]
            g = generator_pauli(double(*modes, symmetrized=True), n)
            return generator_unitary(g, theta).matrix
        angles = _meta_floats(c, "angles")
        p, q, r, s = modes
        u = np.eye(1 << n, dtype=complex)
        for t, a in zip((double(p, q, r, s), double(p, r, q, s), double(p, s, q, r)), angles):
            u = generator_unitary(generator_pauli(t, n), a).matrix @ u
        return u
    if op == "coupled":
        p, q, r, s = _meta_ints(c, "orbitals")
        theta = _meta_floats(c, "theta")[0]
        u = generator_unitary(generator_pauli(double(p, q, r, s), n), theta).matrix
        return generator_unitary(generator_pauli(double(p, s, r, q), n), theta).matrix @ u
    if op == "controlled":
        p, q = _meta_ints(c, "orbitals")
        j = _meta_ints(c, "control")[0]
        theta = _meta_floats(c, "theta")[0]
        g = generator_pauli(controlled_single(p, q, j, symmetrized=sym), n)
        return generator_unitary(g, theta).matrix
    if op == "higher":
        sub = _meta_ints(c, "sub")
        sup = _meta_ints(c, "sup")
        theta = _meta_floats(c, "theta")[0]
        g = generator_pauli(higher_excitation(sub, sup, symmetrized=sym), n)
        return generator_unitary(g, theta).matrix
    if op == "mixed":
        modes = _meta_ints(c, "orbitals")
        theta = _meta_floats(c, "theta")[0]
        return generator_unitary(generator_pauli(double(*modes), n), theta).matrix
    raise InputError(f"circuit metadata declares unknown op {op!r}")


def _cmd_verify(args) -> int:
    c = _read_circuit(args.circuit)
    tol = _tolerance(args)
    try:
        target = _declared_unitary(c)
    except (FermionError, PauliError, VerifyError) as exc:
        raise InputError(f"{args.circuit}: {exc}")
    u = circuit_unitary(c).matrix
    distance = float(np.linalg.norm(u - target))
    passed = distance <= tol
    if args.format == "structured":
        print(json.dumps({"distance": distance, "tol": tol, "passed": passed}))
    else:
        state = "PASS" if passed else "FAIL"
        print(f"{state} distance {distance:.3e} (tol {tol:g}, {c.n_qubits} qubits)")
    return 0 if passed else 1


# --- reports ----------------------------------------------------------------------


def _cmd_count(args) -> int:
    rep = count(_read_circuit(args.circuit))
    if args.format == "structured":
        print(json.dumps(rep.as_dict()))
        return 0
    d = rep.as_dict()
    for key in (
        "ms_total",
        "ms_forward",
        "ms_backward",
        "single_qubit",
        "crz",
        "rzz",
        "cnot",
    ):
        print(f"{key}: {d[key]}")
    print(f"ms_by_axis: {d['ms_by_axis']}")
    print(f"ms_locality_histogram: {d['ms_locality_histogram']}")
    return 0


def _cmd_cost(args) -> int:
    rep = cost(_read_circuit(args.circuit), tau=args.tau)
    if args.format == "structured":
        print(json.dumps(rep.as_dict()))
        return 0
    print(f"total_ms_time: {rep.total_ms_time:.6g}")
    print(f"sequential_depth: {rep.sequential_depth}")
    print(f"tau: {rep.tau:g}")
    return 0


# --- application builders -----------------------------------------------------------


def _cmd_uccsd(args) -> int:
    try:
        spec = AnsatzSpec(
            args.modes,
            _ints("--occupied", args.occupied) if args.occupied else (),
            _ints("--virtual", args.virtual) if args.virtual else (),
            _floats("--parameters", args.parameters),
        )
    except EvolutionError as exc:
        raise UsageError(str(exc))
    layer = build_uccsd_layer(spec, scheduling=args.scheduling)
    rep = count(layer)
    if args.format == "structured":
        print(
            json.dumps(
                {
                    "excitations": len(uccsd_excitations(spec)),
                    "scheduling": args.scheduling,
                    "counts": rep.as_dict(),
                }
            )
        )
    else:
        terms = uccsd_excitations(spec)
        singles = sum(1 for t in terms if t.kind == "single")
        print(f"excitations: {singles} singles, {len(terms) - singles} doubles")
        print(f"MS: {rep.ms_total} ({args.scheduling})")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize(layer))
        print(f"wrote {args.output}")
    return 0


def _load_terms(args) -> HamiltonianTerms:
    if args.integrals:
        try:
            with open(args.integrals, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"{args.integrals}: {exc.strerror or exc}")
        try:
            return term_list(parse_integrals(text))
        except IntegralError as exc:
            raise InputError(f"{args.integrals}: {exc}")
    return h3plus_builtin()


def _cmd_trotter(args) -> int:
    terms = _load_terms(args)
    orbital_class = args.orbital_class or terms.reality
    cfg = TrotterConfig(args.dt, orbital_class=orbital_class, scheduling=args.scheduling)
    step = build_trotter_step(terms, cfg)
    rep = count(step)
    if args.format == "structured":
        print(
            json.dumps(
                {
                    "modes": terms.n_modes,
                    "dt": cfg.time_step,
                    "orbital_class": orbital_class,
                    "scheduling": args.scheduling,
                    "counts": rep.as_dict(),
                }
            )
        )
    else:
        print(f"modes: {terms.n_modes}, dt: {cfg.time_step:g}, "
              f"class: {orbital_class}, scheduling: {args.scheduling}")
        print(f"MS: {rep.ms_total}  Rz: {rep.single_qubit}  Rzz: {rep.rzz}  CRz: {rep.crz}")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize(step))
        print(f"wrote {args.output}")
    return 0


# --- demos ------------------------------------------------------------------------


def _ordered_product(terms: HamiltonianTerms, dt: float, groups) -> np.ndarray:
    n = 1 << terms.n_modes
    diagonal = float(terms.constant) * np.eye(n, dtype=complex)
    for lt in terms.local_terms:
        diagonal += dense_sum(local_pauli(lt, terms.n_modes))
    u = _exact_exp(diagonal, dt)
    for group in groups:
        block = np.zeros((n, n), dtype=complex)
        for t in group:
            block += dense_sum(generator_pauli(t, terms.n_modes))
        u = _exact_exp(block, dt) @ u
    return u


def _report_oracle(defect: float, tol: float, out: dict | None) -> bool:
    passed = defect <= tol
    if out is not None:
        out["oracle"] = {"defect": defect, "tol": tol, "passed": passed}
    else:
        state = "PASS" if passed else "FAIL"
        print(f"oracle: {state} (defect {defect:.3e}, tol {tol:g})")
    return passed


def _demo_uccsd(tol: float, structured: bool) -> tuple[bool, dict]:
    spec = AnsatzSpec(6, (0, 1), (2, 3, 4, 5), DEMO_PARAMETERS)
    layer = build_uccsd_layer(spec)
    ms = count(layer).ms_total
    baseline = count(build_uccsd_layer(spec, scheduling="baseline")).ms_total
    factor = baseline / ms
    out: dict = {
        "ms": ms,
        "baseline": baseline,
        "factor": round(factor, 2),
        "reference": {
            "ms": REFERENCE_COUNTS["uccsd"],
            "baseline": REFERENCE_COUNTS["uccsd_baseline"],
        },
    }
    if not structured:
        print("H3+ UCCSD ansatz layer (6 qubits, 4 singles + 4 doubles)")
        print(f"MS: {ms} (baseline {baseline}, factor {factor:.1f})")
        print(f"reference: MS {REFERENCE_COUNTS['uccsd']} "
              f"(baseline {REFERENCE_COUNTS['uccsd_baseline']})")
    v = np.eye(64, dtype=complex)
    for t, theta in zip(uccsd_excitations(spec), spec.parameters):
        v = generator_unitary(generator_pauli(t, 6), theta).matrix @ v
    defect = float(np.linalg.norm(circuit_unitary(layer).matrix - v))
    passed = _report_oracle(defect, tol, out if structured else None)
    passed = passed and ms == REFERENCE_COUNTS["uccsd"] and baseline == REFERENCE_COUNTS["uccsd_baseline"]
    return passed, out


def _demo_trotter(dt: float, tol: float, structured: bool) -> tuple[bool, dict]:
    terms = h3plus_builtin()
    part = HamiltonianTerms(terms.n_modes, terms.reality, 0.0, (), terms.excitation_terms)
    ms = count(build_trotter_step(part, TrotterConfig(dt))).ms_total
    sbs = count(
        build_trotter_step(part, TrotterConfig(dt, scheduling="baseline"))
    ).ms_total
    naive = count(
        build_trotter_step(
            part, TrotterConfig(dt, orbital_class="complex", scheduling="baseline")
        )
    ).ms_total
    out: dict = {
        "dt": dt,
        "ms": ms,
        "string_by_string": sbs,
        "naive": naive,
        "reference": {
            "ms": REFERENCE_COUNTS["trotter"],
            "string_by_string": REFERENCE_COUNTS["trotter_string_by_string"],
            "naive": REFERENCE_COUNTS["trotter_naive"],
        },
    }
    if not structured:
        print(f"H3+ Trotter step, non-local part (dt {dt:g})")
        print(f"MS: {ms} (string-by-string {sbs}, naive {naive})")
        print(f"reference: MS {REFERENCE_COUNTS['trotter']} "
              f"(string-by-string {REFERENCE_COUNTS['trotter_string_by_string']}, "
              f"naive {REFERENCE_COUNTS['trotter_naive']})")
    step = build_trotter_step(terms, TrotterConfig(dt))
    v = _ordered_product(terms, dt, fusion_groups(terms.excitation_terms))
    defect = float(np.linalg.norm(circuit_unitary(step).matrix - v))
    passed = _report_oracle(defect, tol, out if structured else None)
    passed = passed and (ms, sbs, naive) == (
        REFERENCE_COUNTS["trotter"],
        REFERENCE_COUNTS["trotter_string_by_string"],
        REFERENCE_COUNTS["trotter_naive"],
    )
    return passed, out


def _cmd_demo(args) -> int:
    if args.system != "h3plus":
        raise UsageError(f"unknown demo system {args.system!r}; available: h3plus")
    if not args.uccsd and not args.trotter:
        raise UsageError("choose --uccsd and/or --trotter")
    tol = _tolerance(args)
    structured = args.format == "structured"
    report: dict = {"system": args.system}
    ok = True
    if args.uccsd:
        passed, out = _demo_uccsd(tol, structured)
        report["uccsd"] = out
        ok = ok and passed
    if args.trotter:
        passed, out = _demo_trotter(args.dt, tol, structured)
        report["trotter"] = out
        ok = ok and passed
    if structured:
        print(json.dumps(report))
    return 0 if ok else 1


# --- parser -----------------------------------------------------------------------


def _add_format(p) -> None:
    p.add_argument("--format", choices=("text", "structured"), default="text")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ionsynth",
        description="Compile excitation operators to trapped-ion MS circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="lower one operator to a circuit file")
    p.add_argument(
        "--op",
        required=True,
        choices=("rotation", "single", "double", "coupled", "controlled", "higher", "mixed"),
    )
    p.add_argument("--orbitals", help="comma-separated mode list, strictly increasing")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--angles", help="three pairing angles for --op double")
    p.add_argument("--axis", choices=("xx", "yy"), default="xx")
    p.add_argument("--variant", choices=("a", "b"), default="a")
    p.add_argument("--control", type=int)
    p.add_argument("--sub", help="creation modes for --op higher")
    p.add_argument("--sup", help="annihilation modes for --op higher")
    p.add_argument("--string", help="Pauli label for --op rotation")
    p.add_argument("--symmetrized", action="store_true")
    p.add_argument("--n-qubits", type=int)
    p.add_argument("--output", "-o")
    p.set_defaults(handler=_cmd_compile)

    p = sub.add_parser("verify", help="recheck a circuit file against its metadata")
    p.add_argument("--circuit", required=True)
    p.add_argument("--tol", type=float)
    _add_format(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("count", help="gate-count report for a circuit file")
    p.add_argument("--circuit", required=True)
    _add_format(p)
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("cost", help="duration report for a circuit file")
    p.add_argument("--circuit", required=True)
    p.add_argument("--tau", type=float, default=1.0)
    _add_format(p)
    p.set_defaults(handler=_cmd_cost)

    p = sub.add_parser("uccsd", help="build a UCCSD ansatz layer")
    p.add_argument("--modes", type=int, required=True)
    p.add_argument("--occupied", default="")
    p.add_argument("--virtual", default="")
    p.add_argument("--parameters", default="")
    p.add_argument("--scheduling", choices=("parallelized", "baseline"), default="parallelized")
    p.add_argument("--output", "-o")
    _add_format(p)
    p.set_defaults(handler=_cmd_uccsd)

    p = sub.add_parser("trotter", help="build one Trotter step of a Hamiltonian")
    p.add_argument("--integrals", help="integral table file (default: bundled h3plus)")
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--orbital-class", choices=("real", "complex"))
    p.add_argument("--scheduling", choices=("parallelized", "baseline"), default="parallelized")
    p.add_argument("--output", "-o")
    _add_format(p)
    p.set_defaults(handler=_cmd_trotter)

    p = sub.add_parser("demo", help="rebuild the bundled reproduction circuits")
    p.add_argument("system", choices=("h3plus",))
    p.add_argument("--uccsd", action="store_true")
    p.add_argument("--trotter", action="store_true")
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--tol", type=float)
    _add_format(p)
    p.set_defaults(handler=_cmd_demo)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code in (0, None):
            return 0
        return 2
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SynthesisError, FermionError, EvolutionError, PauliError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, SchemaError, IntegralError, CircuitError, VerifyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())
