"""Command-line front end.

Exit codes: 0 success / check passed, 1 check failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as pio
from .bch import verify_product_identity, verify_terminating_bch
from .chain import (
    SpinConfig,
    apply_update,
    conservation_violations,
    enumerate_orbits,
)
from .cogwheel import CogwheelSystem, cogwheel_spectrum, roundtrip_residual
from .config import DENSE_HAMILTONIAN_CAP, DENSE_PRODUCT_CAP, RunConfig, dense_cap
from .hamiltonian import orbit_spectrum, synthesize_exact, synthesize_reduced
from .quantum import (
    QuantumState,
    approx_hamiltonian,
    bell_probe_state,
    commutator_action,
    entanglement_entropy,
    perturbed_trace,
    superposition_weight,
)


class UsageError(Exception):
    pass


def _config(args) -> RunConfig:
    try:
        return RunConfig(
            spins=args.spins,
            T=args.T,
            operator_tol=args.tol,
            roundtrip_tol=args.roundtrip_tol,
            seed=args.seed,
            output_format=getattr(args, "format", "json"),
            output=args.output,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _state(text: str, n_sites: int) -> SpinConfig:
    try:
        cfg = SpinConfig.from_text(text)
    except ValueError as exc:
        raise UsageError(f"bad state {text!r}: {exc}") from exc
    if cfg.n_sites != n_sites:
        raise UsageError(f"state {text!r} has {cfg.n_sites} sites, --spins is {n_sites}")
    return cfg


def _poly(form: str, S: int, T: float):
    if form == "exact":
        return synthesize_exact(S, T)
    if form == "reduced":
        return synthesize_reduced(S, T)
    if form == "approx":
        try:
            return approx_hamiltonian(S, T)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown form {form!r}")


def cmd_evolve(args) -> tuple[int, str]:
    cfg = _config(args)
    state = _state(args.state, cfg.spins)
    if args.steps < 0:
        raise UsageError("--steps must be >= 0")
    direction = "inverse" if args.inverse else "forward"
    path = [apply_update(state, k, direction).to_text() for k in range(1, args.steps + 1)]
    if args.format == "json":
        return 0, pio.dumps({"spins": cfg.spins, "initial": state.to_text(), "states": path}) + "\n"
    return 0, "".join(s + "\n" for s in path)


def cmd_orbits(args) -> tuple[int, str]:
    cfg = _config(args)
    try:
        orbits = enumerate_orbits(cfg.S, cap=args.cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = pio.orbit_report(cfg.spins, orbits)
    if args.plot:
        from .plotting import plot_orbit_lengths

        plot_orbit_lengths(report, args.plot)
    return 0, pio.dumps(report) + "\n"


def cmd_hamiltonian(args) -> tuple[int, str]:
    cfg = _config(args)
    poly = _poly(args.form, cfg.S, cfg.T)
    return 0, pio.dumps(poly.to_json()) + "\n"


def cmd_spectrum(args) -> tuple[int, str]:
    if args.cogwheel is not None:
        if args.cogwheel < 1 or not args.T > 0:
            raise UsageError("--cogwheel needs N >= 1 and T > 0")
        values = cogwheel_spectrum(CogwheelSystem(args.cogwheel, args.T))
        if args.plot:
            from .plotting import plot_cogwheel_spectrum

            plot_cogwheel_spectrum(values, args.plot, args.cogwheel)
        return 0, pio.csv_text(["n", "eigenvalue"], ((n + 1, float(v)) for n, v in enumerate(values)))
    cfg = _config(args)
    poly = _poly(args.form, cfg.S, cfg.T)
    try:
        orbits = enumerate_orbits(cfg.S, cap=args.cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = []
    for orbit in orbits:
        for r, lam in enumerate(orbit_spectrum(poly, orbit)):
            rows.append((orbit.representative.to_text(), orbit.length, r, float(lam.real), float(lam.imag)))
    if args.plot:
        from .plotting import plot_chain_spectrum

        plot_chain_spectrum(rows, args.plot, title=f"{args.form}, {cfg.spins} sites")
    return 0, pio.csv_text(["orbit_rep", "L", "r", "re", "im"], rows)


def _random_states(n_sites: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    nbytes = (n_sites + 7) // 8
    mask = (1 << n_sites) - 1
    for _ in range(count):
        yield SpinConfig(int.from_bytes(rng.bytes(nbytes), "little") & mask, n_sites)


def cmd_verify(args) -> tuple[int, str]:
    cfg = _config(args)
    n = cfg.spins
    if args.check == "exp":
        if n <= dense_cap(DENSE_HAMILTONIAN_CAP) and n <= 12:
            residual, mode = verify_terminating_bch(n, cfg.T, mode="dense"), "dense"
        else:
            residual, mode = verify_terminating_bch(n, cfg.T, mode="orbit", seed=cfg.seed), "orbit"
        report = pio.verification_report("exp", n, residual, cfg.operator_tol, mode=mode)
    elif args.check == "bch-product":
        try:
            residual = verify_product_identity(n, "even-first", cap=dense_cap(DENSE_PRODUCT_CAP))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        other = verify_product_identity(n, "odd-first", cap=dense_cap(DENSE_PRODUCT_CAP))
        report = pio.verification_report("bch-product", n, residual, cfg.operator_tol,
                                         ordering="even-first", reversed_ordering_residual=other)
    elif args.check == "cogwheel":
        parts = roundtrip_residual(cfg.S, cfg.T)
        report = pio.verification_report("cogwheel", n, max(parts.values()), cfg.roundtrip_tol,
                                         N=cfg.S, parts=parts)
    elif args.check == "conservation":
        if n <= 16:
            states = (SpinConfig(b, n) for b in range(1 << n))
            sample = "exhaustive"
        else:
            states = _random_states(n, 1000, cfg.seed)
            sample = "random-1000"
        bad = conservation_violations(states)
        report = pio.verification_report("conservation", n, bad, 0, sample=sample)
    else:
        raise UsageError(f"unknown check {args.check!r}")
    return (0 if report["pass"] else 1), pio.dumps(report) + "\n"


def cmd_perturb(args) -> tuple[int, str]:
    cfg = _config(args)
    if args.epsilon < 0:
        raise UsageError(f"--epsilon must be >= 0, got {args.epsilon}")
    state = _state(args.state, cfg.spins) if args.state else bell_probe_state(cfg.spins) \
        if cfg.spins >= 8 else SpinConfig.from_text("u" * (cfg.spins - 1) + "d")
    times = [k * cfg.T for k in args.times]
    cut = args.cut if args.cut is not None else cfg.S
    trace = perturbed_trace(cfg.S, cfg.T, args.epsilon, state, times, seed=cfg.seed,
                            cut=cut, top_k=args.top_k)
    if args.plot:
        from .plotting import plot_trace

        plot_trace(trace, args.plot, title=f"eps = {args.epsilon:g}, {cfg.spins} sites")
    return 0, pio.json_lines(trace)


def _parse_term(term: str) -> tuple[str, complex]:
    parts = term.split(":")
    if not 1 <= len(parts) <= 3:
        raise UsageError(f"bad term {term!r}; use STATE[:RE[:IM]]")
    try:
        re_part = float(parts[1]) if len(parts) > 1 else 1.0
        im_part = float(parts[2]) if len(parts) > 2 else 0.0
    except ValueError as exc:
        raise UsageError(f"bad amplitude in {term!r}") from exc
    return parts[0], complex(re_part, im_part)


def cmd_entropy(args) -> tuple[int, str]:
    cfg = _config(args)
    terms: dict[str, complex] = {}
    for raw in args.term:
        text, amp = _parse_term(raw)
        _state(text, cfg.spins)
        terms[text] = terms.get(text, 0) + amp
    psi = QuantumState.from_terms(terms)
    if psi.is_zero():
        raise UsageError("terms cancel to the zero state")
    psi = psi.normalized()
    cut = args.cut if args.cut is not None else cfg.S
    try:
        ent = entanglement_entropy(psi, cut)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = {"spins": cfg.spins, "cut": cut, "entropy": ent, "weight": superposition_weight(psi)}
    return 0, pio.dumps(report) + "\n"


def cmd_bell_probe(args) -> tuple[int, str]:
    cfg = _config(args)
    if cfg.spins < 8:
        raise UsageError("bell-probe needs --spins >= 8")
    probe = bell_probe_state(cfg.spins)
    raw = commutator_action(probe)
    psi = raw.normalized()
    cut = args.cut if args.cut is not None else 4
    report = {
        "spins": cfg.spins,
        "probe": probe.to_text(),
        "terms": [{"state": c.to_text(), "re": a.real, "im": a.imag} for c, a in raw],
        "cut": cut,
        "entropy": entanglement_entropy(psi, cut) if cfg.spins <= 20 else None,
        "weight": superposition_weight(psi),
    }
    return 0, pio.dumps(report) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permdyn", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spins", type=int, required=True, help="number of sites 2S")
    common.add_argument("--T", type=float, default=1.0, help="update time step")
    common.add_argument("--tol", type=float, default=1e-10, help="operator-identity tolerance")
    common.add_argument("--roundtrip-tol", type=float, default=1e-12, help="algebraic round-trip tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", parents=[common], help="trajectory of a basis state")
    p.add_argument("--state", required=True)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("orbits", parents=[common], help="orbit decomposition of all states")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--plot", default=None, help="save a histogram of orbit lengths")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("hamiltonian", parents=[common], help="coefficients of H in powers of U")
    p.add_argument("--form", choices=["exact", "reduced", "approx"], default="exact")
    p.set_defaults(func=cmd_hamiltonian)

    p = sub.add_parser("spectrum", help="per-orbit spectrum (CSV) or a cogwheel spectrum")
    p.add_argument("--spins", type=int, default=None)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--roundtrip-tol", type=float, default=1e-12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--form", choices=["exact", "reduced", "approx"], default="exact")
    p.add_argument("--cogwheel", type=int, default=None, metavar="N")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", parents=[common], help="run one identity check")
    p.add_argument("check", choices=["exp", "bch-product", "cogwheel", "conservation"])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("perturb", parents=[common], help="superposition weight under a perturbed H")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--times", type=float, nargs="+", default=[1.0], help="times in units of T")
    p.add_argument("--state", default=None)
    p.add_argument("--cut", type=int, default=None)
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("entropy", parents=[common], help="entanglement entropy of a superposition")
    p.add_argument("--term", action="append", required=True, metavar="STATE[:RE[:IM]]")
    p.add_argument("--cut", type=int, default=None)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("bell-probe", parents=[common], help="(U - U^dagger) on the down-pair probe")
    p.add_argument("--cut", type=int, default=None)
    p.set_defaults(func=cmd_bell_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "spectrum" and args.cogwheel is None and args.spins is None:
        parser.error("spectrum needs --spins or --cogwheel")
    try:
        code, text = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
