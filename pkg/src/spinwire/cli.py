"""Command line front end: ``spinwire {propagate,scaling,fidelity,optimize,verify}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import oracle
from .config import ExperimentConfig, coerce, field_help, field_kinds, preset, validate, window_sites
from .encoding import cube_root_packet, design_packet, gaussian_packet, packet_in_sites, travel_time
from .errors import ConfigError, NoPropagationError, SpinwireError
from .evolution import evolve, run_trace
from .fidelity import channel_report
from .optimal_encoding import optimize_arrival
from .records import csv_text, write_csv, write_json
from .ring_model import HamiltonianSpec, dispersion_from_spec, heisenberg, max_group_velocity, omega
from .state import SiteWindow, capture_probability, occupation_graph, random_state, site_basis, width

log = logging.getLogger("spinwire")

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 1, 2


# -- wiring --------------------------------------------------------------------

def hamiltonian_for(cfg: ExperimentConfig, n_sites: int) -> HamiltonianSpec:
    if cfg.model == "heisenberg":
        return heisenberg(cfg.chi, n_sites)
    return HamiltonianSpec(n_sites, cfg.c0, cfg.c1, cfg.c2, cfg.d1, cfg.d2, cfg.e1, cfg.f1)


def _carrier(cfg, d) -> float:
    if cfg.k0 is not None:
        return cfg.k0
    if d.is_flat:
        return 0.0
    return max_group_velocity(d)[0]


@dataclass
class Setup:
    n_sites: int
    dispersion: object
    state: object
    packet: object  # WavepacketSpec, or None for a point source
    alice: SiteWindow
    bob: SiteWindow
    carrier: float
    transit_time: float


def build_setup(cfg: ExperimentConfig, n_sites: int) -> Setup:
    d = dispersion_from_spec(hamiltonian_for(cfg, n_sites))
    packet = None
    if cfg.packet == "point":
        state = site_basis(n_sites, cfg.center_site)
        alice = SiteWindow(n_sites, cfg.center_site, 1)
        carrier = _carrier(cfg, d)
    else:
        if cfg.packet == "gaussian":
            packet = packet_in_sites(
                n_sites, cfg.center_site, _carrier(cfg, d), cfg.delta_sites, window_sites(cfg, n_sites)
            )
        elif cfg.packet == "design":
            packet = design_packet(d, cfg.center_site, cfg.kappa, cfg.distance, wavenumber=cfg.k0)
        else:
            packet = cube_root_packet(n_sites, cfg.center_site, cfg.k0, cfg.delta_coeff, cfg.cut_coeff)
        state = gaussian_packet(packet, n_sites)
        alice = packet.window
        carrier = packet.wavenumber_k0
    bob_center = cfg.bob_center or (cfg.center_site - 1 + n_sites // 2) % n_sites + 1
    bob = SiteWindow(n_sites, bob_center, min(cfg.bob_window or alice.width_sites, n_sites))
    if cfg.t_max is not None:
        transit = cfg.t_max
    else:
        try:
            transit = travel_time(d, carrier, cfg.distance)
        except NoPropagationError:
            transit = float(n_sites)
            log.warning("no group velocity at k0 = %s; using transit time N = %s", carrier, n_sites)
    return Setup(n_sites, d, state, packet, alice, bob, carrier, transit)


def time_grid(cfg: ExperimentConfig, default_t_max: float) -> np.ndarray:
    if cfg.times is not None:
        return np.asarray(cfg.times, dtype=float)
    t_max = cfg.t_max if cfg.t_max is not None else default_t_max
    if cfg.t_steps == 1:
        return np.array([t_max])
    return np.linspace(0.0, t_max, cfg.t_steps)


def _threads() -> int:
    raw = os.environ.get("SPINWIRE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError("SPINWIRE_THREADS", f"not an integer: {raw!r}") from None
    return os.cpu_count() or 1


def _setup_record(s: Setup) -> dict:
    return {
        "n_sites": s.n_sites,
        "packet": None if s.packet is None else s.packet.to_record(),
        "carrier_k0": s.carrier,
        "alice": s.alice.to_record("alice"),
        "bob": s.bob.to_record("bob"),
        "transit_time": s.transit_time,
    }


# -- commands ------------------------------------------------------------------

def run_propagate(cfg: ExperimentConfig):
    s = build_setup(cfg, cfg.n_sites)
    times = time_grid(cfg, s.transit_time)
    trace = run_trace(s.state, s.dispersion, times, s.bob, mass=cfg.mass)
    return s, trace


def run_scaling(cfg: ExperimentConfig) -> list[dict]:
    if not cfg.n_list:
        raise ConfigError("n_list", "scaling needs at least one ring size")
    if cfg.packet not in ("cube_root", "design"):
        raise ConfigError("packet", "scaling supports cube_root or design packets")
    sizes = sorted(set(cfg.n_list))
    if len(sizes) != len(cfg.n_list):
        log.warning("duplicate ring sizes in n_list removed: %s", cfg.n_list)

    def one(n):
        s = build_setup(cfg, n)
        final = evolve(s.state, s.dispersion, s.transit_time)
        w0 = width(occupation_graph(s.state), cfg.mass)
        wf = width(occupation_graph(final), cfg.mass)
        root = n ** (1.0 / 3.0)
        return {
            "n_sites": n,
            "window_sites": s.alice.width_sites,
            "transit_time": s.transit_time,
            "initial_width": w0,
            "final_width": wf,
            "final_over_cuberoot": wf / root,
            "alice_access_fraction": w0 / n,
            "bob_access_fraction": wf / n,
        }

    workers = min(_threads(), len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, sizes))
    else:
        rows = [one(n) for n in sizes]
    return sorted(rows, key=lambda r: r["n_sites"])


def run_fidelity(cfg: ExperimentConfig) -> dict:
    s = build_setup(cfg, cfg.n_sites)
    final = evolve(s.state, s.dispersion, s.transit_time)
    report = channel_report(capture_probability(final, s.bob), s.transit_time, s.n_sites, cfg.tau)
    return {"report": report.to_record(), "setup": _setup_record(s)}


def run_optimize(cfg: ExperimentConfig):
    s = build_setup(cfg, cfg.n_sites)
    t_lo = cfg.t_lo if cfg.t_lo is not None else 0.8 * s.transit_time
    t_hi = cfg.t_hi if cfg.t_hi is not None else 1.2 * s.transit_time
    best = optimize_arrival(s.dispersion, s.alice, s.bob, (t_lo, t_hi), cfg.samples)
    baseline = capture_probability(evolve(s.state, s.dispersion, best.arrival_time), s.bob)
    report = channel_report(best.capture, best.arrival_time, s.n_sites, cfg.tau)
    summary = {
        "report": report.to_record(),
        "setup": _setup_record(s),
        "t_range": [t_lo, t_hi],
        "optimal_capture": best.capture,
        "baseline_capture": baseline,
        "improvement_factor": best.capture / baseline if baseline > 0 else None,
    }
    return best, summary


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def to_record(self) -> dict:
        return {"check": self.name, "residual": self.residual, "tolerance": self.tolerance, "passed": self.passed}


def run_verify(cfg: ExperimentConfig) -> list[Check]:
    n = cfg.n_sites
    if n > oracle.MAX_EVOLVE_SITES:
        raise ConfigError("n_sites", f"verify needs N <= {oracle.MAX_EVOLVE_SITES}")
    spec = hamiltonian_for(cfg, n).vacuum_normalised()
    d = dispersion_from_spec(spec)
    h = oracle.build_full_hamiltonian(spec)
    sz = oracle.total_sz(n)
    vac = np.zeros(2**n, dtype=complex)
    vac[0] = 1.0
    checks = [
        Check("hermitian", float(np.max(np.abs(h - h.conj().T))), 1e-12),
        Check("sz_commutes", float(np.max(np.abs(h @ sz - sz @ h))), 1e-12),
        Check("vacuum_eigenvalue_zero", float(np.linalg.norm(h @ vac)), 1e-12),
        Check("w_states_eigenvectors", oracle.verify_w_eigenstates(spec), 1e-10),
        Check("pair_lowering_inert", oracle.verify_w_eigenstates(spec, pair_lowering=1.0), 1e-10),
        Check(
            "translation_commutes",
            oracle.verify_translation_commutes(spec, field_perturbation=1.0 if cfg.negative_control else 0.0),
            1e-12,
        ),
        Check(
            "sector_eigenvalues",
            float(np.max(np.abs(oracle.sector_eigenvalues(spec) - np.sort(omega(d, np.arange(n)))))),
            1e-10,
        ),
    ]
    if cfg.model == "heisenberg":
        checks.append(
            Check("heisenberg_form", float(np.max(np.abs(h - oracle.heisenberg_matrix(cfg.chi, n)))), 1e-12)
        )
    rng = np.random.default_rng(cfg.seed)
    worst_diff = worst_leak = worst_energy = 0.0
    for _ in range(cfg.n_random):
        s0 = random_state(n, rng, with_vacuum=True)
        v0 = oracle.embed(s0)
        e0 = oracle.energy(v0, spec)
        for t in (0.5, 1.0, 5.0):
            v = oracle.full_evolve(v0, spec, t)
            worst_leak = max(worst_leak, oracle.sector_leakage(v))
            worst_diff = max(worst_diff, evolve(s0, d, t).distance(oracle.restrict(v)))
            worst_energy = max(worst_energy, abs(oracle.energy(v, spec) - e0))
    checks += [
        Check("sector_evolution_matches_full", worst_diff, 1e-10),
        Check("sector_leakage", worst_leak, 1e-12),
        Check("energy_conserved", worst_energy, 1e-10),
    ]
    return checks


# -- output --------------------------------------------------------------------

class Output:
    def __init__(self, cfg: ExperimentConfig):
        self.dir = Path(cfg.out_dir)
        self.format = cfg.format
        self.quiet = cfg.quiet
        self.dir.mkdir(parents=True, exist_ok=True)
        (self.dir / "config.json").write_text(cfg.to_json(), encoding="utf-8")

    def table(self, stem: str, rows, columns) -> None:
        rows = list(rows)
        if self.format in ("csv", "both"):
            write_csv(self.dir / f"{stem}.csv", rows, columns)
        if self.format in ("json", "both"):
            write_json(self.dir / f"{stem}.json", rows)

    def record(self, stem: str, obj, columns=None) -> None:
        if self.format in ("json", "both"):
            write_json(self.dir / f"{stem}.json", obj)
        if columns and self.format in ("csv", "both"):
            write_csv(self.dir / f"{stem}.csv", [obj], columns)

    def say(self, text: str) -> None:
        if not self.quiet:
            print(text)


REPORT_COLUMNS = ["capture", "avg_fidelity", "threshold_tau", "success", "transit_time", "qubit_rate_lower_bound"]


def cmd_propagate(cfg: ExperimentConfig) -> int:
    """Trace a packet around the ring."""
    setup, trace = run_propagate(cfg)
    out = Output(cfg)
    out.table("trace_long", trace.long_rows(), ["t", "site", "nu"])
    out.table("trace_summary", trace.summary_rows(), ["t", "capture", "width", "centre_of_mass"])
    out.record("setup", _setup_record(setup))
    out.say(
        f"propagated N={setup.n_sites} over {len(trace)} times; final width {trace.widths[-1]} sites, "
        f"capture {trace.captures[-1]:.6f}, centre {trace.centres[-1]:.4f}"
    )
    return EXIT_OK


def cmd_scaling(cfg: ExperimentConfig) -> int:
    """Final packet width across ring sizes."""
    rows = run_scaling(cfg)
    out = Output(cfg)
    columns = list(rows[0])
    out.table("scaling", rows, columns)
    out.say(csv_text(rows, ["n_sites", "initial_width", "final_width", "final_over_cuberoot"]).rstrip())
    return EXIT_OK


def cmd_fidelity(cfg: ExperimentConfig) -> int:
    """Encode, evolve and report the channel fidelity."""
    result = run_fidelity(cfg)
    out = Output(cfg)
    out.record("report", result, None)
    if out.format in ("csv", "both"):
        write_csv(out.dir / "report.csv", [result["report"]], REPORT_COLUMNS)
    r = result["report"]
    out.say(f"capture {r['capture']:.9f}  avg fidelity {r['avg_fidelity']:.9f}  success {r['success']}")
    return EXIT_OK


def cmd_optimize(cfg: ExperimentConfig) -> int:
    """Capture-optimal encoding versus the Gaussian packet."""
    best, summary = run_optimize(cfg)
    out = Output(cfg)
    out.record("optimal", summary)
    out.table("amplitudes", best.amplitude_rows(), ["site", "re", "im"])
    out.say(
        f"optimal capture {best.capture:.9f} at t={best.arrival_time:.6f}; "
        f"gaussian baseline {summary['baseline_capture']:.9f}"
    )
    return EXIT_OK


def cmd_verify(cfg: ExperimentConfig) -> int:
    """Check the one-particle reduction against the dense oracle."""
    checks = run_verify(cfg)
    out = Output(cfg)
    out.table("verify", [c.to_record() for c in checks], ["check", "residual", "tolerance", "passed"])
    for c in checks:
        out.say(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<32} {c.residual:.3e}  (tol {c.tolerance:.0e})")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


COMMANDS = {
    "propagate": cmd_propagate,
    "scaling": cmd_scaling,
    "fidelity": cmd_fidelity,
    "optimize": cmd_optimize,
    "verify": cmd_verify,
}


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--preset", choices=["fig1", "fig2", "fig3"], help="load a figure preset")
    helps = field_help()
    for name, kind in field_kinds().items():
        flags = [f"--{name}"]
        if "_" in name:
            flags.append(f"--{name.replace('_', '-')}")
        if kind is bool:
            common.add_argument(*flags, dest=name, nargs="?", const="true", default=argparse.SUPPRESS, help=helps[name])
        else:
            common.add_argument(*flags, dest=name, default=argparse.SUPPRESS, help=helps[name])

    parser = argparse.ArgumentParser(prog="spinwire", description="Quantum state transfer through spin rings.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__doc__)
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = preset(args.preset) if args.preset else ExperimentConfig()
    if args.config:
        try:
            cfg = ExperimentConfig.load(args.config, cfg)
        except OSError as exc:
            raise ConfigError("config", str(exc)) from None
    kinds = field_kinds()
    overrides = {name: coerce(name, kinds[name], getattr(args, name)) for name in kinds if hasattr(args, name)}
    return validate(ExperimentConfig.from_dict(overrides, cfg))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        logging.basicConfig(level=logging.ERROR if cfg.quiet else logging.WARNING, format="spinwire: %(message)s")
        return COMMANDS[args.command](cfg)
    except SpinwireError as exc:
        print(f"spinwire: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
