"""``photon-shaper`` command-line interface.

    photon-shaper {pulse|cavity|fm|code} [--config FILE] [--out DIR]
                  [--method M] [--action A] [--set key=value ...]
                  [--sweep key=a:b:n]

Exit codes: 0 success, 2 invalid configuration or input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import cavity, codes, fm
from .config import ConfigError, RunConfig, load_config
from .io import FileFormatError, read_codebook, read_state, write_codebook, write_state, write_table
from .specgrid import (
    GridMismatchError,
    SampledGrid,
    SpectralAmplitude,
    gaussian_amplitude,
    is_resolved,
    to_time,
)
from .states import SinglePhotonState, count_rate, intensity_spectrum, mean_field

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

CAVITY_DRIFT_LIMIT = 1e-6
FM_RESIDUAL_LIMIT = 1e-4

FM_METHODS = ("paper", "two_sideband", "oracle")
CODE_ACTIONS = ("encode", "decode", "roundtrip", "crosstalk")


class NumericalFailure(RuntimeError):
    pass


def _grid(cfg: RunConfig) -> SampledGrid:
    return SampledGrid(cfg.grid.n, cfg.grid.delta_omega)


def build_pulse(cfg: RunConfig) -> SinglePhotonState:
    grid = _grid(cfg)
    pc = cfg.pulse
    if pc.shape == "gaussian":
        nu = gaussian_amplitude(grid, pc.sigma, t0=pc.center)
    else:
        try:
            nu = read_state(pc.file)
        except OSError as exc:
            raise ConfigError(f"cannot read pulse file: {exc}") from None
        if nu.grid != grid:
            raise ConfigError("pulse file grid differs from the configured grid")
        n = nu.norm()
        if not n > 0:
            raise ConfigError("pulse file holds a zero amplitude")
        nu = nu / n
        if pc.center:
            nu = SpectralAmplitude(grid, nu.values * np.exp(1j * grid.omega * pc.center))
    if not is_resolved(nu):
        print("warning: pulse is not resolved on this grid", file=sys.stderr)
    return SinglePhotonState(nu)


def build_codebook(cfg: RunConfig) -> codes.CodeBook:
    cb = cfg.codebook
    grid = _grid(cfg)
    if cb.kind == "timebin":
        return codes.make_timebin_codebook(grid, cb.K, cb.bin_width)
    try:
        book = read_codebook(cb.file)
    except OSError as exc:
        raise ConfigError(f"cannot read codebook file: {exc}") from None
    if book.grid != grid:
        raise ConfigError("codebook grid differs from the configured grid")
    return book


def _emit(out: Path, name: str, columns: dict, fmt: str, log: list) -> None:
    path = write_table(out, name, columns, fmt)
    log.append(f"wrote {path}")


def cmd_pulse(cfg: RunConfig, out: Path, log: list) -> None:
    state = build_pulse(cfg)
    grid = state.grid
    nu_t = to_time(state.nu)
    fmt = cfg.output.format
    _emit(out, "pulse_time", {
        "t": grid.t, "re_nu": nu_t.values.real, "im_nu": nu_t.values.imag, "n": count_rate(state),
    }, fmt, log)
    _emit(out, "pulse_spectrum", {"omega": grid.omega, "intensity": intensity_spectrum(state)}, fmt, log)


def cmd_cavity(cfg: RunConfig, out: Path, log: list) -> None:
    state = build_pulse(cfg)
    grid = state.grid
    p = cavity.CavityParams(cfg.cavity.gamma, cfg.cavity.delta)
    nu_out = cavity.apply(p, state.nu)
    drift = abs(nu_out.norm_squared() - state.nu.norm_squared())
    if drift > CAVITY_DRIFT_LIMIT:
        raise NumericalFailure(f"cavity output norm drifted by {drift:.3e}")
    out_state = SinglePhotonState(nu_out)
    n_in, n_out = count_rate(state), count_rate(out_state)
    t_in, w_in = cavity.pulse_stats(grid, n_in)
    t_out, w_out = cavity.pulse_stats(grid, n_out)
    fmt = cfg.output.format
    _emit(out, "cavity_time", {"t": grid.t, "n_in": n_in, "n_out": n_out}, fmt, log)
    _emit(out, "cavity_spectrum", {
        "omega": grid.omega,
        "intensity_in": intensity_spectrum(state),
        "intensity_out": intensity_spectrum(out_state),
    }, fmt, log)
    stats = {
        "mean_time_in": [t_in], "rms_width_in": [w_in],
        "mean_time_out": [t_out], "rms_width_out": [w_out],
        "delay": [t_out - t_in], "broadening": [w_out - w_in],
    }
    _emit(out, "cavity_stats", stats, fmt, log)
    log.append(
        f"delay={t_out - t_in!r} broadening={w_out - w_in!r} "
        f"(group delay at carrier {cavity.group_delay(p, 0.0)!r})"
    )


def _oracle_config(cfg: RunConfig, p, m, nu) -> fm.OracleConfig:
    auto = fm.OracleConfig.for_pulse(p, m, nu)
    oc = cfg.modulation.oracle
    return fm.OracleConfig(
        dt=oc.dt if oc.dt is not None else auto.dt,
        window=tuple(oc.window) if oc.window is not None else auto.window,
    )


def cmd_fm(cfg: RunConfig, out: Path, log: list, method: str = "oracle") -> None:
    if method not in FM_METHODS:
        raise ConfigError(f"unknown fm method {method!r}; choose from {', '.join(FM_METHODS)}")
    state = build_pulse(cfg)
    grid = state.grid
    p = cavity.CavityParams(cfg.cavity.gamma, cfg.cavity.delta)
    m = fm.ModulationParams(cfg.modulation.epsilon, cfg.modulation.big_omega)
    summary: dict = {"method": [method]}
    if method == "paper":
        spectrum = fm.perturbative_spectrum_paper(p, m, state.nu)
    elif method == "two_sideband":
        spectrum = fm.perturbative_spectrum_two_sideband(p, m, state.nu)
    else:
        result = fm.oracle_run(p, m, state.nu, _oracle_config(cfg, p, m, state.nu))
        spectrum = np.abs(result.nu_out.values) ** 2
        residual = abs(result.output_norm2 - 1.0)
        summary["conservation_residual"] = [residual]
        summary["residual_intracavity"] = [result.residual_intracavity]
        if residual > FM_RESIDUAL_LIMIT:
            raise NumericalFailure(f"oracle photon-number residual {residual:.3e}")
    report = fm.sideband_report(grid, spectrum, m)
    summary.update(
        carrier_mass=[report.carrier_mass],
        upper_mass=[report.upper_mass],
        lower_mass=[report.lower_mass],
        mean_field=[float(np.abs(mean_field(state).values).max())],
    )
    fmt = cfg.output.format
    _emit(out, "fm_spectrum", {"omega": grid.omega, "intensity": spectrum}, fmt, log)
    _emit(out, "fm_sidebands", summary, fmt, log)
    log.append(
        f"{method}: carrier={report.carrier_mass!r} upper={report.upper_mass!r} "
        f"lower={report.lower_mass!r}"
    )


def _bits(cfg: RunConfig, book: codes.CodeBook) -> codes.SymbolVector:
    if cfg.codebook.bits is None:
        raise ConfigError("codebook.bits is required for this action")
    s = codes.SymbolVector.from_string(cfg.codebook.bits)
    if len(s.bits) != book.size:
        raise ConfigError(f"codebook.bits has {len(s.bits)} symbols, codebook has {book.size}")
    if not any(s.bits):
        raise ConfigError("codebook.bits must set at least one symbol")
    return s


def cmd_code(cfg: RunConfig, out: Path, log: list, action: str = "roundtrip",
             state_file: Optional[str] = None) -> None:
    if action not in CODE_ACTIONS:
        raise ConfigError(f"unknown code action {action!r}; choose from {', '.join(CODE_ACTIONS)}")
    try:
        book = build_codebook(cfg)
    except ValueError as exc:
        raise ConfigError(f"invalid codebook: {exc}") from None
    grid = book.grid
    fmt = cfg.output.format
    threshold = cfg.codebook.threshold

    if action == "encode":
        state = codes.encode(book, _bits(cfg, book))
        os.makedirs(out, exist_ok=True)
        write_state(out / "code_state.txt", state.nu)
        write_codebook(out / "codebook.txt", book)
        log.append(f"wrote {out / 'code_state.txt'}")
        log.append(f"wrote {out / 'codebook.txt'}")
        nu_t = to_time(state.nu)
        _emit(out, "code_time", {
            "t": grid.t, "re_nu": nu_t.values.real, "im_nu": nu_t.values.imag,
            "n": count_rate(state),
        }, fmt, log)
    elif action == "decode":
        if state_file is not None:
            try:
                nu = read_state(state_file)
            except OSError as exc:
                raise ConfigError(f"cannot read state file: {exc}") from None
            if nu.grid != grid:
                raise ConfigError("state file grid differs from the codebook grid")
        else:
            nu = codes.encode(book, _bits(cfg, book)).nu
        res = codes.decode(book, nu, threshold)
        _emit(out, "code_decode", {
            "k": list(range(book.size)),
            "re": res.overlaps.real, "im": res.overlaps.imag,
            "power": np.abs(res.overlaps) ** 2,
            "bit": list(res.bits),
        }, fmt, log)
        log.append(f"bits={res.symbols}")
    elif action == "roundtrip":
        rows = {"bits": [], "decoded": [], "pass": []}
        failures = 0
        for s in codes.all_symbol_vectors(book.size):
            got = codes.decode(book, codes.encode(book, s), threshold).symbols
            ok = got.bits == s.bits
            failures += not ok
            rows["bits"].append(str(s))
            rows["decoded"].append(str(got))
            rows["pass"].append(int(ok))
            log.append(f"{s} {'pass' if ok else 'FAIL'}")
        _emit(out, "code_roundtrip", rows, fmt, log)
        total = len(rows["bits"])
        log.append(f"roundtrip {total - failures}/{total} pass")
        if failures:
            raise NumericalFailure(f"{failures} symbol vectors failed to round-trip")
    else:
        p = cavity.CavityParams(cfg.cavity.gamma, cfg.cavity.delta)
        mat = codes.crosstalk_matrix(book, p)
        k, l = np.indices(mat.shape)
        _emit(out, "code_crosstalk", {
            "k": k.ravel().tolist(), "l": l.ravel().tolist(),
            "re": mat.real.ravel(), "im": mat.imag.ravel(),
        }, fmt, log)


COMMANDS: dict[str, Callable] = {
    "pulse": cmd_pulse,
    "cavity": cmd_cavity,
    "fm": cmd_fm,
    "code": cmd_code,
}


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _parse_set(items) -> dict:
    overrides = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = _parse_value(value)
    return overrides


def parse_sweep(spec: str) -> tuple[str, list[float]]:
    """``key=a:b:n`` -> (key, n evenly spaced values from a to b)."""
    try:
        key, rng = spec.split("=", 1)
        a, b, n = rng.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ConfigError(f"--sweep expects key=a:b:n, got {spec!r}") from None
    if n < 1:
        raise ConfigError("--sweep needs n >= 1")
    return key.strip(), np.linspace(a, b, n).tolist()


def _run_job(command: str, cfg: RunConfig, out: Path, args) -> tuple[int, list]:
    log: list = []
    kwargs = {}
    if command == "fm":
        kwargs["method"] = args.method or "oracle"
    elif command == "code":
        kwargs["action"] = args.action or "roundtrip"
        kwargs["state_file"] = args.state
    try:
        COMMANDS[command](cfg, out, log, **kwargs)
    except (ConfigError, FileFormatError, GridMismatchError) as exc:
        log.append(f"error: {exc}")
        return EXIT_CONFIG, log
    except (NumericalFailure, fm.IntegrationError) as exc:
        log.append(f"numerical failure: {exc}")
        return EXIT_NUMERIC, log
    except ValueError as exc:
        log.append(f"error: {exc}")
        return EXIT_CONFIG, log
    return EXIT_OK, log


def _threads() -> int:
    env = os.environ.get("PHOTON_SHAPER_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="photon-shaper", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--out", help="output directory (overrides output.path)")
    ap.add_argument("--method", choices=FM_METHODS, help="fm: spectrum method (default oracle)")
    ap.add_argument("--action", choices=CODE_ACTIONS, help="code: action (default roundtrip)")
    ap.add_argument("--state", help="code decode: state file to decode")
    ap.add_argument("--format", choices=("csv", "json"), help="output format")
    ap.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config value")
    ap.add_argument("--sweep", metavar="KEY=A:B:N", help="run N jobs with KEY swept from A to B")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = _parse_set(args.set)
        if args.out:
            overrides["output.path"] = args.out
        if args.format:
            overrides["output.format"] = args.format
        if args.sweep:
            key, values = parse_sweep(args.sweep)
            jobs = []
            for i, v in enumerate(values):
                o = dict(overrides)
                o[key] = v
                cfg = load_config(args.config, o)
                jobs.append((cfg, Path(cfg.output.path) / f"sweep_{i:03d}"))
        else:
            cfg = load_config(args.config, overrides)
            jobs = [(cfg, Path(cfg.output.path))]
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if len(jobs) == 1:
        results = [_run_job(args.command, jobs[0][0], jobs[0][1], args)]
    else:
        with ThreadPoolExecutor(max_workers=min(_threads(), len(jobs))) as pool:
            results = list(pool.map(lambda job: _run_job(args.command, job[0], job[1], args), jobs))

    code = EXIT_OK
    for (cfg, out), (rc, log) in zip(jobs, results):
        if len(jobs) > 1:
            print(f"[{out}]")
        body, last = log[:-1], log[-1:]
        for line in body:
            print(line)
        for line in last:
            print(line, file=sys.stderr if rc else sys.stdout)
        code = max(code, rc)
    return code


if __name__ == "__main__":
    sys.exit(main())
