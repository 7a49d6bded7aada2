"""Timing harness and the embedded-device energy model.

Wall time is measured per call (median / p10 / p90 over warm iterations,
warmup discarded) together with exact group-operation counts, which carry the
structural claims: SEMECS signing performs zero group operations, Schnorr
signing one exponentiation, every verification one double exponentiation.

The energy model converts work into joules via E = V * I * t.  Reference
constants for the 8-bit AVR ATmega2560 (5 V, 20 mA, 16 MHz -> 6.25 nJ/cycle)
and the nRF24L01 transceiver (3.3 V, 11.3 mA, 2 Mbps -> 18.65 nJ/bit) are
built in.  Cycle counts measured on that hardware reproduce the reference
energy figures exactly; wall times measured here yield platform-specific
estimates instead.

CSV schema v1 (also mirrored to JSON):
    scheme, operation, iters, median_ns, p10_ns, p90_ns,
    exp_ops, double_exp_ops, tx_bytes, compute_mJ, comm_uJ
"""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import asdict, dataclass, replace
from typing import Optional

from . import eta as eta_mod
from . import schnorr as schnorr_mod
from . import semecs as semecs_mod
from .errors import UnsupportedCombo
from .group import GroupParams, OpCounter, count_group_ops, random_scalar

CSV_SCHEMA_VERSION = 1
CSV_COLUMNS = (
    "scheme",
    "operation",
    "iters",
    "median_ns",
    "p10_ns",
    "p90_ns",
    "exp_ops",
    "double_exp_ops",
    "tx_bytes",
    "compute_mJ",
    "comm_uJ",
)

SCHEMES = ("schnorr", "eta", "semecs")
OPERATIONS = ("keygen", "sign", "verify")


# ---------------------------------------------------------------------------
# Energy model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyProfile:
    """Electrical character of a device: E = V * I * t plus per-unit constants."""

    name: str
    volts: float
    amps: float
    clock_hz: Optional[float] = None
    nj_per_cycle: Optional[float] = None
    nj_per_bit: Optional[float] = None


def derive_profile(
    name: str,
    volts: float,
    amps: float,
    clock_hz: Optional[float] = None,
    bitrate: Optional[float] = None,
) -> EnergyProfile:
    """Profile from electrical parameters: nJ/cycle = V*I/f * 1e9, likewise per bit."""
    if volts <= 0 or amps <= 0:
        raise ValueError("volts and amps must be positive")
    nj_per_cycle = volts * amps / clock_hz * 1e9 if clock_hz else None
    nj_per_bit = volts * amps / bitrate * 1e9 if bitrate else None
    return EnergyProfile(
        name=name,
        volts=volts,
        amps=amps,
        clock_hz=clock_hz,
        nj_per_cycle=nj_per_cycle,
        nj_per_bit=nj_per_bit,
    )


#: 8-bit AVR ATmega2560 measured at 5 V / 20 mA / 16 MHz; transmission via the
#: nRF24L01 radio.  Constants pinned to the reference figures (6.25 nJ/cycle,
#: 18.65 nJ/bit).
AVR_ATMEGA2560 = EnergyProfile(
    name="avr-atmega2560",
    volts=5.0,
    amps=0.020,
    clock_hz=16e6,
    nj_per_cycle=6.25,
    nj_per_bit=18.65,
)

#: nRF24L01 2.4 GHz transceiver: 3.3 V, 11.3 mA, 2 Mbps (radio only).
NRF24L01 = derive_profile("nrf24l01", volts=3.3, amps=0.0113, bitrate=2e6)

PROFILES = {p.name: p for p in (AVR_ATMEGA2560, NRF24L01)}


def energy_compute(
    profile: EnergyProfile,
    cycles: Optional[float] = None,
    seconds: Optional[float] = None,
    bits_tx: float = 0.0,
) -> tuple[float, float]:
    """(computation mJ, communication uJ) for the given work.

    Exactly one of ``cycles`` (uses the per-cycle constant) or ``seconds``
    (uses E = V * I * t directly) selects the computation input.
    """
    if (cycles is None) == (seconds is None):
        raise ValueError("supply exactly one of cycles or seconds")
    if (cycles is not None and cycles < 0) or (seconds is not None and seconds < 0):
        raise ValueError("work must be non-negative")
    if bits_tx < 0:
        raise ValueError("bits_tx must be non-negative")
    if cycles is not None:
        if profile.nj_per_cycle is None:
            raise ValueError(f"profile {profile.name!r} has no per-cycle constant")
        compute_mj = cycles * profile.nj_per_cycle * 1e-6
    else:
        compute_mj = profile.volts * profile.amps * seconds * 1e3
    if bits_tx:
        if profile.nj_per_bit is None:
            raise ValueError(f"profile {profile.name!r} has no per-bit constant")
        comm_uj = bits_tx * profile.nj_per_bit * 1e-3
    else:
        comm_uj = 0.0
    return compute_mj, comm_uj


# ---------------------------------------------------------------------------
# Benchmark records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchRecord:
    scheme: str
    operation: str
    iters: int
    median_ns: float
    p10_ns: float
    p90_ns: float
    exp_ops: float  # per iteration
    double_exp_ops: float  # per iteration
    tx_bytes: int
    compute_mJ: Optional[float] = None
    comm_uJ: Optional[float] = None


def _percentile(sorted_values, fraction: float) -> float:
    idx = min(len(sorted_values) - 1, max(0, round(fraction * (len(sorted_values) - 1))))
    return float(sorted_values[idx])


def _signature_overhead(scheme: str, params: GroupParams) -> int:
    L = params.scalar_len
    if scheme == "schnorr":
        return 1 + 2 * L  # version + s + e
    if scheme == "eta":
        return 1 + eta_mod.INDEX_LEN + L + eta_mod.X_LEN
    return semecs_mod.ENVELOPE_HEADER_LEN + L  # header + s; c carries payload


def run_bench(
    scheme: str,
    operation: str,
    params: GroupParams,
    iterations: int,
    K: int = 16,
    warmup: Optional[int] = None,
    rng=None,
) -> BenchRecord:
    """Time one (scheme, operation) combination and count its group ops.

    Sign benchmarks get a fresh capacity-(warmup+iterations) key so state
    advances honestly; verify benchmarks re-verify one honest envelope.
    """
    if scheme not in SCHEMES or operation not in OPERATIONS:
        raise UnsupportedCombo(f"no benchmark for {scheme}/{operation}")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if warmup is None:
        warmup = min(32, iterations)

    message = b"bench message payload: " + b"\xa5" * 41
    tx_bytes = 0 if operation == "keygen" else _signature_overhead(scheme, params)
    total = warmup + iterations

    if scheme == "schnorr":
        kp = schnorr_mod.schnorr_keygen(params, rng)
        if operation == "keygen":
            work = lambda i: schnorr_mod.schnorr_keygen(params, rng)
        elif operation == "sign":
            work = lambda i: schnorr_mod.schnorr_sign(kp, message, rng)
        else:
            sig = schnorr_mod.schnorr_sign(kp, message, rng)
            work = lambda i: schnorr_mod.schnorr_verify(params, kp.Y, message, sig)
    elif scheme == "eta":
        if operation == "keygen":
            work = lambda i: eta_mod.eta_keygen(params, K, rng)
        elif operation == "sign":
            state, _ = eta_mod.eta_keygen(params, total, rng)
            work = lambda i: eta_mod.eta_sign(state, message, rng)
        else:
            state, pk = eta_mod.eta_keygen(params, 1, rng)
            sig = eta_mod.eta_sign(state, message, rng)
            work = lambda i: eta_mod.eta_verify(pk, message, sig)
    else:
        if operation == "keygen":
            work = lambda i: semecs_mod.semecs_keygen(params, K, rng)
        elif operation == "sign":
            # the search index is irrelevant to signing; skip it so sign can
            # be benched even on groups too small for `total` distinct betas
            state, _ = semecs_mod.semecs_keygen_from_secret(
                params, total, random_scalar(params, rng), require_index=False
            )
            work = lambda i: semecs_mod.semecs_sign(state, message)
        else:
            state, pk = semecs_mod.semecs_keygen(params, 1, rng)
            env = semecs_mod.semecs_sign(state, message)
            work = lambda i: semecs_mod.semecs_verify_indexed(pk, env)

    for i in range(warmup):
        work(i)

    samples = []
    counter = OpCounter()
    with count_group_ops(counter):
        for i in range(iterations):
            t0 = time.perf_counter_ns()
            work(i)
            samples.append(time.perf_counter_ns() - t0)

    samples.sort()
    return BenchRecord(
        scheme=scheme,
        operation=operation,
        iters=iterations,
        median_ns=float(statistics.median(samples)),
        p10_ns=_percentile(samples, 0.10),
        p90_ns=_percentile(samples, 0.90),
        exp_ops=counter.exp_count / iterations,
        double_exp_ops=counter.double_exp_count / iterations,
        tx_bytes=tx_bytes,
    )


def apply_energy(records, profile: EnergyProfile):
    """Fill the energy columns from measured wall time and transmitted bytes."""
    out = []
    for rec in records:
        compute_mj, comm_uj = energy_compute(
            profile, seconds=rec.median_ns * 1e-9, bits_tx=rec.tx_bytes * 8
        )
        out.append(replace(rec, compute_mJ=compute_mj, comm_uJ=comm_uj))
    return out


# ---------------------------------------------------------------------------
# CSV / JSON emission
# ---------------------------------------------------------------------------

def _row(rec: BenchRecord) -> dict:
    row = asdict(rec)
    row["compute_mJ"] = "" if rec.compute_mJ is None else repr(rec.compute_mJ)
    row["comm_uJ"] = "" if rec.comm_uJ is None else repr(rec.comm_uJ)
    return row


def write_csv(records, stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for rec in records:
        writer.writerow(_row(rec))


def read_csv(stream) -> list[BenchRecord]:
    records = []
    for row in csv.DictReader(stream):
        records.append(
            BenchRecord(
                scheme=row["scheme"],
                operation=row["operation"],
                iters=int(row["iters"]),
                median_ns=float(row["median_ns"]),
                p10_ns=float(row["p10_ns"]),
                p90_ns=float(row["p90_ns"]),
                exp_ops=float(row["exp_ops"]),
                double_exp_ops=float(row["double_exp_ops"]),
                tx_bytes=int(row["tx_bytes"]),
                compute_mJ=float(row["compute_mJ"]) if row["compute_mJ"] else None,
                comm_uJ=float(row["comm_uJ"]) if row["comm_uJ"] else None,
            )
        )
    return records


def to_json(records) -> str:
    payload = {
        "schema_version": CSV_SCHEMA_VERSION,
        "records": [asdict(rec) for rec in records],
    }
    return json.dumps(payload, indent=2)


def format_table(records) -> str:
    stream = io.StringIO()
    write_csv(records, stream)
    return stream.getvalue()
