"""Timing benchmarks and the embedded energy model.

Two modes of the model:
  * reference cycle counts (measured on the 8-bit AVR) reproduce the
    published energy figures exactly;
  * wall times measured on this machine give platform-specific estimates.
"""

import io

from semecs.bench import (
    AVR_ATMEGA2560,
    NRF24L01,
    apply_energy,
    energy_compute,
    run_bench,
    write_csv,
)
from semecs.group import PRODUCTION_GROUP

# --- reference arithmetic ------------------------------------------------------
print("reference AVR ATmega2560 profile:")
print(f"  {AVR_ATMEGA2560.nj_per_cycle} nJ/cycle (5 V x 20 mA / 16 MHz)")
print(f"  {AVR_ATMEGA2560.nj_per_bit} nJ/bit via nRF24L01 "
      f"(derived: {NRF24L01.nj_per_bit:.3f})")

compute_mj, comm_uj = energy_compute(AVR_ATMEGA2560, cycles=195_776, bits_tx=256)
print(f"\nsigner cost at 195,776 cycles: {compute_mj:.4f} mJ")
print(f"32-octet signature (256 bits):  {comm_uj:.4f} uJ")

for name, cycles in (("ECDSA", 48_188_992), ("Ed25519", 23_211_611)):
    mj, _ = energy_compute(AVR_ATMEGA2560, cycles=cycles)
    print(f"cross-check {name}: {cycles:,} cycles -> {mj:.2f} mJ")

# --- this machine ---------------------------------------------------------------
print("\nbenchmarking on this machine (production group, 500 iterations)...")
records = []
for scheme in ("schnorr", "eta", "semecs"):
    for op in ("sign", "verify"):
        records.append(run_bench(scheme, op, PRODUCTION_GROUP, iterations=500))

records = apply_energy(records, AVR_ATMEGA2560)
out = io.StringIO()
write_csv(records, out)
print(out.getvalue())

semecs_sign = next(r for r in records if (r.scheme, r.operation) == ("semecs", "sign"))
schnorr_sign = next(r for r in records if (r.scheme, r.operation) == ("schnorr", "sign"))
print(
    f"semecs signs in {semecs_sign.median_ns / 1e3:.1f} us with "
    f"{semecs_sign.exp_ops:.0f} group ops; schnorr needs "
    f"{schnorr_sign.median_ns / 1e3:.1f} us and {schnorr_sign.exp_ops:.0f} exp"
)
