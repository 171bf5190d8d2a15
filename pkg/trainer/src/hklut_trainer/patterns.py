"""Kernel pattern tables and the on-disk model layout shared with the engine.

The trainer talks to the inference engine only through ``.hklut`` files, so
the pattern offsets and the binary layout are duplicated here as part of
that contract rather than imported from the engine package.
"""

import struct

import numpy as np

# (dy, dx) offsets, pivot first.  MSB kernels tile the 5x5 window around the
# pivot under 4 rotations; LSB kernels tile the 3x3 window.
PATTERNS = {
    "S": ((0, 0), (0, 1), (1, 0), (1, 1)),
    "H": ((0, 0), (0, 1)),
    "D": ((0, 0), (1, 1)),
    "L": ((0, 0), (0, 1), (1, 1)),
    "HDB_A": ((0, 0), (0, 1), (0, 2)),
    "HDB_B": ((0, 0), (1, 1), (2, 2)),
    "HDB_C": ((0, 0), (1, 2), (2, 1)),
}

MSB_KERNELS = ("HDB_A", "HDB_B", "HDB_C")
LSB_KERNELS = ("H", "D")
ROTATIONS = 4
NIBBLE_LEVELS = 16

# stage upscaling factors per released architecture
ARCH_STAGES = {"hklut-s": (2, 2), "hklut-l": (2, 1, 2)}

RESIDUAL_CODES = {"nearest": 0, "bilinear": 1, "bicubic": 2}


def rotate_offsets(offsets, j):
    """Rotate pattern offsets j quarter turns: (dy, dx) -> (dx, -dy)."""
    out = tuple(offsets)
    for _ in range(j % 4):
        out = tuple((dx, -dy) for dy, dx in out)
    return out


def lut_order_tuples(v, n):
    """All v^n input tuples in table-index order (first pixel most significant)."""
    import itertools
    return list(itertools.product(range(v), repeat=n))


def write_model(path, stages):
    """Serialize to the engine's binary format.

    ``stages`` is a list of dicts with keys ``r``, ``residual_mode``, and
    ``branches``: two (kernel_names, entry_arrays) pairs, MSB first, where
    each entry array is int8 of length 16**n * r*r in lut_order.
    """
    blob = bytearray(b"HKLT")
    blob.append(1)
    blob.append(len(stages))
    for stage in stages:
        blob.append(stage["r"])
        blob.append(RESIDUAL_CODES[stage["residual_mode"]])
        for names, entry_arrays in stage["branches"]:
            blob.append(len(names))
            for name, entries in zip(names, entry_arrays):
                offsets = PATTERNS[name]
                n = len(offsets)
                entries = np.asarray(entries, dtype=np.int8)
                assert entries.size == NIBBLE_LEVELS ** n * stage["r"] ** 2
                blob.append(n)
                blob.append(NIBBLE_LEVELS)
                for dy, dx in offsets:
                    blob.extend(struct.pack("bb", dy, dx))
                blob.extend(entries.tobytes())
    with open(path, "wb") as fh:
        fh.write(bytes(blob))
