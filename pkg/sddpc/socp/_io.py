"""Plain-text cone program format.

    sddpc-cone-program 1
    n <n>
    c0 <value>
    P <rows> <cols>
    <row-major values, one matrix row per line>
    f 1 <n>
    ...

followed by the sections Aeq, beq, G, h and, for every cone k, C<k>, d<k>, a<k>,
b<k>. Vectors are one-row matrices; every float is written with `%.17g`.
"""
import numpy

from .._exceptions import RejectedInputError
from ._program import ConeProgram, SecondOrderCone

HEADER = "sddpc-cone-program 1"


def _write_matrix(f, name, a):
    a = numpy.atleast_2d(numpy.asarray(a, dtype=float))
    rows, cols = a.shape
    if cols == 0:
        rows = 0
    f.write(f"{name} {rows} {cols}\n")
    for row in a[:rows]:
        f.write(" ".join("%.17g" % val for val in row) + "\n")


def dump_program(filename, prog):
    with open(filename, "w") as f:
        f.write(HEADER + "\n")
        f.write(f"n {prog.n}\n")
        f.write(f"c0 {prog.c0:.17g}\n")
        f.write(f"socs {len(prog.socs)}\n")
        _write_matrix(f, "P", prog.P)
        _write_matrix(f, "f", prog.f[None, :])
        _write_matrix(f, "Aeq", prog.Aeq)
        _write_matrix(f, "beq", prog.beq[None, :])
        _write_matrix(f, "G", prog.G)
        _write_matrix(f, "h", prog.h[None, :])
        for k, cone in enumerate(prog.socs):
            _write_matrix(f, f"C{k}", cone.C)
            _write_matrix(f, f"d{k}", cone.d[None, :])
            _write_matrix(f, f"a{k}", cone.a[None, :])
            _write_matrix(f, f"b{k}", [[cone.b]])


def load_program(filename):
    with open(filename) as f:
        lines = [line.split() for line in f]
    if not lines or " ".join(lines[0]) != HEADER:
        raise RejectedInputError(f"{filename}: not a cone program dump")

    scalars = {}
    matrices = {}
    k = 1
    while k < len(lines):
        tokens = lines[k]
        if not tokens:
            k += 1
            continue
        try:
            if len(tokens) == 2:
                scalars[tokens[0]] = float(tokens[1])
                k += 1
                continue
            name, rows, cols = tokens[0], int(tokens[1]), int(tokens[2])
            data = lines[k + 1 : k + 1 + rows]
            matrices[name] = numpy.array(
                [[float(v) for v in row] for row in data], dtype=float
            ).reshape(rows, cols)
            k += 1 + rows
        except (ValueError, IndexError):
            raise RejectedInputError(f"{filename}:{k + 1}: malformed section")

    n = int(scalars["n"])
    m_e = matrices["beq"].shape[1]
    m_i = matrices["h"].shape[1]
    socs = [
        SecondOrderCone(
            matrices[f"C{j}"].reshape(-1, n),
            matrices[f"d{j}"].reshape(-1),
            matrices[f"a{j}"].reshape(-1),
            matrices[f"b{j}"][0, 0],
        )
        for j in range(int(scalars.get("socs", 0)))
    ]
    return ConeProgram(
        matrices["P"],
        matrices["f"].reshape(-1),
        matrices["Aeq"].reshape(m_e, n),
        matrices["beq"].reshape(-1),
        matrices["G"].reshape(m_i, n),
        matrices["h"].reshape(-1),
        socs,
        scalars.get("c0", 0.0),
    )
