"""JSON formats for problems and certificates; CSV for result tables.

Floats are written by :func:`json.dumps`, whose ``repr`` output round-trips
every double exactly.  Table cells use 12 significant digits.
"""

import csv
import io
import json
import math
import os
import tempfile

import numpy as np

from .channels import (
    MatrixChannel,
    QuantumChannel,
    compose,
    lift,
    loss_map,
    saturating_add_map,
    uniform_mix_map,
)
from .decision import DecisionFunction
from .design import ConstraintPolytope
from .distributions import ClassicalDistribution, DensityOperator, SequenceSpace
from .errors import ValidationError
from .hyptest import TestCertificate


def fmt(x):
    """Table cell text: integers verbatim, floats at 12 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def json_number(x):
    """JSON-safe float; infinities become strings."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _parse_num(x):
    if isinstance(x, str):
        if x in ("inf", "-inf"):
            return float(x)
        raise ValidationError(f"expected a number, got {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"expected a number, got {x!r}")
    return float(x)


def _require(obj, *keys):
    if not isinstance(obj, dict):
        raise ValidationError("expected a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise ValidationError(f"missing field(s): {', '.join(missing)}")


def distribution_to_json(p):
    space = p.space
    mass = [
        {"outcome": list(space.sequence(i)), "p": float(m)}
        for i, m in enumerate(p.mass)
        if m != 0
    ]
    return {"alphabet": space.alphabet, "length": space.length, "mass": mass}


def distribution_from_json(obj, subnormalized=False):
    """Sparse outcome list to a distribution; unlisted outcomes get zero mass.

    An ``outcome`` may be a sequence of symbols or a single integer when
    ``length`` is 1.
    """
    _require(obj, "alphabet", "mass")
    space = SequenceSpace(int(obj["alphabet"]), int(obj.get("length", 1)))
    mass = np.zeros(space.size)
    for item in obj["mass"]:
        _require(item, "outcome", "p")
        out = item["outcome"]
        seq = [out] if isinstance(out, int) else out
        mass[space.index(seq)] += _parse_num(item["p"])
    return ClassicalDistribution(mass, space, subnormalized=subnormalized)


def density_to_json(rho):
    m = rho.matrix
    return {"dim": rho.dim, "re": m.real.tolist(), "im": m.imag.tolist()}


def density_from_json(obj):
    _require(obj, "dim", "re")
    re = np.array(obj["re"], dtype=float)
    im = np.array(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != (obj["dim"], obj["dim"]) or im.shape != re.shape:
        raise ValidationError("density matrix shape does not match dim")
    return DensityOperator(re + 1j * im)


def hypothesis_from_json(obj):
    """Either a classical distribution or a density operator, by its fields."""
    if isinstance(obj, dict) and "re" in obj:
        return density_from_json(obj)
    return distribution_from_json(obj)


def hypothesis_list_from_json(obj):
    if not isinstance(obj, list) or not obj:
        raise ValidationError("expected a non-empty JSON list of hypotheses")
    out = []
    for item in obj:
        h = hypothesis_from_json(item)
        if isinstance(h, ClassicalDistribution):
            h = DensityOperator(np.diag(h.mass).astype(complex))
        out.append(h)
    return out


def channel_from_json(obj):
    """Channel descriptor.

    Kinds: ``loss`` (``c``, ``g``, optional ``n``), ``satadd`` (``s``,
    ``g``, ``n``), ``mix`` (``delta``, ``dim``), ``matrix`` (``m``),
    ``kraus`` (``re``/``im`` lists) and ``compose`` (``maps``, applied in
    list order).
    """
    _require(obj, "kind")
    kind = obj["kind"]
    if kind == "loss":
        _require(obj, "c", "g")
        ch = loss_map(int(obj["c"]), int(obj["g"]))
        return lift(ch, int(obj["n"])) if obj.get("n", 1) != 1 else ch
    if kind == "satadd":
        _require(obj, "s", "g")
        ch = saturating_add_map(int(obj["s"]), int(obj["g"]))
        return lift(ch, int(obj["n"])) if obj.get("n", 1) != 1 else ch
    if kind == "mix":
        _require(obj, "delta", "dim")
        return uniform_mix_map(_parse_num(obj["delta"]), int(obj["dim"]))
    if kind == "matrix":
        _require(obj, "m")
        return MatrixChannel(obj["m"])
    if kind == "kraus":
        _require(obj, "re")
        re = [np.array(k, dtype=float) for k in obj["re"]]
        im = [np.array(k, dtype=float) for k in obj.get("im", [np.zeros_like(r) for r in re])]
        return QuantumChannel([a + 1j * b for a, b in zip(re, im)])
    if kind == "compose":
        _require(obj, "maps")
        maps = [channel_from_json(m) for m in obj["maps"]]
        if not maps:
            raise ValidationError("compose needs at least one map")
        out = maps[0]
        for m in maps[1:]:
            out = compose(m, out)
        return out
    raise ValidationError(f"unknown channel kind {kind!r}")


def polytope_to_json(poly):
    obj = {
        "dim": poly.dim,
        "ineq": [{"a": a.tolist(), "b": float(b)} for a, b in zip(poly.ineq_a, poly.ineq_b)],
    }
    if poly.energy is not None:
        obj["energy"] = {"a": poly.energy.tolist(), "budget": poly.budget}
    return obj


def polytope_from_json(obj):
    _require(obj, "dim")
    dim = int(obj["dim"])
    rows = obj.get("ineq", [])
    a = [r["a"] for r in rows]
    b = [_parse_num(r["b"]) for r in rows]
    energy = obj.get("energy")
    if energy is not None:
        _require(energy, "a", "budget")
        return ConstraintPolytope(dim, np.array(a).reshape(-1, dim), b, energy["a"], energy["budget"])
    return ConstraintPolytope(dim, np.array(a).reshape(-1, dim), b)


def decision_to_json(a):
    if a.kind == "classical":
        return {"kind": "classical", "weights": a.values.tolist()}
    return {"kind": "quantum", "re": a.values.real.tolist(), "im": a.values.imag.tolist()}


def decision_from_json(obj):
    _require(obj, "kind")
    if obj["kind"] == "classical":
        return DecisionFunction.classical(obj["weights"])
    re = np.array(obj["re"], dtype=float)
    im = np.array(obj["im"], dtype=float)
    return DecisionFunction.quantum(re + 1j * im)


def _matrix_json(m):
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return {"re": m.real.tolist(), "im": m.imag.tolist()}
    return m.tolist()


def certificate_to_json(cert):
    return {
        "epsilon": cert.epsilon,
        "beta": cert.beta,
        "alpha": cert.alpha,
        "dual_value": json_number(cert.dual_value),
        "gap": json_number(cert.gap),
        "dhte_bits": json_number(cert.dhte()),
        "dual_vars": {
            "z": [float(x) for x in cert.z],
            "v": [float(x) for x in cert.v],
            "Z": _matrix_json(cert.Z),
        },
        "decision": decision_to_json(cert.decision),
    }


def certificate_from_json(obj):
    _require(obj, "epsilon", "beta", "alpha", "dual_value", "gap", "decision")
    dv = obj.get("dual_vars", {})
    big_z = dv.get("Z", [])
    if isinstance(big_z, dict):
        big_z = np.array(big_z["re"]) + 1j * np.array(big_z["im"])
    return TestCertificate(
        epsilon=_parse_num(obj["epsilon"]),
        beta=_parse_num(obj["beta"]),
        alpha=_parse_num(obj["alpha"]),
        dual_value=_parse_num(obj["dual_value"]),
        gap=_parse_num(obj["gap"]),
        z=np.array(dv.get("z", []), dtype=float),
        v=np.array(dv.get("v", []), dtype=float),
        Z=np.asarray(big_z),
        decision=decision_from_json(obj["decision"]),
    )


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def read_csv(path):
    """Header and rows (as strings) of a CSV file."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{path} is empty")
        return header, [row for row in reader if row]


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
