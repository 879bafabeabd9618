"""On-disk formats: field snapshots and solve traces.

A field snapshot is a small text header followed by the raw float64 values:

    ESEFIELD 1
    dim=1
    extents=256
    box=-4.0,4.0
    boundary=periodic
    time=0.125
    ---
    <extents-many little-endian float64, C order>

A trace directory holds metadata.json, steps.npy (the full accepted-dt log)
and fields/000000.fld ... for the samples.  Floats in headers use repr, which
round-trips exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .field import Field, Grid
from .integrate import SolveTrace, TraceStatus

_MAGIC = "ESEFIELD 1"


def save_field(path, t: float, f: Field) -> None:
    g = f.grid
    box = ";".join(f"{repr(lo)},{repr(hi)}" for lo, hi in g.box)
    header = (f"{_MAGIC}\n"
              f"dim={g.dim}\n"
              f"extents={','.join(str(n) for n in g.extents)}\n"
              f"box={box}\n"
              f"boundary={g.boundary}\n"
              f"time={repr(float(t))}\n"
              f"---\n")
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def load_field(path) -> tuple[float, Field]:
    raw = Path(path).read_bytes()
    sep = raw.find(b"---\n")
    if sep < 0:
        raise ConfigError(f"{path}: missing header terminator")
    head = raw[:sep].decode("ascii").splitlines()
    if not head or head[0] != _MAGIC:
        raise ConfigError(f"{path}: not a field snapshot")
    kv = dict(line.split("=", 1) for line in head[1:] if line)
    extents = tuple(int(s) for s in kv["extents"].split(","))
    box = tuple(tuple(float(v) for v in part.split(","))
                for part in kv["box"].split(";"))
    grid = Grid(box, extents, kv["boundary"])
    values = np.frombuffer(raw[sep + 4:], dtype="<f8").reshape(extents)
    return float(kv["time"]), Field(grid, values)


def save_trace(outdir, trace: SolveTrace) -> None:
    out = Path(outdir)
    fields_dir = out / "fields"
    fields_dir.mkdir(parents=True, exist_ok=True)
    files = []
    for i, (t, f) in enumerate(trace.samples):
        name = f"{i:06d}.fld"
        save_field(fields_dir / name, t, f)
        files.append(name)
    np.save(out / "steps.npy", trace.step_log)
    g = trace.grid
    meta = {
        "p": trace.p,
        "grid": {"box": [list(iv) for iv in g.box],
                 "extents": list(g.extents),
                 "boundary": g.boundary},
        "status": {"kind": trace.status.kind,
                   "t_detect": trace.status.t_detect,
                   "reason": trace.status.reason,
                   "criterion": trace.status.criterion},
        "sample_times": [t for t, _ in trace.samples],
        "fields": files,
        "n_steps": int(len(trace.step_log)),
    }
    (out / "metadata.json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def load_trace(outdir) -> SolveTrace:
    out = Path(outdir)
    meta_path = out / "metadata.json"
    if not meta_path.exists():
        raise ConfigError(f"no trace at {out} (missing metadata.json)")
    meta = json.loads(meta_path.read_text())
    g = meta["grid"]
    grid = Grid(tuple(tuple(iv) for iv in g["box"]), tuple(g["extents"]), g["boundary"])
    samples = []
    for name in meta["fields"]:
        t, f = load_field(out / "fields" / name)
        if f.grid != grid:
            raise ConfigError(f"{name}: grid mismatch with metadata")
        samples.append((t, f))
    st = meta["status"]
    status = TraceStatus(st["kind"], st["t_detect"], st["reason"], st["criterion"])
    step_log = np.load(out / "steps.npy")
    return SolveTrace(grid, float(meta["p"]), samples, status, step_log)
