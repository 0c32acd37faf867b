"""MacKay alist reader and writer."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .gf2 import SparseBitMatrix


def dumps(H: SparseBitMatrix) -> str:
    r, n = H.shape
    HT = H.transpose()
    cw = HT.row_weights()
    rw = H.row_weights()
    max_c = int(cw.max()) if n else 0
    max_r = int(rw.max()) if r else 0
    lines = [f"{n} {r}", f"{max_c} {max_r}",
             " ".join(map(str, cw.tolist())),
             " ".join(map(str, rw.tolist()))]

    def padded(M, width):
        for i in range(M.n_rows):
            idx = (M.row(i) + 1).tolist()
            lines.append(" ".join(map(str, idx + [0] * (width - len(idx)))))

    padded(HT, max_c)
    padded(H, max_r)
    return "\n".join(lines) + "\n"


def loads(text: str) -> SparseBitMatrix:
    """Parse alist text. Zero padding on index lines is optional."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        n, r = map(int, lines[0][:2])
        int(lines[1][0]), int(lines[1][1])
        cw = [int(x) for x in lines[2]]
        rw = [int(x) for x in lines[3]]
        if len(cw) != n or len(rw) != r:
            raise ValueError("weight line length does not match header")
        body = lines[4:]
        if len(body) < n + r:
            raise ValueError(f"expected {n + r} index lines, found {len(body)}")
        rows, cols = [], []
        for j in range(n):
            idx = [int(x) for x in body[j] if int(x) != 0]
            if len(idx) != cw[j]:
                raise ValueError(f"column {j + 1}: weight {cw[j]} but {len(idx)} indices")
            rows.extend(i - 1 for i in idx)
            cols.extend([j] * len(idx))
        by_row: dict[int, set[int]] = {}
        for a, b in zip(rows, cols):
            by_row.setdefault(a, set()).add(b)
        for i in range(r):
            idx = [int(x) for x in body[n + i] if int(x) != 0]
            if len(idx) != rw[i]:
                raise ValueError(f"row {i + 1}: weight {rw[i]} but {len(idx)} indices")
            if {j - 1 for j in idx} != by_row.get(i, set()):
                raise ValueError(f"row {i + 1} disagrees with the column lists")
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed alist: {exc}") from None
    return SparseBitMatrix.from_coords(r, n, np.array(rows, dtype=np.int64),
                                       np.array(cols, dtype=np.int64))


def write_alist(H: SparseBitMatrix, path) -> None:
    Path(path).write_text(dumps(H))


def read_alist(path) -> SparseBitMatrix:
    return loads(Path(path).read_text())
