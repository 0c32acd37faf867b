"""Code specification files: ``{name, lambda, rho, n, N, f1, f2, k_expected?}``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .gf2 import SparseBitMatrix, to_parity_check
from .qpp import Qpp, is_permutation_poly
from .tanner import CodeProfile, TannerGraph, build_graph

EXAMPLE_CODES = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX")


class SpecError(ValueError):
    """A code or profile file is malformed; the message names the field."""


def _int_field(d: dict, key: str, required: bool = True) -> int | None:
    if key not in d:
        if required:
            raise SpecError(f"missing field '{key}'")
        return None
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecError(f"field '{key}' must be an integer, got {v!r}")
    return v


@dataclass(frozen=True)
class CodeSpec:
    name: str
    lam: int
    rho: int
    n: int
    N: int
    f1: int
    f2: int
    k_expected: int | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "CodeSpec":
        if not isinstance(d, dict):
            raise SpecError("code spec must be a JSON object")
        lam = _int_field(d, "lambda")
        rho = _int_field(d, "rho")
        n = _int_field(d, "n")
        N = _int_field(d, "N", required=False)
        f1 = _int_field(d, "f1")
        f2 = _int_field(d, "f2")
        k = _int_field(d, "k_expected", required=False)
        name = d.get("name", "")
        if not isinstance(name, str):
            raise SpecError("field 'name' must be a string")
        for key, v in (("lambda", lam), ("rho", rho), ("n", n)):
            if v < 1:
                raise SpecError(f"field '{key}' must be positive, got {v}")
        if N is None:
            N = n * lam
        if N != n * lam:
            raise SpecError(f"field 'N' must equal n*lambda = {n * lam}, got {N}")
        if N % rho:
            raise SpecError(f"field 'rho' must divide N = {N}")
        if N < 2 or not is_permutation_poly(N, f1, f2):
            raise SpecError(f"fields 'f1', 'f2': {f1}x+{f2}x^2 is not a permutation mod {N}")
        return cls(name, lam, rho, n, N, f1 % N, f2 % N, k)

    def to_dict(self) -> dict:
        d = {"name": self.name, "lambda": self.lam, "rho": self.rho, "n": self.n,
             "N": self.N, "f1": self.f1, "f2": self.f2}
        if self.k_expected is not None:
            d["k_expected"] = self.k_expected
        return d

    @property
    def profile(self) -> CodeProfile:
        return CodeProfile(self.lam, self.rho, self.n, self.N // self.rho, self.N)

    @property
    def qpp(self) -> Qpp:
        return Qpp(self.N, self.f1, self.f2)

    def graph(self) -> TannerGraph:
        return build_graph(self.profile, self.qpp)

    def parity_check(self) -> SparseBitMatrix:
        return to_parity_check(self.graph())


def load_spec(path) -> CodeSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from None
    return CodeSpec.from_dict(data)


def load_profile(path) -> CodeProfile:
    """Read ``{lambda, rho, n}`` (``r`` and ``N`` optional but checked)."""
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(d, dict):
        raise SpecError("profile must be a JSON object")
    lam, rho, n = _int_field(d, "lambda"), _int_field(d, "rho"), _int_field(d, "n")
    N = _int_field(d, "N", required=False) or n * lam
    r = _int_field(d, "r", required=False)
    if r is None:
        if N % rho:
            raise SpecError(f"field 'rho' must divide N = {N}")
        r = N // rho
    try:
        return CodeProfile(lam, rho, n, r, N)
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def example_code(label: str) -> CodeSpec:
    """One of the nine bundled example codes, by roman numeral."""
    if label not in EXAMPLE_CODES:
        raise KeyError(f"unknown example code {label!r}")
    text = resources.files("qppldpc").joinpath("codes", f"code_{label}.json").read_text()
    return CodeSpec.from_dict(json.loads(text))
