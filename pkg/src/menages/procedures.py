"""High-level procedures shared by the CLI and the report builder."""
from __future__ import annotations

import json
import os
from pathlib import Path

from .board import RookCache, normalize_circular
from .counting import rook_sequence, seq, umbral_count
from .exactmath import IntPoly
from .guess import (
    HELD_OUT,
    MAX_SKIP,
    cfinite_to_gf,
    extend_sequence,
    guess_cfinite_poly,
    guess_cfinite_scalar,
    guess_holonomic,
    SingularRecurrence,
    recurrence_from_json,
)


def canonical_set(S, mode: str) -> tuple[int, ...]:
    S = tuple(sorted(set(S)))
    return normalize_circular(S) if mode == "circular" else S


class DiskCache:
    """One JSON file per (S, mode) holding rook polynomials and recurrences.

    Purely advisory: deleting the directory only costs recomputation.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)

    def _file(self, S, mode: str) -> Path:
        key = "_".join(str(s) for s in S) or "empty"
        return self.path / f"{mode}__{key}.json"

    def load(self, S, mode: str) -> dict:
        f = self._file(S, mode)
        if not f.exists():
            return {"S": list(S), "mode": mode, "rook_terms": [], "recurrences": {}}
        return json.loads(f.read_text())

    def save(self, S, mode: str, data: dict) -> None:
        self.path.mkdir(parents=True, exist_ok=True)
        f = self._file(S, mode)
        tmp = f.with_suffix(".tmp")
        tmp.write_text(json.dumps(data, sort_keys=True))
        tmp.replace(f)


def rook_terms(S, mode: str, N: int, cache: DiskCache | None = None) -> list[IntPoly]:
    """R_1(t), ..., R_N(t) for the S-boards, reusing the disk cache."""
    S = canonical_set(S, mode)
    have: list[IntPoly] = []
    data = None
    if cache is not None:
        data = cache.load(S, mode)
        have = [IntPoly.from_list(c) for c in data["rook_terms"]]
    if len(have) < N:
        memo = RookCache()
        have = have + rook_sequence(S, N, mode, memo, start=len(have) + 1)
        if cache is not None:
            data["rook_terms"] = [p.to_list() for p in have]
            cache.save(S, mode, data)
    return have[:N]


def terms(S, mode: str, N: int, cache: DiskCache | None = None) -> list[int]:
    if mode == "allowed":
        return seq(S, N, "allowed")
    return [umbral_count(r, n) for n, r in enumerate(rook_terms(S, mode, N, cache), 1)]


def rook_terms_needed(max_order: int, max_tdeg: int, held_out: int) -> int:
    return 2 * max_order + max_tdeg + held_out + MAX_SKIP


def rook_recurrence(S, mode: str = "straight", max_order: int = 12, max_tdeg: int | None = None,
                    held_out: int = HELD_OUT, cache: DiskCache | None = None):
    """C-finite recurrence for the rook polynomials of the S-boards, or None."""
    if max_order < 1:
        return None
    max_tdeg = max_order if max_tdeg is None else max_tdeg
    key = f"rookrec:{max_order}:{max_tdeg}:{held_out}"
    if cache is not None:
        stored = cache.load(canonical_set(S, mode), mode)["recurrences"].get(key)
        if stored is not None:
            return recurrence_from_json(stored)
    N = rook_terms_needed(max_order, max_tdeg, held_out)
    R = rook_terms(S, mode, N, cache)
    rec = guess_cfinite_poly(R, max_order, max_tdeg, held_out, graded=True)
    if cache is not None and rec is not None:
        _remember(cache, S, mode, key, rec)
    return rec


def _remember(cache: DiskCache, S, mode: str, key: str, rec) -> None:
    S = canonical_set(S, mode)
    data = cache.load(S, mode)
    data["recurrences"][key] = rec.to_dict()
    cache.save(S, mode, data)


def holonomic_info(S, mode: str, max_complexity: int, L1: int, L2: int,
                   held_out: int = HELD_OUT, cache: DiskCache | None = None,
                   prefer: str = "order"):
    """(first L1 terms, minimal holonomic recurrence or None, a(L2) or None)."""
    worst = max(((d + 1) * (max_complexity - d + 1) + d for d in range(1, max_complexity + 1)),
                default=0)
    need = max(L1, worst + held_out + MAX_SKIP)
    a = terms(S, mode, need, cache)
    rec = guess_holonomic(a, max_complexity, held_out, prefer=prefer) if max_complexity >= 1 else None
    ext = None
    if rec is not None:
        if cache is not None and mode != "allowed":
            _remember(cache, S, mode, f"holonomic:{max_complexity}:{held_out}:{prefer}", rec)
        try:
            ext = extend_sequence(rec, a, max(L2, len(a)))[L2 - 1]
        except SingularRecurrence:
            ext = None
    return a[:L1], rec, ext


def baltic_gf(S, N: int = 40, max_order: int | None = None, held_out: int = HELD_OUT,
              var: str = "t"):
    """Rational generating function of the allowed-displacement counts, a(0) = 1."""
    a = [1] + seq(S, N, "allowed")
    if max_order is None:
        max_order = max(1, min(12, (len(a) - held_out) // 2))
    rec = guess_cfinite_scalar(a, max_order, held_out, start=0)
    if rec is None:
        return None
    return cfinite_to_gf(rec, a, var)
