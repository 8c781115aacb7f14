"""Markdown reports for one displacement set."""
from __future__ import annotations

from dataclasses import dataclass, field

from .board import RookCache
from .counting import _board, complement_matrix, permanent, rook_sequence, umbral_count
from .guess import HELD_OUT
from .procedures import DiskCache, baltic_gf, canonical_set, holonomic_info, rook_recurrence, terms


def format_set(S) -> str:
    return "{" + ",".join(str(s) for s in sorted(set(S))) + "}"


def mode_flag(mode: str) -> str:
    return {"straight": "", "circular": " --circular", "allowed": " --allowed"}[mode]


@dataclass
class Report:
    title: str
    S: tuple[int, ...]
    mode: str
    terms: list[int]
    rook_rec: object | None = None
    gf: object | None = None
    holonomic: object | None = None
    low_degree: object | None = None
    extended: tuple[int, int] | None = None
    checks: list[tuple[int, int, int]] = field(default_factory=list)
    commands: dict[str, str] = field(default_factory=dict)

    def markdown(self) -> str:
        s = format_set(self.S)
        out = [f"# {self.title}", ""]
        out.append(f"- displacement set: `{s}`")
        out.append(f"- mode: {self.mode}")
        out.append("")
        out.append(f"## Terms a(1..{len(self.terms)})")
        out.append("")
        out.append(", ".join(str(x) for x in self.terms))
        out.append("")
        out.append(f"Reproduce: `{self.commands['seq']}`")
        out.append("")
        if self.mode != "allowed":
            out.append("## Rook-polynomial recurrence")
            out.append("")
            if self.rook_rec is None:
                out.append("FAIL")
            else:
                out.append(f"`{self.rook_rec}`")
                out.append("")
                out.append(f"(as [[initial terms], [c_1, ..., c_d]], holding for n >= {self.rook_rec.valid_from})")
            out.append("")
            out.append(f"Reproduce: `{self.commands['rookrec']}`")
            out.append("")
        else:
            out.append("## Generating function")
            out.append("")
            out.append(f"`{self.gf}`" if self.gf is not None else "FAIL")
            out.append("")
            out.append(f"Reproduce: `{self.commands['gfbaltic']}`")
            out.append("")
        out.append("## Holonomic recurrence")
        out.append("")
        out.append(f"`{self.holonomic}`" if self.holonomic is not None else "FAIL")
        out.append("")
        if self.extended is not None:
            L2, v = self.extended
            out.append(f"a({L2}) = {v}")
        else:
            out.append("a(L2): FAIL")
        out.append("")
        out.append(f"Reproduce: `{self.commands['info']}`")
        out.append("")
        if self.low_degree is not None and self.low_degree != self.holonomic:
            out.append("Lowest-degree alternative:")
            out.append("")
            out.append(f"`{self.low_degree}`")
            out.append("")
            out.append(f"Reproduce: `{self.commands['info']} --prefer degree`")
            out.append("")
        if self.checks:
            out.append("## Oracle checks")
            out.append("")
            out.append("| n | a(n) | permanent of complement |")
            out.append("|---|------|-------------------------|")
            for n, a, p in self.checks:
                out.append(f"| {n} | {a} | {p} |")
            out.append("")
            out.append(f"Reproduce: `{self.commands['verify']}`")
            out.append("")
        return "\n".join(out)


def build_report(S, mode: str = "straight", N: int = 20, max_order: int = 12,
                 max_tdeg: int | None = None, max_complexity: int = 9, L2: int = 100,
                 held_out: int = HELD_OUT, check_upto: int = 9,
                 cache: DiskCache | None = None) -> Report:
    S = canonical_set(S, mode)
    s = format_set(S)
    flag = mode_flag(mode)
    max_tdeg = max_order if max_tdeg is None else max_tdeg
    cmds = {
        "seq": f"menages seq '{s}' {N}{flag}",
        "rookrec": f"menages rookrec '{s}'{flag} --max-order {max_order} --max-tdeg {max_tdeg} --held-out {held_out}",
        "gfbaltic": f"menages gfbaltic '{s}' --held-out {held_out}",
        "info": f"menages info '{s}'{flag} --max-complexity {max_complexity} --l1 {N} --l2 {L2} --held-out {held_out}",
        "verify": f"menages verify '{s}'{flag} --n-max {check_upto}",
    }
    title = f"Permutations with pi(i) - i {'in' if mode == 'allowed' else 'not in'} {s} ({mode})"
    rep = Report(title, S, mode, terms(S, mode, N, cache), commands=cmds)
    if mode == "allowed":
        rep.gf = baltic_gf(S, held_out=held_out)
    else:
        rep.rook_rec = rook_recurrence(S, mode, max_order, max_tdeg, held_out, cache)
        memo = RookCache()
        for n in range(1, check_upto + 1):
            a = umbral_count(rook_sequence(S, n, mode, memo, start=n)[0], n)
            rep.checks.append((n, a, permanent(complement_matrix(_board(S, n, mode)))))
    _, rec, ext = holonomic_info(S, mode, max_complexity, N, L2, held_out, cache)
    rep.holonomic = rec
    if rec is not None:
        rep.low_degree = holonomic_info(S, mode, max_complexity, N, L2, held_out, cache, "degree")[1]
    if ext is not None:
        rep.extended = (L2, ext)
    return rep
