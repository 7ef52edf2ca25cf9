"""Text format for modules and maps.

Module expressions compose four constructors::

    free <deg> [<deg> ...]            direct sum of suspended free modules
    cyclic <deg> [/ rel [, rel ...]]  suspended cyclic quotient by a left ideal
    suspend <n> ( <expr> )            degree shift
    sum ( <expr> ) ( <expr> ) ...     finite direct sum

A relation is a sum of Sq words, e.g. ``Sq2 Sq1 + Sq3``.  Map documents
start with the word ``map`` and name a source, a target, and one image
line per source generator::

    map
    source = free 3
    target = builtin:A/ASq1
    send 0 = Sq3 @ 0

``@ k`` picks the k-th target generator (default 0); ``0`` is the zero
image.  ``#`` starts a comment.  Builtin names: ``builtin:A``,
``builtin:A/ASq1``, ``builtin:F``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from steenrodext.gf2 import BitMatrix, kernel_basis, solve_many
from steenrodext.modules import (
    FreeModule,
    GradedModule,
    ModuleHom,
    _a_mod_sq1,
    _action_closure,
    build_A,
    direct_sum,
    quotient_module,
    suspend,
    trivial_module,
)
from steenrodext.steenrod import SteenrodAlgebra

BUILTIN_MODULES = ("builtin:A", "builtin:A/ASq1", "builtin:F")


class ModuleSpecError(ValueError):
    """Parse or build failure, carrying a line/column position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str  # 'sq', 'int', 'word', 'builtin', 'punct'
    value: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<builtin>builtin:[A-Za-z0-9/._-]+)"
    r"|(?P<sq>Sq\d+)"
    r"|(?P<int>\d+)"
    r"|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[()/,+=@])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if not m:
                raise ModuleSpecError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            kind = m.lastgroup or "word"
            tokens.append(Token(kind, m.group(), lineno, pos + 1))
            pos = m.end()
    return tokens


@dataclass
class ModuleBuild:
    """A built module together with its free cover.

    The cover projection is what makes maps out of quotients checkable:
    a generator-image map is defined on the cover and must kill the
    cover's kernel degreewise.
    """

    module: GradedModule
    cover: FreeModule
    cover_proj: ModuleHom
    gen_degrees: tuple[int, ...]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expect_kind: Optional[str] = None, expect_value: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", "", 1, 1)
            raise ModuleSpecError("unexpected end of input", last.line, last.col)
        if expect_kind and tok.kind != expect_kind:
            raise ModuleSpecError(f"expected {expect_kind}, found {tok.value!r}", tok.line, tok.col)
        if expect_value and tok.value != expect_value:
            raise ModuleSpecError(f"expected {expect_value!r}, found {tok.value!r}", tok.line, tok.col)
        self.pos += 1
        return tok

    def at_value(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.value == value

    # grammar

    def parse_module_expr(self) -> dict:
        tok = self.next()
        if tok.kind == "builtin":
            if tok.value not in BUILTIN_MODULES:
                raise ModuleSpecError(f"unknown builtin {tok.value!r}", tok.line, tok.col)
            return {"kind": "builtin", "name": tok.value}
        if tok.value == "free":
            degs = []
            while self.peek() is not None and self.peek().kind == "int":
                degs.append(int(self.next().value))
            if not degs:
                raise ModuleSpecError("free needs at least one degree", tok.line, tok.col)
            return {"kind": "free", "degrees": degs}
        if tok.value == "cyclic":
            deg = int(self.next("int").value)
            rels = []
            if self.at_value("/"):
                self.next()
                rels.append(self.parse_relation())
                while self.at_value(","):
                    self.next()
                    rels.append(self.parse_relation())
            return {"kind": "cyclic", "degree": deg, "relations": rels}
        if tok.value == "suspend":
            shift_tok = self.next("int")
            self.next(expect_value="(")
            inner = self.parse_module_expr()
            self.next(expect_value=")")
            return {"kind": "suspend", "shift": int(shift_tok.value), "inner": inner}
        if tok.value == "sum":
            parts = []
            while self.at_value("("):
                self.next()
                parts.append(self.parse_module_expr())
                self.next(expect_value=")")
            if len(parts) < 1:
                raise ModuleSpecError("sum needs at least one summand", tok.line, tok.col)
            return {"kind": "sum", "parts": parts}
        raise ModuleSpecError(f"expected a module expression, found {tok.value!r}", tok.line, tok.col)

    def parse_relation(self) -> list[tuple[int, ...]]:
        words = [self.parse_word()]
        while self.at_value("+"):
            self.next()
            words.append(self.parse_word())
        return words

    def parse_word(self) -> tuple[int, ...]:
        tok = self.peek()
        if tok is not None and tok.kind == "int" and tok.value == "1":
            self.next()
            return ()
        exps = []
        while self.peek() is not None and self.peek().kind == "sq":
            exps.append(int(self.next().value[2:]))
        if not exps:
            tok = self.peek() or Token("", "", 1, 1)
            raise ModuleSpecError("expected an Sq word", tok.line, tok.col)
        return tuple(exps)


def parse_module_text(text: str) -> dict:
    """Parse a module document into an expression tree."""
    tokens = tokenize(text)
    if not tokens:
        raise ModuleSpecError("empty module document", 1, 1)
    parser = _Parser(tokens)
    if parser.at_value("module"):
        parser.next()
    expr = parser.parse_module_expr()
    trailing = parser.peek()
    if trailing is not None:
        raise ModuleSpecError(f"unexpected trailing {trailing.value!r}", trailing.line, trailing.col)
    return expr


def parse_map_text(text: str) -> dict:
    """Parse a map document: source, target, and generator images."""
    tokens = tokenize(text)
    if not tokens:
        raise ModuleSpecError("empty map document", 1, 1)
    parser = _Parser(tokens)
    parser.next(expect_value="map")
    parser.next(expect_value="source")
    parser.next(expect_value="=")
    source = parser.parse_module_expr()
    parser.next(expect_value="target")
    parser.next(expect_value="=")
    target = parser.parse_module_expr()
    sends: dict[int, list[tuple[tuple[int, ...], int]]] = {}
    while parser.peek() is not None:
        parser.next(expect_value="send")
        idx_tok = parser.next("int")
        gi = int(idx_tok.value)
        parser.next(expect_value="=")
        terms: list[tuple[tuple[int, ...], int]] = []
        if parser.peek() is not None and parser.peek().kind == "int" and parser.peek().value == "0":
            parser.next()
        else:
            terms.append(_parse_image_term(parser))
            while parser.at_value("+"):
                parser.next()
                terms.append(_parse_image_term(parser))
        if gi in sends:
            raise ModuleSpecError(f"duplicate send for generator {gi}", idx_tok.line, idx_tok.col)
        sends[gi] = terms
    return {"kind": "map", "source": source, "target": target, "sends": sends}


def _parse_image_term(parser: _Parser) -> tuple[tuple[int, ...], int]:
    word = parser.parse_word()
    gi = 0
    if parser.at_value("@"):
        parser.next()
        gi = int(parser.next("int").value)
    return word, gi


# building


def build_module(algebra: SteenrodAlgebra, t_max: int, expr: dict) -> ModuleBuild:
    kind = expr["kind"]
    if kind == "builtin":
        return _build_builtin(algebra, t_max, expr["name"])
    if kind == "free":
        cover = FreeModule(algebra, t_max, expr["degrees"])
        module = cover.as_module()
        return ModuleBuild(module, cover, ModuleHom.identity(module), tuple(expr["degrees"]))
    if kind == "cyclic":
        deg = expr["degree"]
        cover = FreeModule(algebra, t_max, [deg])
        cover_mod = cover.as_module()
        seeds = []
        for rel in expr["relations"]:
            degree = None
            vec = 0
            for word in rel:
                wdeg = deg + sum(word)
                if degree is None:
                    degree = wdeg
                elif degree != wdeg:
                    raise ValueError("relation is not homogeneous")
                if wdeg > t_max:
                    raise ValueError(f"relation degree {wdeg} exceeds the bound {t_max}")
                vec ^= cover.act_word(word, deg).mul_vec(cover.gen_vector(0)) if word else cover.gen_vector(0)
            if degree is not None:
                seeds.append((degree, vec))
        spans = _action_closure(cover_mod, seeds)
        module, proj = quotient_module(cover_mod, [s.basis() for s in spans], name="cyclic")
        return ModuleBuild(module, cover, proj, (deg,))
    if kind == "suspend":
        inner = build_module(algebra, t_max, expr["inner"])
        shift = expr["shift"]
        new_degs = [g + shift for g in inner.gen_degrees]
        if any(g < 0 or g > t_max for g in new_degs):
            raise ValueError("suspension pushes a generator out of 0..t_max")
        module = suspend(inner.module, shift)
        cover = FreeModule(algebra, t_max, new_degs)
        mats = []
        for d in range(t_max + 1):
            src = d - shift
            if 0 <= src <= t_max:
                mats.append(inner.cover_proj.mats[src])
            else:
                mats.append(BitMatrix.zeros(module.dim(d), cover.dim(d)))
        proj = ModuleHom(cover.as_module(), module, mats)
        return ModuleBuild(module, cover, proj, tuple(new_degs))
    if kind == "sum":
        parts = [build_module(algebra, t_max, p) for p in expr["parts"]]
        module = direct_sum([p.module for p in parts])
        gen_degrees = tuple(g for p in parts for g in p.gen_degrees)
        cover = FreeModule(algebra, t_max, gen_degrees)
        mats = []
        for d in range(t_max + 1):
            rows = [0] * module.dim(d)
            src_off = 0
            tgt_off = 0
            for p in parts:
                block = p.cover_proj.mats[d]
                for i, r in enumerate(block.rows):
                    rows[tgt_off + i] |= r << src_off
                src_off += p.cover.dim(d)
                tgt_off += p.module.dim(d)
            mats.append(BitMatrix(tuple(rows), cover.dim(d)))
        proj = ModuleHom(cover.as_module(), module, mats)
        return ModuleBuild(module, cover, proj, gen_degrees)
    raise ValueError(f"unknown expression kind {kind!r}")


def _build_builtin(algebra: SteenrodAlgebra, t_max: int, name: str) -> ModuleBuild:
    cover = FreeModule(algebra, t_max, [0])
    if name == "builtin:A":
        module = build_A(algebra, t_max)
        return ModuleBuild(module, cover, ModuleHom.identity(module), (0,))
    if name == "builtin:A/ASq1":
        module, proj = _a_mod_sq1(algebra, t_max)
        return ModuleBuild(module, cover, proj, (0,))
    if name == "builtin:F":
        module = trivial_module(algebra, t_max)
        proj = cover.hom_from_gen_images(module, [(0, 1)])
        return ModuleBuild(module, cover, proj, (0,))
    raise ValueError(f"unknown builtin {name!r}")


def build_map(algebra: SteenrodAlgebra, t_max: int, spec: dict) -> ModuleHom:
    """Build a map document into a ModuleHom, checking well-definedness.

    The generator images define a map on the source's free cover; it
    must kill the cover kernel degreewise, and then descends.
    """
    source = build_module(algebra, t_max, spec["source"])
    target = build_module(algebra, t_max, spec["target"])
    n_gens = len(source.gen_degrees)
    images = []
    for gi in range(n_gens):
        terms = spec["sends"].get(gi)
        if terms is None:
            raise ValueError(f"missing send line for generator {gi}")
        g = source.gen_degrees[gi]
        vec = 0
        for word, tgt_gi in terms:
            if tgt_gi >= len(target.gen_degrees):
                raise ValueError(f"target generator {tgt_gi} does not exist")
            tdeg, tbits = target.module.generators[tgt_gi]
            if tdeg + sum(word) != g:
                raise ValueError(
                    f"image term of generator {gi} has degree {tdeg + sum(word)}, expected {g}"
                )
            vec ^= target.module.act_word(word, tdeg).mul_vec(tbits)
        images.append((g, vec))
    extra = set(spec["sends"]) - set(range(n_gens))
    if extra:
        raise ValueError(f"send lines for nonexistent generators {sorted(extra)}")
    lifted = source.cover.hom_from_gen_images(target.module, images)
    induced = _descend(lifted, source.cover_proj)
    return induced


def _descend(lifted: ModuleHom, cover_proj: ModuleHom) -> ModuleHom:
    """Descend a map on the free cover to the quotient it presents."""
    t = min(lifted.t_max, cover_proj.t_max)
    mats = []
    for d in range(t + 1):
        for v in kernel_basis(cover_proj.mats[d]).rows:
            if lifted.mats[d].mul_vec(v):
                raise ValueError(
                    f"map is not well defined: a degree-{d} relation has nonzero image"
                )
        dim = cover_proj.target.dim(d)
        sols = solve_many(cover_proj.mats[d], [1 << j for j in range(dim)])
        cols = []
        for x in sols:
            if x is None:
                raise AssertionError("cover projection is not surjective")
            cols.append(lifted.mats[d].mul_vec(x))
        mats.append(BitMatrix.from_columns(cols, lifted.target.dim(d)))
    return ModuleHom(cover_proj.target, lifted.target, mats)


def canonical_text(expr: dict) -> str:
    """Deterministic rendering of an expression tree, used in cache keys."""
    kind = expr["kind"]
    if kind == "builtin":
        return expr["name"]
    if kind == "free":
        return "free " + " ".join(str(d) for d in expr["degrees"])
    if kind == "cyclic":
        head = f"cyclic {expr['degree']}"
        if expr["relations"]:
            rels = ", ".join(
                " + ".join("".join(f"Sq{a}" for a in w) if w else "1" for w in rel)
                for rel in expr["relations"]
            )
            return f"{head} / {rels}"
        return head
    if kind == "suspend":
        return f"suspend {expr['shift']} ({canonical_text(expr['inner'])})"
    if kind == "sum":
        return "sum " + " ".join(f"({canonical_text(p)})" for p in expr["parts"])
    raise ValueError(f"unknown expression kind {kind!r}")
