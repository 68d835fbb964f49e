"""Command line front end and the `.cat` text format.

A file holds one or more documents separated by `---` lines. Each document
starts with `key: value` header lines (at least `kind:` and `name:`) and
continues with `[section]` tables, one row per line:

    kind: category
    name: [1]
    [objects]
    0
    1
    [morphisms]
    id_0: 0 -> 0
    id_1: 1 -> 1
    0_1: 0 -> 1
    [identity]
    0: id_0
    1: id_1
    [compose]
    0_1 ∘ id_0 = 0_1

Documents refer to earlier documents by name; the terminal category `*` is
always available. Identities, identity composites and identity actions may
be left out and are filled in. Exit codes: 0 success, 1 a checked property
is false, 2 bad input, 3 a resource bound was hit.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass, field

from . import fincat, laxdiag, monad, prof, simplex, theory
from .fincat import FinCategory, FinFunctor, NatTransf, StructuralError

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3

KINDS = ("category", "functor", "profunctor", "monad", "theory", "laxdiagram")
HEADERS = {
    "category": ("builtin",),
    "functor": ("source", "target", "builtin"),
    "profunctor": ("source", "target"),
    "monad": ("base", "endo"),
    "theory": ("functor", "arities", "flag0", "flag1"),
    "laxdiagram": ("vertices",),
}
SECTIONS = {
    "category": ("objects", "morphisms", "identity", "compose"),
    "functor": ("objects", "morphisms"),
    "profunctor": ("elements", "left", "right"),
    "monad": ("unit", "mult"),
    "theory": (),
    "laxdiagram": ("edges", "cells"),
}
COMPOSE_OPS = ("∘", "o")
ACT_OPS = ("·", ".")


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def __str__(self):
        if self.line is None:
            return self.message
        return f"line {self.line}, column {self.col}: {self.message}"


class DanglingReference(ParseError):
    pass


# -------------------------------------------------------------------- parse

@dataclass
class Row:
    line: int
    tokens: list
    cols: list


@dataclass
class Document:
    kind: str
    name: str
    line: int
    header: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)


def _tokens(text, lineno):
    toks, cols = [], []
    for m in re.finditer(r"\S+", text):
        if m.group() == ":" and toks:
            toks[-1] += ":"
            continue
        toks.append(m.group())
        cols.append(m.start() + 1)
    return Row(lineno, toks, cols)


def parse(text):
    """Split text into raw documents; raises ParseError with a position."""
    docs, cur, section = [], None, None

    def finish():
        if cur is None:
            return
        for key in ("kind", "name"):
            if key not in cur["header"]:
                raise ParseError(f"document has no '{key}:' line", cur["line"], 1)
        kind, kline, kcol = cur["header"].pop("kind")
        name = cur["header"].pop("name")[0]
        if kind not in KINDS:
            raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}",
                             kline, kcol)
        for key, (_, ln, col) in cur["header"].items():
            if key not in HEADERS[kind]:
                raise ParseError(f"unknown header {key!r} for a {kind}", ln, col)
        for sec, (_, ln) in cur["sections"].items():
            if sec not in SECTIONS[kind]:
                raise ParseError(f"unknown section [{sec}] for a {kind}", ln, 1)
        docs.append(Document(kind, name, cur["line"], cur["header"],
                             {s: rows for s, (rows, _) in cur["sections"].items()}))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped == "---":
            finish()
            cur, section = None, None
            continue
        if cur is None:
            cur = {"line": lineno, "header": {}, "sections": {}}
        m = re.fullmatch(r"\s*\[([A-Za-z0-9_-]+)\]\s*", line)
        if m:
            section = m.group(1)
            if section in cur["sections"]:
                raise ParseError(f"section [{section}] appears twice", lineno, 1)
            cur["sections"][section] = ([], lineno)
            continue
        if section is None:
            m = re.fullmatch(r"\s*([A-Za-z0-9_]+):\s*(.*)", line)
            if not m:
                raise ParseError("expected a 'key: value' header line", lineno, 1)
            key, value = m.group(1), m.group(2).strip()
            if key in cur["header"]:
                raise ParseError(f"header {key!r} appears twice", lineno, 1)
            if not value:
                raise ParseError(f"header {key!r} has no value", lineno, len(line) + 1)
            cur["header"][key] = (value, lineno, m.start(2) + 1)
            continue
        cur["sections"][section][0].append(_tokens(line, lineno))
    finish()
    if not docs:
        raise ParseError("no documents found", 1, 1)
    return docs


def _match(row, pattern):
    """Check a row against a pattern of ID, 'ID:' and literal alternatives."""
    out = []
    for k, want in enumerate(pattern):
        if k >= len(row.tokens):
            col = row.cols[-1] + len(row.tokens[-1]) if row.tokens else 1
            raise ParseError(f"row ends early; expected {_describe(want)}", row.line, col)
        tok = row.tokens[k]
        if want == "ID":
            if tok.endswith(":") or tok in ("->", "=") + COMPOSE_OPS[:1] + ACT_OPS[:1]:
                raise ParseError(f"expected an id, found {tok!r}", row.line, row.cols[k])
            out.append(tok)
        elif want == "ID:":
            if not tok.endswith(":") or len(tok) == 1:
                raise ParseError(f"expected 'id:', found {tok!r}", row.line, row.cols[k])
            out.append(tok[:-1])
        elif tok not in want:
            raise ParseError(f"expected {_describe(want)}, found {tok!r}", row.line, row.cols[k])
    if len(row.tokens) > len(pattern):
        k = len(pattern)
        raise ParseError(f"unexpected {row.tokens[k]!r}", row.line, row.cols[k])
    return out


def _describe(want):
    if want in ("ID", "ID:"):
        return "an id" if want == "ID" else "'id:'"
    return " or ".join(repr(w) for w in want)


def _rows(doc, section):
    return doc.sections.get(section, [])


# -------------------------------------------------------------------- build

def _builtin_category(spec, line, col):
    parts = spec.split()
    head, args = parts[0], parts[1:]
    try:
        if head == "terminal" and not args:
            return fincat.terminal()
        if head == "simplex" and len(args) == 1:
            return fincat.simplex_category(int(args[0]))
        if head == "cyclic" and len(args) == 1:
            return fincat.cyclic_group(int(args[0]))
        if head == "iso" and not args:
            return fincat.walking_iso()
        if head == "discrete" and args:
            return fincat.discrete(args)
        if head == "codiscrete" and args:
            return fincat.codiscrete(args)
    except ValueError:
        pass
    raise ParseError(f"unknown builtin {spec!r}; try terminal, simplex N, cyclic N, iso, "
                     "discrete A B.., codiscrete A B..", line, col)


def _build_category(doc):
    if "builtin" in doc.header:
        spec, ln, col = doc.header["builtin"]
        if doc.sections:
            raise ParseError("a builtin category takes no tables", ln, col)
        c = _builtin_category(spec, ln, col)
        c.name = doc.name
        return c
    objects = []
    for row in _rows(doc, "objects"):
        for k, x in enumerate(row.tokens):
            if x in objects:
                raise ParseError(f"object {x!r} declared twice", row.line, row.cols[k])
            objects.append(x)
    obs = set(objects)
    mors = {}
    for row in _rows(doc, "morphisms"):
        f, s, t = _match(row, ["ID:", "ID", ("->",), "ID"])
        if f in mors:
            raise ParseError(f"morphism {f!r} declared twice", row.line, row.cols[0])
        for k, x in ((1, s), (3, t)):
            if x not in obs:
                raise DanglingReference(f"unknown object {x!r}", row.line, row.cols[k])
        mors[f] = (s, t)
    ident = {}
    for row in _rows(doc, "identity"):
        x, f = _match(row, ["ID:", "ID"])
        if x not in obs:
            raise DanglingReference(f"unknown object {x!r}", row.line, row.cols[0])
        if f not in mors:
            raise DanglingReference(f"unknown morphism {f!r}", row.line, row.cols[1])
        if mors[f] != (x, x):
            raise ParseError(f"{f} is not an endomorphism of {x}", row.line, row.cols[1])
        ident[x] = f
    for x in objects:
        if x not in ident:
            f = f"id_{x}"
            if f in mors and mors[f] != (x, x):
                raise ParseError(f"{f} is not an endomorphism of {x}", doc.line, 1)
            mors.setdefault(f, (x, x))
            ident[x] = f
    comp = {}
    for row in _rows(doc, "compose"):
        g, f, h = _match(row, ["ID", COMPOSE_OPS, "ID", ("=",), "ID"])
        for k, m in ((0, g), (2, f), (4, h)):
            if m not in mors:
                raise DanglingReference(f"unknown morphism {m!r}", row.line, row.cols[k])
        if mors[f][1] != mors[g][0] or mors[h] != (mors[f][0], mors[g][1]):
            raise ParseError(f"ill-typed composition {g} ∘ {f} = {h}", row.line, row.cols[0])
        if comp.get((g, f), h) != h:
            raise ParseError(f"{g} ∘ {f} given two values", row.line, row.cols[0])
        comp[(g, f)] = h
    for f, (s, t) in mors.items():
        comp.setdefault((f, ident[s]), f)
        comp.setdefault((ident[t], f), f)
    return FinCategory(objects, mors, ident, comp, name=doc.name)


def _lookup(env, name, kinds, line, col):
    if name not in env:
        raise DanglingReference(f"unknown document {name!r}", line, col)
    obj = env[name]
    if not isinstance(obj, kinds):
        raise ParseError(f"{name!r} is a {_kind_of(obj)}, not the kind needed here", line, col)
    return obj


def _need(doc, key):
    if key not in doc.header:
        raise ParseError(f"a {doc.kind} needs a '{key}:' line", doc.line, 1)
    return doc.header[key]


def _build_functor(doc, env):
    name, ln, col = _need(doc, "source")
    c = _lookup(env, name, FinCategory, ln, col)
    if "builtin" in doc.header:
        spec, ln, col = doc.header["builtin"]
        if spec != "identity":
            raise ParseError(f"unknown builtin functor {spec!r}; only 'identity'", ln, col)
        f = fincat.identity_functor(c)
        f.name = doc.name
        return f
    name, ln, col = _need(doc, "target")
    d = _lookup(env, name, FinCategory, ln, col)
    obmap, mormap = {}, {}
    for row in _rows(doc, "objects"):
        x, y = _match(row, ["ID", ("->",), "ID"])
        if x not in c.identity:
            raise DanglingReference(f"unknown source object {x!r}", row.line, row.cols[0])
        if y not in d.identity:
            raise DanglingReference(f"unknown target object {y!r}", row.line, row.cols[2])
        obmap[x] = y
    for row in _rows(doc, "morphisms"):
        f, g = _match(row, ["ID", ("->",), "ID"])
        if f not in c.morphisms:
            raise DanglingReference(f"unknown source morphism {f!r}", row.line, row.cols[0])
        if g not in d.morphisms:
            raise DanglingReference(f"unknown target morphism {g!r}", row.line, row.cols[2])
        mormap[f] = g
    for x, i in c.identity.items():
        if i not in mormap and x in obmap:
            mormap[i] = d.id(obmap[x])
    return FinFunctor(c, d, obmap, mormap, name=doc.name)


def _build_profunctor(doc, env):
    name, ln, col = _need(doc, "source")
    c = _lookup(env, name, FinCategory, ln, col)
    name, ln, col = _need(doc, "target")
    d = _lookup(env, name, FinCategory, ln, col)
    elements = {}
    for row in _rows(doc, "elements"):
        e, x, y = _match(row, ["ID:", "ID", ("->",), "ID"])
        if e in elements:
            raise ParseError(f"element {e!r} declared twice", row.line, row.cols[0])
        if x not in c.identity:
            raise DanglingReference(f"unknown source object {x!r}", row.line, row.cols[1])
        if y not in d.identity:
            raise DanglingReference(f"unknown target object {y!r}", row.line, row.cols[3])
        elements[e] = (x, y)
    left, right = {}, {}
    for row in _rows(doc, "left"):
        u, e, r = _match(row, ["ID", ACT_OPS, "ID", ("=",), "ID"])
        if u not in c.morphisms:
            raise DanglingReference(f"unknown morphism {u!r}", row.line, row.cols[0])
        for k, x in ((2, e), (4, r)):
            if x not in elements:
                raise DanglingReference(f"unknown element {x!r}", row.line, row.cols[k])
        left[(u, e)] = r
    for row in _rows(doc, "right"):
        e, v, r = _match(row, ["ID", ACT_OPS, "ID", ("=",), "ID"])
        if v not in d.morphisms:
            raise DanglingReference(f"unknown morphism {v!r}", row.line, row.cols[2])
        for k, x in ((0, e), (4, r)):
            if x not in elements:
                raise DanglingReference(f"unknown element {x!r}", row.line, row.cols[k])
        right[(e, v)] = r
    for e, (x, y) in elements.items():
        left.setdefault((c.id(x), e), e)
        right.setdefault((e, d.id(y)), e)
    return prof.Profunctor(c, d, elements, left, right, name=doc.name)


def _build_monad(doc, env):
    name, ln, col = _need(doc, "base")
    c = _lookup(env, name, FinCategory, ln, col)
    name, ln, col = _need(doc, "endo")
    t = _lookup(env, name, FinFunctor, ln, col)
    if t.source != c or t.target != c:
        raise ParseError(f"{name!r} is not an endofunctor of the base", ln, col)
    tables = {}
    for sec in ("unit", "mult"):
        comps = {}
        for row in _rows(doc, sec):
            x, m = _match(row, ["ID:", "ID"])
            if x not in c.identity:
                raise DanglingReference(f"unknown object {x!r}", row.line, row.cols[0])
            if m not in c.morphisms:
                raise DanglingReference(f"unknown morphism {m!r}", row.line, row.cols[1])
            comps[x] = m
        missing = [x for x in c.objects if x not in comps]
        if missing:
            raise ParseError(f"[{sec}] has no component at {missing[0]!r}", doc.line, 1)
        tables[sec] = comps
    ident = fincat.identity_functor(c)
    return monad.Monad(c, t, NatTransf(ident, t, tables["unit"]),
                       NatTransf(fincat.compose_functors(t, t), t, tables["mult"]),
                       name=doc.name)


def parse_arities(spec, base, env, line=None, col=None):
    """'all', 'dense A B..', 'explicit M N..' or 'transported U <spec>'."""
    parts = spec.split()
    if not parts:
        raise ParseError("empty arity spec", line, col)
    head, args = parts[0], parts[1:]
    if head == "all" and not args:
        return theory.Dense(base, base.objects)
    if head == "dense":
        for a in args:
            if a not in base.identity:
                raise DanglingReference(f"unknown object {a!r} in arities", line, col)
        return theory.Dense(base, args)
    if head == "explicit":
        mods = []
        for a in args:
            m = _lookup(env, a, prof.Profunctor, line, col)
            if m.target != base or len(m.source.objects) != 1:
                raise ParseError(f"{a!r} is not a module over the arity base", line, col)
            mods.append(m)
        return theory.Explicit(base, mods)
    if head == "transported" and args:
        u = _lookup(env, args[0], FinFunctor, line, col)
        inner = parse_arities(" ".join(args[1:]), u.source, env, line, col)
        return theory.Transported(inner, u)
    raise ParseError(f"bad arity spec {spec!r}", line, col)


def _flag(doc, key, c, default):
    if key not in doc.header:
        return default(c)
    value, ln, col = doc.header[key]
    if value == "core":
        return fincat.core_flag(c)
    if value == "discrete":
        return fincat.discrete_flag(c)
    raise ParseError(f"flag must be 'core' or 'discrete', not {value!r}", ln, col)


def _build_theory(doc, env):
    name, ln, col = _need(doc, "functor")
    t = _lookup(env, name, FinFunctor, ln, col)
    spec, ln, col = doc.header.get("arities", ("all", doc.line, 1))
    ar = parse_arities(spec, t.source, env, ln, col)
    return theory.Theory(t, ar, _flag(doc, "flag0", t.source, fincat.core_flag),
                         _flag(doc, "flag1", t.target, fincat.discrete_flag), name=doc.name)


def _build_laxdiagram(doc, env):
    names, ln, col = _need(doc, "vertices")
    verts = [_lookup(env, v, FinFunctor, ln, col) for v in names.split()]
    n = len(verts) - 1
    edges = {}
    for row in _rows(doc, "edges"):
        i, j, m = _match(row, ["ID", "ID:", "ID"])
        i, j = _index(i, n, row, 0), _index(j, n, row, 1)
        edges[(i, j)] = _lookup(env, m, prof.Profunctor, row.line, row.cols[2])
    values = {}
    for row in _rows(doc, "cells"):
        i, j, k, x, y, e = _match(row, ["ID", "ID", "ID:", "ID", "ID", ("=",), "ID"])
        key = (_index(i, n, row, 0), _index(j, n, row, 1), _index(k, n, row, 2))
        values.setdefault(key, []).append((x, y, e, row))
    cells = {}
    for key in laxdiag.triples(n):
        i, j, k = key
        if (i, j) not in edges or (j, k) not in edges or (i, k) not in edges:
            raise ParseError(f"edges for the triple {key} are missing", doc.line, 1)
        src = prof.compose_prof(edges[(i, j)], edges[(j, k)])
        tgt = edges[(i, k)]
        mapping = {}
        for x, y, e, row in values.get(key, []):
            cls = src.pair_class.get((x, y))
            if cls is None:
                raise DanglingReference(f"({x}, {y}) is not a composable pair of elements",
                                        row.line, row.cols[3])
            if e not in tgt.elements:
                raise DanglingReference(f"unknown element {e!r}", row.line, row.cols[6])
            if mapping.get(cls, e) != e:
                raise ParseError(f"the class of ({x}, {y}) is given two values",
                                 row.line, row.cols[3])
            mapping[cls] = e
        for cls, (x, y) in src.rep_pair.items():
            if cls not in mapping:
                raise ParseError(f"cell {key} has no value for the pair ({x}, {y})", doc.line, 1)
        cells[key] = prof.ProfMorphism(src, tgt, mapping)
    return laxdiag.LaxDiagram(verts, edges, cells, name=doc.name)


def _index(tok, n, row, k):
    if not tok.isdigit() or int(tok) > n:
        raise ParseError(f"vertex index must be in 0..{n}, found {tok!r}", row.line, row.cols[k])
    return int(tok)


BUILDERS = {
    "category": lambda doc, env: _build_category(doc),
    "functor": _build_functor,
    "profunctor": _build_profunctor,
    "monad": _build_monad,
    "theory": _build_theory,
    "laxdiagram": _build_laxdiagram,
}


def build(docs):
    """Library objects by document name, in file order."""
    env = {"*": fincat.terminal()}
    out = {}
    for doc in docs:
        if doc.name in out:
            raise ParseError(f"document name {doc.name!r} used twice", doc.line, 1)
        try:
            obj = BUILDERS[doc.kind](doc, env)
        except StructuralError as e:
            raise ParseError(str(e), doc.line, 1) from None
        env[doc.name] = obj
        out[doc.name] = obj
    return out


def load(text):
    return build(parse(text))


# ---------------------------------------------------------------- serialize

def _kind_of(obj):
    if isinstance(obj, FinCategory):
        return "category"
    if isinstance(obj, FinFunctor):
        return "functor"
    if isinstance(obj, prof.Profunctor):
        return "profunctor"
    if isinstance(obj, monad.Monad):
        return "monad"
    if isinstance(obj, theory.Theory):
        return "theory"
    if isinstance(obj, laxdiag.LaxDiagram):
        return "laxdiagram"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class _Writer:
    def __init__(self):
        self.named = []
        self.blocks = []
        self.counter = 0

    def name_of(self, obj):
        for o, n in self.named:
            if o is obj:
                return n
        for o, n in self.named:
            if type(o) is type(obj) and o == obj:
                return n
        return None

    def fresh(self, obj, wanted=None):
        base = re.sub(r"\s+", "_", wanted or getattr(obj, "name", "") or "")
        if not base or base.endswith(":") or base == "---":
            self.counter += 1
            base = f"{_kind_of(obj)[0].upper()}{self.counter}"
        taken = {n for _, n in self.named}
        name, k = base, 1
        while name in taken:
            k += 1
            name = f"{base}~{k}"
        return name

    def emit(self, obj, wanted=None):
        have = self.name_of(obj)
        if have is not None and wanted in (None, have):
            return have
        kind = _kind_of(obj)
        if wanted is None and kind == "category" and obj == fincat.terminal():
            # always in scope when reading
            self.named.append((obj, "*"))
            return "*"
        lines = getattr(self, "_" + kind)(obj)
        name = self.fresh(obj, wanted)
        self.named.append((obj, name))
        self.blocks.append("\n".join([f"kind: {kind}", f"name: {name}"] + lines) + "\n")
        return name

    def _category(self, c):
        out = ["[objects]"] + list(c.objects) + ["[morphisms]"]
        out += [f"{f}: {s} -> {t}" for f, (s, t) in c.morphisms.items()]
        out += ["[identity]"] + [f"{x}: {c.identity[x]}" for x in c.objects]
        out += ["[compose]"] + [f"{g} ∘ {f} = {h}" for (g, f), h in c.compose.items()]
        return out

    def _functor(self, f):
        out = [f"source: {self.emit(f.source)}", f"target: {self.emit(f.target)}"]
        out += ["[objects]"] + [f"{x} -> {f.obmap[x]}" for x in f.source.objects if x in f.obmap]
        out += ["[morphisms]"] + [f"{m} -> {f.mormap[m]}" for m in f.source.morphisms
                                  if m in f.mormap]
        return out

    def _profunctor(self, m):
        out = [f"source: {self.emit(m.source)}", f"target: {self.emit(m.target)}"]
        out += ["[elements]"] + [f"{e}: {x} -> {y}" for e, (x, y) in m.elements.items()]
        out += ["[left]"] + [f"{u} · {e} = {r}" for (u, e), r in m.left.items()]
        out += ["[right]"] + [f"{e} · {v} = {r}" for (e, v), r in m.right.items()]
        return out

    def _monad(self, t):
        out = [f"base: {self.emit(t.base)}", f"endo: {self.emit(t.endo)}"]
        out += ["[unit]"] + [f"{x}: {t.unit.components[x]}" for x in t.base.objects]
        out += ["[mult]"] + [f"{x}: {t.mult.components[x]}" for x in t.base.objects]
        return out

    def _arity_spec(self, ar):
        if isinstance(ar, theory.Dense):
            if list(ar.objects) == list(ar.base.objects):
                return "all"
            return " ".join(["dense"] + list(ar.objects))
        if isinstance(ar, theory.Explicit):
            return " ".join(["explicit"] + [self.emit(m) for m in ar.modules])
        if isinstance(ar, theory.Transported):
            return f"transported {self.emit(ar.u)} {self._arity_spec(ar.spec)}"
        raise TypeError(f"cannot serialize arities {ar!r}")

    def _theory(self, th):
        out = [f"functor: {self.emit(th.t)}", f"arities: {self._arity_spec(th.arities)}"]
        for key, fl, c in (("flag0", th.flag0, th.t0), ("flag1", th.flag1, th.t1)):
            if fl.flag == fincat.core_flag(c).flag:
                out.append(f"{key}: core")
            elif fl.flag == fincat.discrete_flag(c).flag:
                out.append(f"{key}: discrete")
            else:
                raise TypeError("only core and discrete flags can be written")
        return out

    def _laxdiagram(self, d):
        out = ["vertices: " + " ".join(self.emit(u) for u in d.vertices)]
        out += ["[edges]"] + [f"{i} {j}: {self.emit(m)}" for (i, j), m in sorted(d.edges.items())]
        out.append("[cells]")
        for (i, j, k), a in sorted(d.cells.items()):
            for cls, (x, y) in a.source.rep_pair.items():
                out.append(f"{i} {j} {k}: {x} {y} = {a.map[cls]}")
        return out


def serialize(objects):
    """Canonical text for named objects; dependencies are written first."""
    w = _Writer()
    if not isinstance(objects, dict):
        objects = {getattr(objects, "name", None) or None: objects}
    for name, obj in objects.items():
        w.emit(obj, name)
    return "---\n".join(w.blocks)


def canonicalize(text):
    return serialize(load(text))


# ----------------------------------------------------------------- commands

class InputError(Exception):
    pass


def _pick(env, kinds, name, what):
    if name is not None:
        if name not in env:
            raise InputError(f"no document named {name!r}")
        if not isinstance(env[name], kinds):
            raise InputError(f"{name!r} is a {_kind_of(env[name])}, expected a {what}")
        return env[name]
    found = [o for o in env.values() if isinstance(o, kinds)]
    if not found:
        raise InputError(f"the file has no {what}")
    return found[-1]


def _problems_exit(problems):
    return EXIT_OK if not problems else EXIT_FALSE


def _require_valid(obj):
    bad = _validate(obj, cap=2)
    if bad:
        raise InputError(f"{_kind_of(obj)} {getattr(obj, 'name', '')!r} is invalid: {bad[0]}")


def _validate(obj, cap):
    kind = _kind_of(obj)
    if kind == "category":
        return fincat.validate_category(obj)
    if kind == "functor":
        return fincat.validate_functor(obj)
    if kind == "profunctor":
        return prof.validate_prof(obj)
    if kind == "monad":
        return monad.validate_monad(obj)
    if kind == "theory":
        return theory.validate_theory(obj, cap)
    return laxdiag.validate_lax(obj)


def cmd_validate(env, args):
    rows = []
    for name, obj in env.items():
        rows.append({"name": name, "kind": _kind_of(obj), "problems": _validate(obj, args.cap)})
    bad = [r for r in rows if r["problems"]]
    return _problems_exit(bad), {"documents": rows, "valid": not bad}


def _category_summary(c):
    return {"objects": len(c.objects), "morphisms": len(c.morphisms)}


def cmd_core(env, args):
    c = _pick(env, FinCategory, args.names[0] if args.names else None, "category")
    _require_valid(c)
    k = fincat.core(c)
    rep = {"category": c.name, "core": _category_summary(k),
           "groupoid": fincat.is_groupoid(c), "document": serialize({k.name: k})}
    return EXIT_OK, rep


def cmd_complete(env, args):
    c = _pick(env, FinCategory, args.names[0] if args.names else None, "category")
    _require_valid(c)
    before = fincat.discrete_flag(c)
    after = fincat.complete_flagged(before)
    rep = {"category": c.name, "complete_before": fincat.is_complete(before),
           "complete_after": fincat.is_complete(after),
           "iso_classes": len(fincat.iso_classes(c)),
           "flag": _category_summary(after.flag)}
    return EXIT_OK, rep


def _two(env, args, kinds, what):
    if len(args.names) not in (0, 2):
        raise InputError(f"give two {what} names or none")
    found = [o for o in env.values() if isinstance(o, kinds)]
    if args.names:
        return [_pick(env, kinds, n, what) for n in args.names]
    if len(found) < 2:
        raise InputError(f"the file needs two {what}s")
    return found[-2:]


def _prof_summary(m):
    return {"source": m.source.name, "target": m.target.name, "elements": len(m.elements)}


def cmd_compose(env, args):
    m, n = _two(env, args, prof.Profunctor, "profunctor")
    for p in (m, n):
        _require_valid(p)
    if m.target != n.source:
        raise InputError("the profunctors do not compose: target and source differ")
    k = prof.compose_prof(m, n)
    k.name = f"{m.name};{n.name}"
    rep = _prof_summary(k)
    rep["document"] = serialize({k.name: k})
    return EXIT_OK, rep


def _one_functor(env, args):
    f = _pick(env, FinFunctor, args.names[0] if args.names else None, "functor")
    _require_valid(f)
    return f


def cmd_companion(env, args):
    f = _one_functor(env, args)
    m = prof.companion(f)
    m.name = f"{f.name}_!"
    return EXIT_OK, dict(_prof_summary(m), document=serialize({m.name: m}))


def cmd_conjoint(env, args):
    f = _one_functor(env, args)
    m = prof.conjoint(f)
    m.name = f"{f.name}^*"
    return EXIT_OK, dict(_prof_summary(m), document=serialize({m.name: m}))


def cmd_adjunction(env, args):
    f = _one_functor(env, args)
    chk = prof.check_adjunction(f)
    rep = {"functor": f.name, "unit_elements": len(chk.unit.source),
           "counit_elements": len(chk.counit.source),
           "left_triangle": chk.left_triangle, "right_triangle": chk.right_triangle,
           "problems": chk.problems, "ok": chk.ok}
    return _problems_exit(not chk.ok), rep


def cmd_collage(env, args):
    m = _pick(env, prof.Profunctor, args.names[0] if args.names else None, "profunctor")
    _require_valid(m)
    coll = prof.collage(m)
    rep = {"profunctor": m.name, "collage": _category_summary(coll.category),
           "document": serialize({coll.category.name: coll.category,
                                  "coll_proj": coll.projection})}
    return EXIT_OK, rep


def cmd_nats(env, args):
    kinds = (FinFunctor, prof.Profunctor)
    a, b = _two(env, args, kinds, "functor or profunctor")
    if type(a) is not type(b):
        raise InputError("give two functors or two profunctors")
    _require_valid(a)
    _require_valid(b)
    if isinstance(a, FinFunctor):
        if a.source != b.source or a.target != b.target:
            raise InputError("the functors are not parallel")
        count = len(fincat.nat_set(a, b))
    else:
        if a.source != b.source or a.target != b.target:
            raise InputError("the profunctors are not parallel")
        count = len(prof.prof_nats(a, b))
    return EXIT_OK, {"source": a.name, "target": b.name, "count": count}


def cmd_mate(env, args):
    if len(args.names) != 4:
        raise InputError("mate needs F G M N: functors f, g and profunctors M, N")
    f, g = (_pick(env, FinFunctor, n, "functor") for n in args.names[:2])
    m, n = (_pick(env, prof.Profunctor, k, "profunctor") for k in args.names[2:])
    for x in (f, g, m, n):
        _require_valid(x)
    if not (m.source == f.source and m.target == g.source and n.source == f.target
            and n.target == g.target):
        raise InputError("need M: C1 -/-> D1, N: C2 -/-> D2, f: C1 -> C2, g: D1 -> D2")
    lo = prof.compose_prof(prof.companion(f), n)
    squares = prof.prof_nats(prof.compose_prof(m, prof.companion(g)), lo)
    transposes = prof.prof_nats(m, prof.compose_prof(lo, prof.conjoint(g)))
    images, back_ok = set(), True
    for a in squares:
        b = prof.mate(f, g, m, n, a)
        images.add(tuple(sorted(b.map.items())))
        back_ok = back_ok and prof.mate_inverse(f, g, m, n, b).map == a.map
    ok = back_ok and len(images) == len(squares) == len(transposes)
    rep = {"squares": len(squares), "transposes": len(transposes),
           "inverse_roundtrip": back_ok, "bijective": ok}
    return _problems_exit(not ok), rep


def _one_monad(env, args):
    t = _pick(env, monad.Monad, args.names[0] if args.names else None, "monad")
    _require_valid(t)
    return t


def cmd_kleisli(env, args):
    t = _one_monad(env, args)
    k, j = monad.kleisli(t)
    rep = {"monad": t.name, "kleisli": _category_summary(k),
           "document": serialize({k.name: k, j.name or "j": j})}
    return EXIT_OK, rep


def cmd_em(env, args):
    t = _one_monad(env, args)
    em, forget = monad.em_category(t)
    rep = {"monad": t.name, "algebras": len(em.objects), "morphisms": len(em.morphisms),
           "document": serialize({em.name: em, "U": forget})}
    return EXIT_OK, rep


def cmd_promonad(env, args):
    x = _pick(env, (monad.Monad, FinFunctor), args.names[0] if args.names else None,
              "monad or functor")
    _require_valid(x)
    if isinstance(x, monad.Monad):
        p = monad.kleisli_promonad(x)
    else:
        if not fincat.is_bijective_on_objects(x):
            raise InputError("the functor is not bijective on objects")
        p = monad.promonad_from_iof(x)
    laws = monad.validate_promonad(p)
    _, back = monad.promonad_roundtrip_witness(p)
    p.carrier.name = f"P({x.name})"
    rep = {"source": x.name, "carrier_elements": len(p.carrier), "laws": laws,
           "roundtrip": back, "document": serialize({p.carrier.name: p.carrier})}
    return _problems_exit(laws or not back), rep


def _one_lax(env, args):
    d = _pick(env, laxdiag.LaxDiagram, args.names[0] if args.names else None, "laxdiagram")
    _require_valid(d)
    return d


def cmd_wrr_encode(env, args):
    d = _one_lax(env, args)
    w = laxdiag.encode_lax(d)
    rep = {"diagram": d.name, "length": d.n, "total": _category_summary(w.h.target),
           "domain": _category_summary(w.h.source),
           "roundtrip_problems": laxdiag.diagram_roundtrip(d),
           "document": serialize({"h": w.h, "p": w.p})}
    return _problems_exit(rep["roundtrip_problems"]), rep


def _wrr(env, args):
    if len(args.names) not in (0, 2):
        raise InputError("give the functors H and P or none")
    h, p = _two(env, args, FinFunctor, "functor")
    for f in (h, p):
        _require_valid(f)
    w = laxdiag.WrrObject(h, p)
    bad = laxdiag.validate_wrr(w)
    if bad:
        raise InputError("not an object over [n]: " + bad[0])
    return w


def cmd_wrr_decode(env, args):
    w = _wrr(env, args)
    d = laxdiag.decode_lax(w)
    d.name = "decoded"
    probs = laxdiag.wrr_roundtrip(w)
    rep = {"length": d.n, "edges": {f"{i} {j}": len(m) for (i, j), m in sorted(d.edges.items())},
           "roundtrip_problems": probs, "document": serialize({d.name: d})}
    return _problems_exit(probs), rep


def cmd_laxcolim(env, args):
    d = _one_lax(env, args)
    r = laxdiag.colimit_check(d, args.cap, seed=args.seed)
    rep = {"diagram": d.name, "cap": args.cap, "cocones": len(r.cocones),
           "modules": len(r.modules), "hom_pairs": r.hom_pairs, "problems": r.problems,
           "ok": r.ok}
    return _problems_exit(r.problems), rep


def cmd_collapse(env, args):
    w = _wrr(env, args)
    try:
        r = laxdiag.collapse_fibers(w, args.bound)
    except ValueError as e:
        return EXIT_FALSE, {"ok": False, "witness": str(e)}
    rep = {"saturation": r.status, "length": r.length, "category": _category_summary(r.category),
           "document": serialize({r.category.name or "collapsed": r.category})}
    return EXIT_OK, rep


def cmd_nerve(env, args):
    c = _pick(env, FinCategory, args.names[0] if args.names else None, "category")
    _require_valid(c)
    objs = args.objects if args.objects is not None else list(c.objects)
    for x in objs:
        if x not in c.identity:
            raise InputError(f"unknown object {x!r}")
    nu = theory.nerve(c, objs)
    ok, witness = theory.nerve_ff(c, objs)
    rep = {"category": c.name, "objects": objs,
           "nerve_sizes": {x: len(nu[x].elements) for x in c.objects},
           "fully_faithful": ok, "witness": list(witness) if witness else None}
    return _problems_exit(not ok), rep


def cmd_theory_from_monad(env, args):
    t = _one_monad(env, args)
    try:
        ar = parse_arities(" ".join(args.arities or ["all"]), t.base, env)
    except ParseError as e:
        raise InputError(str(e)) from None
    try:
        th = theory.theory_from_monad(t, ar, min(args.cap, 2))
    except theory.ArityError as e:
        w = e.witness
        return EXIT_FALSE, {"ok": False, "reason": str(e),
                            "witness": {x: len(w.fiber("*", x)) for x in t.base.objects}}
    th.name = f"Th({t.name})"
    rep = {"monad": t.name, "ok": True, "t1": _category_summary(th.t1),
           "complete": th.is_complete(), "document": serialize({th.name: th})}
    return EXIT_OK, rep


def _one_theory(env, args):
    th = _pick(env, theory.Theory, args.names[0] if args.names else None, "theory")
    _require_valid(th)
    return th


def _model_sizes(ms, c):
    return [[len(g.fiber("*", x)) for x in c.objects] for g in ms]


def cmd_models(env, args):
    th = _one_theory(env, args)
    ms = theory.models(th, args.cap)
    rep = {"theory": th.name, "cap": args.cap, "count": len(ms),
           "objects": list(th.t1.objects), "sizes": _model_sizes(ms, th.t1)}
    return EXIT_OK, rep


def cmd_good(env, args):
    th = _one_theory(env, args)
    r = theory.is_good(th, args.bound, min(args.cap, 2))
    rep = {"theory": th.name, "good": r.good,
           "bullets": [{"name": n, "ok": ok, "witness": None if ok else _witness(w)}
                       for n, ok, w in r.bullets], "failing": r.failing()}
    return _problems_exit(not r.good), rep


def _witness(w):
    if isinstance(w, str) or w is None:
        return w
    if isinstance(w, tuple):
        return [_witness(x) for x in w]
    if isinstance(w, prof.Profunctor):
        return {"module_sizes": {y: len(w.fiber("*", y)) for y in w.target.objects}}
    return repr(w)


def cmd_complete_theory(env, args):
    th = _one_theory(env, args)
    try:
        ct = theory.complete_theory(th, args.bound, min(args.cap, 2))
    except theory.Unsaturated:
        raise
    except ValueError as e:
        return EXIT_FALSE, {"theory": th.name, "ok": False, "reason": str(e)}
    rep = {"theory": th.name, "ok": True, "changed": ct is not th, "complete": ct.is_complete(),
           "t0": _category_summary(ct.t0), "t1": _category_summary(ct.t1)}
    if ct is not th:
        rep["saturation"] = {"status": ct.data.lbo.status, "length": ct.data.lbo.length}
        ct.name = f"comp({th.name})"
    rep["document"] = serialize({ct.name: ct})
    return EXIT_OK, rep


def cmd_models_invariance(env, args):
    th = _one_theory(env, args)
    r = theory.models_invariance(th, args.cap, args.bound)
    rep = {"theory": th.name, "cap": args.cap, "models": len(r.left),
           "completed_models": len(r.right), "problems": r.problems, "ok": r.ok}
    return _problems_exit(r.problems), rep


def cmd_simplex(env, args):
    nums = args.numbers
    try:
        if args.action == "enumerate":
            if len(nums) != 2:
                raise InputError("simplex enumerate N M")
            maps = simplex.enumerate_maps(nums[0], nums[1], args.kind)
            return EXIT_OK, {"n": nums[0], "m": nums[1], "kind": args.kind,
                             "count": len(maps), "maps": [list(f.values) for f in maps]}
        if args.action == "factor":
            if len(nums) < 2:
                raise InputError("simplex factor M V0 V1 ..")
            f = simplex.SimplexMap(len(nums) - 2, nums[0], tuple(nums[1:]))
            a, i = simplex.factor_active_inert(f)
            s, j = simplex.factor_surj_inj(f)
            return EXIT_OK, {"map": list(f.values), "active": list(a.values),
                             "inert": list(i.values), "surjective": list(s.values),
                             "injective": list(j.values), "cellular": simplex.is_cellular(f)}
        if args.action == "unital":
            if len(nums) != 3:
                raise InputError("simplex unital N I J")
            hs = simplex.unital_bimod_hom(*nums)
            return EXIT_OK, {"n": nums[0], "i": nums[1], "j": nums[2], "count": len(hs),
                             "shapes": [list(a.values) for a in hs]}
        if args.action == "bimod":
            if len(nums) != 3:
                raise InputError("simplex bimod N I J")
            hs = simplex.bimod_hom(*nums, size_bound=args.size)
            return EXIT_OK, {"n": nums[0], "i": nums[1], "j": nums[2], "size": args.size,
                             "count": len(hs)}
    except ValueError as e:
        raise InputError(str(e)) from None
    raise InputError(f"unknown simplex action {args.action!r}")


COMMANDS = {
    "validate": (cmd_validate, "check every document in the file"),
    "core": (cmd_core, "maximal subgroupoid of a category"),
    "complete": (cmd_complete, "replace the discrete flag of a category by its core"),
    "compose": (cmd_compose, "coend composite of two profunctors"),
    "companion": (cmd_companion, "companion profunctor of a functor"),
    "conjoint": (cmd_conjoint, "conjoint profunctor of a functor"),
    "adjunction": (cmd_adjunction, "triangle identities for companion and conjoint"),
    "collage": (cmd_collage, "collage category of a profunctor over [1]"),
    "nats": (cmd_nats, "count transformations between two functors or profunctors"),
    "mate": (cmd_mate, "mate correspondence for squares F G M N"),
    "kleisli": (cmd_kleisli, "Kleisli category of a monad"),
    "em": (cmd_em, "Eilenberg-Moore category of a monad"),
    "promonad": (cmd_promonad, "promonad of a monad or identity-on-objects functor"),
    "wrr-decode": (cmd_wrr_decode, "lax diagram of functors H: D -> E and P: E -> [n]"),
    "wrr-encode": (cmd_wrr_encode, "total category of a lax diagram"),
    "laxcolim": (cmd_laxcolim, "lax cocones against modules over the total category"),
    "collapse": (cmd_collapse, "contract the fibers of H: D -> E over [n]"),
    "nerve": (cmd_nerve, "nerve along a full subcategory and its faithfulness"),
    "theory-from-monad": (cmd_theory_from_monad, "Kleisli theory of a monad with arities"),
    "models": (cmd_models, "models of a theory up to isomorphism"),
    "good": (cmd_good, "the four goodness conditions"),
    "complete-theory": (cmd_complete_theory, "completion of a good theory"),
    "models-invariance": (cmd_models_invariance, "models before and after completion"),
    "simplex": (cmd_simplex, "simplex category: enumerate, factor, unital, bimod"),
}


def _parser():
    ap = argparse.ArgumentParser(prog="corrcalc", description="finite correspondence calculus")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        if name == "simplex":
            p.add_argument("action", choices=["enumerate", "factor", "unital", "bimod"])
            p.add_argument("numbers", nargs="*", type=int)
            p.add_argument("--kind", default="all", choices=simplex.MAP_CLASSES)
            p.add_argument("--size", type=int, default=1, help="interval size bound for bimod")
        else:
            p.add_argument("file", help="a .cat file, or - for standard input")
            p.add_argument("names", nargs="*", help="document names (default: the last ones)")
        if name == "nerve":
            p.add_argument("--objects", nargs="*", default=None)
        if name == "theory-from-monad":
            p.add_argument("--arities", nargs="+", default=None,
                           help="'all', 'dense A B..' or 'explicit M N..'")
        p.add_argument("--cap", type=int, default=3, help="module fiber cap")
        p.add_argument("--bound", type=int, default=8, help="string saturation bound")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the produced document to this file")
    return ap


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def dispatch(command, args):
    """(exit status, report dict) for a parsed argument namespace."""
    fn = COMMANDS[command][0]
    random.seed(args.seed)
    try:
        env = {} if command == "simplex" else load(_read(args.file))
        return fn(env, args)
    except (ParseError, InputError, OSError) as e:
        return EXIT_INPUT, {"error": str(e)}
    except theory.Unsaturated as e:
        return EXIT_BOUND, {"error": f"not saturated within bound {e.bound}"}


def _render(rep):
    lines = []
    for key, value in rep.items():
        if key == "document":
            continue
        if isinstance(value, (dict, list)):
            value = json.dumps(value, ensure_ascii=False)
        lines.append(f"{key}: {value}")
    out = "\n".join(lines)
    if "document" in rep:
        out += "\n\n" + rep["document"].rstrip("\n")
    return out


def main(argv=None):
    args = _parser().parse_args(argv)
    status, rep = dispatch(args.command, args)
    rep = dict(rep, status=status)
    if args.out and "document" in rep:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rep["document"])
    if args.json:
        print(json.dumps(rep, indent=2, sort_keys=True, ensure_ascii=False))
    elif status == EXIT_INPUT or status == EXIT_BOUND:
        print(f"error: {rep['error']}", file=sys.stderr)
    else:
        print(_render(rep))
    return status
