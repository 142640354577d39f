"""Line-oriented description language for carriers, orders, families,
subbases, certificates, spectra, cofinal subsets, pools, and check suites.

A document is a sequence of blocks `kind name { ... }` whose statements are
`key [args] : values` lines.  Rationals are written `num/den` or as
integers, finite maps as `a => u, b => v`, order relations as `0 <= 1`,
equalities as `a ~ b`, and certificates as parenthesized trees such as
`(bic (add (const 1) (neg id)) (gen f0))`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .families import COVARIANT, CONTRAVARIANT, make_direct_family
from .order import CofinalSubset, make_directed
from .setoid import make_fn, make_setoid
from .spectra import Spectrum, autofill_witnesses
from .topology import (
    BID,
    BSpace,
    CAdd,
    CBic,
    CConst,
    CEq,
    CGen,
    CULim,
    MorphismWitness,
    RFun,
    Subbase,
    babs,
    badd,
    bcomp,
    bconst,
    bmax,
    bmin,
    bmul,
    bneg,
    certificate_for,
    compose_rfun,
)


class DslError(Exception):
    def __init__(self, message, line=None, col=None):
        where = ""
        if line is not None:
            where = f"{line}:{col if col is not None else 0}: "
        super().__init__(where + message)
        self.line = line
        self.col = col


class SyntaxErrorDsl(DslError):
    pass


class UnresolvedReference(DslError):
    pass


class TypeMismatch(DslError):
    pass


BLOCK_KINDS = (
    "setoid", "directed", "family", "subbase", "certificate", "spectrum",
    "cofinal", "cocone", "cone", "pool", "suite",
)


@dataclass
class Stmt:
    key: str
    args: tuple
    value: str
    line: int
    col: int


@dataclass
class Block:
    kind: str
    name: str
    stmts: list
    line: int

    def one(self, key, default=None, required=False):
        hits = [s for s in self.stmts if s.key == key]
        if not hits:
            if required:
                raise SyntaxErrorDsl(f"block {self.name!r} needs a {key!r} line",
                                     self.line)
            return default
        if len(hits) > 1:
            raise SyntaxErrorDsl(f"duplicate {key!r} line", hits[1].line)
        return hits[0]

    def many(self, key):
        return [s for s in self.stmts if s.key == key]


@dataclass
class SpecDocument:
    blocks: list = field(default_factory=list)

    def named(self, kind, name, line=None):
        for b in self.blocks:
            if b.kind == kind and b.name == name:
                return b
        raise UnresolvedReference(f"no {kind} block named {name!r}", line)

    def of_kind(self, kind):
        return [b for b in self.blocks if b.kind == kind]


def _strip_comment(line):
    out = []
    for ch in line:
        if ch == "#":
            break
        out.append(ch)
    return "".join(out)


def parse(text):
    """Parse a document; errors carry line and column positions."""
    doc = SpecDocument()
    current = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        if current is None:
            parts = stripped.split()
            if len(parts) != 3 or parts[2] != "{":
                raise SyntaxErrorDsl(
                    f"expected 'kind name {{', got {stripped!r}", n,
                    len(line) - len(stripped) + 1)
            kind, name = parts[0], parts[1]
            if kind not in BLOCK_KINDS:
                raise SyntaxErrorDsl(
                    f"unknown block kind {kind!r}; expected one of "
                    + ", ".join(BLOCK_KINDS), n, 1)
            if any(b.kind == kind and b.name == name for b in doc.blocks):
                raise SyntaxErrorDsl(f"duplicate block {kind} {name}", n, 1)
            current = Block(kind, name, [], n)
            continue
        if stripped == "}":
            doc.blocks.append(current)
            current = None
            continue
        if ":" not in stripped:
            raise SyntaxErrorDsl(f"expected 'key: value', got {stripped!r}",
                                 n, len(line) - len(stripped) + 1)
        head, value = stripped.split(":", 1)
        words = head.split()
        if not words:
            raise SyntaxErrorDsl("empty statement key", n, 1)
        current.stmts.append(
            Stmt(words[0], tuple(words[1:]), value.strip(), n,
                 len(line) - len(stripped) + 1))
    if current is not None:
        raise SyntaxErrorDsl(f"unterminated block {current.name!r}",
                             current.line)
    return doc


def print_document(doc):
    """Canonical re-emission; parse(print_document(d)) equals d."""
    lines = []
    for b in doc.blocks:
        lines.append(f"{b.kind} {b.name} {{")
        for s in b.stmts:
            head = " ".join((s.key,) + s.args)
            lines.append(f"  {head}: {s.value}")
        lines.append("}")
        lines.append("")
    return "\n".join(lines)


def documents_equal(a, b):
    ka = [(blk.kind, blk.name,
           [(s.key, s.args, s.value) for s in blk.stmts]) for blk in a.blocks]
    kb = [(blk.kind, blk.name,
           [(s.key, s.args, s.value) for s in blk.stmts]) for blk in b.blocks]
    return ka == kb


# --- value parsers -------------------------------------------------------------

def parse_names(value, stmt):
    if not value.strip():
        return []
    return [v.strip() for v in value.split(",")]


def parse_rational(token, stmt=None):
    try:
        if "/" in token:
            num, den = token.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(token))
    except (ValueError, ZeroDivisionError):
        line = stmt.line if stmt else None
        raise TypeMismatch(f"not a rational: {token!r}", line)


def parse_pairs(value, sep, stmt):
    out = []
    for part in value.split(","):
        part = part.strip()
        if not part:
            continue
        if sep not in part:
            raise TypeMismatch(f"expected 'a {sep} b' in {part!r}", stmt.line,
                               stmt.col)
        a, b = part.split(sep, 1)
        out.append((a.strip(), b.strip()))
    return out


def _tokenize_sexpr(text, line):
    tokens = []
    word = ""
    text = text.replace("=>", " => ")
    for ch in text:
        if ch in "()":
            if word:
                tokens.append(word)
                word = ""
            tokens.append(ch)
        elif ch.isspace() or ch == ",":
            if word:
                tokens.append(word)
                word = ""
        else:
            word += ch
    if word:
        tokens.append(word)
    return tokens


def _read_sexpr(tokens, pos, line):
    if pos >= len(tokens):
        raise SyntaxErrorDsl("unexpected end of expression", line)
    tok = tokens[pos]
    if tok == "(":
        out = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            node, pos = _read_sexpr(tokens, pos, line)
            out.append(node)
        if pos >= len(tokens):
            raise SyntaxErrorDsl("missing closing parenthesis", line)
        return out, pos + 1
    if tok == ")":
        raise SyntaxErrorDsl("unexpected closing parenthesis", line)
    return tok, pos + 1


def parse_sexpr(text, line):
    tokens = _tokenize_sexpr(text, line)
    node, pos = _read_sexpr(tokens, 0, line)
    if pos != len(tokens):
        raise SyntaxErrorDsl("trailing tokens after expression", line)
    return node


def build_bic(node, line):
    if isinstance(node, str):
        if node == "id":
            return BID
        return bconst(parse_rational(node))
    head = node[0]
    if head == "const":
        return bconst(parse_rational(node[1]))
    if head == "id":
        return BID
    two = {"add": badd, "mul": bmul, "max": bmax, "min": bmin, "comp": bcomp}
    if head in two:
        return two[head](build_bic(node[1], line), build_bic(node[2], line))
    if head == "neg":
        return bneg(build_bic(node[1], line))
    if head == "abs":
        return babs(build_bic(node[1], line))
    raise TypeMismatch(f"unknown expression head {head!r}", line)


def _table_from_node(node, line):
    # (table a => 0, b => 1); commas were dropped by the tokenizer
    if not isinstance(node, list) or node[0] != "table":
        raise TypeMismatch("expected a (table ...) node", line)
    body = node[1:]
    if len(body) % 3 != 0:
        raise TypeMismatch("malformed table entry", line)
    out = {}
    for k in range(0, len(body), 3):
        if body[k + 1] != "=>" or not isinstance(body[k], str):
            raise TypeMismatch("malformed table entry", line)
        out[body[k]] = parse_rational(body[k + 2])
    return out


def build_certificate(node, subbase, line):
    """Certificate tree from a parsed expression, generator names resolved
    against the given subbase."""
    if isinstance(node, str):
        raise TypeMismatch(f"bare token {node!r} is not a certificate", line)
    head = node[0]
    if head == "gen":
        name = node[1]
        if name not in subbase.names:
            raise UnresolvedReference(f"no generator named {name!r}", line)
        return CGen(subbase.names.index(name))
    if head == "const":
        return CConst(parse_rational(node[1]))
    if head == "add":
        return CAdd(build_certificate(node[1], subbase, line),
                    build_certificate(node[2], subbase, line))
    if head == "bic":
        return CBic(build_bic(node[1], line),
                    build_certificate(node[2], subbase, line))
    if head == "eq":
        table = _table_from_node(node[2], line)
        return CEq(build_certificate(node[1], subbase, line),
                   tuple(sorted(table.items())))
    if head == "ulim":
        table = _table_from_node(node[1], line)
        witnesses = []
        for wnode in node[2:]:
            if not isinstance(wnode, list) or wnode[0] != "w":
                raise TypeMismatch("uniform-limit witnesses are (w n CERT)", line)
            witnesses.append((int(wnode[1]),
                              build_certificate(wnode[2], subbase, line)))
        return CULim(tuple(sorted(table.items())), tuple(witnesses))
    raise TypeMismatch(f"unknown certificate head {head!r}", line)


# --- elaboration into kernel objects --------------------------------------------

@dataclass
class Elaborated:
    doc: SpecDocument
    setoids: dict = field(default_factory=dict)
    directeds: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    subbases: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    spectra: dict = field(default_factory=dict)
    cofinals: dict = field(default_factory=dict)  # name -> (directed name, CofinalSubset)
    cocones: dict = field(default_factory=dict)   # name -> (spectrum name, Cocone)
    cones: dict = field(default_factory=dict)     # name -> (spectrum name, Cone)
    pools: dict = field(default_factory=dict)     # name -> pool description

    def spectrum(self, name, line=None):
        if name not in self.spectra:
            raise UnresolvedReference(f"no spectrum named {name!r}", line)
        return self.spectra[name]

    def space(self, name, line=None):
        if name not in self.subbases:
            raise UnresolvedReference(f"no subbase named {name!r}", line)
        sub = self.subbases[name]
        return BSpace(sub.carrier, sub)


def elaborate(doc, cert_depth=4, cert_cap=2000):
    """Build every block into its kernel object, resolving references."""
    out = Elaborated(doc)
    for b in doc.of_kind("setoid"):
        elements_stmt = b.one("elements", required=True)
        elements = parse_names(elements_stmt.value, elements_stmt)
        eq_pairs = []
        eq_stmt = b.one("equal")
        if eq_stmt:
            eq_pairs = parse_pairs(eq_stmt.value, "~", eq_stmt)
        empty_stmt = b.one("empty")
        empty = empty_stmt is not None and empty_stmt.value.strip() == "true"
        out.setoids[b.name] = make_setoid(elements, eq_pairs, empty=empty)

    for b in doc.of_kind("directed"):
        elements_stmt = b.one("elements", required=True)
        elements = parse_names(elements_stmt.value, elements_stmt)
        order_stmt = b.one("order")
        pairs = parse_pairs(order_stmt.value, "<=", order_stmt) if order_stmt else []
        closure_stmt = b.one("closure")
        closure = closure_stmt is None or closure_stmt.value.strip() == "auto"
        out.directeds[b.name] = make_directed(elements, pairs, closure=closure)

    for b in doc.of_kind("family"):
        index_stmt = b.one("index", required=True)
        index_name = index_stmt.value.strip()
        if index_name not in out.directeds:
            raise UnresolvedReference(f"no directed block named {index_name!r}",
                                      index_stmt.line)
        index = out.directeds[index_name]
        direction_stmt = b.one("direction")
        direction = (direction_stmt.value.strip()
                     if direction_stmt else COVARIANT)
        if direction not in (COVARIANT, CONTRAVARIANT):
            raise TypeMismatch(f"unknown direction {direction!r}",
                               direction_stmt.line)
        carriers = {}
        for s in b.many("carrier"):
            if len(s.args) != 1:
                raise SyntaxErrorDsl("carrier lines read 'carrier i: SETOID'",
                                     s.line)
            ref = s.value.strip()
            if ref not in out.setoids:
                raise UnresolvedReference(f"no setoid named {ref!r}", s.line)
            carriers[s.args[0]] = out.setoids[ref]
        transports = {}
        for s in b.many("map"):
            if len(s.args) != 3 or s.args[1] != "->":
                raise SyntaxErrorDsl("map lines read 'map i -> j: a => u, ...'",
                                     s.line)
            i, j = s.args[0], s.args[2]
            table = dict(parse_pairs(s.value, "=>", s))
            if direction == COVARIANT:
                dom, cod = carriers.get(i), carriers.get(j)
            else:
                dom, cod = carriers.get(j), carriers.get(i)
            if dom is None or cod is None:
                raise UnresolvedReference(f"map for unknown carrier ({i}, {j})",
                                          s.line)
            transports[(i, j)] = make_fn(dom, cod, table)
        out.families[b.name] = make_direct_family(index, direction, carriers,
                                                  transports)

    for b in doc.of_kind("subbase"):
        carrier_stmt = b.one("carrier", required=True)
        ref = carrier_stmt.value.strip()
        if ref not in out.setoids:
            raise UnresolvedReference(f"no setoid named {ref!r}",
                                      carrier_stmt.line)
        carrier = out.setoids[ref]
        gens, names = [], []
        for s in b.many("gen"):
            if len(s.args) != 1:
                raise SyntaxErrorDsl("gen lines read 'gen name: a => 0, ...'",
                                     s.line)
            table = {
                k: parse_rational(v, s)
                for k, v in parse_pairs(s.value, "=>", s)
            }
            gens.append(RFun(carrier, table))
            names.append(s.args[0])
        out.subbases[b.name] = Subbase(carrier, tuple(gens), tuple(names))

    for b in doc.of_kind("certificate"):
        over_stmt = b.one("over", required=True)
        ref = over_stmt.value.strip()
        if ref not in out.subbases:
            raise UnresolvedReference(f"no subbase named {ref!r}", over_stmt.line)
        expr_stmt = b.one("expr", required=True)
        node = parse_sexpr(expr_stmt.value, expr_stmt.line)
        out.certificates[b.name] = build_certificate(
            node, out.subbases[ref], expr_stmt.line)

    for b in doc.of_kind("spectrum"):
        fam_stmt = b.one("family", required=True)
        fam_name = fam_stmt.value.strip()
        if fam_name not in out.families:
            raise UnresolvedReference(f"no family named {fam_name!r}",
                                      fam_stmt.line)
        fam = out.families[fam_name]
        subbases = {}
        for s in b.many("space"):
            if len(s.args) != 1:
                raise SyntaxErrorDsl("space lines read 'space i: SUBBASE'", s.line)
            ref = s.value.strip()
            if ref not in out.subbases:
                raise UnresolvedReference(f"no subbase named {ref!r}", s.line)
            subbases[s.args[0]] = out.subbases[ref]
        pool_stmt = b.one("pool")
        pool = tuple(
            parse_rational(tok, pool_stmt)
            for tok in parse_names(pool_stmt.value, pool_stmt)
        ) if pool_stmt else (Fraction(0), Fraction(1))
        witness_certs = {}
        auto_edges = []
        for s in b.many("witness"):
            if len(s.args) not in (3, 4) or s.args[1] != "->":
                raise SyntaxErrorDsl(
                    "witness lines read 'witness i -> j [gen]: CERT|auto'", s.line)
            i, j = s.args[0], s.args[2]
            if s.value.strip() == "auto":
                auto_edges.append((i, j))
                continue
            if len(s.args) != 4:
                raise SyntaxErrorDsl("explicit witnesses name the generator",
                                     s.line)
            gen_name = s.args[3]
            if fam.direction == COVARIANT:
                tgt_sub, src_sub = subbases.get(j), subbases.get(i)
            else:
                tgt_sub, src_sub = subbases.get(i), subbases.get(j)
            if tgt_sub is None or src_sub is None:
                raise UnresolvedReference(
                    f"witness for unknown spaces ({i}, {j})", s.line)
            if gen_name not in tgt_sub.names:
                raise UnresolvedReference(f"no generator named {gen_name!r}",
                                          s.line)
            node = parse_sexpr(s.value, s.line)
            cert = build_certificate(node, src_sub, s.line)
            witness_certs.setdefault((i, j), {})[
                tgt_sub.names.index(gen_name)] = cert
        # composite edges are derived by lifting first; anything still
        # missing (including declared-auto edges) is searched for
        probe = Spectrum(fam, subbases, witness_certs, pool)
        witness_certs = probe.witness_certs
        missing = []
        for i, j in fam.order_pairs():
            if i == j:
                continue
            tgt = subbases[j] if fam.direction == COVARIANT else subbases[i]
            have = witness_certs.get((i, j), {})
            if any(k not in have for k in range(len(tgt.gens))):
                missing.append((i, j))
        if missing:
            witness_certs = autofill_witnesses(
                fam, subbases, witness_certs, cert_depth, cert_cap)
        out.spectra[b.name] = Spectrum(fam, subbases, witness_certs, pool)

    for b in doc.of_kind("cofinal"):
        d_stmt = b.one("directed", required=True)
        d_name = d_stmt.value.strip()
        if d_name not in out.directeds:
            raise UnresolvedReference(f"no directed block named {d_name!r}",
                                      d_stmt.line)
        index = out.directeds[d_name]
        members_stmt = b.one("members", required=True)
        members = parse_names(members_stmt.value, members_stmt)
        for m in members:
            if not index.base.has(m):
                raise UnresolvedReference(f"member {m!r} not in the index",
                                          members_stmt.line)
        cof_stmt = b.one("cof", required=True)
        cof_table = dict(parse_pairs(cof_stmt.value, "=>", cof_stmt))
        sub = make_setoid(members)
        embed = make_fn(sub, index.base, {m: m for m in members})
        cof = make_fn(index.base, sub, cof_table)
        out.cofinals[b.name] = (d_name, CofinalSubset(sub, embed, cof))

    for b in doc.of_kind("cocone") + doc.of_kind("cone"):
        spec_stmt = b.one("spectrum", required=True)
        spec_name = spec_stmt.value.strip()
        if spec_name not in out.spectra:
            raise UnresolvedReference(f"no spectrum named {spec_name!r}",
                                      spec_stmt.line)
        s = out.spectra[spec_name]
        apex_stmt = b.one("apex", required=True)
        apex_name = apex_stmt.value.strip()
        if apex_name not in out.subbases:
            raise UnresolvedReference(f"no subbase named {apex_name!r}",
                                      apex_stmt.line)
        apex = out.space(apex_name)
        legs = {}
        for stmt in b.many("leg"):
            if len(stmt.args) != 1:
                raise SyntaxErrorDsl("leg lines read 'leg i: x => y, ...'",
                                     stmt.line)
            i = stmt.args[0]
            if i not in s.fam.carriers:
                raise UnresolvedReference(f"leg for unknown index {i!r}",
                                          stmt.line)
            table = dict(parse_pairs(stmt.value, "=>", stmt))
            if b.kind == "cocone":
                h = make_fn(s.fam.carrier(i), apex.carrier, table)
                src, dst = s.space(i), apex
            else:
                h = make_fn(apex.carrier, s.fam.carrier(i), table)
                src, dst = apex, s.space(i)
            certs = {}
            for k, g in enumerate(dst.gens):
                cert = certificate_for(src, compose_rfun(g, h), cert_depth,
                                       cert_cap)
                if cert is None:
                    raise TypeMismatch(
                        f"leg {i} admits no certificate for generator {k}",
                        stmt.line)
                certs[k] = cert
            legs[i] = MorphismWitness(h, certs)
        from .limits import Cocone, Cone

        if b.kind == "cocone":
            out.cocones[b.name] = (spec_name, Cocone(apex, legs))
        else:
            out.cones[b.name] = (spec_name, Cone(apex, legs))

    for b in doc.of_kind("pool"):
        spec_stmt = b.one("spectrum", required=True)
        spec_name = spec_stmt.value.strip()
        if spec_name not in out.spectra:
            raise UnresolvedReference(f"no spectrum named {spec_name!r}",
                                      spec_stmt.line)
        space_stmt = b.one("space", required=True)
        space_name = space_stmt.value.strip()
        if space_name not in out.subbases:
            raise UnresolvedReference(f"no subbase named {space_name!r}",
                                      space_stmt.line)
        search_stmt = b.one("search")
        search = search_stmt.value.strip() if search_stmt else "auto"
        shape_stmt = b.one("shape")
        shape = shape_stmt.value.strip() if shape_stmt else "hom-into-fixed"
        out.pools[b.name] = {
            "spectrum": spec_name,
            "space": space_name,
            "search": search,
            "shape": shape,
        }

    return out
